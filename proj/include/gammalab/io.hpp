#pragma once

// JSON files: matrices as {"rows", "cols", "data": [[[re, im], ...], ...]},
// tuples as {"variant": "gamma7"|"gamma5", "matrices": {name: matrix}},
// symbol families as {"variant", "symbols": {name: matrix}}.
// Doubles are written with round-trip precision.

#include <string>
#include <vector>

#include "json.hpp"

#include "gammalab/report.hpp"
#include "gammalab/tuple.hpp"

namespace gammalab {

nlohmann::json matrixToJson(const Mat& m);
/// Throws InvalidInput on malformed or non-finite data.
Mat matrixFromJson(const nlohmann::json& j);

nlohmann::json tupleToJson(const PairedFamily& f);
PairedFamily tupleFromJson(const nlohmann::json& j);

struct SymbolFamily {
    TupleVariant variant = TupleVariant::Gamma7;
    std::vector<Mat> symbols;  // F1..F6, or G1, G2, Gt1, Gt2
};

nlohmann::json symbolsToJson(const SymbolFamily& s);
SymbolFamily symbolsFromJson(const nlohmann::json& j);

std::string variantName(TupleVariant v);
TupleVariant parseTupleVariant(const std::string& text);

nlohmann::json reportToJson(const Report& r);
std::string reportText(const Report& r);

nlohmann::json readJson(const std::string& path);
void writeJson(const std::string& path, const nlohmann::json& j);

} // namespace gammalab
