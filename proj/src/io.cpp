#include "gammalab/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace gammalab {

using nlohmann::json;

namespace {

Eigen::Index sizeField(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
        throw Error(ErrorKind::InvalidInput, std::string("matrix field '") + key + "' must be a non-negative integer");
    }
    return static_cast<Eigen::Index>(j.at(key).get<long long>());
}

} // namespace

json matrixToJson(const Mat& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        data.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Mat matrixFromJson(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "matrix must be a JSON object");
    const Eigen::Index rows = sizeField(j, "rows"), cols = sizeField(j, "cols");
    if (!j.contains("data") || !j.at("data").is_array() || static_cast<Eigen::Index>(j.at("data").size()) != rows) {
        throw Error(ErrorKind::InvalidInput, "matrix data must hold " + std::to_string(rows) + " rows");
    }
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j.at("data")[i];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw Error(ErrorKind::InvalidInput, "row " + std::to_string(i) + " must hold " + std::to_string(cols) + " entries");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            const json& e = row[k];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw Error(ErrorKind::InvalidInput, "entry (" + std::to_string(i) + ", " + std::to_string(k) + ") must be [re, im]");
            }
            const double re = e[0].get<double>(), im = e[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorKind::InvalidInput, "matrix entries must be finite");
            m(i, k) = Complex(re, im);
        }
    }
    return m;
}

std::string variantName(TupleVariant v) { return v == TupleVariant::Gamma7 ? "gamma7" : "gamma5"; }

TupleVariant parseTupleVariant(const std::string& text) {
    if (text == "gamma7") return TupleVariant::Gamma7;
    if (text == "gamma5") return TupleVariant::Gamma5;
    throw Error(ErrorKind::InvalidInput, "variant must be gamma7 or gamma5, got '" + text + "'");
}

namespace {

TupleVariant variantField(const json& j) {
    if (!j.is_object() || !j.contains("variant") || !j.at("variant").is_string()) {
        throw Error(ErrorKind::InvalidInput, "missing string field 'variant'");
    }
    return parseTupleVariant(j.at("variant").get<std::string>());
}

std::vector<Mat> namedMatrices(const json& j, const char* key, const std::vector<std::string>& names) {
    if (!j.contains(key) || !j.at(key).is_object()) throw Error(ErrorKind::InvalidInput, std::string("missing object '") + key + "'");
    const json& obj = j.at(key);
    std::vector<Mat> out;
    for (const auto& name : names) {
        if (!obj.contains(name)) throw Error(ErrorKind::InvalidInput, "missing matrix '" + name + "'");
        Mat m = matrixFromJson(obj.at(name));
        if (m.rows() != m.cols()) throw Error(ErrorKind::ShapeMismatch, "matrix '" + name + "' is not square");
        if (!out.empty() && m.rows() != out.front().rows()) {
            throw Error(ErrorKind::ShapeMismatch, "matrix '" + name + "' differs in size from '" + names.front() + "'");
        }
        out.push_back(std::move(m));
    }
    if (obj.size() != names.size()) throw Error(ErrorKind::InvalidInput, std::string("unexpected extra entries in '") + key + "'");
    return out;
}

} // namespace

json tupleToJson(const PairedFamily& f) {
    const auto names = tupleNames(f.variant);
    const auto ops = tupleOperators(f);
    json mats = json::object();
    for (std::size_t i = 0; i < ops.size(); ++i) mats[names[i]] = matrixToJson(ops[i]);
    return {{"variant", variantName(f.variant)}, {"matrices", std::move(mats)}};
}

PairedFamily tupleFromJson(const json& j) {
    const TupleVariant v = variantField(j);
    const auto ops = namedMatrices(j, "matrices", tupleNames(v));
    if (v == TupleVariant::Gamma7) return family(CommutingTuple7::make({ops[0], ops[1], ops[2], ops[3], ops[4], ops[5], ops[6]}));
    return family(CommutingTuple5::make({ops[0], ops[1], ops[2], ops[3], ops[4]}));
}

json symbolsToJson(const SymbolFamily& s) {
    const auto names = fundamentalNames(s.variant);
    if (s.symbols.size() != names.size()) throw Error(ErrorKind::ShapeMismatch, "wrong number of symbols");
    json mats = json::object();
    for (std::size_t i = 0; i < names.size(); ++i) mats[names[i]] = matrixToJson(s.symbols[i]);
    return {{"variant", variantName(s.variant)}, {"symbols", std::move(mats)}};
}

SymbolFamily symbolsFromJson(const json& j) {
    SymbolFamily s;
    s.variant = variantField(j);
    s.symbols = namedMatrices(j, "symbols", fundamentalNames(s.variant));
    return s;
}

json reportToJson(const Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"anchor", c.anchor},
                          {"residual", std::isfinite(c.residual) ? json(c.residual) : json(std::to_string(c.residual))},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    return {{"command", r.command}, {"pass", r.pass()}, {"checks", std::move(checks)}, {"notes", r.notes}};
}

std::string reportText(const Report& r) {
    std::ostringstream os;
    os << r.command << ": " << (r.pass() ? "PASS" : "FAIL") << '\n';
    for (const auto& c : r.checks) {
        os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << "  residual " << std::scientific << std::setprecision(3)
           << c.residual << " <= " << c.tolerance << "  (" << c.anchor << ")\n";
    }
    for (const auto& n : r.notes) os << "  note: " << n << '\n';
    return os.str();
}

json readJson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, "'" + path + "' is not valid JSON: " + e.what());
    }
}

void writeJson(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace gammalab
