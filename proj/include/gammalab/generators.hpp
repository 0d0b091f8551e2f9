#pragma once

// Seeded constructors of objects that satisfy their family's hypotheses by
// construction. Identical arguments give bitwise identical output.

#include <cstdint>
#include <string>
#include <vector>

#include "gammalab/mu.hpp"
#include "gammalab/tuple.hpp"

namespace gammalab {

/// Diagonal F1..F6 with |f_i| + |f_{7-i}| <= 1 and arg f_{7-i} = -arg f_i slotwise.
std::vector<Mat> diagSymbolFamily7(std::uint64_t seed, Eigen::Index d);
/// Diagonal (G1, G2, Gt1, Gt2) with |g1| + |gt2| <= 1 and |g2| + |gt1| <= 1 slotwise.
std::vector<Mat> diagSymbolFamily5(std::uint64_t seed, Eigen::Index d);

/// Pencils M_{Xh_k^* + Xh_{p(k)} z} and M_z on the first k levels of H^2(C^d), diagonal symbols.
CommutingTuple7 compressedContraction7(std::uint64_t seed, Eigen::Index d, int levels);
CommutingTuple5 compressedContraction5(std::uint64_t seed, Eigen::Index d, int levels);
/// Same assembly from given symbols.
PairedFamily pencilModel(TupleVariant variant, const std::vector<Mat>& symbols, int levels);

/// 1x1 tuple from a point with a witness of mu <= 1 + tol.
CommutingTuple7 scalarTuple7(const GammaPoint& p, double tol = 1e-8);
CommutingTuple5 scalarTuple5(const GammaPoint& p, double tol = 1e-8);

/// Haar-distributed unitary (QR of a complex Gaussian, phases fixed).
Mat randomUnitary(std::uint64_t seed, Eigen::Index n);

struct MixedTuple {
    PairedFamily family;
    Eigen::Index unitaryDim = 0;
    std::vector<Vec> unitarySpectrum;  // joint eigenvalues of the unitary summand, tuple order
};

/// U (diag(points of random unitaries) (+) compressed stable tuple) U^*.
MixedTuple mixedTuple(TupleVariant variant, std::uint64_t seed, Eigen::Index unitaryDim, Eigen::Index d, int levels);

enum class GeneratorKind { DiagIsometry7, DiagIsometry5, Compressed7, Compressed5, Scalar7, Scalar5, CirculantUnitary };

std::string to_string(GeneratorKind k);
GeneratorKind parseGeneratorKind(const std::string& text);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Compressed7;
    std::uint64_t seed = 0;
    Eigen::Index fiberDim = 1;
    int levels = 1;  // Hardy levels, or modes for the circulant kind
};

/// Scalar kinds use the symmetrization of a random unitary scaled into the closed ball.
PairedFamily generate(const GeneratorSpec& spec);

} // namespace gammalab
