#include "gammalab/generators.hpp"

#include <numbers>
#include <random>

#include "gammalab/dilation.hpp"
#include "gammalab/hardy.hpp"

namespace gammalab {

namespace {

// Slot pair (a, b) with |a| + |b| <= 1 and arg b = -arg a.
std::pair<Complex, Complex> budgetPair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0), angle(-std::numbers::pi, std::numbers::pi);
    const double total = unit(rng);
    const double share = unit(rng);
    const double phi = angle(rng);
    return {std::polar(total * share, phi), std::polar(total * (1 - share), -phi)};
}

std::vector<Mat> diagFamily(std::uint64_t seed, Eigen::Index d, int size) {
    if (d < 1) throw Error(ErrorKind::InvalidInput, "fiber dimension must be at least 1");
    std::mt19937_64 rng(seed);
    std::vector<Mat> out(size, Mat::Zero(d, d));
    for (Eigen::Index s = 0; s < d; ++s) {
        for (int k = 0; k < size / 2; ++k) {
            const auto [a, b] = budgetPair(rng);
            out[k](s, s) = a;
            out[size - 1 - k](s, s) = b;
        }
    }
    return out;
}

Mat complexGaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g;
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

Mat haar(std::mt19937_64& rng, Eigen::Index n) {
    const Mat z = complexGaussian(rng, n, n);
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    const Mat r = qr.matrixQR();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0) q.col(k) *= r(k, k) / mag;
    }
    return q;
}

std::vector<double> scales(TupleVariant v) {
    return v == TupleVariant::Gamma7 ? std::vector<double>(6, 1.0) : std::vector<double>{1, 2, 2, 1};
}

} // namespace

std::vector<Mat> diagSymbolFamily7(std::uint64_t seed, Eigen::Index d) { return diagFamily(seed, d, 6); }
std::vector<Mat> diagSymbolFamily5(std::uint64_t seed, Eigen::Index d) { return diagFamily(seed, d, 4); }

PairedFamily pencilModel(TupleVariant variant, const std::vector<Mat>& symbols, int levels) {
    const std::size_t m = variant == TupleVariant::Gamma7 ? 6 : 4;
    if (symbols.size() != m) throw Error(ErrorKind::ShapeMismatch, std::to_string(m) + " symbols expected");
    PairedFamily f;
    f.variant = variant;
    f.scale = scales(variant);
    const Eigen::Index d = symbols[0].rows();
    for (std::size_t k = 0; k < m; ++k) f.ops.push_back(pencilOperator(Mat(symbols[k].adjoint()), symbols[m - 1 - k], levels));
    f.contraction = truncatedShift({levels, d});
    return f;
}

CommutingTuple7 compressedContraction7(std::uint64_t seed, Eigen::Index d, int levels) {
    const PairedFamily f = pencilModel(TupleVariant::Gamma7, diagSymbolFamily7(seed, d), levels);
    return tuple7(f.ops, f.contraction);
}

CommutingTuple5 compressedContraction5(std::uint64_t seed, Eigen::Index d, int levels) {
    const PairedFamily f = pencilModel(TupleVariant::Gamma5, diagSymbolFamily5(seed, d), levels);
    return tuple5(f.ops, f.contraction);
}

namespace {

std::vector<Mat> scalarOps(const GammaPoint& p, GammaVariant expected, const BlockStructure& st, double tol) {
    if (p.variant != expected) throw Error(ErrorKind::InvalidInput, "point belongs to another domain");
    if (!p.witness) throw Error(ErrorKind::MissingWitness, "a scalar tuple needs a witness matrix");
    const double upper = muUpper(*p.witness, st).value;
    if (upper > 1 + tol) {
        throw Error(ErrorKind::HypothesisViolation, "witness has mu upper bound " + std::to_string(upper) + " > 1");
    }
    const Vec coords = symmetrize(p.variant, *p.witness).coords;
    if ((coords - p.coords).cwiseAbs().maxCoeff() > tol * std::max(1.0, coords.cwiseAbs().maxCoeff())) {
        throw Error(ErrorKind::InvalidInput, "coordinates are not the symmetrization of the witness");
    }
    std::vector<Mat> ops;
    for (Eigen::Index k = 0; k < p.coords.size(); ++k) ops.push_back(Mat::Constant(1, 1, p.coords(k)));
    return ops;
}

} // namespace

CommutingTuple7 scalarTuple7(const GammaPoint& p, double tol) {
    const auto s = scalarOps(p, GammaVariant::E3311, BlockStructure::E3311(), tol);
    return CommutingTuple7::make({s[0], s[1], s[2], s[3], s[4], s[5], s[6]});
}

CommutingTuple5 scalarTuple5(const GammaPoint& p, double tol) {
    const auto s = scalarOps(p, GammaVariant::E3212, BlockStructure::E3212(), tol);
    return CommutingTuple5::make({s[0], s[1], s[2], s[3], s[4]});
}

Mat randomUnitary(std::uint64_t seed, Eigen::Index n) {
    std::mt19937_64 rng(seed);
    return haar(rng, n);
}

MixedTuple mixedTuple(TupleVariant variant, std::uint64_t seed, Eigen::Index unitaryDim, Eigen::Index d, int levels) {
    if (unitaryDim < 0 || d < 0 || levels < 0) throw Error(ErrorKind::InvalidInput, "negative size");
    std::mt19937_64 rng(seed);
    const bool seven = variant == TupleVariant::Gamma7;
    const int m = seven ? 7 : 5;
    MixedTuple out;
    out.unitaryDim = unitaryDim;
    std::vector<Mat> unitary(m, Mat::Zero(unitaryDim, unitaryDim));
    for (Eigen::Index k = 0; k < unitaryDim; ++k) {
        const GammaPoint p = seven ? symmetrize7(haar(rng, 3)) : symmetrize5(haar(rng, 3));
        out.unitarySpectrum.push_back(p.coords);
        for (int i = 0; i < m; ++i) unitary[i](k, k) = p.coords(i);
    }
    std::vector<Mat> stable(m, Mat(0, 0));
    if (d > 0 && levels > 0) {
        const std::uint64_t sub = rng();
        stable = seven ? tupleOperators(family(compressedContraction7(sub, d, levels)))
                       : tupleOperators(family(compressedContraction5(sub, d, levels)));
    }
    const Eigen::Index s = stable[0].rows(), n = unitaryDim + s;
    const Mat u = haar(rng, n);
    std::vector<Mat> ops;
    for (int i = 0; i < m; ++i) {
        Mat block = Mat::Zero(n, n);
        block.topLeftCorner(unitaryDim, unitaryDim) = unitary[i];
        block.bottomRightCorner(s, s) = stable[i];
        ops.push_back(u * block * u.adjoint());
    }
    out.family = seven ? family(CommutingTuple7::make({ops[0], ops[1], ops[2], ops[3], ops[4], ops[5], ops[6]}))
                       : family(CommutingTuple5::make({ops[0], ops[1], ops[2], ops[3], ops[4]}));
    return out;
}

std::string to_string(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::DiagIsometry7: return "diagIsometry7";
    case GeneratorKind::DiagIsometry5: return "diagIsometry5";
    case GeneratorKind::Compressed7: return "compressed7";
    case GeneratorKind::Compressed5: return "compressed5";
    case GeneratorKind::Scalar7: return "scalar7";
    case GeneratorKind::Scalar5: return "scalar5";
    case GeneratorKind::CirculantUnitary: return "circulantUnitary";
    }
    return "?";
}

GeneratorKind parseGeneratorKind(const std::string& text) {
    for (auto k : {GeneratorKind::DiagIsometry7, GeneratorKind::DiagIsometry5, GeneratorKind::Compressed7,
                   GeneratorKind::Compressed5, GeneratorKind::Scalar7, GeneratorKind::Scalar5, GeneratorKind::CirculantUnitary}) {
        if (to_string(k) == text) return k;
    }
    throw Error(ErrorKind::InvalidInput, "unknown generator kind '" + text + "'");
}

PairedFamily generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
    case GeneratorKind::DiagIsometry7:
    case GeneratorKind::Compressed7:
        return family(compressedContraction7(spec.seed, spec.fiberDim, spec.levels));
    case GeneratorKind::DiagIsometry5:
    case GeneratorKind::Compressed5:
        return family(compressedContraction5(spec.seed, spec.fiberDim, spec.levels));
    case GeneratorKind::Scalar7:
    case GeneratorKind::Scalar5: {
        std::mt19937_64 rng(spec.seed);
        const double radius = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const Mat w = radius * haar(rng, 3);
        return spec.kind == GeneratorKind::Scalar7 ? family(scalarTuple7(symmetrize7(w))) : family(scalarTuple5(symmetrize5(w)));
    }
    case GeneratorKind::CirculantUnitary:
        return family(circulantGammaUnitary7(diagSymbolFamily7(spec.seed, spec.fiberDim), spec.levels));
    }
    throw Error(ErrorKind::InvalidInput, "unknown generator kind");
}

} // namespace gammalab
