#include "gammalab/tuple.hpp"

namespace gammalab {

namespace {

template <std::size_t K>
void requireSameSquare(const std::array<Mat, K>& ops) {
    const Eigen::Index n = ops[0].rows();
    for (std::size_t k = 0; k < K; ++k) {
        if (ops[k].rows() != n || ops[k].cols() != n) {
            throw Error(ErrorKind::ShapeMismatch, "tuple operator " + std::to_string(k + 1) + " is " +
                                                      std::to_string(ops[k].rows()) + "x" + std::to_string(ops[k].cols()) +
                                                      ", expected " + std::to_string(n) + "x" + std::to_string(n));
        }
        detail::requireFinite(ops[k], "tuple");
    }
}

} // namespace

double commutationResidual(std::span<const Mat> ops) {
    double worst = 0;
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j) worst = std::max(worst, commutatorNorm(ops[i], ops[j]));
    return worst;
}

CommutingTuple7 CommutingTuple7::make(std::array<Mat, 7> t) {
    requireSameSquare(t);
    CommutingTuple7 out{std::move(t), 0};
    out.commutationResidual = gammalab::commutationResidual(std::span<const Mat>(out.T));
    return out;
}

CommutingTuple5 CommutingTuple5::make(std::array<Mat, 5> s) {
    requireSameSquare(s);
    CommutingTuple5 out{std::move(s), 0};
    out.commutationResidual = gammalab::commutationResidual(std::span<const Mat>(out.S));
    return out;
}

CommutingTuple7 CommutingTuple7::adjoint() const {
    std::array<Mat, 7> a;
    for (int k = 0; k < 7; ++k) a[k] = T[k].adjoint();
    return {std::move(a), commutationResidual};
}

CommutingTuple5 CommutingTuple5::adjoint() const {
    std::array<Mat, 5> a;
    for (int k = 0; k < 5; ++k) a[k] = S[k].adjoint();
    return {std::move(a), commutationResidual};
}

PairedFamily family(const CommutingTuple7& t) {
    PairedFamily f;
    f.variant = TupleVariant::Gamma7;
    f.ops.assign(t.T.begin(), t.T.begin() + 6);
    f.contraction = t.T[6];
    f.scale.assign(6, 1.0);
    return f;
}

PairedFamily family(const CommutingTuple5& s) {
    PairedFamily f;
    f.variant = TupleVariant::Gamma5;
    f.ops = {s.S[0], 0.5 * s.S[1], 0.5 * s.S[3], s.S[4]};
    f.contraction = s.S[2];
    f.scale = {1, 2, 2, 1};
    return f;
}

CommutingTuple7 tuple7(const std::vector<Mat>& ops, const Mat& c) {
    if (ops.size() != 6) throw Error(ErrorKind::ShapeMismatch, "a 7-tuple needs six paired operators");
    return CommutingTuple7::make({ops[0], ops[1], ops[2], ops[3], ops[4], ops[5], c});
}

CommutingTuple5 tuple5(const std::vector<Mat>& ops, const Mat& c) {
    if (ops.size() != 4) throw Error(ErrorKind::ShapeMismatch, "a 5-tuple needs four paired operators");
    return CommutingTuple5::make({ops[0], 2.0 * ops[1], c, 2.0 * ops[2], ops[3]});
}

std::vector<std::string> tupleNames(TupleVariant v) {
    if (v == TupleVariant::Gamma7) return {"T1", "T2", "T3", "T4", "T5", "T6", "T7"};
    return {"S1", "S2", "S3", "St1", "St2"};
}

std::vector<std::string> fundamentalNames(TupleVariant v) {
    if (v == TupleVariant::Gamma7) return {"F1", "F2", "F3", "F4", "F5", "F6"};
    return {"G1", "G2", "Gt1", "Gt2"};
}

std::vector<std::string> normalisedNames(TupleVariant v) {
    if (v == TupleVariant::Gamma7) return {"T1", "T2", "T3", "T4", "T5", "T6"};
    return {"S1", "S2/2", "St1/2", "St2"};
}

std::vector<Mat> tupleOperators(const PairedFamily& f) {
    if (f.variant == TupleVariant::Gamma7) {
        std::vector<Mat> out(f.ops);
        out.push_back(f.contraction);
        return out;
    }
    return {f.ops[0], 2.0 * f.ops[1], f.contraction, 2.0 * f.ops[2], f.ops[3]};
}

CommutingTuple7 conjugate(const CommutingTuple7& t, const Mat& u) {
    std::array<Mat, 7> c;
    for (int k = 0; k < 7; ++k) c[k] = u * t.T[k] * u.adjoint();
    return CommutingTuple7::make(std::move(c));
}

CommutingTuple5 conjugate(const CommutingTuple5& s, const Mat& u) {
    std::array<Mat, 5> c;
    for (int k = 0; k < 5; ++k) c[k] = u * s.S[k] * u.adjoint();
    return CommutingTuple5::make(std::move(c));
}

} // namespace gammalab
