#pragma once

// Commuting operator tuples and the paired view shared by both families.
//
// Both tuple families carry a distinguished contraction C (T7, resp. S3) and
// operators A_0..A_{m-1} paired by k <-> m-1-k:
//   7-tuple: A = (T1, ..., T6), C = T7
//   5-tuple: A = (S1, S2/2, St1/2, St2), C = S3
// With this normalisation every fundamental identity reads
//   A_k - A_{m-1-k}^* C = D_C X_k D_C.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "gammalab/kernel.hpp"

namespace gammalab {

enum class TupleVariant { Gamma7, Gamma5 };

/// max over pairs of ||X_i X_j - X_j X_i||.
double commutationResidual(std::span<const Mat> ops);

struct CommutingTuple7 {
    std::array<Mat, 7> T;  // T[0..6] = T1..T7
    double commutationResidual = 0;

    static CommutingTuple7 make(std::array<Mat, 7> t);
    Eigen::Index dim() const { return T[6].rows(); }
    const Mat& contraction() const { return T[6]; }
    CommutingTuple7 adjoint() const;
};

struct CommutingTuple5 {
    std::array<Mat, 5> S;  // S1, S2, S3, St1, St2
    double commutationResidual = 0;

    static CommutingTuple5 make(std::array<Mat, 5> s);
    Eigen::Index dim() const { return S[2].rows(); }
    const Mat& contraction() const { return S[2]; }
    CommutingTuple5 adjoint() const;
};

struct PairedFamily {
    TupleVariant variant = TupleVariant::Gamma7;
    std::vector<Mat> ops;       // normalised A_k
    Mat contraction;            // C
    std::vector<double> scale;  // tuple operator = scale[k] * A_k

    int size() const { return static_cast<int>(ops.size()); }
    int partner(int k) const { return size() - 1 - k; }
    Eigen::Index dim() const { return contraction.rows(); }
};

PairedFamily family(const CommutingTuple7& t);
PairedFamily family(const CommutingTuple5& s);
/// Rebuilds the tuple from normalised operators; C is placed at its slot.
CommutingTuple7 tuple7(const std::vector<Mat>& ops, const Mat& c);
CommutingTuple5 tuple5(const std::vector<Mat>& ops, const Mat& c);

/// Operator names in tuple order, and names of the solved fundamental operators.
std::vector<std::string> tupleNames(TupleVariant v);
std::vector<std::string> fundamentalNames(TupleVariant v);
/// Normalised operator names A_k, e.g. "S2/2".
std::vector<std::string> normalisedNames(TupleVariant v);

/// The tuple operators in tuple order, unscaled.
std::vector<Mat> tupleOperators(const PairedFamily& f);

/// Unitary conjugation U X U^* applied to every operator.
CommutingTuple7 conjugate(const CommutingTuple7& t, const Mat& u);
CommutingTuple5 conjugate(const CommutingTuple5& s, const Mat& u);

} // namespace gammalab
