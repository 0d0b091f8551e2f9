#pragma once

// Fundamental operators: the unique X_k on the defect space of C with
//   A_k - A_{p(k)}^* C = D_C X_k D_C
// in the normalised pairing of tuple.hpp, plus the numerical-radius and
// commutativity conditions placed on them.

#include <array>
#include <vector>

#include "gammalab/report.hpp"
#include "gammalab/tuple.hpp"

namespace gammalab {

/// Operators live in coordinates of `basis`, an isometric frame V of Ran D_C;
/// the ambient operator is V X V^*.
struct FundamentalSet {
    TupleVariant variant = TupleVariant::Gamma7;
    SubspaceBasis<Complex> basis;
    Mat defect;            // D_C on the ambient space
    Mat defectCompressed;  // V^* D_C V, positive definite
    std::vector<Mat> X;    // normalised order; empty matrices when the defect is zero
    std::vector<double> residuals;

    Eigen::Index rank() const { return basis.rank(); }
    Mat ambient(int k) const { return basis.lift(X[k]); }
    double maxResidual() const;
};

struct FundamentalSet7 : FundamentalSet {
    const Mat& F(int i) const { return X.at(i - 1); }  // i = 1..6
};

/// S2 - St1^* S3 = D (2 G2) D and St1 - S2^* S3 = D (2 Gt1) D: the middle pair
/// enters every block with a factor 2.
struct FundamentalSet5 : FundamentalSet {
    const Mat& G1() const { return X.at(0); }
    const Mat& G2() const { return X.at(1); }
    const Mat& Gt1() const { return X.at(2); }
    const Mat& Gt2() const { return X.at(3); }
};

/// Solves every paired identity through the inverse of D_C on its range.
/// rankTol < 0 selects the defect default.
FundamentalSet solveFundamental(const PairedFamily& f, double rankTol = -1);
FundamentalSet7 solveFundamental7(const CommutingTuple7& t, double rankTol = -1);
FundamentalSet5 solveFundamental5(const CommutingTuple5& s, double rankTol = -1);

/// ||D_C A_k - X_k D_C - X_{p(k)}^* D_C C|| for each k, on the ambient space.
std::vector<double> verifyRecurrence(const PairedFamily& f, const FundamentalSet& x);
std::vector<double> verifyRecurrence7(const CommutingTuple7& t, const FundamentalSet7& x);
std::vector<double> verifyRecurrence5(const CommutingTuple5& s, const FundamentalSet5& x);

/// max over z on a uniform unimodular grid of w(C0 + C1 z), with local refinement.
double pencilNumericalRadius(const Mat& c0, const Mat& c1, int gridZ = 256, double tol = 1e-10);

/// [X_i, X_j] = 0 and [X_i^*, X_{p(j)}] = [X_j^*, X_{p(i)}] for all i, j (six operators).
Report commutativityConditions7(const std::vector<Mat>& f, double tol);
/// Commuting pairs and the six adjoint identities for (G1, G2, Gt1, Gt2).
Report commutativityConditions5(const Mat& g1, const Mat& g2, const Mat& gt1, const Mat& gt2, double tol);

/// Fundamental residuals, recurrences and pencil radii of a tuple as a report.
Report fundamentalReport(const PairedFamily& f, const FundamentalSet& x, double tol);

} // namespace gammalab
