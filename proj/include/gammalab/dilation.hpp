#pragma once

// Isometric lifts and unitary parts of commuting contraction tuples:
// Schaffer dilation, Douglas embedding, canonical Gamma-unitary, the
// admissible-symbol construction, circulant Gamma-unitaries and a verifier
// for claimed Wold-type splittings.

#include <optional>
#include <vector>

#include "gammalab/fundamental.hpp"
#include "gammalab/hardy.hpp"
#include "gammalab/mu.hpp"
#include "gammalab/report.hpp"
#include "gammalab/tuple.hpp"

namespace gammalab {

/// Operators on state (+) H^2_N(D_C), block lower triangular with the input in the corner.
struct SchafferDilation {
    TupleVariant variant = TupleVariant::Gamma7;
    Eigen::Index stateDim = 0;
    Eigen::Index fiberDim = 0;
    int levels = 0;
    std::vector<Mat> V;     // tuple order
    Mat embedding;          // h -> (h, 0)
    double boundaryDefect = 0;  // ||V_C^* V_C - I|| on the top Hardy level

    Eigen::Index dim() const { return stateDim + levels * fiberDim; }
    /// Columns on which the truncated lift is an exact isometry: state and levels 0..N-2.
    Eigen::Index certifiedColumns() const { return stateDim + (levels - 1) * fiberDim; }
    CommutingTuple7 tuple7() const;
    CommutingTuple5 tuple5() const;
};

SchafferDilation schaffer(const PairedFamily& f, const FundamentalSet& x, int levels, double tol = 1e-8);
SchafferDilation schaffer7(const CommutingTuple7& t, const FundamentalSet7& f, int levels, double tol = 1e-8);
SchafferDilation schaffer5(const CommutingTuple5& s, const FundamentalSet5& g, int levels, double tol = 1e-8);

/// P_state V_i^* (h, 0) - (T_i^* h, 0) over all operators.
double liftResidual(const SchafferDilation& d, const std::vector<Mat>& tupleOps);

/// max over `samples` random monomials p of total degree <= maxDeg of
/// ||P_state p(V) Pi - p(T)||. Pure powers of every operator are always included.
double dilationIdentityCheck(const SchafferDilation& d, const std::vector<Mat>& tupleOps, int maxDeg, int samples = 64,
                             std::uint64_t seed = 7);

/// Isometry relations of a Gamma-isometry candidate. When certifiedColumns is
/// given, identities involving V_C^* V_C are checked on those columns only.
Report gammaIsometryCheck(const PairedFamily& f, double tol, std::optional<Eigen::Index> certifiedColumns = {});
Report gammaIsometryCheck7(const CommutingTuple7& v, double tol, std::optional<Eigen::Index> certifiedColumns = {});
Report gammaIsometryCheck5(const CommutingTuple5& w, double tol, std::optional<Eigen::Index> certifiedColumns = {});

struct DouglasEmbedding {
    Mat observability;   // stacked V_*^* D_{C*} C*^n, n < N
    Mat q;               // (lim C^n C*^n)^{1/2}
    Mat pi;              // [observability; q]
    double isometryResidual = 0;
    double tailBound = 0;  // ||C^N||^2
    Report report;
};

DouglasEmbedding douglasEmbedding(const PairedFamily& f, int levels, double tol = 1e-8);
DouglasEmbedding douglasEmbedding(const CommutingTuple7& t, int levels, double tol = 1e-8);

struct CanonicalUnitary {
    TupleVariant variant = TupleVariant::Gamma7;
    Mat q;
    Mat rangeBasis;                   // orthonormal frame U_r of Ran Q
    std::vector<Mat> N;               // tuple order, on Ran Q coordinates
    std::vector<Vec> jointSpectrum;   // one point per joint eigenvector, tuple order
    Report report;

    Eigen::Index rank() const { return rangeBasis.cols(); }
};

CanonicalUnitary canonicalUnitary(const PairedFamily& f, double tol = 1e-8);
CanonicalUnitary canonicalUnitary7(const CommutingTuple7& t, double tol = 1e-8);
CanonicalUnitary canonicalUnitary5(const CommutingTuple5& s, double tol = 1e-8);

/// Joint spectra of the canonical unitaries of t and of U t U^* agree as multisets.
bool unitaryEquivalenceInvariance(const CommutingTuple7& t, const Mat& u, double tol);
bool unitaryEquivalenceInvariance(const CommutingTuple5& s, const Mat& u, double tol);
/// Greedy multiset distance between two point clouds (infinite when sizes differ).
double spectrumDistance(std::vector<Vec> a, std::vector<Vec> b);

struct AdmissibleResult {
    PairedFamily tuple;
    FundamentalSet adjointFundamentals;  // solved on the constructed tuple's adjoint, on D_{C*}
    FundamentalSet fundamentals;         // solved on the constructed tuple, on D_C
    Report report;

    CommutingTuple7 tuple7() const;
    CommutingTuple5 tuple5() const;
};

/// A_k = W^* M_{Xh_k^* + Xh_{p(k)} z} W for a pure contraction C and symbols
/// Xh on D_{C*}; hypotheses are reported, not enforced. When a partner family
/// X on D_C is given, the solved fundamentals are compared with it.
AdmissibleResult admissibleConstruct(TupleVariant variant, const Mat& c, const std::vector<Mat>& xhat, int levels,
                                     double tol, const std::optional<std::vector<Mat>>& partner = {});
AdmissibleResult admissibleConstruct7(const Mat& t7, const std::vector<Mat>& ft, int levels, double tol,
                                      const std::optional<std::vector<Mat>>& f = {});
AdmissibleResult admissibleConstruct5(const Mat& s3, const std::vector<Mat>& ghat, int levels, double tol,
                                      const std::optional<std::vector<Mat>>& g = {});

/// Direct sum over the M-th roots of unity w_k of the pencils X_k^* + X_{p(k)} w_k,
/// with C = (+)_k w_k I. Norm violations on the grid raise HypothesisViolation.
CommutingTuple7 circulantGammaUnitary7(const std::vector<Mat>& ft, int modes);
CommutingTuple5 circulantGammaUnitary5(const std::vector<Mat>& ghat, int modes);
/// Per-frequency operator norms of the pencils, max over k.
double circulantPencilNorm(const std::vector<Mat>& symbols, int modes);

/// Certifies v = (pencil model on the first pureDim coordinates) (+) (Gamma-unitary).
/// The pure block must be a truncated pencil model of fiber `fiberDim`.
Report woldVerify(const PairedFamily& v, Eigen::Index pureDim, Eigen::Index fiberDim, double tol);

} // namespace gammalab
