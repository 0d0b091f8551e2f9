#pragma once

// Truncated vector-valued Hardy space H^2_N(E): N coefficient levels of a
// d-dimensional fiber, level n stored in rows [n d, (n+1) d). Analytic
// Toeplitz operators are block lower triangular on this space.

#include <optional>
#include <vector>

#include "gammalab/fundamental.hpp"
#include "gammalab/report.hpp"
#include "gammalab/tuple.hpp"

namespace gammalab {

struct TruncatedHardySpace {
    int levels = 1;
    Eigen::Index fiberDim = 1;

    Eigen::Index dim() const { return levels * fiberDim; }
};

/// Symbol C0 + C1 z.
struct AnalyticPencil {
    Mat c0;
    Mat c1;
};

struct BlockToeplitzOperator {
    std::vector<Mat> coefficients;  // c_k : fiber in -> fiber out
    int levels = 1;

    Eigen::Index inDim() const { return coefficients.empty() ? 0 : coefficients[0].cols(); }
    Eigen::Index outDim() const { return coefficients.empty() ? 0 : coefficients[0].rows(); }
    /// Block lower triangular realisation, block (m, n) = c_{m-n}.
    Mat dense() const;
};

/// Coefficient convention for the characteristic function.
///  Classical: Theta(z) = -T + z D_{T*} (I - z T*)^{-1} D_T
///  Literal:   Theta(z) = -T + D_{T*} (I - z T*)^{-1} D_T
enum class ThetaConvention { Classical, Literal };

struct ThetaSeries {
    ThetaConvention convention = ThetaConvention::Classical;
    SubspaceBasis<Complex> domain;    // D_T
    SubspaceBasis<Complex> codomain;  // D_{T*}
    std::vector<Mat> coefficients;    // c_0..c_K as maps domain -> codomain coordinates
    double tailBound = 0;             // bound on sum_{k > K} ||c_k||; infinite when not decaying
    bool decaying = true;

    int terms() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Block forward shift; the top level is annihilated.
Mat truncatedShift(const TruncatedHardySpace& sp);
/// C0 on the block diagonal, C1 on the first block subdiagonal.
Mat pencilOperator(const AnalyticPencil& p, const TruncatedHardySpace& sp);
Mat pencilOperator(const Mat& c0, const Mat& c1, int levels);

ThetaSeries thetaSeries(const Mat& t, int terms, ThetaConvention convention = ThetaConvention::Classical);
/// Lower triangular Toeplitz realisation on N levels; needs terms >= N - 1.
BlockToeplitzOperator thetaToeplitz(const ThetaSeries& th, int levels);
/// Partial sum of the series at z.
Mat evaluateTheta(const ThetaSeries& th, Complex z);

/// (I - Theta(w)^* Theta(w))^{1/2} from the series with `terms` coefficients.
Mat deltaSample(const Mat& t, Complex omega, int terms = 64);

struct HardyEmbedding {
    Mat w;                           // (N r_*) x n, level n block = V_*^* D_{T*} T*^n
    SubspaceBasis<Complex> fiber;    // basis V_* of D_{T*}
    int levels = 0;
};

HardyEmbedding buildW(const Mat& t, int levels);

struct WPropertyResult {
    double residual = 0;        // ||W W^* + M_Theta M_Theta^* - I|| on levels 0..N-1-excluded
    int excludedLevels = 0;
    double powerTail = 0;       // ||T^N||
};

WPropertyResult wPropertyResidual(const Mat& t, int levels, ThetaConvention convention = ThetaConvention::Classical);

/// Per-identity, per-degree residuals of
///   (Xh_k^* + Xh_{p(k)} z) Theta(z) = Theta(z) (X_k + X_{p(k)}^* z)
/// compared coefficientwise for degrees 0..maxDeg, with p(k) = m-1-k.
/// Xh act on the codomain coordinates of th, X on its domain coordinates.
std::vector<std::vector<double>> intertwineResidual(const std::vector<Mat>& xhat, const std::vector<Mat>& x,
                                                    const ThetaSeries& th, int maxDeg);
/// Ft on D_{T7*}, F on D_{T7}, both of size six.
std::vector<std::vector<double>> intertwineResidual7(const std::vector<Mat>& ft, const std::vector<Mat>& f,
                                                     const ThetaSeries& th, int maxDeg);
/// (G1, G2, Gt1, Gt2) hats on D_{S3*} and plain on D_{S3}.
std::vector<std::vector<double>> intertwineResidual5(const std::vector<Mat>& ghat, const std::vector<Mat>& g,
                                                     const ThetaSeries& th, int maxDeg);

struct PureModel {
    Mat basis;              // orthonormal frame of the model space inside H^2_N(D_{T*})
    std::vector<Mat> ops;   // compressed normalised pencils
    Mat contraction;        // compressed shift
    double commutationResidual = 0;
};

/// Compression of the pencils (Xh_k^* + Xh_{p(k)} z) and of the shift to the
/// orthocomplement of Ran M_Theta inside H^2_N(D_{T*}).
PureModel compressPureFamily(const std::vector<Mat>& xhat, const Mat& t, int levels);
CommutingTuple7 compressPureModel(const std::vector<Mat>& ft, const Mat& t7, int levels);
CommutingTuple5 compressPureModel5(const std::vector<Mat>& ghat, const Mat& s3, int levels);

} // namespace gammalab
