#pragma once

// Structured singular value bounds for block-scalar uncertainty
// E(n; s; r_1, ..., r_s) = { diag(z_1 I_{r_1}, ..., z_s I_{r_s}) }, and the
// polynomial symmetrization maps whose images define the Gamma domains.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gammalab/kernel.hpp"

namespace gammalab {

struct BlockStructure {
    int n = 0;
    std::vector<int> blockSizes;

    /// Parses "n;s;r1,r2,...". Throws InvalidInput on malformed text.
    static BlockStructure parse(std::string_view text);
    static BlockStructure E3311() { return {3, {1, 1, 1}}; }
    static BlockStructure E3212() { return {3, {1, 2}}; }
    static BlockStructure E2211() { return {2, {1, 1}}; }

    int blocks() const { return static_cast<int>(blockSizes.size()); }
    int offset(int block) const;
    /// Structured diagonal matrix diag(z_1 I_{r_1}, ..., z_s I_{r_s}).
    Mat expand(const Vec& z) const;
    void validate() const;
    std::string str() const;
};

struct MuLowerResult {
    double value = 0;      // max over refined candidates, >= gridValue
    double gridValue = 0;  // best value on the raw phase grid
    Vec phaseWitness;      // s unimodular scalars; rho(A diag(phi)) attains value at a positive eigenvalue
};

struct MuUpperResult {
    double value = 0;
    std::vector<Mat> scalingBlocks;  // positive definite r_j x r_j blocks of the optimal D
};

struct MuBounds {
    double lower = 0;
    double upper = 0;
    Vec phaseWitness;
    std::vector<Mat> scalingBlocks;

    double gap() const { return upper - lower; }
};

/// Lower bound max_phi rho(A diag(phi)) over structured unimodular phases, first phase fixed to 1.
/// The phase grid has `phaseGrid` points per free block; local maxima on the grid are refined.
MuLowerResult muLower(const Mat& a, const BlockStructure& st, int phaseGrid = 256);

/// Upper bound min_D ||D A D^{-1}|| over positive definite D in the commutant of the structure.
MuUpperResult muUpper(const Mat& a, const BlockStructure& st, int iters = 64);

MuBounds muBounds(const Mat& a, const BlockStructure& st, int phaseGrid = 256, int iters = 64);

enum class GammaVariant { E3311, E3212, E2211 };

std::string_view to_string(GammaVariant v);
GammaVariant parseVariant(std::string_view text);

struct GammaPoint {
    GammaVariant variant = GammaVariant::E3311;
    Vec coords;
    std::optional<Mat> witness;
};

/// (a11, a22, a11 a22 - a12 a21, a33, a11 a33 - a13 a31, a22 a33 - a23 a32, det A)
GammaPoint symmetrize7(const Mat& a);
/// (a11, minor12 + minor13, det A, a22 + a33, minor23)
GammaPoint symmetrize5(const Mat& a);
/// (a11, a22, det A)
GammaPoint symmetrize3(const Mat& a);
GammaPoint symmetrize(GammaVariant v, const Mat& a);

struct NamedResidual {
    std::string name;
    double residual = 0;
};

struct SetCheck {
    bool pass = false;
    std::vector<NamedResidual> residuals;
};

/// Distinguished-boundary test x1 = conj(x6) x7, x3 = conj(x4) x7, x5 = conj(x2) x7, |x7| = 1.
/// With a witness, Gamma membership is also required through muUpper(witness) <= 1 + tol.
SetCheck kSetCheck(const GammaPoint& p, double tol);
/// x1 = conj(y2) x3, x2 = conj(y1) x3, |x3| = 1 on (x1, x2, x3, y1, y2).
SetCheck k1SetCheck(const GammaPoint& p, double tol);

} // namespace gammalab
