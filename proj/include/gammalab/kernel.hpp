#pragma once

// Dense complex linear algebra primitives shared by every other module.
//
// Everything here is a free function templated on the Eigen expression type,
// so callers can pass blocks, products or plain matrices without copies.
// Results are returned as plain dynamic matrices of the input scalar.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "gammalab/error.hpp"

namespace gammalab {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
template <typename Derived>
using ComplexOf = std::complex<RealOf<Derived>>;
template <typename Derived>
using ComplexMatrixOf = Matrix<ComplexOf<Derived>>;

using Complex = std::complex<double>;
using Mat = Matrix<Complex>;
using Vec = Vector<Complex>;
using RVec = Vector<double>;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
template <typename Scalar>
struct HermitianSpectrum {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    Vector<Real> eigenvalues;
    Matrix<Scalar> eigenvectors;
};

/// Isometric column frame spanning a subspace of an ambient space.
template <typename Scalar>
struct SubspaceBasis {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    Eigen::Index ambientDim = 0;
    Matrix<Scalar> frame;
    Real rankTolerance = 0;

    Eigen::Index rank() const { return frame.cols(); }
    /// Coordinates of an ambient operator restricted to the subspace.
    Matrix<Scalar> compress(const Matrix<Scalar>& op) const { return frame.adjoint() * op * frame; }
    /// Ambient operator that acts as `coords` on the subspace and as 0 on its complement.
    Matrix<Scalar> lift(const Matrix<Scalar>& coords) const { return frame * coords * frame.adjoint(); }
    Matrix<Scalar> projector() const { return frame * frame.adjoint(); }
};

template <typename Scalar>
struct DefectPair {
    Matrix<Scalar> defect;
    SubspaceBasis<Scalar> basis;
};

/// Result of the power-doubling iteration for lim T^n T*^n.
template <typename Scalar>
struct AsymptoticLimit {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    Matrix<Scalar> q;         // PSD square root of the limit
    Matrix<Scalar> limit;     // the limit itself, q^2
    int doublings = 0;
    std::vector<Real> stepNorms;     // ||A_{k+1} - A_k||
    std::vector<Real> maxIncrease;   // lambda_max(A_{k+1} - A_k), <= 0 up to rounding
};

template <typename Scalar>
struct JointDiagonalization {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    Matrix<Scalar> frame;
    std::vector<Vector<Scalar>> spectra;  // spectra[i](k): eigenvalue of N_i on column k
    Real residual = 0;                    // max_i ||U* N_i U - diag||
};

namespace detail {

inline int threadBudget() {
    int budget = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("GAMMA_LAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) budget = std::min(budget, cap);
    }
    return budget;
}

/// max_{k < count} f(k); chunks run on up to threadBudget() threads. Max is
/// order independent so the result does not depend on the thread count.
template <typename Real, typename F>
std::pair<Real, std::size_t> parallelArgMax(std::size_t count, F&& f) {
    Real best = -std::numeric_limits<Real>::infinity();
    std::size_t arg = 0;
    if (count == 0) return {best, arg};
    const int threads = static_cast<int>(std::min<std::size_t>(threadBudget(), (count + 63) / 64));
    if (threads <= 1) {
        for (std::size_t k = 0; k < count; ++k) {
            Real v = f(k);
            if (v > best) { best = v; arg = k; }
        }
        return {best, arg};
    }
    std::vector<std::pair<Real, std::size_t>> partial(threads, {best, 0});
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            const std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
            for (std::size_t k = lo; k < hi; ++k) {
                Real v = f(k);
                if (v > partial[t].first) partial[t] = {v, k};
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& [v, k] : partial) {
        if (v > best || (v == best && k < arg)) { best = v; arg = k; }
    }
    return {best, arg};
}

template <typename Derived>
void requireSquare(const Eigen::MatrixBase<Derived>& a, const char* what) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorKind::ShapeMismatch, std::string(what) + ": matrix is " + std::to_string(a.rows()) +
                                                  "x" + std::to_string(a.cols()) + ", expected square");
    }
}

template <typename Derived>
void requireFinite(const Eigen::MatrixBase<Derived>& a, const char* what) {
    if (!a.allFinite()) throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite entry");
}

/// f applied to the eigenvalues of a Hermitian matrix. Eigenvalues in
/// [-zeroBand, zeroBand] are treated as exact zeros, anything below
/// -negativeTol raises NotPSD.
template <typename Derived, typename F>
ComplexMatrixOf<Derived> hermitianFunction(const Eigen::MatrixBase<Derived>& h, RealOf<Derived> negativeTol,
                                           RealOf<Derived> zeroBand, F&& f) {
    using Real = RealOf<Derived>;
    using CMat = ComplexMatrixOf<Derived>;
    CMat sym = 0.5 * (h.template cast<ComplexOf<Derived>>() + h.adjoint().template cast<ComplexOf<Derived>>());
    if (sym.rows() == 0) return sym;
    Eigen::SelfAdjointEigenSolver<CMat> es(sym);
    Vector<Real> lambda = es.eigenvalues();
    if (lambda.minCoeff() < -negativeTol) {
        throw Error(ErrorKind::NotPSD, "smallest eigenvalue " + std::to_string(lambda.minCoeff()) +
                                           " below -" + std::to_string(negativeTol));
    }
    Vector<Real> mapped(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        Real l = lambda(k);
        mapped(k) = (l <= zeroBand) ? f(Real(0)) : f(l);
    }
    return es.eigenvectors() * mapped.template cast<ComplexOf<Derived>>().asDiagonal() *
           es.eigenvectors().adjoint();
}

} // namespace detail

/// Largest singular value.
template <typename Derived>
RealOf<Derived> operatorNorm(const Eigen::MatrixBase<Derived>& a) {
    if (a.size() == 0) return 0;
    using Plain = Matrix<typename Derived::Scalar>;
    Eigen::JacobiSVD<Plain> svd(a.eval());
    return svd.singularValues()(0);
}

template <typename Derived>
RealOf<Derived> spectralRadius(const Eigen::MatrixBase<Derived>& a) {
    detail::requireSquare(a, "spectralRadius");
    if (a.size() == 0) return 0;
    using CMat = ComplexMatrixOf<Derived>;
    Eigen::ComplexEigenSolver<CMat> es(a.template cast<ComplexOf<Derived>>().eval(), false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

template <typename Derived>
bool isHermitian(const Eigen::MatrixBase<Derived>& a, RealOf<Derived> tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).norm() <= tol * std::max<RealOf<Derived>>(1, a.norm());
}

/// Largest eigenvalue of Re(e^{i theta} A) = (e^{i theta} A + e^{-i theta} A*) / 2.
template <typename Derived>
RealOf<Derived> rotatedRealPartMax(const Eigen::MatrixBase<Derived>& a, RealOf<Derived> theta) {
    using CMat = ComplexMatrixOf<Derived>;
    const ComplexOf<Derived> phase = std::polar<RealOf<Derived>>(1, theta);
    CMat h = 0.5 * (phase * a.template cast<ComplexOf<Derived>>() +
                    std::conj(phase) * a.adjoint().template cast<ComplexOf<Derived>>());
    if (h.rows() == 1) return h(0, 0).real();
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(h.rows() - 1);
}

/// Numerical radius w(A) = max_theta lambda_max(Re(e^{i theta} A)).
///
/// A uniform grid of `gridPoints` angles is scanned first. The map
/// theta -> lambda_max(Re(e^{i theta} A)) is Lipschitz with constant ||A||, so
/// every grid point within ||A|| * h of the best value may hide the true
/// maximum; each such local grid maximum is refined by golden-section search
/// on its two neighbouring cells until the bracket error is below tol.
template <typename Derived>
RealOf<Derived> numericalRadius(const Eigen::MatrixBase<Derived>& a, RealOf<Derived> tol,
                                int gridPoints = 720) {
    using Real = RealOf<Derived>;
    detail::requireSquare(a, "numericalRadius");
    if (!(tol > 0)) throw Error(ErrorKind::InvalidInput, "numericalRadius: tol must be positive");
    if (a.size() == 0) return 0;
    const auto plain = a.eval();
    const Real lipschitz = operatorNorm(plain);
    if (lipschitz == 0) return 0;
    gridPoints = std::max(gridPoints, 8);
    const Real h = 2 * std::numbers::pi_v<Real> / gridPoints;

    std::vector<Real> grid(gridPoints);
    for (int k = 0; k < gridPoints; ++k) grid[k] = rotatedRealPartMax(plain, k * h);
    const Real best = *std::max_element(grid.begin(), grid.end());

    std::vector<std::pair<Real, int>> candidates;
    for (int k = 0; k < gridPoints; ++k) {
        const Real prev = grid[(k + gridPoints - 1) % gridPoints];
        const Real next = grid[(k + 1) % gridPoints];
        if (grid[k] >= prev && grid[k] >= next && grid[k] >= best - lipschitz * h) {
            candidates.emplace_back(grid[k], k);
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](auto& x, auto& y) { return x.first > y.first; });
    if (candidates.size() > 16) candidates.resize(16);

    Real result = best;
    const Real invPhi = (std::sqrt(Real(5)) - 1) / 2;
    for (const auto& [value, k] : candidates) {
        Real lo = (k - 1) * h, hi = (k + 1) * h;
        Real x1 = hi - invPhi * (hi - lo), x2 = lo + invPhi * (hi - lo);
        Real f1 = rotatedRealPartMax(plain, x1), f2 = rotatedRealPartMax(plain, x2);
        for (int it = 0; it < 200 && (hi - lo) * lipschitz > tol * Real(0.05); ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + invPhi * (hi - lo); f2 = rotatedRealPartMax(plain, x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - invPhi * (hi - lo); f1 = rotatedRealPartMax(plain, x1);
            }
        }
        result = std::max({result, f1, f2, value});
    }
    return std::max<Real>(result, 0);
}

template <typename Derived>
HermitianSpectrum<ComplexOf<Derived>> hermitianSpectrum(const Eigen::MatrixBase<Derived>& h) {
    detail::requireSquare(h, "hermitianSpectrum");
    using CMat = ComplexMatrixOf<Derived>;
    if (!isHermitian(h, RealOf<Derived>(1e-10))) throw Error(ErrorKind::InvalidInput, "matrix is not Hermitian");
    CMat sym = 0.5 * (h.template cast<ComplexOf<Derived>>() + h.adjoint().template cast<ComplexOf<Derived>>());
    HermitianSpectrum<ComplexOf<Derived>> out;
    if (sym.rows() == 0) {
        out.eigenvectors = sym;
        out.eigenvalues.resize(0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(sym);
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    return out;
}

/// Hermitian PSD square root. Eigenvalues in [-clipTol, 0) are clipped to 0.
template <typename Derived>
ComplexMatrixOf<Derived> psdSqrt(const Eigen::MatrixBase<Derived>& h, RealOf<Derived> clipTol = 1e-10) {
    using Real = RealOf<Derived>;
    detail::requireSquare(h, "psdSqrt");
    detail::requireFinite(h, "psdSqrt");
    if (!isHermitian(h, Real(1e-10))) throw Error(ErrorKind::InvalidInput, "psdSqrt: matrix is not Hermitian");
    return detail::hermitianFunction(h, clipTol, Real(0), [](Real l) { return std::sqrt(std::max<Real>(l, 0)); });
}

/// Orthonormal frame for the range of an orthogonal projector, chosen by
/// pivoted Gram-Schmidt on its columns. Coordinate subspaces come out as the
/// matching unit vectors, and the identity projector yields the identity frame.
template <typename Derived>
ComplexMatrixOf<Derived> canonicalFrame(const Eigen::MatrixBase<Derived>& projector, Eigen::Index rank) {
    using Real = RealOf<Derived>;
    using CMat = ComplexMatrixOf<Derived>;
    CMat residual = projector.template cast<ComplexOf<Derived>>();
    const Eigen::Index n = residual.rows();
    CMat frame(n, rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
        Vector<Real> norms = residual.colwise().norm().transpose();
        const Real top = norms.maxCoeff();
        Eigen::Index pivot = 0;
        while (norms(pivot) < top * (1 - Real(1e-8))) ++pivot;
        Vector<ComplexOf<Derived>> q = residual.col(pivot) / norms(pivot);
        // re-orthogonalise against earlier columns
        if (c > 0) {
            q -= frame.leftCols(c) * (frame.leftCols(c).adjoint() * q);
            q.normalize();
        }
        frame.col(c) = q;
        residual -= q * (q.adjoint() * residual);
    }
    return frame;
}

/// Default rank cut for defect computations: eigenvalues of I - T*T below
/// this are treated as exact zeros.
template <typename Real>
Real defaultDefectTolerance(Real normT) {
    return Real(1e-10) * std::max<Real>(1, normT * normT);
}

/// D_T = (I - T*T)^{1/2} together with an isometric frame for its range.
///
/// Eigenvalues of I - T*T inside [-rankTol, rankTol] are zeroed in D as well as
/// dropped from the frame, so Ran D and the frame agree exactly. Applying the
/// same cut to T* keeps T D_T = D_{T*} T intact.
template <typename Derived>
DefectPair<ComplexOf<Derived>> defectPair(const Eigen::MatrixBase<Derived>& t, RealOf<Derived> rankTol = -1) {
    using Real = RealOf<Derived>;
    using CMat = ComplexMatrixOf<Derived>;
    detail::requireFinite(t, "defectPair");
    const Real normT = operatorNorm(t);
    if (normT > 1 + Real(1e-10)) {
        throw Error(ErrorKind::NotContraction, "operator norm " + std::to_string(normT) + " exceeds 1");
    }
    if (rankTol < 0) rankTol = defaultDefectTolerance(normT);
    const Eigen::Index n = t.cols();
    CMat tc = t.template cast<ComplexOf<Derived>>();
    CMat h = CMat::Identity(n, n) - tc.adjoint() * tc;
    h = 0.5 * (h + h.adjoint()).eval();

    DefectPair<ComplexOf<Derived>> out;
    out.basis.ambientDim = n;
    out.basis.rankTolerance = rankTol;
    if (n == 0) {
        out.defect = h;
        out.basis.frame = CMat(0, 0);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const auto& lambda = es.eigenvalues();
    Vector<Real> root(n);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (lambda(k) > rankTol) {
            root(k) = std::sqrt(lambda(k));
            ++rank;
        } else {
            root(k) = 0;
        }
    }
    out.defect = es.eigenvectors() * root.template cast<ComplexOf<Derived>>().asDiagonal() * es.eigenvectors().adjoint();
    CMat kept = es.eigenvectors().rightCols(rank);
    out.basis.frame = canonicalFrame(kept * kept.adjoint(), rank);
    return out;
}

/// Q = (lim T^n T*^n)^{1/2} via P_{k+1} = P_k^2, A_k = P_k P_k^*, stopping once
/// ||A_{k+1} - A_k|| <= tol.
template <typename Derived>
AsymptoticLimit<ComplexOf<Derived>> sotLimitQ(const Eigen::MatrixBase<Derived>& t, RealOf<Derived> tol = 1e-14,
                                              int maxDoublings = 64) {
    using Real = RealOf<Derived>;
    using CMat = ComplexMatrixOf<Derived>;
    detail::requireSquare(t, "sotLimitQ");
    detail::requireFinite(t, "sotLimitQ");
    const Real normT = operatorNorm(t);
    if (normT > 1 + Real(1e-10)) {
        throw Error(ErrorKind::NotContraction, "operator norm " + std::to_string(normT) + " exceeds 1");
    }
    AsymptoticLimit<ComplexOf<Derived>> out;
    CMat power = t.template cast<ComplexOf<Derived>>();
    CMat current = power * power.adjoint();
    Real last = std::numeric_limits<Real>::infinity();
    bool converged = t.rows() == 0;
    for (int k = 0; k < maxDoublings && !converged; ++k) {
        power = (power * power).eval();
        CMat next = power * power.adjoint();
        CMat diff = next - current;
        last = operatorNorm(diff);
        out.stepNorms.push_back(last);
        CMat sym = 0.5 * (diff + diff.adjoint());
        Eigen::SelfAdjointEigenSolver<CMat> es(sym, Eigen::EigenvaluesOnly);
        out.maxIncrease.push_back(es.eigenvalues()(sym.rows() - 1));
        current = std::move(next);
        out.doublings = k + 1;
        converged = last <= tol;
    }
    if (!converged) {
        throw Error(ErrorKind::NoConvergence, "power doubling did not settle after " + std::to_string(maxDoublings) +
                                                  " steps, last residual " + std::to_string(last));
    }
    out.limit = 0.5 * (current + current.adjoint());
    const Real band = std::max<Real>(tol, Real(1e-10));
    out.q = detail::hermitianFunction(out.limit, Real(1e-8), band, [](Real l) { return std::sqrt(l); });
    out.limit = out.q * out.q;
    return out;
}

/// Simultaneous unitary diagonalisation of pairwise commuting normal matrices.
///
/// A random real combination of the Hermitian and skew-Hermitian parts is
/// diagonalised; eigenvalue clusters that still carry a non-scalar compression
/// of some input are split again with fresh coefficients. The generator is
/// seeded with a constant so repeated calls give identical frames.
template <typename Scalar>
JointDiagonalization<Scalar> jointDiagonalize(std::span<const Matrix<Scalar>> tuple,
                                              typename Eigen::NumTraits<Scalar>::Real tol) {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    using CMat = Matrix<Scalar>;
    static_assert(Eigen::NumTraits<Scalar>::IsComplex, "jointDiagonalize expects complex matrices");
    JointDiagonalization<Scalar> out;
    if (tuple.empty()) return out;
    const Eigen::Index n = tuple.front().rows();
    Real scale = 1;
    for (const auto& m : tuple) {
        detail::requireSquare(m, "jointDiagonalize");
        if (m.rows() != n) throw Error(ErrorKind::ShapeMismatch, "jointDiagonalize: sizes differ");
        scale = std::max(scale, operatorNorm(m));
    }
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        const auto& a = tuple[i];
        if (operatorNorm(CMat(a * a.adjoint() - a.adjoint() * a)) > tol * scale * scale) {
            throw Error(ErrorKind::NotNormal, "jointDiagonalize: matrix " + std::to_string(i) + " is not normal");
        }
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
            if (operatorNorm(CMat(a * tuple[j] - tuple[j] * a)) > tol * scale * scale) {
                throw Error(ErrorKind::NotCommuting, "jointDiagonalize: matrices " + std::to_string(i) + " and " +
                                                         std::to_string(j) + " do not commute");
            }
        }
    }

    std::mt19937_64 rng(0x9E3779B97F4A7C15ull);
    std::uniform_real_distribution<Real> coeff(-1, 1);
    const Real clusterGap = std::max<Real>(Real(1e3) * tol, Real(1e-10)) * scale;
    const Real scalarTol = tol * scale;

    std::vector<CMat> done;
    std::vector<std::pair<CMat, int>> pending{{CMat::Identity(n, n), 0}};
    while (!pending.empty()) {
        auto [sub, depth] = std::move(pending.back());
        pending.pop_back();
        const Eigen::Index m = sub.cols();
        bool scalar = true;
        for (const auto& a : tuple) {
            CMat c = sub.adjoint() * a * sub;
            Scalar mean = c.trace() / Real(m);
            if (operatorNorm(CMat(c - mean * CMat::Identity(m, m))) > scalarTol) { scalar = false; break; }
        }
        if (scalar || m == 1 || depth > 32) {
            done.push_back(sub);
            continue;
        }
        CMat h = CMat::Zero(m, m);
        for (const auto& a : tuple) {
            CMat c = sub.adjoint() * a * sub;
            h += coeff(rng) * Real(0.5) * (c + c.adjoint());
            h += coeff(rng) * Real(0.5) * (c - c.adjoint()) * Scalar(0, -1);
        }
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (h + h.adjoint()));
        const auto& lambda = es.eigenvalues();
        Eigen::Index start = 0;
        for (Eigen::Index k = 1; k <= m; ++k) {
            if (k == m || lambda(k) - lambda(k - 1) > clusterGap) {
                pending.emplace_back(sub * es.eigenvectors().middleCols(start, k - start), depth + 1);
                start = k;
            }
        }
    }

    out.frame.resize(n, n);
    Eigen::Index col = 0;
    for (const auto& block : done) {
        out.frame.middleCols(col, block.cols()) = block;
        col += block.cols();
    }
    out.spectra.reserve(tuple.size());
    for (const auto& a : tuple) {
        CMat d = out.frame.adjoint() * a * out.frame;
        Vector<Scalar> diag = d.diagonal();
        d.diagonal().setZero();
        out.residual = std::max(out.residual, operatorNorm(d));
        out.spectra.push_back(std::move(diag));
    }
    return out;
}

template <typename Scalar>
JointDiagonalization<Scalar> jointDiagonalize(const std::vector<Matrix<Scalar>>& tuple,
                                              typename Eigen::NumTraits<Scalar>::Real tol) {
    return jointDiagonalize<Scalar>(std::span<const Matrix<Scalar>>(tuple), tol);
}

template <typename DerivedA, typename DerivedB>
RealOf<DerivedA> commutatorNorm(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return operatorNorm((a * b - b * a).eval());
}

} // namespace gammalab
