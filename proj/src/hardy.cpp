#include "gammalab/hardy.hpp"

#include <limits>

namespace gammalab {

namespace {

Mat matrixPower(const Mat& t, int k) {
    Mat p = Mat::Identity(t.rows(), t.cols());
    Mat base = t;
    while (k > 0) {
        if (k & 1) p = p * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return p;
}

void requireLevels(int levels) {
    if (levels < 1) throw Error(ErrorKind::InvalidInput, "at least one Hardy level is required");
}

} // namespace

Mat BlockToeplitzOperator::dense() const {
    const Eigen::Index p = outDim(), q = inDim();
    Mat m = Mat::Zero(levels * p, levels * q);
    for (int row = 0; row < levels; ++row) {
        for (int col = 0; col <= row && row - col < static_cast<int>(coefficients.size()); ++col) {
            m.block(row * p, col * q, p, q) = coefficients[row - col];
        }
    }
    return m;
}

Mat truncatedShift(const TruncatedHardySpace& sp) {
    requireLevels(sp.levels);
    const Eigen::Index d = sp.fiberDim;
    Mat s = Mat::Zero(sp.dim(), sp.dim());
    for (int n = 0; n + 1 < sp.levels; ++n) s.block((n + 1) * d, n * d, d, d).setIdentity();
    return s;
}

Mat pencilOperator(const Mat& c0, const Mat& c1, int levels) {
    requireLevels(levels);
    if (c0.rows() != c0.cols() || c1.rows() != c1.cols() || c0.rows() != c1.rows()) {
        throw Error(ErrorKind::ShapeMismatch, "pencil coefficients must be square of equal size");
    }
    const Eigen::Index d = c0.rows();
    Mat m = Mat::Zero(levels * d, levels * d);
    for (int n = 0; n < levels; ++n) {
        m.block(n * d, n * d, d, d) = c0;
        if (n + 1 < levels) m.block((n + 1) * d, n * d, d, d) = c1;
    }
    return m;
}

Mat pencilOperator(const AnalyticPencil& p, const TruncatedHardySpace& sp) {
    if (p.c0.rows() != sp.fiberDim) throw Error(ErrorKind::ShapeMismatch, "pencil does not act on the fiber");
    return pencilOperator(p.c0, p.c1, sp.levels);
}

ThetaSeries thetaSeries(const Mat& t, int terms, ThetaConvention convention) {
    detail::requireSquare(t, "thetaSeries");
    if (terms < 0) throw Error(ErrorKind::InvalidInput, "number of terms must be non-negative");
    const auto dT = defectPair(t);
    const auto dS = defectPair(Mat(t.adjoint()));
    ThetaSeries th;
    th.convention = convention;
    th.domain = dT.basis;
    th.codomain = dS.basis;
    const Mat& v = th.domain.frame;
    const Mat& vs = th.codomain.frame;
    const Mat left = vs.adjoint() * dS.defect;  // V_*^* D_{T*}
    const Mat right = dT.defect * v;            // D_T V
    const Mat ts = t.adjoint();
    Mat c0 = -(vs.adjoint() * t * v);
    if (convention == ThetaConvention::Literal) c0 += left * right;
    th.coefficients.push_back(c0);
    Mat power = convention == ThetaConvention::Classical ? Mat(Mat::Identity(t.rows(), t.cols())) : ts;
    for (int k = 1; k <= terms; ++k) {
        th.coefficients.push_back(left * power * right);
        power = power * ts;
    }
    // sum_{k > K} ||c_k|| <= ||D_*|| ||D|| sum_{j >= K} ||T^j|| <= ||D_*|| ||D|| K a / (1 - a), a = ||T^K||
    if (th.domain.rank() == 0 || th.codomain.rank() == 0) {
        th.tailBound = 0;
    } else if (terms == 0) {
        th.decaying = false;
        th.tailBound = std::numeric_limits<double>::infinity();
    } else {
        const double a = operatorNorm(matrixPower(t, terms));
        const double scale = operatorNorm(dS.defect) * operatorNorm(dT.defect);
        if (a < 1) {
            th.tailBound = scale * terms * a / (1 - a);
        } else {
            th.decaying = false;
            th.tailBound = std::numeric_limits<double>::infinity();
        }
    }
    return th;
}

BlockToeplitzOperator thetaToeplitz(const ThetaSeries& th, int levels) {
    requireLevels(levels);
    if (th.terms() < levels - 1) {
        throw Error(ErrorKind::InsufficientCoefficients, "series has " + std::to_string(th.terms() + 1) +
                                                             " coefficients, " + std::to_string(levels) + " levels need " +
                                                             std::to_string(levels));
    }
    BlockToeplitzOperator op;
    op.levels = levels;
    op.coefficients.assign(th.coefficients.begin(), th.coefficients.begin() + levels);
    return op;
}

Mat evaluateTheta(const ThetaSeries& th, Complex z) {
    Mat sum = Mat::Zero(th.codomain.rank(), th.domain.rank());
    Complex zk = 1;
    for (const auto& c : th.coefficients) {
        sum += zk * c;
        zk *= z;
    }
    return sum;
}

Mat deltaSample(const Mat& t, Complex omega, int terms) {
    const ThetaSeries th = thetaSeries(t, terms);
    const Mat theta = evaluateTheta(th, omega);
    const Eigen::Index r = th.domain.rank();
    const Mat h = Mat::Identity(r, r) - theta.adjoint() * theta;
    const double slack = std::max(1e-10, 4 * th.tailBound * (1 + th.tailBound));
    if (!std::isfinite(slack)) {
        throw Error(ErrorKind::NoConvergence, "characteristic series does not decay; increase the number of terms");
    }
    return detail::hermitianFunction(h, slack, slack, [](double l) { return std::sqrt(l); });
}

HardyEmbedding buildW(const Mat& t, int levels) {
    detail::requireSquare(t, "buildW");
    requireLevels(levels);
    const auto dS = defectPair(Mat(t.adjoint()));
    HardyEmbedding out;
    out.fiber = dS.basis;
    out.levels = levels;
    const Eigen::Index r = dS.basis.rank(), n = t.rows();
    out.w = Mat::Zero(levels * r, n);
    Mat row = dS.basis.frame.adjoint() * dS.defect;
    const Mat ts = t.adjoint();
    for (int k = 0; k < levels; ++k) {
        out.w.middleRows(k * r, r) = row;
        row = row * ts;
    }
    return out;
}

WPropertyResult wPropertyResidual(const Mat& t, int levels, ThetaConvention convention) {
    const HardyEmbedding w = buildW(t, levels);
    const ThetaSeries th = thetaSeries(t, levels - 1, convention);
    const Mat m = thetaToeplitz(th, levels).dense();
    WPropertyResult out;
    out.powerTail = operatorNorm(matrixPower(t, levels));
    const Eigen::Index total = w.w.rows();
    if (total == 0) return out;
    // every entry (m, n) of both products involves levels <= max(m, n) only, so the
    // truncated identity is exact and no edge band has to be excluded
    const Mat lhs = w.w * w.w.adjoint() + m * m.adjoint() - Mat::Identity(total, total);
    out.residual = operatorNorm(lhs);
    return out;
}

std::vector<std::vector<double>> intertwineResidual(const std::vector<Mat>& xhat, const std::vector<Mat>& x,
                                                    const ThetaSeries& th, int maxDeg) {
    if (xhat.size() != x.size()) throw Error(ErrorKind::ShapeMismatch, "operator families differ in size");
    if (maxDeg < 0) throw Error(ErrorKind::InvalidInput, "degree must be non-negative");
    if (th.terms() < maxDeg) {
        throw Error(ErrorKind::InsufficientCoefficients, "series has degree " + std::to_string(th.terms()) +
                                                             ", comparison needs " + std::to_string(maxDeg));
    }
    const Eigen::Index rs = th.codomain.rank(), r = th.domain.rank();
    const int m = static_cast<int>(x.size());
    for (int k = 0; k < m; ++k) {
        if (xhat[k].rows() != rs || xhat[k].cols() != rs) {
            throw Error(ErrorKind::ShapeMismatch, "operator " + std::to_string(k + 1) + " of the adjoint family does not act on D_{T*}");
        }
        if (x[k].rows() != r || x[k].cols() != r) {
            throw Error(ErrorKind::ShapeMismatch, "operator " + std::to_string(k + 1) + " of the family does not act on D_T");
        }
    }
    std::vector<std::vector<double>> out(m, std::vector<double>(maxDeg + 1, 0.0));
    if (r == 0 || rs == 0) return out;
    for (int k = 0; k < m; ++k) {
        const int p = m - 1 - k;
        const Mat h0 = xhat[k].adjoint(), &h1 = xhat[p];
        const Mat &g0 = x[k], g1 = x[p].adjoint();
        for (int n = 0; n <= maxDeg; ++n) {
            Mat diff = h0 * th.coefficients[n] - th.coefficients[n] * g0;
            if (n > 0) diff += h1 * th.coefficients[n - 1] - th.coefficients[n - 1] * g1;
            out[k][n] = operatorNorm(diff);
        }
    }
    return out;
}

std::vector<std::vector<double>> intertwineResidual7(const std::vector<Mat>& ft, const std::vector<Mat>& f,
                                                     const ThetaSeries& th, int maxDeg) {
    if (ft.size() != 6 || f.size() != 6) throw Error(ErrorKind::ShapeMismatch, "six operators expected on each side");
    return intertwineResidual(ft, f, th, maxDeg);
}

std::vector<std::vector<double>> intertwineResidual5(const std::vector<Mat>& ghat, const std::vector<Mat>& g,
                                                     const ThetaSeries& th, int maxDeg) {
    if (ghat.size() != 4 || g.size() != 4) throw Error(ErrorKind::ShapeMismatch, "four operators expected on each side");
    return intertwineResidual(ghat, g, th, maxDeg);
}

PureModel compressPureFamily(const std::vector<Mat>& xhat, const Mat& t, int levels) {
    detail::requireSquare(t, "compressPureModel");
    requireLevels(levels);
    if (spectralRadius(t) >= 1 - 1e-9) throw Error(ErrorKind::NotPure, "spectral radius is not below 1");
    const ThetaSeries th = thetaSeries(t, levels - 1);
    const Eigen::Index rs = th.codomain.rank();
    const int m = static_cast<int>(xhat.size());
    for (const auto& x : xhat) {
        if (x.rows() != rs || x.cols() != rs) throw Error(ErrorKind::ShapeMismatch, "symbols must act on D_{T*}");
    }
    const Mat mt = thetaToeplitz(th, levels).dense();
    const Eigen::Index total = levels * rs;
    PureModel out;
    // model space: where M_Theta M_Theta^* = I - W W^* is (numerically) zero
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(mt * mt.adjoint()));
    Eigen::Index keep = 0;
    while (keep < total && es.eigenvalues()(keep) < 0.5) ++keep;
    out.basis = es.eigenvectors().leftCols(keep);
    for (int k = 0; k < m; ++k) {
        const Mat pencil = pencilOperator(Mat(xhat[k].adjoint()), xhat[m - 1 - k], levels);
        out.ops.push_back(out.basis.adjoint() * pencil * out.basis);
    }
    out.contraction = out.basis.adjoint() * truncatedShift({levels, rs}) * out.basis;
    std::vector<Mat> all = out.ops;
    all.push_back(out.contraction);
    out.commutationResidual = commutationResidual(all);
    return out;
}

CommutingTuple7 compressPureModel(const std::vector<Mat>& ft, const Mat& t7, int levels) {
    if (ft.size() != 6) throw Error(ErrorKind::ShapeMismatch, "six symbols expected");
    const PureModel pm = compressPureFamily(ft, t7, levels);
    return tuple7(pm.ops, pm.contraction);
}

CommutingTuple5 compressPureModel5(const std::vector<Mat>& ghat, const Mat& s3, int levels) {
    if (ghat.size() != 4) throw Error(ErrorKind::ShapeMismatch, "four symbols expected");
    const PureModel pm = compressPureFamily(ghat, s3, levels);
    return tuple5(pm.ops, pm.contraction);
}

} // namespace gammalab
