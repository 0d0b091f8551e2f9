#include "gammalab/fundamental.hpp"

#include <numbers>

namespace gammalab {

double FundamentalSet::maxResidual() const {
    double m = 0;
    for (double r : residuals) m = std::max(m, r);
    return m;
}

FundamentalSet solveFundamental(const PairedFamily& f, double rankTol) {
    FundamentalSet out;
    out.variant = f.variant;
    auto dp = defectPair(f.contraction, rankTol);
    out.basis = dp.basis;
    out.defect = dp.defect;
    const Mat& v = out.basis.frame;
    out.defectCompressed = v.adjoint() * out.defect * v;
    const Eigen::Index r = out.basis.rank();
    // D_C restricted to its range is positive definite: invert it there.
    Mat dInv = Mat::Zero(r, r);
    if (r > 0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (out.defectCompressed + out.defectCompressed.adjoint())));
        dInv = es.eigenvectors() * es.eigenvalues().cwiseInverse().cast<Complex>().asDiagonal() *
               es.eigenvectors().adjoint();
    }
    for (int k = 0; k < f.size(); ++k) {
        const Mat rhs = f.ops[k] - f.ops[f.partner(k)].adjoint() * f.contraction;
        Mat x = dInv * (v.adjoint() * rhs * v) * dInv;
        out.residuals.push_back(operatorNorm(Mat(out.defect * out.basis.lift(x) * out.defect - rhs)));
        out.X.push_back(std::move(x));
    }
    return out;
}

FundamentalSet7 solveFundamental7(const CommutingTuple7& t, double rankTol) {
    FundamentalSet7 out;
    static_cast<FundamentalSet&>(out) = solveFundamental(family(t), rankTol);
    return out;
}

FundamentalSet5 solveFundamental5(const CommutingTuple5& s, double rankTol) {
    FundamentalSet5 out;
    static_cast<FundamentalSet&>(out) = solveFundamental(family(s), rankTol);
    return out;
}

std::vector<double> verifyRecurrence(const PairedFamily& f, const FundamentalSet& x) {
    if (static_cast<int>(x.X.size()) != f.size()) {
        throw Error(ErrorKind::ShapeMismatch, "fundamental set has " + std::to_string(x.X.size()) + " operators, tuple pairs " +
                                                  std::to_string(f.size()));
    }
    if (x.basis.ambientDim != f.dim()) throw Error(ErrorKind::ShapeMismatch, "fundamental set lives on another space");
    std::vector<double> out;
    const Mat& d = x.defect;
    for (int k = 0; k < f.size(); ++k) {
        if (x.X[k].rows() != x.basis.rank() || x.X[k].cols() != x.basis.rank()) {
            throw Error(ErrorKind::ShapeMismatch, "fundamental operator size does not match the defect rank");
        }
        const Mat xk = x.ambient(k), xp = x.ambient(f.partner(k));
        out.push_back(operatorNorm(Mat(d * f.ops[k] - xk * d - xp.adjoint() * d * f.contraction)));
    }
    return out;
}

std::vector<double> verifyRecurrence7(const CommutingTuple7& t, const FundamentalSet7& x) {
    return verifyRecurrence(family(t), x);
}

std::vector<double> verifyRecurrence5(const CommutingTuple5& s, const FundamentalSet5& x) {
    return verifyRecurrence(family(s), x);
}

double pencilNumericalRadius(const Mat& c0, const Mat& c1, int gridZ, double tol) {
    if (c0.rows() != c0.cols() || c1.rows() != c1.cols() || c0.rows() != c1.rows()) {
        throw Error(ErrorKind::ShapeMismatch, "pencil coefficients must be square of equal size");
    }
    if (gridZ < 1) throw Error(ErrorKind::InvalidInput, "pencil grid must be at least 1");
    if (c0.size() == 0) return 0;
    auto at = [&](double phi) { return numericalRadius(Mat(c0 + std::polar(1.0, phi) * c1), tol); };
    const double h = 2 * std::numbers::pi / gridZ;
    std::vector<double> grid(gridZ);
    for (int k = 0; k < gridZ; ++k) grid[k] = at(k * h);
    double best = *std::max_element(grid.begin(), grid.end());
    if (c1.isZero(0) || gridZ < 3) return best;
    // refine the leading local maxima by golden section on the neighbouring cells
    std::vector<std::pair<double, int>> peaks;
    for (int k = 0; k < gridZ; ++k) {
        if (grid[k] >= grid[(k + 1) % gridZ] && grid[k] >= grid[(k + gridZ - 1) % gridZ]) peaks.emplace_back(grid[k], k);
    }
    std::sort(peaks.begin(), peaks.end(), [](auto& a, auto& b) { return a.first > b.first; });
    if (peaks.size() > 4) peaks.resize(4);
    const double invPhi = (std::sqrt(5.0) - 1) / 2;
    const double lipschitz = operatorNorm(c1);
    for (const auto& [value, k] : peaks) {
        double lo = (k - 1) * h, hi = (k + 1) * h;
        double x1 = hi - invPhi * (hi - lo), x2 = lo + invPhi * (hi - lo);
        double f1 = at(x1), f2 = at(x2);
        for (int it = 0; it < 80 && (hi - lo) * lipschitz > tol; ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + invPhi * (hi - lo); f2 = at(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - invPhi * (hi - lo); f1 = at(x1);
            }
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

Report commutativityConditions7(const std::vector<Mat>& f, double tol) {
    if (f.size() != 6) throw Error(ErrorKind::ShapeMismatch, "six operators expected");
    for (const auto& m : f) {
        if (m.rows() != f[0].rows() || m.cols() != f[0].rows()) throw Error(ErrorKind::ShapeMismatch, "operators must be square of equal size");
    }
    double commuting = 0, mixed = 0;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            commuting = std::max(commuting, commutatorNorm(f[i], f[j]));
            const Mat lhs = f[i].adjoint() * f[5 - j] - f[5 - j] * f[i].adjoint();
            const Mat rhs = f[j].adjoint() * f[5 - i] - f[5 - i] * f[j].adjoint();
            mixed = std::max(mixed, operatorNorm(Mat(lhs - rhs)));
        }
    }
    Report r;
    r.command = "commutativity7";
    r.add("F_i commute", "[F_i, F_j] = 0", commuting, tol);
    r.add("adjoint pairing", "[F_i^*, F_{7-j}] = [F_j^*, F_{7-i}]", mixed, tol);
    return r;
}

Report commutativityConditions5(const Mat& g1, const Mat& g2, const Mat& gt1, const Mat& gt2, double tol) {
    for (const Mat* m : {&g2, &gt1, &gt2}) {
        if (m->rows() != g1.rows() || m->cols() != g1.cols() || g1.rows() != g1.cols()) {
            throw Error(ErrorKind::ShapeMismatch, "operators must be square of equal size");
        }
    }
    auto comm = [](const Mat& a, const Mat& b) -> Mat { return a * b - b * a; };
    auto gap = [&](const Mat& a, const Mat& b) { return operatorNorm(Mat(a - b)); };
    Report r;
    r.command = "commutativity5";
    r.add("[G1, Gt1] = 0", "[G1, Gt1] = 0", operatorNorm(comm(g1, gt1)), tol);
    r.add("[G1, Gt2] = 0", "[G1, Gt2] = 0", operatorNorm(comm(g1, gt2)), tol);
    r.add("[G2, Gt1] = 0", "[G2, Gt1] = 0", operatorNorm(comm(g2, gt1)), tol);
    r.add("[G2, Gt2] = 0", "[G2, Gt2] = 0", operatorNorm(comm(g2, gt2)), tol);
    r.add("[G1, G2] = 0", "[G1, G2] = 0", operatorNorm(comm(g1, g2)), tol);
    r.add("[Gt1, Gt2] = 0", "[Gt1, Gt2] = 0", operatorNorm(comm(gt1, gt2)), tol);
    const Mat g1s = g1.adjoint(), g2s = g2.adjoint(), gt1s = gt1.adjoint(), gt2s = gt2.adjoint();
    r.add("self commutators G1/Gt2", "[G1, G1^*] = [Gt2, Gt2^*]", gap(comm(g1, g1s), comm(gt2, gt2s)), tol);
    r.add("self commutators G2/Gt1", "[G2, G2^*] = [Gt1, Gt1^*]", gap(comm(g2, g2s), comm(gt1, gt1s)), tol);
    r.add("cross G1 Gt1*", "[G1, Gt1^*] = [G2, Gt2^*]", gap(comm(g1, gt1s), comm(g2, gt2s)), tol);
    r.add("cross Gt1 G1*", "[Gt1, G1^*] = [Gt2, G2^*]", gap(comm(gt1, g1s), comm(gt2, g2s)), tol);
    r.add("cross G1 G2*", "[G1, G2^*] = [Gt1, Gt2^*]", gap(comm(g1, g2s), comm(gt1, gt2s)), tol);
    r.add("cross G1* G2", "[G1^*, G2] = [Gt1^*, Gt2]", gap(comm(g1s, g2), comm(gt1s, gt2)), tol);
    return r;
}

Report fundamentalReport(const PairedFamily& f, const FundamentalSet& x, double tol) {
    Report r;
    r.command = "fundamental";
    const auto an = normalisedNames(f.variant);
    const auto xn = fundamentalNames(f.variant);
    const std::string c = f.variant == TupleVariant::Gamma7 ? "T7" : "S3";
    const auto rec = verifyRecurrence(f, x);
    for (int k = 0; k < f.size(); ++k) {
        const int p = f.partner(k);
        r.add("equation " + xn[k], an[k] + " - (" + an[p] + ")^* " + c + " = D " + xn[k] + " D", x.residuals[k], tol);
    }
    for (int k = 0; k < f.size(); ++k) {
        const int p = f.partner(k);
        r.add("recurrence " + xn[k], "D " + an[k] + " = " + xn[k] + " D + " + xn[p] + "^* D " + c, rec[k], tol);
    }
    r.notes.push_back("defect rank " + std::to_string(x.rank()) + " of " + std::to_string(f.dim()));
    if (x.rank() > 0) {
        for (int k = 0; k < f.size(); ++k) {
            const int p = f.partner(k);
            // both pencil forms of the normalised operators; they need not agree
            const double w = pencilNumericalRadius(Mat(x.X[k].adjoint()), x.X[p], 128, 1e-10);
            const double wd = pencilNumericalRadius(x.X[k], Mat(x.X[p].adjoint()), 128, 1e-10);
            r.notes.push_back("sup_z w(" + xn[k] + "^* + " + xn[p] + " z) = " + std::to_string(w));
            r.notes.push_back("sup_z w(" + xn[k] + " + " + xn[p] + "^* z) = " + std::to_string(wd));
        }
    }
    return r;
}

} // namespace gammalab
