#include "gammalab/dilation.hpp"

#include <limits>
#include <numbers>
#include <random>

namespace gammalab {

namespace {

PairedFamily familyFromOperators(TupleVariant variant, const std::vector<Mat>& ops) {
    if (variant == TupleVariant::Gamma7) {
        if (ops.size() != 7) throw Error(ErrorKind::ShapeMismatch, "seven operators expected");
        return family(CommutingTuple7::make({ops[0], ops[1], ops[2], ops[3], ops[4], ops[5], ops[6]}));
    }
    if (ops.size() != 5) throw Error(ErrorKind::ShapeMismatch, "five operators expected");
    return family(CommutingTuple5::make({ops[0], ops[1], ops[2], ops[3], ops[4]}));
}

std::string contractionName(TupleVariant v) { return v == TupleVariant::Gamma7 ? "T7" : "S3"; }

/// Tuple-order operators from normalised ones and C.
std::vector<Mat> toTupleOrder(TupleVariant v, const std::vector<Mat>& normalised, const Mat& c) {
    PairedFamily f;
    f.variant = v;
    f.ops = normalised;
    f.contraction = c;
    f.scale = v == TupleVariant::Gamma7 ? std::vector<double>(6, 1.0) : std::vector<double>{1, 2, 2, 1};
    return tupleOperators(f);
}

Mat matrixPower(const Mat& t, int k) {
    Mat p = Mat::Identity(t.rows(), t.cols());
    for (int i = 0; i < k; ++i) p = p * t;
    return p;
}

Mat columns(const Mat& m, std::optional<Eigen::Index> cols) {
    if (!cols) return m;
    return m.leftCols(std::min<Eigen::Index>(*cols, m.cols()));
}

} // namespace

CommutingTuple7 SchafferDilation::tuple7() const {
    if (variant != TupleVariant::Gamma7) throw Error(ErrorKind::InvalidInput, "dilation is not of a 7-tuple");
    return CommutingTuple7::make({V[0], V[1], V[2], V[3], V[4], V[5], V[6]});
}

CommutingTuple5 SchafferDilation::tuple5() const {
    if (variant != TupleVariant::Gamma5) throw Error(ErrorKind::InvalidInput, "dilation is not of a 5-tuple");
    return CommutingTuple5::make({V[0], V[1], V[2], V[3], V[4]});
}

SchafferDilation schaffer(const PairedFamily& f, const FundamentalSet& x, int levels, double tol) {
    if (levels < 2) throw Error(ErrorKind::InvalidInput, "the dilation needs at least two Hardy levels");
    if (static_cast<int>(x.X.size()) != f.size() || x.basis.ambientDim != f.dim()) {
        throw Error(ErrorKind::ShapeMismatch, "fundamental set does not belong to this tuple");
    }
    const double worst = x.maxResidual();
    if (!(worst <= tol * std::max(1.0, operatorNorm(f.contraction)))) {
        throw Error(ErrorKind::HypothesisViolation, "fundamental residual " + std::to_string(worst) +
                                                        " exceeds tolerance; the dilation identities would fail");
    }
    SchafferDilation d;
    d.variant = f.variant;
    d.stateDim = f.dim();
    d.fiberDim = x.rank();
    d.levels = levels;
    const Eigen::Index n = d.stateDim, r = d.fiberDim, total = d.dim();
    const Mat dv = x.basis.frame.adjoint() * x.defect;  // V^* D_C, r x n

    auto lift = [&](const Mat& corner, const Mat& levelZero, const Mat& hardy) {
        Mat v = Mat::Zero(total, total);
        v.topLeftCorner(n, n) = corner;
        v.block(n, 0, r, n) = levelZero;
        v.bottomRightCorner(levels * r, levels * r) = hardy;
        return v;
    };
    const Mat vc = lift(f.contraction, dv, truncatedShift({levels, r}));
    std::vector<Mat> normalised;
    for (int k = 0; k < f.size(); ++k) {
        const int p = f.partner(k);
        const Mat xpStar = x.X[p].adjoint();
        normalised.push_back(lift(f.ops[k], xpStar * dv, pencilOperator(x.X[k], xpStar, levels)));
    }
    d.V = toTupleOrder(f.variant, normalised, vc);
    d.embedding = Mat::Zero(total, n);
    d.embedding.topRows(n).setIdentity();
    if (r > 0) {
        const Mat gram = vc.adjoint() * vc - Mat::Identity(total, total);
        d.boundaryDefect = operatorNorm(Mat(gram.rightCols(r)));
    }
    return d;
}

SchafferDilation schaffer7(const CommutingTuple7& t, const FundamentalSet7& f, int levels, double tol) {
    return schaffer(family(t), f, levels, tol);
}

SchafferDilation schaffer5(const CommutingTuple5& s, const FundamentalSet5& g, int levels, double tol) {
    return schaffer(family(s), g, levels, tol);
}

double liftResidual(const SchafferDilation& d, const std::vector<Mat>& tupleOps) {
    if (tupleOps.size() != d.V.size()) throw Error(ErrorKind::ShapeMismatch, "tuple and dilation differ in length");
    double worst = 0;
    for (std::size_t k = 0; k < d.V.size(); ++k) {
        worst = std::max(worst, operatorNorm(Mat(d.embedding * tupleOps[k].adjoint() - d.V[k].adjoint() * d.embedding)));
    }
    return worst;
}

double dilationIdentityCheck(const SchafferDilation& d, const std::vector<Mat>& tupleOps, int maxDeg, int samples,
                             std::uint64_t seed) {
    if (tupleOps.size() != d.V.size()) throw Error(ErrorKind::ShapeMismatch, "tuple and dilation differ in length");
    if (maxDeg < 0) throw Error(ErrorKind::InvalidInput, "degree must be non-negative");
    if (maxDeg > d.levels - 2) {
        throw Error(ErrorKind::DegreeTooLarge, "degree " + std::to_string(maxDeg) + " needs at least " +
                                                   std::to_string(maxDeg + 2) + " Hardy levels, have " + std::to_string(d.levels));
    }
    const int m = static_cast<int>(tupleOps.size());
    std::vector<std::vector<int>> monomials;
    monomials.push_back(std::vector<int>(m, 0));
    for (int j = 0; j < m; ++j) {
        std::vector<int> e(m, 0);
        e[j] = maxDeg;
        monomials.push_back(e);
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> degree(0, maxDeg), slot(0, m - 1);
    for (int s = 0; s < samples; ++s) {
        std::vector<int> e(m, 0);
        const int deg = degree(rng);
        for (int k = 0; k < deg; ++k) ++e[slot(rng)];
        monomials.push_back(e);
    }
    const Eigen::Index n = d.stateDim;
    double worst = 0;
    for (const auto& e : monomials) {
        Mat pv = Mat::Identity(d.dim(), d.dim());
        Mat pt = Mat::Identity(n, n);
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < e[j]; ++k) {
                pv = pv * d.V[j];
                pt = pt * tupleOps[j];
            }
        }
        worst = std::max(worst, operatorNorm(Mat(d.embedding.adjoint() * pv * d.embedding - pt)));
    }
    return worst;
}

Report gammaIsometryCheck(const PairedFamily& f, double tol, std::optional<Eigen::Index> certifiedColumns) {
    Report r;
    r.command = "verify";
    const auto names = normalisedNames(f.variant);
    const std::string c = contractionName(f.variant);
    const Eigen::Index n = f.dim();
    const Mat gram = f.contraction.adjoint() * f.contraction - Mat::Identity(n, n);
    r.add(c + " isometry", c + "^* " + c + " = I", operatorNorm(columns(gram, certifiedColumns)), tol);
    for (int k = 0; k < f.size(); ++k) {
        const int p = f.partner(k);
        const Mat rel = f.ops[k] - f.ops[p].adjoint() * f.contraction;
        r.add("relation " + names[k], names[k] + " = (" + names[p] + ")^* " + c, operatorNorm(columns(rel, certifiedColumns)), tol);
    }
    const auto all = tupleOperators(f);
    r.add("commutation", "X_i X_j = X_j X_i", commutationResidual(all), tol);
    double excess = std::max(0.0, operatorNorm(f.contraction) - 1);
    for (const auto& a : f.ops) excess = std::max(excess, operatorNorm(a) - 1);
    r.add("norm gates", f.variant == TupleVariant::Gamma7 ? "||T_i|| <= 1" : "||S1||, ||St2|| <= 1 and ||S2||, ||St1|| <= 2",
          excess, tol);
    if (certifiedColumns) r.notes.push_back("isometry identities restricted to the first " + std::to_string(*certifiedColumns) + " columns");
    return r;
}

Report gammaIsometryCheck7(const CommutingTuple7& v, double tol, std::optional<Eigen::Index> certifiedColumns) {
    return gammaIsometryCheck(family(v), tol, certifiedColumns);
}

Report gammaIsometryCheck5(const CommutingTuple5& w, double tol, std::optional<Eigen::Index> certifiedColumns) {
    return gammaIsometryCheck(family(w), tol, certifiedColumns);
}

CanonicalUnitary canonicalUnitary(const PairedFamily& f, double tol) {
    CanonicalUnitary out;
    out.variant = f.variant;
    out.report.command = "canonical";
    const auto limit = sotLimitQ(f.contraction, 1e-14, 64);
    out.q = limit.q;
    const Eigen::Index n = f.dim();
    Eigen::Index rank = 0;
    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<Mat> es(out.q);
        Mat kept(n, 0);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (es.eigenvalues()(k) > 0.5) {
                kept.conservativeResize(n, kept.cols() + 1);
                kept.col(kept.cols() - 1) = es.eigenvectors().col(k);
            }
        }
        rank = kept.cols();
        out.rangeBasis = canonicalFrame(Mat(kept * kept.adjoint()), rank);
    } else {
        out.rangeBasis = Mat(0, 0);
    }
    out.report.notes.push_back("rank of Q: " + std::to_string(rank) + " of " + std::to_string(n));
    out.report.notes.push_back("the isometry induced on Ran Q is unitary in finite dimensions; no further dilation step is taken");
    const Mat& ur = out.rangeBasis;
    const Mat lambda = ur.adjoint() * out.q * ur;
    const Mat lambdaInv = rank > 0 ? Mat(lambda.inverse()) : Mat(0, 0);
    const auto ops = tupleOperators(f);
    const auto names = tupleNames(f.variant);
    double defining = 0;
    for (const auto& x : ops) {
        const Mat nStar = ur.adjoint() * out.q * x.adjoint() * ur * lambdaInv;
        out.N.push_back(nStar.adjoint());
        defining = std::max(defining, operatorNorm(Mat(out.q * x.adjoint() - ur * nStar * ur.adjoint() * out.q)));
    }
    out.report.add("defining relation", "N_i^* Q h = Q T_i^* h", defining, tol);
    if (rank == 0) {
        out.report.notes.push_back("the contraction is pure: the canonical unitary part is empty");
        return out;
    }
    const PairedFamily nf = familyFromOperators(f.variant, out.N);
    const Mat& nc = nf.contraction;
    const Mat id = Mat::Identity(rank, rank);
    const std::string c = contractionName(f.variant);
    out.report.add("N(" + c + ") unitary", "N^* N = N N^* = I",
                   std::max(operatorNorm(Mat(nc.adjoint() * nc - id)), operatorNorm(Mat(nc * nc.adjoint() - id))), tol);
    double normality = 0;
    for (const auto& m : out.N) normality = std::max(normality, operatorNorm(Mat(m * m.adjoint() - m.adjoint() * m)));
    out.report.add("normality", "N_i N_i^* = N_i^* N_i", normality, tol);
    double relation = 0;
    for (int k = 0; k < nf.size(); ++k) {
        relation = std::max(relation, operatorNorm(Mat(nc.adjoint() * nf.ops[k] - nf.ops[nf.partner(k)].adjoint())));
    }
    out.report.add("pairing", f.variant == TupleVariant::Gamma7 ? "N_7^* N_i = N_{7-i}^*" : "M_3^* M_1 = Mt_2^*, M_3^* M_2 = Mt_1^*",
                   relation, tol);
    out.report.add("commutation", "N_i N_j = N_j N_i", commutationResidual(out.N), tol);
    try {
        const auto jd = jointDiagonalize(out.N, tol);
        double worst = 0;
        for (Eigen::Index k = 0; k < rank; ++k) {
            Vec point(static_cast<Eigen::Index>(out.N.size()));
            for (std::size_t i = 0; i < out.N.size(); ++i) point(i) = jd.spectra[i](k);
            out.jointSpectrum.push_back(point);
            GammaPoint gp;
            gp.variant = f.variant == TupleVariant::Gamma7 ? GammaVariant::E3311 : GammaVariant::E3212;
            gp.coords = point;
            const SetCheck sc = f.variant == TupleVariant::Gamma7 ? kSetCheck(gp, tol) : k1SetCheck(gp, tol);
            for (const auto& res : sc.residuals) worst = std::max(worst, res.residual);
        }
        out.report.add("joint spectrum on the boundary set",
                       f.variant == TupleVariant::Gamma7 ? "x1 = conj(x6) x7, x3 = conj(x4) x7, x5 = conj(x2) x7, |x7| = 1"
                                                         : "x1 = conj(y2) x3, x2 = conj(y1) x3, |x3| = 1",
                       worst, tol);
        out.report.add("joint diagonalisation", "U^* N_i U diagonal", jd.residual, tol);
    } catch (const Error& e) {
        out.report.add("joint diagonalisation", std::string("failed: ") + e.what(), std::numeric_limits<double>::infinity(), tol);
    }
    return out;
}

CanonicalUnitary canonicalUnitary7(const CommutingTuple7& t, double tol) { return canonicalUnitary(family(t), tol); }
CanonicalUnitary canonicalUnitary5(const CommutingTuple5& s, double tol) { return canonicalUnitary(family(s), tol); }

double spectrumDistance(std::vector<Vec> a, std::vector<Vec> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0;
    std::vector<bool> used(b.size(), false);
    for (const auto& p : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j] || b[j].size() != p.size()) continue;
            const double dist = (b[j] - p).cwiseAbs().maxCoeff();
            if (dist < best) { best = dist; arg = j; }
        }
        if (!std::isfinite(best)) return best;
        used[arg] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

bool unitaryEquivalenceInvariance(const CommutingTuple7& t, const Mat& u, double tol) {
    const auto a = canonicalUnitary7(t, tol), b = canonicalUnitary7(conjugate(t, u), tol);
    return a.rank() == b.rank() && spectrumDistance(a.jointSpectrum, b.jointSpectrum) <= tol;
}

bool unitaryEquivalenceInvariance(const CommutingTuple5& s, const Mat& u, double tol) {
    const auto a = canonicalUnitary5(s, tol), b = canonicalUnitary5(conjugate(s, u), tol);
    return a.rank() == b.rank() && spectrumDistance(a.jointSpectrum, b.jointSpectrum) <= tol;
}

DouglasEmbedding douglasEmbedding(const PairedFamily& f, int levels, double tol) {
    DouglasEmbedding out;
    out.report.command = "douglas";
    const Eigen::Index n = f.dim();
    const HardyEmbedding w = buildW(f.contraction, levels);
    out.observability = w.w;
    const auto limit = sotLimitQ(f.contraction, 1e-14, 64);
    out.q = limit.q;
    out.pi.resize(out.observability.rows() + n, n);
    out.pi << out.observability, out.q;
    out.isometryResidual = operatorNorm(Mat(out.pi.adjoint() * out.pi - Mat::Identity(n, n)));
    // only the part of C off Ran Q contributes a tail
    const Mat pure = f.contraction * (Mat::Identity(n, n) - limit.limit);
    const double pn = operatorNorm(matrixPower(pure, levels));
    out.tailBound = pn * pn;
    out.report.add("isometry", "O^* O + Q^2 = I", out.isometryResidual, tol + out.tailBound);

    // observability row intertwines A_k^* with the adjoint pencils of the adjoint fundamentals
    PairedFamily adj;
    adj.variant = f.variant;
    adj.scale = f.scale;
    adj.contraction = f.contraction.adjoint();
    for (const auto& a : f.ops) adj.ops.push_back(a.adjoint());
    const FundamentalSet ft = solveFundamental(adj);
    const Eigen::Index r = ft.rank();
    double rowResidual = 0, fullResidual = 0;
    if (r > 0) {
        const Eigen::Index interior = (levels - 1) * r;
        for (int k = 0; k < f.size(); ++k) {
            const Mat pencil = pencilOperator(Mat(ft.X[k].adjoint()), ft.X[f.partner(k)], levels);
            const Mat diff = out.observability * f.ops[k].adjoint() - pencil.adjoint() * out.observability;
            rowResidual = std::max(rowResidual, operatorNorm(Mat(diff.topRows(interior))));
            fullResidual = std::max(fullResidual, operatorNorm(diff));
        }
        const Mat shiftDiff = out.observability * f.contraction.adjoint() -
                              truncatedShift({levels, r}).adjoint() * out.observability;
        rowResidual = std::max(rowResidual, operatorNorm(Mat(shiftDiff.topRows(interior))));
    }
    out.report.add("observability intertwining", "O A_k^* = M^*_{Ft_k^* + Ft_{p(k)} z} O on levels 0..N-2", rowResidual, tol);
    out.report.notes.push_back("observability intertwining including the last level: " + std::to_string(fullResidual));
    const CanonicalUnitary cu = canonicalUnitary(f, tol);
    double qResidual = 0;
    const auto ops = tupleOperators(f);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Mat nStar = cu.rangeBasis * cu.N[i].adjoint() * cu.rangeBasis.adjoint();
        qResidual = std::max(qResidual, operatorNorm(Mat(out.q * ops[i].adjoint() - nStar * out.q)));
    }
    out.report.add("asymptotic intertwining", "Q T_i^* = N_i^* Q", qResidual, tol);
    return out;
}

DouglasEmbedding douglasEmbedding(const CommutingTuple7& t, int levels, double tol) {
    return douglasEmbedding(family(t), levels, tol);
}

CommutingTuple7 AdmissibleResult::tuple7() const {
    if (tuple.variant != TupleVariant::Gamma7) throw Error(ErrorKind::InvalidInput, "construction produced a 5-tuple");
    return gammalab::tuple7(tuple.ops, tuple.contraction);
}

CommutingTuple5 AdmissibleResult::tuple5() const {
    if (tuple.variant != TupleVariant::Gamma5) throw Error(ErrorKind::InvalidInput, "construction produced a 7-tuple");
    return gammalab::tuple5(tuple.ops, tuple.contraction);
}

AdmissibleResult admissibleConstruct(TupleVariant variant, const Mat& c, const std::vector<Mat>& xhat, int levels,
                                     double tol, const std::optional<std::vector<Mat>>& partner) {
    const std::size_t m = variant == TupleVariant::Gamma7 ? 6 : 4;
    if (xhat.size() != m) throw Error(ErrorKind::ShapeMismatch, std::to_string(m) + " symbols expected");
    detail::requireSquare(c, "admissibleConstruct");
    AdmissibleResult out;
    Report& rep = out.report;
    rep.command = "admissible";
    const auto xn = fundamentalNames(variant);

    const HardyEmbedding w = buildW(c, levels);
    const Eigen::Index rs = w.fiber.rank();
    for (const auto& x : xhat) {
        if (x.rows() != rs || x.cols() != rs) {
            throw Error(ErrorKind::ShapeMismatch, "symbols are " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                                                      " but the adjoint defect space has dimension " + std::to_string(rs));
        }
    }

    // hypotheses
    const Report comm = variant == TupleVariant::Gamma7 ? commutativityConditions7(xhat, tol)
                                                        : commutativityConditions5(xhat[0], xhat[1], xhat[2], xhat[3], tol);
    rep.merge(comm, "hypothesis: ");
    double radius = 0;
    for (std::size_t k = 0; k < m; ++k) {
        radius = std::max(radius, pencilNumericalRadius(Mat(xhat[k].adjoint()), xhat[m - 1 - k], 128, 1e-10));
    }
    rep.add("hypothesis: pencil numerical radius", "sup_z w(Xh_k^* + Xh_{p(k)} z) <= 1", std::max(0.0, radius - 1), tol);
    const double rho = spectralRadius(c);
    rep.add("hypothesis: pure", "spectral radius < 1", rho < 1 ? 0.0 : rho, tol);

    // construction
    out.tuple.variant = variant;
    out.tuple.contraction = c;
    out.tuple.scale = variant == TupleVariant::Gamma7 ? std::vector<double>(6, 1.0) : std::vector<double>{1, 2, 2, 1};
    for (std::size_t k = 0; k < m; ++k) {
        const Mat pencil = pencilOperator(Mat(xhat[k].adjoint()), xhat[m - 1 - k], levels);
        out.tuple.ops.push_back(w.w.adjoint() * pencil * w.w);
    }
    const Eigen::Index n = c.rows();
    const double tail = std::pow(operatorNorm(matrixPower(c, levels)), 2);
    rep.notes.push_back("truncation tail ||C^N||^2 = " + std::to_string(tail));
    rep.add("commutation", "T_i T_j = T_j T_i", commutationResidual(tupleOperators(out.tuple)), tol);

    // recovery of the symbols as fundamentals of the adjoint
    PairedFamily adj;
    adj.variant = variant;
    adj.scale = out.tuple.scale;
    adj.contraction = c.adjoint();
    for (const auto& a : out.tuple.ops) adj.ops.push_back(a.adjoint());
    out.adjointFundamentals = solveFundamental(adj);
    double recovery = 0, symbolGap = 0;
    const Mat& ds = out.adjointFundamentals.defect;
    for (std::size_t k = 0; k < m; ++k) {
        const Mat lhs = adj.ops[k] - adj.ops[m - 1 - k].adjoint() * adj.contraction;
        recovery = std::max(recovery, operatorNorm(Mat(lhs - ds * w.fiber.lift(xhat[k]) * ds)));
        symbolGap = std::max(symbolGap, operatorNorm(Mat(out.adjointFundamentals.X[k] - xhat[k])));
    }
    rep.add("adjoint recovery", "T_i^* - T_{p(i)} T_7^* = D_* Xh_i D_*", recovery, tol);
    rep.notes.push_back("max distance between solved adjoint fundamentals and the input symbols: " + std::to_string(symbolGap));

    out.tuple.contraction = c;
    out.fundamentals = solveFundamental(out.tuple);
    if (partner) {
        if (partner->size() != m) throw Error(ErrorKind::ShapeMismatch, std::to_string(m) + " partner operators expected");
        const Eigen::Index r = out.fundamentals.rank();
        double gap = 0;
        for (std::size_t k = 0; k < m; ++k) {
            if ((*partner)[k].rows() != r || (*partner)[k].cols() != r) {
                throw Error(ErrorKind::ShapeMismatch, "partner operators must act on the defect space of the contraction");
            }
            gap = std::max(gap, operatorNorm(Mat(out.fundamentals.X[k] - (*partner)[k])));
        }
        rep.add("partner match", "solved " + xn[0] + ".. equal the supplied partner family", gap, tol);
        const int deg = std::min(8, levels - 1);
        const ThetaSeries th = thetaSeries(c, deg);
        const auto res = intertwineResidual(xhat, *partner, th, deg);
        double worst = 0;
        for (const auto& row : res)
            for (double v : row) worst = std::max(worst, v);
        rep.add("intertwining through Theta", "(Xh_k^* + Xh_{p(k)} z) Theta = Theta (X_k + X_{p(k)}^* z)", worst, tol);
    }
    (void)n;
    return out;
}

AdmissibleResult admissibleConstruct7(const Mat& t7, const std::vector<Mat>& ft, int levels, double tol,
                                      const std::optional<std::vector<Mat>>& f) {
    return admissibleConstruct(TupleVariant::Gamma7, t7, ft, levels, tol, f);
}

AdmissibleResult admissibleConstruct5(const Mat& s3, const std::vector<Mat>& ghat, int levels, double tol,
                                      const std::optional<std::vector<Mat>>& g) {
    return admissibleConstruct(TupleVariant::Gamma5, s3, ghat, levels, tol, g);
}

double circulantPencilNorm(const std::vector<Mat>& symbols, int modes) {
    if (modes < 1) throw Error(ErrorKind::InvalidInput, "at least one mode is required");
    const std::size_t m = symbols.size();
    double worst = 0;
    for (int j = 0; j < modes; ++j) {
        const Complex omega = std::polar(1.0, 2 * std::numbers::pi * j / modes);
        for (std::size_t k = 0; k < m; ++k) {
            worst = std::max(worst, operatorNorm(Mat(symbols[k].adjoint() + omega * symbols[m - 1 - k])));
        }
    }
    return worst;
}

namespace {

PairedFamily circulantFamily(TupleVariant variant, const std::vector<Mat>& xhat, int modes) {
    const double norm = circulantPencilNorm(xhat, modes);
    if (norm > 1 + 1e-12) {
        throw Error(ErrorKind::HypothesisViolation, "pencil norm " + std::to_string(norm) + " exceeds 1 on the frequency grid");
    }
    const Eigen::Index d = xhat[0].rows();
    for (const auto& x : xhat) {
        if (x.rows() != d || x.cols() != d) throw Error(ErrorKind::ShapeMismatch, "symbols must be square of equal size");
    }
    const std::size_t m = xhat.size();
    PairedFamily f;
    f.variant = variant;
    f.scale = variant == TupleVariant::Gamma7 ? std::vector<double>(6, 1.0) : std::vector<double>{1, 2, 2, 1};
    f.ops.assign(m, Mat::Zero(modes * d, modes * d));
    f.contraction = Mat::Zero(modes * d, modes * d);
    for (int j = 0; j < modes; ++j) {
        const Complex omega = std::polar(1.0, 2 * std::numbers::pi * j / modes);
        f.contraction.block(j * d, j * d, d, d) = omega * Mat::Identity(d, d);
        for (std::size_t k = 0; k < m; ++k) {
            f.ops[k].block(j * d, j * d, d, d) = xhat[k].adjoint() + omega * xhat[m - 1 - k];
        }
    }
    return f;
}

} // namespace

CommutingTuple7 circulantGammaUnitary7(const std::vector<Mat>& ft, int modes) {
    if (ft.size() != 6) throw Error(ErrorKind::ShapeMismatch, "six symbols expected");
    const PairedFamily f = circulantFamily(TupleVariant::Gamma7, ft, modes);
    return tuple7(f.ops, f.contraction);
}

CommutingTuple5 circulantGammaUnitary5(const std::vector<Mat>& ghat, int modes) {
    if (ghat.size() != 4) throw Error(ErrorKind::ShapeMismatch, "four symbols expected");
    const PairedFamily f = circulantFamily(TupleVariant::Gamma5, ghat, modes);
    return tuple5(f.ops, f.contraction);
}

Report woldVerify(const PairedFamily& v, Eigen::Index pureDim, Eigen::Index fiberDim, double tol) {
    const Eigen::Index n = v.dim();
    if (pureDim < 0 || pureDim > n) throw Error(ErrorKind::InvalidInput, "pure block size out of range");
    if (pureDim > 0 && (fiberDim < 1 || pureDim % fiberDim != 0)) {
        throw Error(ErrorKind::InvalidInput, "pure block size must be a multiple of the fiber dimension");
    }
    Report r;
    r.command = "wold";
    const Eigen::Index q = n - pureDim;
    const auto ops = tupleOperators(v);
    const auto names = tupleNames(v.variant);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        double cross = 0;
        if (pureDim > 0 && q > 0) {
            cross = std::max(operatorNorm(Mat(ops[i].topRightCorner(pureDim, q))),
                             operatorNorm(Mat(ops[i].bottomLeftCorner(q, pureDim))));
        }
        r.add("cross block " + names[i], "off-diagonal blocks of " + names[i] + " vanish", cross, tol);
    }
    auto restrict = [&](Eigen::Index start, Eigen::Index size) {
        PairedFamily part;
        part.variant = v.variant;
        part.scale = v.scale;
        part.contraction = v.contraction.block(start, start, size, size);
        for (const auto& a : v.ops) part.ops.push_back(a.block(start, start, size, size));
        return part;
    };
    if (pureDim > 0) {
        const PairedFamily top = restrict(0, pureDim);
        const int levels = static_cast<int>(pureDim / fiberDim);
        const Eigen::Index d = fiberDim;
        double shape = operatorNorm(Mat(top.contraction - truncatedShift({levels, d})));
        for (const auto& a : top.ops) {
            const Mat c0 = a.topLeftCorner(d, d);
            const Mat c1 = levels > 1 ? Mat(a.block(d, 0, d, d)) : Mat(Mat::Zero(d, d));
            shape = std::max(shape, operatorNorm(Mat(a - pencilOperator(c0, c1, levels))));
        }
        r.add("pure block is a pencil model", "top block = (M_{C0 + C1 z}, M_z) truncated", shape, tol);
        r.merge(gammaIsometryCheck(top, tol, (levels - 1) * d), "pure block: ");
    } else {
        r.notes.push_back("empty pure part");
    }
    if (q > 0) {
        const PairedFamily bottom = restrict(pureDim, q);
        r.merge(gammaIsometryCheck(bottom, tol), "unitary block: ");
        const Mat& c = bottom.contraction;
        double normality = operatorNorm(Mat(c * c.adjoint() - Mat::Identity(q, q)));
        for (const auto& a : bottom.ops) normality = std::max(normality, operatorNorm(Mat(a * a.adjoint() - a.adjoint() * a)));
        r.add("unitary block: normal with unitary contraction", "N_i normal, N_C N_C^* = I", normality, tol);
    } else {
        r.notes.push_back("empty unitary part");
    }
    return r;
}

} // namespace gammalab
