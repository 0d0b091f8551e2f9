#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/dilation.hpp"
#include "gammalab/generators.hpp"
#include "oracles.hpp"

using namespace gammalab;

namespace {

CommutingTuple7 scalar7(const std::vector<Complex>& x) {
    std::array<Mat, 7> t;
    for (int k = 0; k < 7; ++k) t[k] = Mat::Constant(1, 1, x[k]);
    return CommutingTuple7::make(t);
}

std::vector<Mat> ops7(const CommutingTuple7& t) { return {t.T.begin(), t.T.end()}; }
std::vector<Mat> ops5(const CommutingTuple5& s) { return {s.S.begin(), s.S.end()}; }

PairedFamily directSum(const PairedFamily& a, const PairedFamily& b) {
    PairedFamily f = a;
    auto sum = [](const Mat& x, const Mat& y) {
        Mat m = Mat::Zero(x.rows() + y.rows(), x.cols() + y.cols());
        m.topLeftCorner(x.rows(), x.cols()) = x;
        m.bottomRightCorner(y.rows(), y.cols()) = y;
        return m;
    };
    for (std::size_t k = 0; k < f.ops.size(); ++k) f.ops[k] = sum(a.ops[k], b.ops[k]);
    f.contraction = sum(a.contraction, b.contraction);
    return f;
}

} // namespace

TEST_CASE("scalar Schaffer dilation: corner of V7 powers is the power of the scalar") {
    const auto x = oracle::symmetrize7(Mat(0.5 * Mat::Identity(3, 3)));
    const auto t = scalar7(x);
    const int n = 10;
    const auto d = schaffer7(t, solveFundamental7(t), n);
    CHECK(d.dim() == 1 + n);
    for (int k = 0; k <= n; ++k) {
        const Mat p = oracle::power(d.V[6], k);
        CHECK(std::abs(p(0, 0) - std::pow(x[6], k)) < 1e-15);
    }
    // explicit lower-left blocks: D_{T7} on level 0 and F_6^* D for V1
    const double dt = std::sqrt(1 - std::norm(x[6]));
    CHECK(std::abs(d.V[6](1, 0) - dt) < 1e-15);
    const Complex f6 = oracle::scalarFundamental(x[5], x[0], x[6]);
    CHECK(std::abs(d.V[0](1, 0) - std::conj(f6) * dt) < 1e-14);
}

TEST_CASE("Schaffer 5-tuple blocks carry the factor two on the middle pair") {
    std::mt19937_64 rng(3);
    const auto x = oracle::symmetrize5(Mat(0.7 * oracle::unitary(rng, 3)));
    std::array<Mat, 5> s;
    for (int k = 0; k < 5; ++k) s[k] = Mat::Constant(1, 1, x[k]);
    const auto tuple = CommutingTuple5::make(s);
    const auto g = solveFundamental5(tuple);
    const auto d = schaffer5(tuple, g, 6);
    const double ds = std::sqrt(1 - std::norm(x[2]));
    const Complex gt1 = oracle::scalarFundamental(x[3] / 2.0, x[1] / 2.0, x[2]);
    const Complex g2 = oracle::scalarFundamental(x[1] / 2.0, x[3] / 2.0, x[2]);
    CHECK(std::abs(d.V[1](1, 0) - 2.0 * std::conj(gt1) * ds) < 1e-13);
    CHECK(std::abs(d.V[1](1, 1) - 2.0 * g2) < 1e-13);
    CHECK(std::abs(d.V[1](2, 1) - 2.0 * std::conj(gt1)) < 1e-13);
    CHECK(std::abs(d.V[3](1, 1) - 2.0 * gt1) < 1e-13);
    CHECK(liftResidual(d, ops5(tuple)) < 1e-13);
    CHECK(dilationIdentityCheck(d, ops5(tuple), 4) < 1e-10);
}

TEST_CASE("Schaffer lift and dilation identities on generated tuples") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto t = compressedContraction7(seed, 1 + seed % 3, 2 + seed % 3);
        const auto d = schaffer7(t, solveFundamental7(t), 16);
        CHECK(liftResidual(d, ops7(t)) <= 1e-13);
        CHECK(dilationIdentityCheck(d, ops7(t), 8, 64, seed) <= 1e-10);
        const auto rep = gammaIsometryCheck7(d.tuple7(), 1e-10, d.certifiedColumns());
        CHECK(rep.pass());
        const auto corner = solveFundamental7(t);
        CHECK(corner.maxResidual() <= 1e-10);
        // the top Hardy level is where the truncation shows
        CHECK(d.boundaryDefect > 0.5);
    }
}

TEST_CASE("dilation degree must fit in the truncation") {
    const auto t = compressedContraction7(1, 1, 2);
    const auto d = schaffer7(t, solveFundamental7(t), 6);
    CHECK(dilationIdentityCheck(d, ops7(t), 0) == 0);
    CHECK_NOTHROW(dilationIdentityCheck(d, ops7(t), 4));
    CHECK_THROWS_AS(dilationIdentityCheck(d, ops7(t), 5), Error);
}

TEST_CASE("Schaffer of a Gamma-unitary is the tuple itself") {
    const auto cu = circulantGammaUnitary7(diagSymbolFamily7(2, 1), 3);
    const auto d = schaffer7(cu, solveFundamental7(cu), 4);
    CHECK(d.fiberDim == 0);
    CHECK(d.dim() == cu.dim());
    for (int k = 0; k < 7; ++k) CHECK(oracle::norm2(Mat(d.V[k] - cu.T[k])) == 0);
}

TEST_CASE("Schaffer refuses a fundamental set that does not solve the equations") {
    const auto t = compressedContraction7(4, 2, 3);
    auto f = solveFundamental7(t);
    f.residuals[0] = 1e-3;
    CHECK_THROWS_AS(schaffer7(t, f, 8), Error);
}

TEST_CASE("gammaIsometryCheck: pencil model, circulant pass; generic contraction fails") {
    const auto model = pencilModel(TupleVariant::Gamma7, diagSymbolFamily7(6, 2), 6);
    CHECK(gammaIsometryCheck(model, 1e-12, 5 * 2).pass());
    CHECK_FALSE(gammaIsometryCheck(model, 1e-12).pass());
    const auto cu = circulantGammaUnitary5(diagSymbolFamily5(6, 2), 4);
    CHECK(gammaIsometryCheck5(cu, 1e-12).pass());
    std::mt19937_64 rng(2);
    std::array<Mat, 7> t;
    for (auto& m : t) m = oracle::contraction(rng, 2, 0.9);
    const auto rep = gammaIsometryCheck7(CommutingTuple7::make(t), 1e-8);
    CHECK_FALSE(rep.find("T7 isometry")->pass);
}

TEST_CASE("Douglas: unitary, pure and mixed contractions") {
    const auto cu = circulantGammaUnitary7(diagSymbolFamily7(1, 2), 4);
    const auto du = douglasEmbedding(cu, 8);
    CHECK(du.observability.rows() == 0);
    CHECK(oracle::norm2(Mat(du.q - Mat::Identity(8, 8))) < 1e-12);
    CHECK(du.report.pass());

    Mat t7 = Mat::Zero(2, 2);
    t7(0, 0) = 0.5;
    t7(1, 1) = Complex(0, 0.6);
    const auto sym = diagSymbolFamily7(2, 2);
    const auto adm = admissibleConstruct7(t7, sym, 48, 1e-8);
    const auto pure = adm.tuple;
    const int n = 12;
    const auto dp = douglasEmbedding(pure, n);
    CHECK(oracle::norm2(dp.q) < 1e-8);
    CHECK(oracle::norm2(Mat(dp.observability - buildW(t7, n).w)) < 1e-14);
    const double tail = std::pow(oracle::norm2(oracle::power(t7, n)), 2);
    CHECK(dp.isometryResidual == doctest::Approx(tail).epsilon(1e-8));
    CHECK(wPropertyResidual(t7, n).residual <= std::max(1e-8, 2 * oracle::norm2(oracle::power(t7, n))));
    CHECK(dp.report.pass());

    const auto mixed = directSum(family(cu), pure);
    const auto dm = douglasEmbedding(mixed, n);
    CHECK(dm.isometryResidual <= tail + 1e-12);
    CHECK(dm.report.pass());
}

TEST_CASE("canonical unitary: Gamma-unitary input returns the tuple itself") {
    const auto cu = circulantGammaUnitary7(diagSymbolFamily7(3, 2), 4);
    const auto c = canonicalUnitary7(cu);
    REQUIRE(c.rank() == 8);
    for (int k = 0; k < 7; ++k) CHECK(oracle::norm2(Mat(c.N[k] - cu.T[k])) < 1e-12);
    CHECK(c.report.pass());
}

TEST_CASE("canonical unitary: stable input has an empty unitary part") {
    const auto t = compressedContraction5(3, 2, 3);
    const auto c = canonicalUnitary5(t);
    CHECK(c.rank() == 0);
    CHECK(c.jointSpectrum.empty());
    CHECK(c.report.pass());
}

TEST_CASE("canonical unitary of mixed tuples recovers the unitary summand") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        for (auto variant : {TupleVariant::Gamma7, TupleVariant::Gamma5}) {
            const Eigen::Index u = 1 + seed % 3;
            const auto mixed = mixedTuple(variant, seed, u, 2, 2);
            const auto c = canonicalUnitary(mixed.family, 1e-8);
            CHECK(c.rank() == u);
            CHECK(c.report.pass());
            CHECK(spectrumDistance(c.jointSpectrum, mixed.unitarySpectrum) < 1e-8);
        }
    }
}

TEST_CASE("unitary equivalence invariance, with a control") {
    const auto mixed = mixedTuple(TupleVariant::Gamma7, 9, 2, 2, 2);
    const auto t = tuple7(mixed.family.ops, mixed.family.contraction);
    for (std::uint64_t s = 0; s < 5; ++s) CHECK(unitaryEquivalenceInvariance(t, randomUnitary(100 + s, t.dim()), 1e-8));
    const auto other = mixedTuple(TupleVariant::Gamma7, 10, 2, 2, 2);
    const auto a = canonicalUnitary(mixed.family), b = canonicalUnitary(other.family);
    CHECK(spectrumDistance(a.jointSpectrum, b.jointSpectrum) > 1e-3);
}

TEST_CASE("admissible construction: scalar case matches the direct formula") {
    const Mat t7 = Mat::Constant(1, 1, 0.5);
    std::vector<Mat> ft;
    for (int k = 0; k < 6; ++k) ft.push_back(Mat::Constant(1, 1, Complex(0.08 * (k + 1), -0.03 * k)));
    const auto r = admissibleConstruct7(t7, ft, 64, 1e-8);
    const auto t = r.tuple7();
    for (int k = 0; k < 6; ++k) {
        const Complex want = std::conj(ft[k](0, 0)) + ft[5 - k](0, 0) * 0.5;
        CHECK(std::abs(t.T[k](0, 0) - want) < 1e-12);
    }
}

TEST_CASE("admissible construction: diagonal round trip for both variants") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mag(0, 0.5), ang(0, 2 * std::numbers::pi);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Eigen::Index d = 1 + seed % 3;
        Mat t7 = Mat::Zero(d, d);
        for (Eigen::Index k = 0; k < d; ++k) t7(k, k) = std::polar(mag(rng), ang(rng));
        for (auto variant : {TupleVariant::Gamma7, TupleVariant::Gamma5}) {
            const auto sym = variant == TupleVariant::Gamma7 ? diagSymbolFamily7(seed, d) : diagSymbolFamily5(seed, d);
            std::vector<Mat> partner;
            for (const auto& s : sym) partner.push_back(s.conjugate());
            const auto r = admissibleConstruct(variant, t7, sym, 32, 1e-8, partner);
            CHECK(r.report.pass());
            CHECK(r.report.find("commutation")->residual <= 1e-8);
            CHECK(r.report.find("adjoint recovery")->residual <= 1e-8);
            CHECK(r.report.find("partner match")->residual <= 1e-6);
        }
    }
}

TEST_CASE("admissible construction flags symbols that violate the hypotheses") {
    std::mt19937_64 rng(7);
    const Mat t7 = 0.4 * Mat::Identity(2, 2);
    std::vector<Mat> ft;
    for (int k = 0; k < 6; ++k) ft.push_back(0.2 * oracle::gaussian(rng, 2, 2));
    const auto r = admissibleConstruct7(t7, ft, 16, 1e-8);
    CHECK_FALSE(r.report.pass());
    CHECK_FALSE(r.report.find("hypothesis: F_i commute")->pass);
    CHECK_THROWS_AS(admissibleConstruct7(t7, std::vector<Mat>(6, Mat::Zero(3, 3)), 8, 1e-8), Error);
}

TEST_CASE("circulant Gamma-unitaries at several mode counts") {
    for (int m : {1, 2, 4, 8}) {
        const auto sym = diagSymbolFamily7(m, 2);
        const auto cu = circulantGammaUnitary7(sym, m);
        CHECK(cu.dim() == 2 * m);
        CHECK(gammaIsometryCheck7(cu, 1e-12).pass());
        CHECK(circulantPencilNorm(sym, m) <= 1 + 1e-15);
        const auto c = canonicalUnitary7(cu, 1e-10);
        CHECK(c.report.pass());
    }
    const auto one = circulantGammaUnitary7(diagSymbolFamily7(1, 1), 1);
    CHECK(one.dim() == 1);
    CHECK(std::abs(one.T[6](0, 0) - 1.0) == 0);
}

TEST_CASE("circulant construction: norm violations throw, non-normal fibers are visible") {
    std::vector<Mat> big(6, Mat::Constant(1, 1, 0.6));
    CHECK_THROWS_AS(circulantGammaUnitary7(big, 4), Error);
    std::vector<Mat> jordan(6, Mat::Zero(2, 2));
    jordan[0](0, 1) = 0.5;
    const auto cu = circulantGammaUnitary7(jordan, 2);
    const Mat& n6 = cu.T[5];
    CHECK(oracle::norm2(Mat(n6 * n6.adjoint() - n6.adjoint() * n6)) > 0.1);
}

TEST_CASE("woldVerify certifies model direct sums and localizes perturbations") {
    const int levels = 5;
    const Eigen::Index d = 2;
    const auto model = pencilModel(TupleVariant::Gamma7, diagSymbolFamily7(8, d), levels);
    const auto cu = family(circulantGammaUnitary7(diagSymbolFamily7(9, 1), 4));
    CHECK(woldVerify(model, levels * d, d, 1e-12).pass());
    CHECK(woldVerify(cu, 0, 1, 1e-12).pass());
    auto sum = directSum(model, cu);
    const Eigen::Index p = levels * d;
    CHECK(woldVerify(sum, p, d, 1e-12).pass());
    sum.ops[2](0, p + 1) += 1e-3;
    const auto rep = woldVerify(sum, p, d, 1e-12);
    CHECK_FALSE(rep.pass());
    CHECK_FALSE(rep.find("cross block T3")->pass);
    CHECK(rep.find("cross block T3")->residual == doctest::Approx(1e-3));
    CHECK(rep.find("cross block T1")->pass);
    CHECK(rep.find("cross block T7")->pass);
}
