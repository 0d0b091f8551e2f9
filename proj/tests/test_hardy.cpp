#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/fundamental.hpp"
#include "gammalab/generators.hpp"
#include "gammalab/hardy.hpp"
#include "oracles.hpp"

using namespace gammalab;

namespace {

Mat jordan(double lambda, int m) {
    Mat j = lambda * Mat::Identity(m, m);
    for (int k = 0; k + 1 < m; ++k) j(k, k + 1) = 1;
    return j / oracle::norm2(j);
}

} // namespace

TEST_CASE("truncated shift and pencil structure") {
    const Mat s = truncatedShift({3, 2});
    CHECK(s.rows() == 6);
    CHECK(oracle::norm2(Mat(s.block(2, 0, 2, 2) - Mat::Identity(2, 2))) == 0);
    CHECK(oracle::norm2(Mat(s.topRows(2))) == 0);
    const Mat c0 = Mat::Constant(1, 1, 0.3), c1 = Mat::Constant(1, 1, 0.2);
    const Mat p = pencilOperator(c0, c1, 4);
    const Mat want = 0.3 * Mat::Identity(4, 4) + 0.2 * truncatedShift({4, 1});
    CHECK(oracle::norm2(Mat(p - want)) == 0);
    CHECK_THROWS_AS(pencilOperator(c0, Mat::Zero(2, 2), 3), Error);
}

TEST_CASE("scalar characteristic function is the Blaschke factor") {
    for (Complex t : {Complex(0.5, 0), Complex(0.2, -0.6), Complex(0, 0)}) {
        const auto th = thetaSeries(Mat::Constant(1, 1, t), 200);
        for (Complex z : {Complex(0.3, 0.2), Complex(-0.5, 0.1), Complex(0, 0)}) {
            CHECK(std::abs(evaluateTheta(th, z)(0, 0) - oracle::blaschke(t, z)) < 1e-12);
        }
    }
}

TEST_CASE("theta tail bound dominates the dropped coefficients") {
    std::mt19937_64 rng(4);
    const Mat t = oracle::stableContraction(rng, 3, 0.7);
    const auto shortSeries = thetaSeries(t, 12);
    const auto longSeries = thetaSeries(t, 400);
    double dropped = 0;
    for (int k = 13; k <= 400; ++k) dropped += oracle::norm2(longSeries.coefficients[k]);
    CHECK(shortSeries.decaying);
    CHECK(dropped <= shortSeries.tailBound + 1e-14);
}

TEST_CASE("theta Toeplitz needs enough coefficients") {
    const auto th = thetaSeries(Mat::Constant(1, 1, 0.5), 3);
    CHECK_NOTHROW(thetaToeplitz(th, 4));
    CHECK_THROWS_AS(thetaToeplitz(th, 5), Error);
}

TEST_CASE("delta sample completes theta to an isometry on the circle") {
    std::mt19937_64 rng(6);
    const Mat t = oracle::stableContraction(rng, 3, 0.5);
    const Complex w = std::polar(1.0, 0.8);
    const Mat delta = deltaSample(t, w, 200);
    const auto th = thetaSeries(t, 200);
    const Mat theta = evaluateTheta(th, w);
    const Mat sum = theta.adjoint() * theta + delta * delta;
    CHECK(oracle::norm2(Mat(sum - Mat::Identity(sum.rows(), sum.cols()))) < 1e-9);
}

TEST_CASE("W-property holds within the power tail for the classical convention") {
    const int n = 32;
    std::vector<Mat> cases{Mat::Zero(2, 2), jordan(0.5, 3), jordan(0.5, 4)};
    std::mt19937_64 rng(8);
    for (int k = 0; k < 4; ++k) cases.push_back(oracle::stableContraction(rng, 3, 0.85));
    for (const auto& t : cases) {
        const auto r = wPropertyResidual(t, n);
        const double tail = oracle::norm2(oracle::power(t, n));
        CHECK(r.powerTail == doctest::Approx(tail).epsilon(1e-9).scale(1e-300));
        CHECK(r.residual <= std::max(1e-8, 2 * tail));
    }
}

TEST_CASE("literal convention fails the zero operator on the constants") {
    const auto r = wPropertyResidual(Mat::Zero(2, 2), 8, ThetaConvention::Literal);
    CHECK(r.residual == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("W rows are the defect-weighted powers of T*") {
    const Mat t = jordan(0.5, 3);
    const auto w = buildW(t, 5);
    const Mat ds = defectPair(Mat(t.adjoint())).defect;
    const Eigen::Index r = w.fiber.rank();
    for (int k = 0; k < 5; ++k) {
        const Mat want = w.fiber.frame.adjoint() * ds * oracle::power(Mat(t.adjoint()), k);
        CHECK(oracle::norm2(Mat(w.w.middleRows(k * r, r) - want)) < 1e-12);
    }
}

TEST_CASE("intertwining of solved and adjoint fundamentals through theta") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto t = compressedContraction7(seed, 2, 3);
        const auto f = solveFundamental7(t);
        const auto ft = solveFundamental7(t.adjoint());
        const auto th = thetaSeries(t.contraction(), 8);
        const auto res = intertwineResidual7(ft.X, f.X, th, 8);
        for (const auto& row : res)
            for (double v : row) CHECK(v <= 1e-10);
    }
}

TEST_CASE("intertwining of scalar families is the scalar identity") {
    // theta commutes with scalars: (conj(a) + b z) theta = theta (conj(a) + b z) needs X = conj(Xh), X_p^* = Xh_p
    const Mat t = Mat::Constant(1, 1, 0.4);
    const auto th = thetaSeries(t, 6);
    std::vector<Mat> xh, x;
    for (int k = 0; k < 6; ++k) {
        xh.push_back(Mat::Constant(1, 1, Complex(0.1 * k, 0.05)));
        x.push_back(xh.back().conjugate());
    }
    for (const auto& row : intertwineResidual7(xh, x, th, 6))
        for (double v : row) CHECK(v < 1e-15);
    x[2](0, 0) += 0.01;
    CHECK(intertwineResidual7(xh, x, th, 6)[2][0] > 1e-3);
}

TEST_CASE("compressed pure model commutes and reproduces the contraction spectrum") {
    std::mt19937_64 rng(10);
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = 0.3;
    t(1, 1) = Complex(0, -0.4);
    const auto sym = diagSymbolFamily7(3, 2);
    const auto model = compressPureFamily(sym, t, 24);
    CHECK(model.basis.cols() == 2);
    CHECK(model.commutationResidual < 1e-8);
    Eigen::ComplexEigenSolver<Mat> es(model.contraction);
    std::vector<double> mags{std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(1))};
    std::sort(mags.begin(), mags.end());
    CHECK(mags[0] == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(mags[1] == doctest::Approx(0.4).epsilon(1e-8));
    CHECK_THROWS_AS(compressPureFamily(sym, Mat(Mat::Identity(2, 2)), 8), Error);
}
