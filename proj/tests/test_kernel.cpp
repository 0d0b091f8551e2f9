#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/kernel.hpp"
#include "oracles.hpp"

using namespace gammalab;

TEST_CASE("operator norm and spectral radius agree with the reference") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat a = oracle::gaussian(rng, 4, 4);
        CHECK(operatorNorm(a) == doctest::Approx(oracle::norm2(a)).epsilon(1e-12));
        CHECK(spectralRadius(a) == doctest::Approx(oracle::spectralRadius(a)).epsilon(1e-10));
    }
}

TEST_CASE("numerical radius of the nilpotent Jordan block is one half") {
    Mat j = Mat::Zero(2, 2);
    j(0, 1) = 1;
    CHECK(numericalRadius(j, 1e-12) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("numerical radius of a normal matrix is its spectral radius") {
    std::mt19937_64 rng(5);
    const Mat u = oracle::unitary(rng, 4);
    Vec d(4);
    d << Complex(0.3, 0.1), Complex(-0.9, 0.2), Complex(0, 0.4), Complex(0.1, -0.1);
    const Mat a = u * d.asDiagonal() * u.adjoint();
    CHECK(numericalRadius(a, 1e-12) == doctest::Approx(std::abs(d(1))).epsilon(1e-9));
}

TEST_CASE("numerical radius matches a dense angle grid and sits in its sandwich") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat a = oracle::gaussian(rng, 3, 3);
        const double w = numericalRadius(a, 1e-12);
        CHECK(w == doctest::Approx(oracle::numericalRadiusGrid(a)).epsilon(1e-6));
        CHECK(oracle::spectralRadius(a) <= w + 1e-9);
        CHECK(w <= oracle::norm2(a) + 1e-9);
        CHECK(oracle::norm2(a) <= 2 * w + 1e-9);
    }
}

TEST_CASE("psd square root squares back and clips small negatives") {
    std::mt19937_64 rng(3);
    const Mat b = oracle::gaussian(rng, 4, 2);
    const Mat h = b * b.adjoint();
    const Mat r = psdSqrt(h);
    CHECK(oracle::norm2(Mat(r * r - h)) < 1e-12);
    CHECK(oracle::norm2(Mat(r - r.adjoint())) < 1e-14);
    Mat neg = h;
    neg(0, 0) -= 1e-12;
    CHECK_NOTHROW(psdSqrt(neg));
    CHECK_THROWS_AS(psdSqrt(Mat(-Mat::Identity(2, 2))), Error);
}

TEST_CASE("defect pair of a partial isometry is the complementary projection") {
    Mat t = Mat::Zero(3, 3);
    t(1, 0) = 1;
    t(2, 1) = 1;
    const auto d = defectPair(t);
    Mat expected = Mat::Zero(3, 3);
    expected(2, 2) = 1;
    CHECK(d.basis.rank() == 1);
    CHECK(oracle::norm2(Mat(d.defect - expected)) < 1e-14);
    CHECK(oracle::norm2(Mat(d.basis.projector() - expected)) < 1e-14);
}

TEST_CASE("defect of a general contraction satisfies D^2 = I - T^* T") {
    std::mt19937_64 rng(23);
    const Mat t = oracle::contraction(rng, 4, 0.8);
    const auto d = defectPair(t);
    CHECK(d.basis.rank() == 4);
    CHECK(oracle::norm2(Mat(d.defect * d.defect - (Mat::Identity(4, 4) - t.adjoint() * t))) < 1e-12);
}

TEST_CASE("defect pair rejects non-contractions") {
    CHECK_THROWS_AS(defectPair(Mat(1.5 * Mat::Identity(2, 2))), Error);
}

TEST_CASE("sotLimitQ is exact on diag(1, 0.5) and decreases monotonically") {
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = 1;
    t(1, 1) = 0.5;
    const auto lim = sotLimitQ(t);
    Mat expected = Mat::Zero(2, 2);
    expected(0, 0) = 1;
    CHECK(oracle::norm2(Mat(lim.q - expected)) < 1e-14);
    for (double inc : lim.maxIncrease) CHECK(inc <= 1e-14);

    std::mt19937_64 rng(2);
    const Mat c = oracle::contraction(rng, 4, 1.0);
    const auto l2 = sotLimitQ(c);
    for (double inc : l2.maxIncrease) CHECK(inc <= 1e-12);
}

TEST_CASE("sotLimitQ of a unitary is the identity and of a stable matrix is zero") {
    std::mt19937_64 rng(8);
    const Mat u = oracle::unitary(rng, 3);
    CHECK(oracle::norm2(Mat(sotLimitQ(u).q - Mat::Identity(3, 3))) < 1e-10);
    const Mat s = oracle::stableContraction(rng, 3, 0.6);
    CHECK(oracle::norm2(sotLimitQ(s).q) < 1e-8);
}

TEST_CASE("jointDiagonalize recovers the joint spectrum of commuting normals") {
    std::mt19937_64 rng(31);
    const Mat u = oracle::unitary(rng, 4);
    Vec a(4), b(4);
    a << 1, 1, Complex(0, 1), -1;
    b << 2, 3, 3, Complex(0.5, 0.5);
    std::vector<Mat> tuple{u * a.asDiagonal() * u.adjoint(), u * b.asDiagonal() * u.adjoint()};
    const auto jd = jointDiagonalize(tuple, 1e-10);
    CHECK(jd.residual < 1e-10);
    std::vector<std::pair<Complex, Complex>> got, want;
    for (int k = 0; k < 4; ++k) {
        got.emplace_back(jd.spectra[0](k), jd.spectra[1](k));
        want.emplace_back(a(k), b(k));
    }
    for (const auto& w : want) {
        bool found = false;
        for (const auto& g : got) found = found || (std::abs(g.first - w.first) < 1e-10 && std::abs(g.second - w.second) < 1e-10);
        CHECK(found);
    }
}

TEST_CASE("jointDiagonalize rejects non-normal and non-commuting input") {
    Mat j = Mat::Zero(2, 2);
    j(0, 1) = 1;
    CHECK_THROWS_AS(jointDiagonalize(std::vector<Mat>{j}, 1e-10), Error);
    Mat x = Mat::Zero(2, 2), z = Mat::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1;
    z(0, 0) = 1;
    z(1, 1) = -1;
    CHECK_THROWS_AS(jointDiagonalize(std::vector<Mat>{x, z}, 1e-10), Error);
}

TEST_CASE("kernel templates accept real matrices") {
    Eigen::MatrixXd a(2, 2);
    a << 0, 1, 0, 0;
    CHECK(operatorNorm(a) == doctest::Approx(1.0));
    CHECK(numericalRadius(a, 1e-12) == doctest::Approx(0.5).epsilon(1e-9));
}
