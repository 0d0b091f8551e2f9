#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/fundamental.hpp"
#include "gammalab/generators.hpp"
#include "oracles.hpp"

using namespace gammalab;

namespace {

CommutingTuple7 scalar7(const std::vector<Complex>& x) {
    std::array<Mat, 7> t;
    for (int k = 0; k < 7; ++k) t[k] = Mat::Constant(1, 1, x[k]);
    return CommutingTuple7::make(t);
}

} // namespace

TEST_CASE("scalar tuples match the closed-form fundamental operators") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat w = 0.9 * oracle::unitary(rng, 3);
        const auto x = oracle::symmetrize7(w);
        const auto f = solveFundamental7(scalar7(x));
        REQUIRE(f.rank() == 1);
        for (int i = 1; i <= 6; ++i) {
            const Complex want = oracle::scalarFundamental(x[i - 1], x[6 - i], x[6]);
            CHECK(std::abs(f.F(i)(0, 0) - want) < 1e-12);
        }
    }
}

TEST_CASE("scalar 5-tuples: normalised pairs follow the same closed form") {
    std::mt19937_64 rng(2);
    const Mat w = 0.8 * oracle::unitary(rng, 3);
    const auto x = oracle::symmetrize5(w);  // (S1, S2, S3, St1, St2)
    std::array<Mat, 5> s;
    for (int k = 0; k < 5; ++k) s[k] = Mat::Constant(1, 1, x[k]);
    const auto g = solveFundamental5(CommutingTuple5::make(s));
    CHECK(std::abs(g.G1()(0, 0) - oracle::scalarFundamental(x[0], x[4], x[2])) < 1e-12);
    CHECK(std::abs(g.Gt2()(0, 0) - oracle::scalarFundamental(x[4], x[0], x[2])) < 1e-12);
    CHECK(std::abs(g.G2()(0, 0) - oracle::scalarFundamental(x[1] / 2.0, x[3] / 2.0, x[2])) < 1e-12);
    CHECK(std::abs(g.Gt1()(0, 0) - oracle::scalarFundamental(x[3] / 2.0, x[1] / 2.0, x[2])) < 1e-12);
}

TEST_CASE("compressed tuples: fundamentals are the symbol adjoints on the top level") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Eigen::Index d = 1 + seed % 3;
        const int k = 2 + static_cast<int>(seed % 4);
        const auto sym = diagSymbolFamily7(seed, d);
        const auto t = compressedContraction7(seed, d, k);
        const auto f = solveFundamental7(t);
        REQUIRE(f.rank() == d);
        for (int i = 0; i < 6; ++i) {
            Mat want = Mat::Zero(t.dim(), t.dim());
            want.bottomRightCorner(d, d) = sym[i].adjoint();
            CHECK(oracle::norm2(Mat(f.ambient(i) - want)) < 1e-12);
        }
        CHECK(f.maxResidual() <= 1e-10);
        for (double r : verifyRecurrence7(t, f)) CHECK(r <= 1e-8);
    }
}

TEST_CASE("compressed 5-tuples solve with small residuals and recurrences") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto s = compressedContraction5(seed, 2, 3);
        const auto g = solveFundamental5(s);
        CHECK(g.maxResidual() <= 1e-10);
        for (double r : verifyRecurrence5(s, g)) CHECK(r <= 1e-8);
        const auto sym = diagSymbolFamily5(seed, 2);
        CHECK(oracle::norm2(Mat(g.G2() - sym[1].adjoint())) < 1e-12);
    }
}

TEST_CASE("zero defect: a unitary contraction has an empty fundamental set") {
    std::mt19937_64 rng(3);
    const Mat u = oracle::unitary(rng, 2);
    std::array<Mat, 7> t;
    for (int k = 0; k < 6; ++k) t[k] = Mat::Zero(2, 2);
    t[6] = u;
    const auto f = solveFundamental7(CommutingTuple7::make(t));
    CHECK(f.rank() == 0);
    CHECK(f.maxResidual() == 0);
}

TEST_CASE("non-contractions are rejected") {
    std::array<Mat, 7> t;
    for (auto& m : t) m = Mat::Constant(1, 1, 0.1);
    t[6](0, 0) = 1.5;
    CHECK_THROWS_AS(solveFundamental7(CommutingTuple7::make(t)), Error);
}

TEST_CASE("recurrence rejects a fundamental set of the wrong size") {
    const auto t = compressedContraction7(1, 1, 3);
    auto f = solveFundamental7(t);
    f.X.pop_back();
    CHECK_THROWS_AS(verifyRecurrence7(t, f), Error);
}

TEST_CASE("pencil numerical radius: closed forms") {
    Mat a = Mat::Constant(1, 1, 0.3), b = Mat::Constant(1, 1, Complex(0, 0.4));
    CHECK(pencilNumericalRadius(a, b) == doctest::Approx(0.7).epsilon(1e-9));
    Mat j = Mat::Zero(2, 2);
    j(0, 1) = 1;
    CHECK(pencilNumericalRadius(j, Mat::Zero(2, 2)) == doctest::Approx(0.5).epsilon(1e-9));
    // diagonal pencil: max over slots of |a| + |b|
    Mat da = Mat::Zero(2, 2), db = Mat::Zero(2, 2);
    da(0, 0) = 0.2; db(0, 0) = Complex(0.1, 0.1);
    da(1, 1) = Complex(0, 0.5); db(1, 1) = -0.25;
    CHECK(pencilNumericalRadius(da, db) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("commutativity conditions vanish for diagonal families and flag generic ones") {
    const auto f = diagSymbolFamily7(5, 3);
    CHECK(commutativityConditions7(f, 1e-14).pass());
    CHECK(commutativityConditions7(f, 0).maxResidual() == 0);
    std::mt19937_64 rng(5);
    std::vector<Mat> g;
    for (int k = 0; k < 6; ++k) g.push_back(oracle::gaussian(rng, 2, 2));
    CHECK_FALSE(commutativityConditions7(g, 1e-8).pass());
    const auto h = diagSymbolFamily5(5, 2);
    CHECK(commutativityConditions5(h[0], h[1], h[2], h[3], 0).pass());
    CHECK_FALSE(commutativityConditions5(g[0], g[1], g[2], g[3], 1e-8).pass());
}

TEST_CASE("fundamental report carries one equation and one recurrence check per operator") {
    const auto t = compressedContraction7(2, 2, 3);
    const auto r = fundamentalReport(family(t), solveFundamental7(t), 1e-8);
    CHECK(r.checks.size() == 12);
    CHECK(r.pass());
    CHECK(r.find("equation F3") != nullptr);
}
