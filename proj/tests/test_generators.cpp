#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gammalab/fundamental.hpp"
#include "gammalab/generators.hpp"
#include "oracles.hpp"

using namespace gammalab;

TEST_CASE("diagonal symbol families respect the slot budget") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = diagSymbolFamily7(seed, 3);
        for (int s = 0; s < 3; ++s) {
            for (int i = 0; i < 3; ++i) {
                const Complex a = f[i](s, s), b = f[5 - i](s, s);
                CHECK(std::abs(a) + std::abs(b) <= 1 + 1e-15);
                if (std::abs(a) > 0 && std::abs(b) > 0) CHECK(std::abs(std::arg(a) + std::arg(b)) < 1e-12);
            }
        }
        for (const auto& m : f) CHECK(oracle::norm2(Mat(m - Mat(m.diagonal().asDiagonal()))) == 0);
        CHECK(commutativityConditions7(f, 0).pass());
        const auto g = diagSymbolFamily5(seed, 2);
        for (int s = 0; s < 2; ++s) {
            CHECK(std::abs(g[0](s, s)) + std::abs(g[3](s, s)) <= 1 + 1e-15);
            CHECK(std::abs(g[1](s, s)) + std::abs(g[2](s, s)) <= 1 + 1e-15);
        }
    }
}

TEST_CASE("pencil norm at z = 1 of a diagonal pencil is the largest slot value") {
    const auto f = diagSymbolFamily7(3, 3);
    const Mat p = f[0].adjoint() + f[5];
    double want = 0;
    for (int s = 0; s < 3; ++s) want = std::max(want, std::abs(std::conj(f[0](s, s)) + f[5](s, s)));
    CHECK(oracle::norm2(p) == doctest::Approx(want).epsilon(1e-14));
    CHECK(want <= 1);
}

TEST_CASE("compressed contraction with one level is the symbol adjoint and zero") {
    const auto f = diagSymbolFamily7(4, 2);
    const auto t = compressedContraction7(4, 2, 1);
    for (int i = 0; i < 6; ++i) CHECK(oracle::norm2(Mat(t.T[i] - f[i].adjoint())) == 0);
    CHECK(oracle::norm2(t.T[6]) == 0);
}

TEST_CASE("compressed contraction with two levels, d = 1, by direct assembly") {
    const auto f = diagSymbolFamily7(6, 1);
    const auto t = compressedContraction7(6, 1, 2);
    for (int i = 0; i < 6; ++i) {
        Mat want(2, 2);
        want << std::conj(f[i](0, 0)), 0, f[5 - i](0, 0), std::conj(f[i](0, 0));
        CHECK(oracle::norm2(Mat(t.T[i] - want)) == 0);
    }
    Mat shift(2, 2);
    shift << 0, 0, 1, 0;
    CHECK(oracle::norm2(Mat(t.T[6] - shift)) == 0);
}

TEST_CASE("generated tuples pass their own gates") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t = compressedContraction7(seed, 3, 4);
        CHECK(t.commutationResidual == 0);
        CHECK(oracle::norm2(t.T[6]) <= 1);
        CHECK(solveFundamental7(t).maxResidual() <= 1e-10);
        const auto s = compressedContraction5(seed, 2, 4);
        CHECK(s.commutationResidual == 0);
        CHECK(solveFundamental5(s).maxResidual() <= 1e-10);
        CHECK(oracle::norm2(s.S[1]) <= 2 + 1e-12);
    }
}

TEST_CASE("scalar tuples from witnesses") {
    const auto ones = scalarTuple7(symmetrize7(Mat::Identity(3, 3)));
    for (const auto& m : ones.T) CHECK(m(0, 0) == Complex(1, 0));
    const auto half = scalarTuple7(symmetrize7(Mat(0.5 * Mat::Identity(3, 3))));
    const double want[] = {0.5, 0.5, 0.25, 0.5, 0.25, 0.25, 0.125};
    for (int k = 0; k < 7; ++k) CHECK(half.T[k](0, 0) == Complex(want[k], 0));
    const auto zero = scalarTuple5(symmetrize5(Mat::Zero(3, 3)));
    for (const auto& m : zero.S) CHECK(m(0, 0) == Complex(0, 0));
    GammaPoint bare{GammaVariant::E3311, Vec::Zero(7), std::nullopt};
    CHECK_THROWS_AS(scalarTuple7(bare), Error);
    CHECK_THROWS_AS(scalarTuple7(symmetrize7(Mat(2.0 * Mat::Identity(3, 3)))), Error);
}

TEST_CASE("random unitaries are unitary") {
    const Mat u = randomUnitary(3, 5);
    CHECK(oracle::norm2(Mat(u.adjoint() * u - Mat::Identity(5, 5))) < 1e-13);
}

TEST_CASE("mixed tuples commute and have the requested unitary part") {
    const auto m = mixedTuple(TupleVariant::Gamma7, 4, 3, 2, 2);
    CHECK(m.family.dim() == 7);
    CHECK(commutationResidual(tupleOperators(m.family)) < 1e-13);
    CHECK(m.unitarySpectrum.size() == 3);
}

TEST_CASE("generation is seed-deterministic to the bit") {
    for (auto kind : {GeneratorKind::DiagIsometry7, GeneratorKind::Compressed5, GeneratorKind::Scalar7, GeneratorKind::Scalar5,
                      GeneratorKind::CirculantUnitary}) {
        const GeneratorSpec spec{kind, 42, 2, 3};
        const auto a = generate(spec), b = generate(spec);
        const auto oa = tupleOperators(a), ob = tupleOperators(b);
        for (std::size_t k = 0; k < oa.size(); ++k) CHECK((oa[k].array() == ob[k].array()).all());
        CHECK(parseGeneratorKind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parseGeneratorKind("nope"), Error);
}
