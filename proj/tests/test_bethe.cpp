#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qmirror/bethe.hpp"

using namespace qmirror;
using namespace qmirror::test;

namespace {

using oracle::tp1_roots;

ModelParams tp1_params() {
    ModelParams p;
    p.a = {{1.0, 2.0}};
    p.xi = {cplx(0.8, 0.3), cplx(-0.4, 1.1)};
    p.hbar = 1.0 / 3.0;
    return p;
}

}  // namespace

TEST_CASE("T*P1 solutions are the roots of the cleared quadratic") {
    const ModelParams p = tp1_params();
    const auto sys = build_system(Quiver({1}, {2}), p);
    const auto sols = solve(sys);
    REQUIRE(sols.size() == 2);
    CVec found = {sols[0].roots[0][0], sols[1].roots[0][0]};
    CHECK(multiset_distance(found, tp1_roots(1.0, 2.0, p.xi[0], p.xi[1], p.hbar)) < 1e-10);
}

TEST_CASE("residual at an exact root, a random point and a pole") {
    const ModelParams p = tp1_params();
    const auto sys = build_system(Quiver({1}, {2}), p);
    for (cplx s : tp1_roots(1.0, 2.0, p.xi[0], p.xi[1], p.hbar)) CHECK(residual_norm(sys, {{s}}) < 1e-12);
    const double r = residual_norm(sys, {{cplx(0.3, 0.9)}});
    CHECK(r > 1e-3);
    CHECK(std::isfinite(r));
    CHECK_THROWS_AS(residual(sys, {{1.0}}), Error);
    try {
        residual(sys, {{1.0}});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PoleEncountered);
    }
}

TEST_CASE("shape mismatch is rejected") {
    ModelParams p = tp1_params();
    p.a[0].pop_back();
    CHECK_THROWS_AS(build_system(Quiver({1}, {2}), p), Error);
    SolveOptions o;
    o.starts = 0;
    CHECK_THROWS_AS(solve(build_system(Quiver({1}, {2}), tp1_params()), o), Error);
}

TEST_CASE("full flag n=2 has one equation per root") {
    Rng rng(1);
    const Quiver q = Quiver::full_flag(3);
    const auto sys = build_system(q, ModelParams::random(q, rng));
    CHECK(sys.eqs.size() == 3);
    CHECK(sys.unknowns() == 3);
}

TEST_CASE("census of the full flag n=3 is stable under doubling starts") {
    Rng rng(21);
    const Quiver q = Quiver::full_flag(3);
    const auto sys = build_system(q, ModelParams::random(q, rng));
    SolveOptions o;
    o.starts = 200;
    const auto a = solve(sys, o);
    o.starts = 400;
    const auto b = solve(sys, o);
    CHECK(a.size() == 6);
    CHECK(b.size() == 6);
    CHECK(long(a.size()) == expected_count({Family::full_flag, 3, 0}));
}

TEST_CASE("census of T*Gr(2,4)") {
    Rng rng(8);
    const Quiver q({2}, {4});
    const auto sols = solve(build_system(q, ModelParams::random(q, rng)));
    CHECK(sols.size() == 6);
    CHECK(long(sols.size()) == expected_count({Family::grassmannian, 2, 4}));
}

TEST_CASE("returned solutions are canonical, converged and separated") {
    Rng rng(31);
    const Quiver q({1, 2}, {1, 2});
    const auto sys = build_system(q, ModelParams::random(q, rng));
    const auto sols = solve(sys);
    REQUIRE(!sols.empty());
    for (const auto& s : sols) {
        CHECK(s.canonical);
        CHECK(s.residual < 1e-11);
        CHECK(residual_norm(sys, s.roots) < 1e-10);
        for (const auto& r : s.roots) {
            CHECK(std::is_sorted(r.begin(), r.end(), lex_less));
            for (size_t i = 0; i < r.size(); ++i)
                for (size_t j = 0; j < i; ++j) CHECK(std::abs(r[i] - r[j]) > 1e-8 * std::abs(r[i]));
        }
    }
    for (size_t i = 1; i < sols.size(); ++i) {
        const CVec a = sols[i - 1].flat(), b = sols[i].flat();
        CHECK(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), lex_less));
    }
}

TEST_CASE("solve is deterministic for a fixed seed") {
    Rng rng(2);
    const Quiver q = Quiver::full_flag(3);
    const auto sys = build_system(q, ModelParams::random(q, rng));
    const auto a = solve(sys), b = solve(sys);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].flat() == b[i].flat());
}

TEST_CASE("permuting roots within a node permutes the residual") {
    Rng rng(6);
    const Quiver q({2}, {3});
    const auto sys = build_system(q, ModelParams::random(q, rng));
    const CVec x = rng.generic(2);
    const CVec r1 = residual(sys, {{x[0], x[1]}});
    const CVec r2 = residual(sys, {{x[1], x[0]}});
    CHECK(cdist(r1[0], r2[1]) < 1e-12);
    CHECK(cdist(r1[1], r2[0]) < 1e-12);
}

TEST_CASE("a global rescaling of the twists leaves the solutions unchanged") {
    Rng rng(15);
    const Quiver q({1, 2}, {0, 3});
    ModelParams p = ModelParams::random(q, rng);
    const auto a = solve(build_system(q, p));
    for (cplx& x : p.xi) x *= cplx(0.3, -1.7);
    const auto b = solve(build_system(q, p));
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(multiset_distance(a[i].flat(), b[i].flat()) < 1e-9);
}

TEST_CASE("toroidal k=1 closed form") {
    Rng rng(3);
    for (int t = 0; t < 5; ++t) {
        const cplx a = rng.generic(), xi = rng.generic(), tt = rng.generic(), h = rng.hbar();
        const auto sols = solve(build_adhm(1, 1, {a}, xi, tt, h));
        REQUIRE(sols.size() == 1);
        CHECK(cdist(sols[0].roots[0][0], a * (xi - 1.0) / (xi - 1.0 / h)) < 1e-12);
    }
}

TEST_CASE("toroidal censuses equal the partition counts") {
    for (int k = 1; k <= 4; ++k) {
        Rng rng(40 + k);
        const cplx a = rng.generic(), xi = rng.generic(), t = rng.generic(), h = rng.hbar();
        SolveOptions o;
        o.expected = int(partition_count(k));
        const auto sols = solve(build_adhm(k, 1, {a}, xi, t, h), o);
        CHECK(long(sols.size()) == expected_count({Family::hilb, k, 0}));
    }
}

TEST_CASE("rank two toroidal censuses") {
    for (int k = 1; k <= 2; ++k) {
        Rng rng(60 + k);
        const CVec a = rng.generic(2);
        const cplx xi = rng.generic(), t = rng.generic(), h = rng.hbar();
        const auto sols = solve(build_adhm(k, 2, a, xi, t, h));
        CHECK(long(sols.size()) == expected_count({Family::adhm, 2, k}));
    }
}

TEST_CASE("expected counts") {
    CHECK(expected_count({Family::full_flag, 3, 0}) == 6);
    CHECK(expected_count({Family::grassmannian, 1, 2}) == 2);
    CHECK(expected_count({Family::grassmannian, 2, 4}) == 6);
    CHECK(expected_count({Family::hilb, 3, 0}) == 3);
    CHECK(expected_count({Family::adhm, 2, 2}) == 5);
    CHECK(expected_count({Family::adhm, 3, 2}) == 9);
    CHECK(partition_count(6) == 11);
    CHECK_THROWS_AS(expected_count({Family::other, 1, 1}), Error);
}
