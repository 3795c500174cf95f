#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qmirror/trs.hpp"

using namespace qmirror;
using namespace qmirror::test;

namespace {

CMatrix diag(const CVec& x) {
    CMatrix M = CMatrix::Zero(x.size(), x.size());
    for (size_t i = 0; i < x.size(); ++i) M(i, i) = x[i];
    return M;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::vector<BetheSolution> solve_q(const Quiver& q, std::uint64_t seed, ModelParams& p) {
    Rng rng(seed);
    p = ModelParams::random(q, rng);
    return solve(build_system(q, p));
}

}  // namespace

TEST_CASE("lax examples") {
    const CMatrix T = lax({1.0, 2.0}, {1.0, 1.0}, 2.0);
    CHECK((T - mat({{3.0, 1.0}, {-2.0, 0.0}})).norm() < 1e-14);
    const CVec x = {cplx(0.3, 1.0), cplx(-1.2, 0.4), cplx(0.9, -0.8)}, p = {1.0, cplx(0, 2), -0.5};
    CHECK((lax(x, p, 1.0) - diag(p)).norm() < 1e-14);
    const CMatrix one = lax({cplx(0.4, 0.1)}, {cplx(2.0, -1.0)}, 0.7);
    CHECK(one.rows() == 1);
    CHECK(cdist(one(0, 0), cplx(2.0, -1.0)) < 1e-15);
    CHECK_THROWS_AS(lax({1.0, 1.0}, {1.0, 1.0}, 2.0), Error);
}

TEST_CASE("Calogero-Moser rank one for random frames") {
    Rng rng(101);
    for (int t = 0; t < 200; ++t) {
        const int L = 2 + t % 7;
        const CVec x = rng.generic(L), p = rng.generic(L);
        const cplx h = rng.hbar();
        CHECK(cm_residual(diag(x), lax(x, p, h).transpose(), h).ratio < 1e-10);
    }
}

TEST_CASE("Calogero-Moser negative control and small cases") {
    Rng rng(7);
    const CVec x = rng.generic(4);
    const cplx h = rng.hbar();
    CHECK(cm_residual(diag(x), diag(x), h).ratio > 1e-2);
    CHECK(cm_residual(diag({x[0]}), lax({x[0]}, {x[1]}, h), h).ratio == 0.0);
    CHECK_THROWS_AS(cm_residual(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2), 1.0), Error);
}

TEST_CASE("hamiltonian examples") {
    const CVec H = hamiltonians({1.0, 2.0}, {1.0, 1.0}, 2.0);
    CHECK(cdist(H[0], 3.0) < 1e-14);
    CHECK(cdist(H[1], 1.0) < 1e-14);
    CHECK(cdist(lax({1.0, 2.0}, {1.0, 1.0}, 2.0).determinant(), 2.0 * H[1]) < 1e-14);

    Rng rng(3);
    const CVec x = rng.generic(5), p = rng.generic(5);
    const CVec H1 = hamiltonians(x, p, 1.0), e = esym(p);
    for (int k = 1; k <= 5; ++k) CHECK(rel(H1[k - 1], e[k]) < 1e-12);
    cplx prod = 1.0;
    for (cplx y : p) prod *= y;
    CHECK(rel(hamiltonians(x, p, rng.hbar())[4], prod) < 1e-12);
    CHECK_THROWS_AS(hamiltonians(rng.generic(21), rng.generic(21), 0.5), Error);
}

TEST_CASE("closed-form hamiltonians match the characteristic polynomial") {
    Rng rng(202);
    for (int t = 0; t < 100; ++t) {
        const int L = 1 + t % 8;
        const CVec x = rng.generic(L), p = rng.generic(L);
        const cplx h = rng.hbar();
        const CVec H = hamiltonians(x, p, h), C = charpoly_invariants(x, p, h);
        for (int k = 1; k <= L; ++k) CHECK(rel(std::pow(h, k * (k - 1) / 2) * H[k - 1], C[k - 1]) < 1e-9);
    }
}

TEST_CASE("T*P1 electric momenta and spectrum") {
    ModelParams p;
    const Quiver q({1}, {2});
    const auto sols = solve_q(q, 5, p);
    REQUIRE(sols.size() == 2);
    const auto off = calibrate_offsets(q, 1);
    CHECK(off == std::vector<int>{0, 0});
    const cplx h = p.hbar;
    for (auto& s : sols) {
        const cplx r = s.roots[0][0];
        const CVec m = electric_momenta(s, q, p);
        for (int i = 0; i < 2; ++i) {
            const cplx a = p.a[0][i];
            CHECK(rel(m[i], p.xi[1] * h * (a - r) / (h * a - r)) < 1e-13);
        }
        const CVec eig = eigenvalues(lax(electric_frame(s, q, p)));
        CHECK(multiset_distance(eig, {p.xi[0], p.xi[1]}) < 1e-8);
    }
}

TEST_CASE("electric spectrum on partial flags") {
    for (const Quiver& q : {Quiver::full_flag(3), Quiver::full_flag(4), Quiver({2}, {4}), Quiver({2}, {5}),
                            Quiver({1, 3}, {0, 4}), Quiver({2, 3}, {0, 5}), Quiver({1}, {3})}) {
        ModelParams p;
        const auto sols = solve_q(q, 11, p);
        REQUIRE(!sols.empty());
        const CVec target = spectrum_target(q, p.xi, p.hbar, calibrate_offsets(q, 1));
        for (auto& s : sols) CHECK(multiset_distance(eigenvalues(lax(electric_frame(s, q, p))), target) < 1e-7);
    }
}

TEST_CASE("spectrum targets") {
    const CVec xi = {1.0, cplx(0, 2), 3.0, cplx(-1, 1)};
    CHECK(multiset_distance(spectrum_target(Quiver::full_flag(4), xi, 0.5), xi) < 1e-15);
    const CVec g = spectrum_target(Quiver({2}, {5}), {1.0, 2.0}, 0.5);
    CHECK(multiset_distance(g, {1.0, 0.5, 2.0, 1.0, 0.5}) < 1e-15);
    CHECK(string_lengths(Quiver({2}, {5})) == std::vector<int>{2, 3});
    CHECK(string_lengths(Quiver({3}, {3})) == std::vector<int>{3, 0});
    CHECK_THROWS_AS(string_lengths(Quiver({3}, {2})), Error);
    CHECK(!is_partial_flag(Quiver({1, 1}, {1, 1})));
}

TEST_CASE("calibration is seed independent and constant on the full flag") {
    const auto a = calibrate_offsets(Quiver::full_flag(3), 1);
    const auto b = calibrate_offsets(Quiver::full_flag(3), 9);
    CHECK(a == b);
    for (int d : a) CHECK(d == a[0]);
}

TEST_CASE("magnetic frame on full flags") {
    for (int L = 2; L <= 4; ++L) {
        const Quiver q = Quiver::full_flag(L).reflect();
        ModelParams p;
        Rng rng(31 + L);
        p = ModelParams::random(q, rng);
        const auto sys = build_system(q, p);
        const auto sols = solve(sys);
        CHECK(long(sols.size()) == expected_count({Family::full_flag, L, 0}));
        const CVec e = esym(p.a[0]);
        for (auto& s : sols) {
            const TRSFrame f = magnetic_frame(extend_chain(qq_from_solution(sys, s)));
            const CVec C = charpoly_invariants(lax(f));
            const CVec H = hamiltonians(f);
            for (int k = 1; k <= L; ++k) {
                CHECK(rel(C[k - 1], e[k]) < 1e-7);
                CHECK(rel(std::pow(f.hbar, k * (k - 1) / 2) * H[k - 1], e[k]) < 1e-7);
            }
            if (L > 1) CHECK(cm_residual(diag(f.coords), lax(f).transpose(), f.hbar).ratio < 1e-10);
        }
    }
}

TEST_CASE("magnetic momenta are the negated constant terms of the monic sections") {
    const Quiver q = Quiver::full_flag(3).reflect();
    Rng rng(4);
    const ModelParams p = ModelParams::random(q, rng);
    const auto sys = build_system(q, p);
    const auto d = extend_chain(qq_from_solution(sys, solve(sys)[0]));
    const CVec m = magnetic_momenta(d);
    for (size_t i = 0; i < m.size(); ++i) {
        const CPoly s = d.section[i].monic();
        CHECK(rel(m[i], -std::pow(p.hbar, q.n() - 1) * s.coeff(0)) < 1e-13);
    }
    CHECK(qratio_momenta(d).size() == 3);
}

// 5 particles on the strings (a1, h a1, h^2 a1) and (a4, h a4)
TEST_CASE("Slodowy form of the degenerate five-particle Lax matrix") {
    const cplx h(0.83, 0.41), a1(1.2, -0.3), a4(-0.4, 0.9);
    const CVec raw = {cplx(0.7, 0.2), cplx(-1.1, 0.5), cplx(0.3, 1.3), cplx(1.4, -0.6), cplx(-0.2, -0.9)};
    TRSFrame f;
    f.hbar = h;
    f.coords = {a1, a1 * h * (1 + 1e-11), a1 * h * h, a4, a4 * h};
    ResonancePattern pat;
    pat.groups = {{0, 3}, {3, 2}};
    const TRSFrame g = resonance_rescale(f, pat, raw);
    const CMatrix T = slodowy_lax(g);
    const CMatrix E = oracle::slodowy_display(h, a1, a4, raw);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            if (E(i, j) == cplx(0.0)) CHECK(std::abs(T(i, j)) < 1e-12);
            else CHECK(std::abs(T(i, j) - E(i, j)) < 1e-10 * std::max(1.0, std::abs(E(i, j))));
        }
}

TEST_CASE("trivial resonance pattern changes nothing") {
    Rng rng(8);
    TRSFrame f;
    f.hbar = rng.hbar();
    f.coords = rng.generic(3);
    f.momenta = rng.generic(3);
    ResonancePattern pat;
    pat.groups = {{0, 1}, {1, 1}, {2, 1}};
    const TRSFrame g = resonance_rescale(f, pat, f.momenta);
    CHECK(g.coords == f.coords);
    CHECK(g.momenta == f.momenta);
}

TEST_CASE("resonance pattern mismatch") {
    TRSFrame f;
    f.hbar = 0.7;
    f.coords = {1.0, 2.0, 3.0};
    ResonancePattern pat;
    pat.groups = {{0, 2}, {2, 1}};
    CHECK_THROWS_AS(resonance_rescale(f, pat, {1.0, 1.0, 1.0}), Error);
    pat.groups = {{0, 2}};
    CHECK_THROWS_AS(resonance_rescale(f, pat, {1.0, 1.0, 1.0}), Error);
}

TEST_CASE("Slodowy gauge preserves the characteristic polynomial off resonance") {
    Rng rng(19);
    for (int L = 2; L <= 6; ++L) {
        TRSFrame f;
        f.hbar = rng.hbar();
        f.coords = rng.generic(L);
        f.momenta = rng.generic(L);
        const CPoly a = char_poly(lax(f)), b = char_poly(slodowy_lax(f));
        CHECK((a - b).norm() < 1e-9 * a.norm());
    }
}
