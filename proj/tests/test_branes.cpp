#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "qmirror/branes.hpp"

using namespace qmirror;

namespace {

std::vector<Quiver> all_quivers(int nmax, int vmax, int wmax, bool balanced_only) {
    std::vector<Quiver> out;
    for (int n = 1; n <= nmax; ++n) {
        std::vector<int> v(n, 1), w(n, 0);
        while (true) {
            Quiver q(v, w);
            if (q.well_formed() && (!balanced_only || q.balanced())) out.push_back(q);
            int i = 0;
            for (; i < 2 * n; ++i) {
                int& x = i < n ? v[i] : w[i - n];
                const int lo = i < n ? 1 : 0, hi = i < n ? vmax : wmax;
                if (x < hi) {
                    ++x;
                    break;
                }
                x = lo;
            }
            if (i == 2 * n) break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("linking numbers of X_{2,4}") {
    const auto ld = linking_numbers(Quiver::xkl(2, 4));
    CHECK(ld.ns5.parts == std::vector<int>{4, 3, 2, 1, 1, 1});
    CHECK(ld.d5.parts == std::vector<int>{4, 3, 2, 1, 1, 1});
    CHECK(ld.ns5_by_position.size() == 6);
}

TEST_CASE("linking numbers of the A_3 example") {
    const auto ld = linking_numbers(Quiver({1, 4, 3}, {1, 2, 2}));
    CHECK(ld.d5.parts == std::vector<int>{3, 2, 2, 1, 1});
    CHECK(ld.ns5.parts == std::vector<int>{4, 2, 2, 1});
}

TEST_CASE("linking numbers of the full flag") {
    const auto ld = linking_numbers(Quiver::full_flag(3));
    CHECK(ld.ns5.parts == std::vector<int>{1, 1, 1});
    CHECK(ld.d5.parts == std::vector<int>{1, 1, 1});
}

TEST_CASE("negative positional linking number is not realizable") {
    CHECK_THROWS_AS(linking_numbers(Quiver({2}, {1})), Error);
    try {
        linking_numbers(Quiver({2}, {1}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotRealizable);
    }
    CHECK_THROWS_AS(linking_numbers(Quiver({1}, {0})), Error);
}

TEST_CASE("mirror duals of the worked examples") {
    CHECK(mirror_dual(Quiver({1, 4, 3}, {1, 2, 2})) == Quiver({1, 1, 2, 1}, {1, 0, 2, 1}));
    CHECK(mirror_dual(Quiver::xkl(2, 4)) == Quiver::xkl(2, 4));
    for (int L = 2; L <= 6; ++L) CHECK(mirror_dual(Quiver::full_flag(L)) == Quiver::full_flag(L));
    CHECK(mirror_dual(Quiver({2}, {4})) == Quiver({1, 2, 1}, {0, 2, 0}));
}

TEST_CASE("backlund labels") {
    CHECK(backlund_labels(Quiver({2}, {5}), 1) == Quiver({3}, {5}));
    CHECK(backlund_labels(Quiver({1}, {2}), 1) == Quiver({1}, {2}));
    const Quiver f = Quiver::full_flag(4);
    for (int i = 1; i <= 3; ++i) CHECK(backlund_labels(f, i) == f);
    const Quiver q({1, 4, 3}, {1, 2, 2});
    for (int i = 1; i <= 3; ++i) {
        try {
            CHECK(backlund_labels(backlund_labels(q, i), i) == q);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotRealizable);
        }
    }
    CHECK_THROWS_AS(backlund_labels(Quiver({3}, {1}), 1), Error);
}

TEST_CASE("section degrees") {
    for (int L = 2; L <= 6; ++L) {
        const auto r = section_degrees(Quiver::full_flag(L).reflect());
        CHECK(std::all_of(r.begin(), r.end(), [](int x) { return x == 1; }));
    }
    // magnetic side of X_{k,l}: the last k degrees are 1 and deg s_{l-i+1} = i
    for (int k = 1; k <= 3; ++k)
        for (int l = 2; l <= 4; ++l) {
            const auto r = section_degrees(Quiver::xkl(k, l).reflect());
            REQUIRE(int(r.size()) == k + l);
            for (int j = l; j < k + l; ++j) CHECK(r[j] == 1);
            for (int i = 1; i <= l; ++i) CHECK(r[l - i] == i);
        }
    CHECK(section_degrees(Quiver({1, 4, 3}, {1, 2, 2})) == std::vector<int>{4, 1, 3, 3});
}

TEST_CASE("section degrees agree with the linking numbers of the reflection") {
    for (const Quiver& q : all_quivers(3, 3, 3, true)) {
        std::vector<int> rho = section_degrees(q);
        std::vector<int> pos = ns5_positions(q.reflect());
        std::reverse(pos.begin(), pos.end());
        CHECK(rho == pos);
    }
}

TEST_CASE("conservation of linking numbers over the exhaustive family") {
    int checked = 0;
    for (const Quiver& q : all_quivers(4, 4, 4, true)) {
        LinkingData ld;
        try {
            ld = linking_numbers(q);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotRealizable);
            continue;
        }
        CHECK(ld.ns5.size() == ld.d5.size());
        CHECK(int(ld.ns5_by_position.size()) == q.n() + 1);
        ++checked;
    }
    CHECK(checked > 1000);
}

TEST_CASE("mirror dual involution and validity") {
    int checked = 0;
    for (const Quiver& q : all_quivers(3, 4, 4, true)) {
        Quiver d;
        try {
            d = mirror_dual(q);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotRealizable);
            continue;
        }
        CHECK(d.valid());
        CHECK(mirror_dual(d) == canonical_form(q));
        const auto a = linking_numbers(q), b = linking_numbers(d);
        CHECK(a.ns5 == b.d5);
        CHECK(a.d5 == b.ns5);
        ++checked;
    }
    CHECK(checked > 100);
}
