#include "qmirror/branes.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace qmirror {

int Partition::size() const { return std::accumulate(parts.begin(), parts.end(), 0); }

std::vector<int> ns5_positions(const Quiver& q) {
    std::vector<int> r;
    int wsum = 0;
    for (int i = 1; i <= q.n() + 1; ++i) {
        r.push_back(q.vv(i) - q.vv(i - 1) + wsum);
        wsum += q.ww(i);
    }
    return r;
}

LinkingData linking_numbers(const Quiver& q) {
    q.validate();
    LinkingData ld;
    ld.ns5_by_position = ns5_positions(q);
    for (size_t i = 0; i < ld.ns5_by_position.size(); ++i) {
        int x = ld.ns5_by_position[i];
        if (x < 0)
            fail(ErrorKind::NotRealizable, "negative NS5 linking number at position " + std::to_string(i + 1) +
                                               " for " + q.str());
        if (x > 0) ld.ns5.parts.push_back(x);
    }
    for (int i = 1; i <= q.n(); ++i)
        for (int c = 0; c < q.ww(i); ++c) ld.d5.parts.push_back(q.n() + 1 - i);
    std::sort(ld.ns5.parts.begin(), ld.ns5.parts.end(), std::greater<>());
    std::sort(ld.d5.parts.begin(), ld.d5.parts.end(), std::greater<>());
    if (ld.ns5.size() != ld.d5.size())
        fail(ErrorKind::InvalidQuiver, "linking number sums differ for " + q.str());
    return ld;
}

Quiver mirror_dual(const Quiver& q) {
    LinkingData ld = linking_numbers(q);
    const int nd = int(ld.d5.parts.size()) - 1;  // dual node count
    if (nd < 1) fail(ErrorKind::NotRealizable, "dual of " + q.str() + " has no gauge nodes");
    Quiver d;
    d.w.assign(nd, 0);
    for (int x : ld.ns5.parts) {
        int i = nd + 1 - x;
        if (i < 1 || i > nd) fail(ErrorKind::NotRealizable, "NS5 linking number out of range");
        d.w[i - 1] += 1;
    }
    std::vector<int> ell(ld.d5.parts.rbegin(), ld.d5.parts.rend());
    int prev = 0, wsum = 0;
    for (int i = 1; i <= nd + 1; ++i) {
        int vi = prev + ell[i - 1] - wsum;
        if (i <= nd) {
            if (vi <= 0)
                fail(ErrorKind::NotRealizable,
                     "dual rank at node " + std::to_string(i) + " is " + std::to_string(vi));
            d.v.push_back(vi);
            wsum += d.w[i - 1];
        } else if (vi != 0) {
            fail(ErrorKind::NotRealizable, "dual ranks do not close: v_{n+1} = " + std::to_string(vi));
        }
        prev = vi;
    }
    return d;
}

Quiver canonical_form(const Quiver& q) { return mirror_dual(mirror_dual(q)); }

Quiver backlund_labels(const Quiver& q, int i) {
    if (i < 1 || i > q.n()) fail(ErrorKind::InvalidArgument, "node index out of range");
    Quiver r = q;
    int nv = q.vv(i - 1) + q.vv(i + 1) + q.ww(i) - q.vv(i);
    if (nv < 0) fail(ErrorKind::NotRealizable, "reflected rank is negative at node " + std::to_string(i));
    r.v[i - 1] = nv;
    return r;
}

std::vector<int> section_degrees(const Quiver& q) {
    q.validate();
    const int n = q.n();
    std::vector<int> rho(n + 1);
    for (int i = 1; i <= n + 1; ++i) {
        int ws = 0;
        for (int a = i; a <= n; ++a) ws += q.ww(a);
        rho[i - 1] = q.vv(i - 1) - q.vv(i) + ws;
    }
    for (int i = 1; i <= n; ++i)
        if (rho[i - 1] - rho[i] != q.ww(i) + q.vv(i - 1) + q.vv(i + 1) - 2 * q.vv(i))
            fail(ErrorKind::NumericalFailure, "section degree recursion broken");
    if (rho[n] != q.vv(n)) fail(ErrorKind::NumericalFailure, "last section degree mismatch");
    return rho;
}

}  // namespace qmirror
