#include "qmirror/trs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "qmirror/branes.hpp"
#include "qmirror/log.hpp"

namespace qmirror {

int ResonancePattern::total() const {
    int s = 0;
    for (auto& g : groups) s += g.second;
    return s;
}

int ResonancePattern::max_length() const {
    int m = 0;
    for (auto& g : groups) m = std::max(m, g.second);
    return m;
}

namespace {

template <class M>
M lax_entries(const CVec& x, const CVec& p, cplx hbar) {
    using C = typename M::Scalar;
    const int L = int(x.size());
    if (int(p.size()) != L) fail(ErrorKind::InvalidArgument, "coords and momenta differ in length");
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(x[i] - x[j]) <= 1e-10 * std::max(std::abs(x[i]), std::abs(x[j])))
                fail(ErrorKind::CoordinateCollision, "coordinates " + std::to_string(j) + " and " +
                                                         std::to_string(i) + " coincide");
    const C h(hbar);
    M T(L, L);
    for (int j = 0; j < L; ++j) {
        C den = 1;
        for (int k = 0; k < L; ++k)
            if (k != j) den *= C(x[j]) - C(x[k]);
        for (int i = 0; i < L; ++i) {
            C num = 1;
            for (int k = 0; k < L; ++k)
                if (k != i) num *= C(x[j]) - h * C(x[k]);
            T(j, i) = C(p[j]) * num / den;
        }
    }
    return T;
}

}  // namespace

CMatrix lax(const CVec& x, const CVec& p, cplx h) { return lax_entries<CMatrix>(x, p, h); }

CMatrix lax(const TRSFrame& f) { return lax(f.coords, f.momenta, f.hbar); }

CMResidual cm_residual(const CMatrix& M, const CMatrix& T, cplx h) {
    if (M.rows() != M.cols() || T.rows() != T.cols() || M.rows() != T.rows())
        fail(ErrorKind::InvalidArgument, "cm_residual needs square matrices of one size");
    CMatrix R = h * M * T - T * M;
    Eigen::JacobiSVD<CMatrix> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    auto s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) fail(ErrorKind::DegenerateZero, "hMT - TM vanishes");
    CMResidual out;
    out.ratio = s.size() > 1 ? s[1] / s[0] : 0.0;
    out.u = svd.matrixU().col(0) * s[0];
    out.v = svd.matrixV().col(0).conjugate();
    return out;
}

CVec hamiltonians(const CVec& x, const CVec& p, cplx h) {
    const int L = int(x.size());
    if (L > 20) fail(ErrorKind::Unsupported, "subset enumeration is capped at L = 20");
    CVec H(L, 0.0);
    for (unsigned mask = 1; mask < (1u << L); ++mask) {
        cplx t = 1;
        for (int i = 0; i < L; ++i) {
            if (!(mask >> i & 1u)) continue;
            t *= p[i];
            for (int j = 0; j < L; ++j)
                if (!(mask >> j & 1u)) t *= (x[i] - h * x[j]) / (x[i] - x[j]);
        }
        H[std::popcount(mask) - 1] += t;
    }
    return H;
}

CVec hamiltonians(const TRSFrame& f) { return hamiltonians(f.coords, f.momenta, f.hbar); }

namespace {

CVec invariants_of(const CPoly& c) {
    const int L = c.degree();
    CVec out(L);
    for (int k = 1; k <= L; ++k) out[k - 1] = c.coeff(L - k) * ((k % 2) ? -1.0 : 1.0);
    return out;
}

}  // namespace

CVec charpoly_invariants(const CMatrix& T) {
    if (T.rows() == 0) return {};
    return invariants_of(char_poly(T));
}

// The Lax entries are formed in long double: for L near 8 and |h| away from 1
// rounding them to double already costs about 1e-9 in the top coefficients.
CVec charpoly_invariants(const CVec& x, const CVec& p, cplx h) {
    if (x.empty()) return {};
    return invariants_of(char_poly_extended(lax_entries<LMatrix>(x, p, h)));
}

CVec charpoly_invariants(const TRSFrame& f) { return charpoly_invariants(f.coords, f.momenta, f.hbar); }

// ---- electric frame ----

bool is_partial_flag(const Quiver& q) {
    try {
        string_lengths(q);
        return true;
    } catch (const Error&) {
        return false;
    }
}

std::vector<int> string_lengths(const Quiver& q) {
    if (!q.well_formed()) fail(ErrorKind::InvalidQuiver, "malformed quiver");
    for (int i = 0; i + 1 < q.n(); ++i)
        if (q.w[i] != 0) fail(ErrorKind::NotPartialFlagOrder, "framing must sit on the last node only");
    std::vector<int> mu;
    int prev = 0;
    for (int x : q.v) {
        mu.push_back(x - prev);
        prev = x;
    }
    mu.push_back(q.w.back() - prev);
    for (int m : mu)
        if (m < 0) fail(ErrorKind::NotPartialFlagOrder, "negative string length; reorder by Backlund moves first");
    return mu;
}

CVec electric_momenta(const BetheSolution& sol, const Quiver& q, const ModelParams& p) {
    string_lengths(q);
    const int n = q.n(), L = q.w.back();
    CPoly Q = poly_from_roots(sol.roots[n - 1]);
    const cplx h = p.hbar;
    CVec out;
    for (cplx a : p.a[n - 1]) {
        cplx den = Q(h * a);
        if (std::abs(den) < 1e-14) fail(ErrorKind::PoleEncountered, "framing parameter hits a top-node root");
        out.push_back(p.xi[n] * std::pow(h, L - 1) * Q(a) / den);
    }
    return out;
}

TRSFrame electric_frame(const BetheSolution& sol, const Quiver& q, const ModelParams& p) {
    TRSFrame f;
    f.coords = p.a[q.n() - 1];
    f.momenta = electric_momenta(sol, q, p);
    f.hbar = 1.0 / p.hbar;
    f.kind = TRSFrame::electric;
    return f;
}

CVec spectrum_target(const Quiver& q, const CVec& xi, cplx h, const std::vector<int>& offsets) {
    auto mu = string_lengths(q);
    if (xi.size() != mu.size()) fail(ErrorKind::InvalidArgument, "need n+1 twist entries");
    CVec out;
    for (size_t j = 0; j < mu.size(); ++j) {
        int d = offsets.empty() ? 0 : offsets[j];
        for (int l = 0; l < mu[j]; ++l) out.push_back(xi[j] * std::pow(h, l + d));
    }
    return out;
}

std::vector<int> calibrate_offsets(const Quiver& q, std::uint64_t seed) {
    static std::mutex mtx;
    static std::map<std::pair<std::vector<int>, std::vector<int>>, std::vector<int>> cache;
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find({q.v, q.w});
        if (it != cache.end()) return it->second;
    }
    auto mu = string_lengths(q);
    const int L = q.w.back();
    if (L > 6) fail(ErrorKind::Unsupported, "calibration is meant for L <= 6");
    Rng rng(seed);
    ModelParams p = ModelParams::random(q, rng);
    auto sys = build_system(q, p);
    SolveOptions o;
    o.seed = seed;
    auto sols = solve(sys, o);
    CVec eig = eigenvalues(lax(electric_frame(sols.front(), q, p)));
    std::vector<int> delta(mu.size(), 0);
    for (size_t j = 0; j < mu.size(); ++j) {
        if (mu[j] == 0) continue;
        double best = 1e300;
        for (int d = -L; d <= L; ++d) {
            double worst = 0;
            for (int l = 0; l < mu[j]; ++l) {
                cplx target = p.xi[j] * std::pow(p.hbar, l + d);
                double m = 1e300;
                for (cplx z : eig) m = std::min(m, std::abs(z - target) / std::max(1.0, std::abs(target)));
                worst = std::max(worst, m);
            }
            if (worst < best) {
                best = worst;
                delta[j] = d;
            }
        }
    }
    for (auto& s : sols) {
        CVec sp = eigenvalues(lax(electric_frame(s, q, p)));
        double d = multiset_distance(sp, spectrum_target(q, p.xi, p.hbar, delta));
        if (d > 1e-7) fail(ErrorKind::CalibrationFailed, "no integer offsets reproduce the spectrum (" + std::to_string(d) + ")");
    }
    std::lock_guard<std::mutex> lk(mtx);
    cache[{q.v, q.w}] = delta;
    return delta;
}

// ---- magnetic frame ----

CVec magnetic_momenta(const QQData& d) {
    if (d.section.empty()) fail(ErrorKind::InvalidArgument, "section not populated; run extend_chain first");
    // L = n+1 coordinates; h^{L-2} puts the Lax spectrum exactly on the framing parameters
    const cplx scale = std::pow(d.params.hbar, d.n() - 1);
    CVec out;
    for (auto& s : d.section) {
        if (s.degree() != 1) fail(ErrorKind::Unsupported, "magnetic momenta need degree-one sections");
        out.push_back(-scale * s.coeff(0) / s.coeff(1));
    }
    return out;
}

TRSFrame magnetic_frame(const QQData& d) {
    TRSFrame f;
    f.coords = d.params.xi;
    f.momenta = magnetic_momenta(d);
    f.hbar = 1.0 / d.params.hbar;
    f.kind = TRSFrame::magnetic;
    return f;
}

CVec qratio_momenta(const QQData& d) {
    CVec out;
    for (int j = 1; j <= d.n() + 1; ++j) {
        cplx den = d.Qp(j)(0.0);
        if (std::abs(den) < 1e-300) fail(ErrorKind::PoleEncountered, "Q^+ vanishes at 0");
        out.push_back(d.Qp(j - 1)(0.0) / den);
    }
    return out;
}

// ---- resonances ----

TRSFrame resonance_rescale(const TRSFrame& f, const ResonancePattern& pat, const CVec& raw, double tol) {
    const int L = int(f.coords.size());
    if (pat.total() != L || int(raw.size()) != L) fail(ErrorKind::InvalidPattern, "pattern does not cover the coordinates");
    std::vector<bool> seen(L, false);
    TRSFrame out = f;
    for (auto [b, len] : pat.groups) {
        if (len < 1 || b < 0 || b + len > L) fail(ErrorKind::InvalidPattern, "string out of range");
        cplx x = f.coords[b];
        for (int l = 0; l < len; ++l) {
            if (seen[b + l]) fail(ErrorKind::InvalidPattern, "strings overlap");
            seen[b + l] = true;
            if (std::abs(f.coords[b + l] - x) > tol * std::abs(x))
                fail(ErrorKind::InvalidPattern, "coordinate " + std::to_string(b + l) + " is off its string");
            out.coords[b + l] = x;
            x *= f.hbar;
        }
    }
    const cplx scale = std::pow(f.hbar, -(pat.max_length() - 1));
    out.momenta.resize(L);
    for (int i = 0; i < L; ++i) out.momenta[i] = raw[i] * scale;
    out.pattern = pat;
    return out;
}

CMatrix slodowy_lax(const TRSFrame& f) {
    const auto& x = f.coords;
    const int L = int(x.size());
    const cplx h = f.hbar;
    CMatrix T(L, L);
    for (int i = 0; i < L; ++i) {
        cplx den = 1;
        for (int k = 0; k < L; ++k)
            if (k != i) den *= x[i] - x[k];
        if (std::abs(den) == 0) fail(ErrorKind::CoordinateCollision, "string coordinates coincide");
        for (int j = 0; j < L; ++j) {
            cplx num = 1;
            for (int k = 0; k < L; ++k)
                if (k != i) num *= x[j] - h * x[k];
            T(j, i) = f.momenta[j] * num / den;
        }
    }
    return T;
}

}  // namespace qmirror
