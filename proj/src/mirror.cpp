#include "qmirror/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "qmirror/branes.hpp"
#include "qmirror/log.hpp"

namespace qmirror {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

double vnorm(const CVec& x) {
    double s = 0;
    for (cplx c : x) s += std::norm(c);
    return std::sqrt(s);
}

std::vector<BetheSolution> solve_or_empty(const BetheSystem& sys, const SolveOptions& o) {
    try {
        return solve(sys, o);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::EmptyResult) return {};
        throw;
    }
}

SolveOptions solve_opts(const VerifyOptions& v, int expected) {
    SolveOptions o;
    o.seed = v.seed;
    o.starts = v.starts;
    o.newton_tol = v.newton_tol;
    o.dedup_tol = v.dedup_tol;
    o.expected = expected;
    return o;
}

void record(MirrorReport& r, const VectorMatch& m) {
    r.constants = m.constants;
    r.pairs = m.pairs;
}

}  // namespace

// ---- finite A_r ----

MirrorMap mirror_param_map(const Quiver& q, const ModelParams& p) {
    const Quiver X = q.reflect();
    const Quiver Y = mirror_dual(q);
    try {
        p.check(X);
    } catch (const Error& e) {
        fail(ErrorKind::MapShapeError, std::string("parameters do not fit reflect(q): ") + e.what());
    }
    const int n = X.n(), nd = Y.n();
    const auto rho = section_degrees(X);

    MirrorMap m;
    m.dual.hbar = 1.0 / p.hbar;
    for (int mm = 1; mm <= nd; ++mm) {
        CVec slot;
        for (int j = 0; j <= n; ++j)
            if (rho[j] == nd + 1 - mm) {
                slot.push_back(1.0 / p.xi[j]);
                m.order.push_back(j);
            }
        if (int(slot.size()) != Y.w[mm - 1])
            fail(ErrorKind::MapShapeError, "twist strings do not fill the dual framing at node " + std::to_string(mm));
        m.dual.a.push_back(slot);
    }

    // one h-string a h^{i-1} per framing parameter of node i, consumed in NS5 order
    std::map<int, std::deque<cplx>> pool;
    for (int i = 1; i <= n; ++i)
        for (cplx a : p.a[i - 1]) pool[i].push_back(a * std::pow(p.hbar, i - 1));
    for (int mu : ns5_positions(Y)) {
        auto it = pool.find(mu);
        if (it == pool.end() || it->second.empty())
            fail(ErrorKind::MapShapeError, "no framing parameter left for dual twist at position " + std::to_string(mu));
        m.dual.xi.push_back(it->second.front());
        it->second.pop_front();
    }
    for (auto& [i, rest] : pool)
        if (!rest.empty()) fail(ErrorKind::MapShapeError, "framing parameters left over at node " + std::to_string(i));
    m.dual.check(Y);
    return m;
}

CVec magnetic_observables(const Quiver& X, const BetheSolution& sol) {
    const int n = X.n();
    std::vector<cplx> q0(n + 2, 1.0);
    for (int i = 1; i <= n; ++i) q0[i] = poly_from_roots(sol.roots[i - 1])(0.0);
    CVec out(n + 1);
    for (int j = 0; j <= n; ++j) out[j] = q0[j] / q0[j + 1];
    return out;
}

CVec electric_observables(const Quiver& dual, const ModelParams& pd, const std::vector<int>& order,
                          const BetheSolution& sol) {
    CVec vals;
    for (int m = 0; m < dual.n(); ++m) {
        const CPoly Q = poly_from_roots(sol.roots[m]);
        for (cplx a : pd.a[m]) vals.push_back(Q(a) / Q(pd.hbar * a));
    }
    CVec out(order.size());
    for (size_t k = 0; k < order.size(); ++k) out[order[k]] = vals[k];
    return out;
}

VectorMatch match_with_constants(const std::vector<CVec>& A, const std::vector<CVec>& B, double tol) {
    VectorMatch res;
    if (A.size() != B.size() || A.empty()) return res;
    const size_t d = A[0].size();
    for (size_t j = 0; j < B.size(); ++j) {
        CVec c(d);
        bool degenerate = false;
        for (size_t r = 0; r < d; ++r) {
            if (std::abs(B[j][r]) == 0) degenerate = true;
            else c[r] = A[0][r] / B[j][r];
        }
        if (degenerate) continue;
        std::vector<bool> used(B.size(), false);
        std::vector<MatchedPair> pairs;
        bool ok = true;
        for (size_t y = 0; y < A.size() && ok; ++y) {
            ok = false;
            for (size_t i = 0; i < B.size(); ++i) {
                if (used[i]) continue;
                CVec diff(d);
                for (size_t r = 0; r < d; ++r) diff[r] = c[r] * B[i][r] - A[y][r];
                const double mis = vnorm(diff) / std::max(vnorm(A[y]), 1e-300);
                if (mis < tol) {
                    used[i] = true;
                    pairs.push_back({int(i), int(y), mis});
                    ok = true;
                    break;
                }
            }
        }
        if (ok) {
            res.ok = true;
            res.constants = c;
            res.pairs = std::move(pairs);
            return res;
        }
    }
    return res;
}

MirrorReport verify_finite(const Quiver& q, const VerifyOptions& opts, const std::optional<ModelParams>& left,
                           const std::optional<ModelParams>& right_override) {
    q.validate();
    MirrorReport r;
    r.kind = "finite";
    r.tol = opts.tol;
    r.quiver = q;
    r.dual = mirror_dual(q);
    const Quiver X = q.reflect();
    if (X.rank_sum() > 6 || r.dual.rank_sum() > 6)
        r.notes.push_back("rank sum above 6; solver completeness not established at this size");

    Rng rng(opts.seed);
    r.left_params = left ? *left : ModelParams::random(X, rng);
    const MirrorMap map = mirror_param_map(q, r.left_params);
    r.right_params = right_override ? *right_override : map.dual;

    const auto sX = solve_or_empty(build_system(X, r.left_params), solve_opts(opts, -1));
    const auto sY = solve_or_empty(build_system(r.dual, r.right_params), solve_opts(opts, int(sX.size())));
    r.count_left = int(sX.size());
    r.count_right = int(sY.size());
    log_msg(2, "mirror counts " + std::to_string(r.count_left) + " vs " + std::to_string(r.count_right));
    if (sX.empty() || sY.empty()) {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("solver returned no solutions on one side");
        return r;
    }
    if (sX.size() != sY.size()) {
        r.verdict = Verdict::fail;
        r.notes.push_back("solution counts differ");
        return r;
    }
    std::vector<CVec> PM, PE;
    for (auto& s : sX) PM.push_back(magnetic_observables(X, s));
    for (auto& s : sY) PE.push_back(electric_observables(r.dual, r.right_params, map.order, s));
    const auto m = match_with_constants(PE, PM, opts.tol);
    record(r, m);
    r.verdict = m.ok ? Verdict::pass : Verdict::fail;
    if (!m.ok) r.notes.push_back("momentum multisets do not match under any calibration constant");
    return r;
}

// ---- truncation ----

TruncatedQQ truncate_xkl(int k, int l, const ModelParams& p) {
    TruncatedQQ t;
    t.k = k;
    t.l = l;
    t.quiver = Quiver::xkl(k, l);
    const int n = t.quiver.n();
    t.params = p;
    if (int(p.xi.size()) != n + 1 || int(p.a.size()) != n)
        fail(ErrorKind::InvalidArgument, "parameters do not fit X_{k,l}");
    for (int i = 0; i < k; ++i) t.params.xi[i] = 0.0;
    t.params.xi[n] = 0.0;
    for (cplx& a : t.params.a[n - 1]) a = 0.0;

    for (int i = 1; i < k; ++i) t.dropped.push_back(i);
    for (int i = k; i <= n; ++i)
        t.eqs.push_back({i, t.params.xi[i - 1], t.params.xi[i], poly_from_roots(t.params.a[i - 1])});
    return t;
}

std::vector<double> truncated_residuals(const TruncatedQQ& t, const std::vector<CPoly>& Qplus,
                                        const std::vector<CPoly>& Qminus) {
    const int n = t.quiver.n();
    if (int(Qplus.size()) != n || int(Qminus.size()) != n)
        fail(ErrorKind::InvalidArgument, "need one Q+ and one Q- per node");
    const cplx h = t.params.hbar;
    auto Qp = [&](int i) { return (i < 1 || i > n) ? CPoly::one() : Qplus[i - 1]; };
    std::vector<double> out;
    for (const auto& e : t.eqs) {
        const int i = e.node;
        const CPoly lhs = e.left * (poly_dilate(Qp(i), h) * Qminus[i - 1]) -
                          e.right * (Qp(i) * poly_dilate(Qminus[i - 1], h));
        const CPoly rhs = e.Lambda * poly_dilate(Qp(i - 1), h) * Qp(i + 1);
        out.push_back((lhs - rhs).norm() / std::max(rhs.norm(), 1e-300));
    }
    return out;
}

// ---- periodic reduction ----

double periodic_window_defect(const PeriodicData& d, const CVec& roots, int W) {
    if (int(roots.size()) != d.k) fail(ErrorKind::InvalidArgument, "need k roots");
    const BetheSystem tor = build_adhm(d.k, d.N, d.a, d.xi, d.t, d.hbar);
    const CVec ft = residual(tor, {roots});
    const Quiver strip({d.k, d.k, d.k}, {d.N, d.N, d.N});
    double worst = 0;
    for (int i = -W; i <= W; ++i) {
        ModelParams p;
        p.hbar = d.hbar;
        std::vector<CVec> sr;
        for (int j = i - 1; j <= i + 1; ++j) {
            const cplx sh = std::pow(d.t, -j);
            CVec aj, sj;
            for (cplx a : d.a) aj.push_back(a * sh);
            for (cplx s : roots) sj.push_back(s * sh);
            p.a.push_back(aj);
            sr.push_back(sj);
        }
        for (int j = i - 1; j <= i + 2; ++j) p.xi.push_back(d.xi0 * std::pow(d.xi, j));
        const CVec fc = residual(build_system(strip, p), sr);
        for (int a = 0; a < d.k; ++a) {
            const cplx s = fc[d.k + a] + ft[a];
            worst = std::max(worst, std::abs(cplx(s.real(), std::remainder(s.imag(), 2 * std::numbers::pi))));
        }
    }
    return worst;
}

PeriodicReduction periodic_reduce(const PeriodicData& d, int W, const SolveOptions& opts) {
    if (W < 3) fail(ErrorKind::InvalidArgument, "window needs W >= 3");
    PeriodicReduction red;
    red.W = W;
    red.toroidal = build_adhm(d.k, d.N, d.a, d.xi, d.t, d.hbar);
    SolveOptions o = opts;
    o.expected = int(colored_partition_count(d.N, d.k));
    red.solutions = solve(red.toroidal, o);
    for (const auto& s : red.solutions) red.defect = std::max(red.defect, periodic_window_defect(d, s.roots[0], W));
    // the identity is algebraic, so it must also hold away from solutions
    Rng rng(opts.seed + 7919);
    red.defect = std::max(red.defect, periodic_window_defect(d, rng.generic(d.k), W));
    if (!(red.defect < 1e-8))
        fail(ErrorKind::ReductionInconsistent, "window residual differs from the toroidal one by " +
                                                   std::to_string(red.defect));
    return red;
}

// ---- toroidal self-duality ----

HilbParams HilbParams::random(Rng& rng) {
    HilbParams p;
    p.hbar = rng.hbar();
    p.a = rng.generic();
    p.xi = rng.generic();
    p.t = rng.generic();
    return p;
}

CVec hilb_invariants(const CVec& s, cplx a, cplx t, cplx hbar) {
    cplx px = 1.0, pt = 1.0;
    for (cplx x : s) px *= x / a;
    for (size_t al = 0; al < s.size(); ++al)
        for (size_t be = al + 1; be < s.size(); ++be) {
            const cplx x = s[al], y = s[be];
            pt *= (x - t * y) * (x - y / t) / ((x - hbar * y / t) * (x - t * y / hbar));
        }
    return {px, pt};
}

cplx hilb_k1_root(cplx a, cplx xi, cplx hbar) { return a * (xi - 1.0) / (xi - 1.0 / hbar); }

MirrorReport verify_hilb_selfdual(int k, const HilbParams& p, const VerifyOptions& opts) {
    if (k < 1 || k > 4) fail(ErrorKind::InvalidArgument, "hilb check supports 1 <= k <= 4");
    MirrorReport r;
    r.kind = "hilb";
    r.tol = opts.tol;
    r.quiver = Quiver({k}, {1});
    r.dual = r.quiver;
    r.expected = partition_count(k);
    r.left_params.a = {{p.a}};
    r.left_params.xi = {p.xi, p.t};
    r.left_params.hbar = p.hbar;
    r.right_params.a = {{p.a}};
    r.right_params.xi = {p.t, p.xi};
    r.right_params.hbar = 1.0 / p.hbar;

    const auto A = solve_or_empty(build_adhm(k, 1, {p.a}, p.xi, p.t, p.hbar), solve_opts(opts, int(r.expected)));
    const auto B =
        solve_or_empty(build_adhm(k, 1, {p.a}, p.t, p.xi, 1.0 / p.hbar), solve_opts(opts, int(r.expected)));
    r.count_left = int(A.size());
    r.count_right = int(B.size());
    if (A.empty() || B.empty()) {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("solver returned no solutions on one side");
        return r;
    }
    if (r.count_left != r.expected || r.count_right != r.expected) {
        r.verdict = Verdict::fail;
        r.notes.push_back("solution counts differ from the partition count");
        return r;
    }
    if (k == 1) {
        const double ea = std::abs(A[0].roots[0][0] - hilb_k1_root(p.a, p.xi, p.hbar));
        const double eb = std::abs(B[0].roots[0][0] - hilb_k1_root(p.a, p.t, 1.0 / p.hbar));
        if (std::max(ea, eb) > opts.tol * std::abs(p.a)) {
            r.verdict = Verdict::fail;
            r.notes.push_back("k=1 roots differ from the closed form");
            return r;
        }
    }
    // (p_xi, p_t) on one side against (p_t, p_xi) on the other
    std::vector<CVec> IA, IB;
    for (auto& s : A) IA.push_back(hilb_invariants(s.roots[0], p.a, p.t, p.hbar));
    for (auto& s : B) {
        const CVec v = hilb_invariants(s.roots[0], p.a, p.xi, 1.0 / p.hbar);
        IB.push_back({v[1], v[0]});
    }
    const auto m = match_with_constants(IA, IB, opts.tol);
    record(r, m);
    r.verdict = m.ok ? Verdict::pass : Verdict::fail;
    r.notes.push_back("invariant match is a necessary condition for the algebra isomorphism");
    if (!m.ok) r.notes.push_back("invariants do not match under any calibration constant");
    return r;
}

CyclicParams CyclicParams::random(int N, Rng& rng) {
    CyclicParams p;
    p.hbar = rng.hbar();
    p.a = rng.generic(N);
    p.xi = rng.generic();
    p.t = rng.generic();
    return p;
}

CyclicSide cyclic_param_map(const CyclicParams& p) {
    const int N = int(p.a.size());
    if (N < 1) fail(ErrorKind::InvalidArgument, "need at least one framing parameter");
    CyclicSide c;
    for (int b = 0; b + 1 < N; ++b) c.zeta.push_back(p.a[b + 1] / p.a[b]);
    c.zeta.push_back(p.a[0] / (p.a[N - 1] * p.t));
    c.framing = p.a[0];
    c.c = 1.0 / p.xi;
    c.hbar = 1.0 / p.hbar;
    return c;
}

MirrorReport verify_cyclic(int N, int k, const CyclicParams& p, const VerifyOptions& opts) {
    if (N < 1 || N > 3 || k < 1 || k > 3) fail(ErrorKind::InvalidArgument, "cyclic check supports N, k <= 3");
    if (int(p.a.size()) != N) fail(ErrorKind::InvalidArgument, "need N framing parameters");
    MirrorReport r;
    r.kind = "cyclic";
    r.tol = opts.tol;
    r.quiver = Quiver({k}, {N});
    r.expected = colored_partition_count(N, k);
    const CyclicSide c = cyclic_param_map(p);
    r.dual = build_cyclic(N, k, c.zeta, c.framing, c.c, c.hbar).quiver;
    r.left_params.a = {p.a};
    r.left_params.xi = {p.xi, p.t};
    r.left_params.hbar = p.hbar;
    r.right_params.a = {{c.framing}};
    r.right_params.xi = c.zeta;
    r.right_params.xi.push_back(c.c);
    r.right_params.hbar = c.hbar;

    const auto A = solve_or_empty(build_adhm(k, N, p.a, p.xi, p.t, p.hbar), solve_opts(opts, int(r.expected)));
    const auto B =
        solve_or_empty(build_cyclic(N, k, c.zeta, c.framing, c.c, c.hbar), solve_opts(opts, int(r.expected)));
    r.count_left = int(A.size());
    r.count_right = int(B.size());
    if (A.empty() || B.empty()) {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("solver returned no solutions on one side");
        return r;
    }
    const bool ok = r.count_left == r.expected && r.count_right == r.expected;
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    if (!ok) r.notes.push_back("solution counts differ from the colored partition count");
    return r;
}

}  // namespace qmirror
