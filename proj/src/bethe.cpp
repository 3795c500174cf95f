#include "qmirror/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmirror/log.hpp"

namespace qmirror {

void ModelParams::check(const Quiver& q) const {
    if (int(a.size()) != q.n()) fail(ErrorKind::InvalidArgument, "need one framing list per node");
    for (int i = 0; i < q.n(); ++i)
        if (int(a[i].size()) != q.w[i])
            fail(ErrorKind::InvalidArgument, "framing list size differs from w at node " + std::to_string(i + 1));
    if (int(xi.size()) != q.n() + 1) fail(ErrorKind::InvalidArgument, "need n+1 twist entries");
    if (hbar == cplx(0.0)) fail(ErrorKind::InvalidArgument, "hbar is zero");
    for (cplx x : xi)
        if (x == cplx(0.0)) fail(ErrorKind::InvalidArgument, "twist entry is zero");
}

ModelParams ModelParams::random(const Quiver& q, Rng& rng) {
    ModelParams p;
    p.hbar = rng.hbar();
    for (int wi : q.w) p.a.push_back(rng.generic(wi));
    p.xi = rng.generic(q.n() + 1);
    return p;
}

int BetheSystem::unknowns() const {
    int s = 0;
    for (int g : groups) s += g;
    return s;
}

CVec BetheSolution::flat() const {
    CVec f;
    for (auto& r : roots) f.insert(f.end(), r.begin(), r.end());
    return f;
}

// ---- builders ----

namespace {

std::vector<int> offsets(const std::vector<int>& groups) {
    std::vector<int> off(groups.size() + 1, 0);
    for (size_t i = 0; i < groups.size(); ++i) off[i + 1] = off[i] + int(groups[i]);
    return off;
}

void push_pair(std::vector<LogTerm>& T, cplx a_plus, cplx a_minus, int var, cplx beta) {
    T.push_back({+1.0, a_plus, var, beta});
    T.push_back({-1.0, a_minus, var, beta});
}

}  // namespace

BetheSystem build_system(const Quiver& q, const ModelParams& p) {
    p.check(q);
    BetheSystem sys;
    sys.kind = SystemKind::finite_Ar;
    sys.quiver = q;
    sys.params = p;
    sys.groups = q.v;
    for (auto& ai : p.a) sys.theta.insert(sys.theta.end(), ai.begin(), ai.end());
    sys.theta.insert(sys.theta.end(), p.xi.begin(), p.xi.end());
    const cplx h = p.hbar;
    const auto off = offsets(q.v);
    sys.builder = [q, h, off](const CVec& th) {
        const int n = q.n();
        std::vector<CVec> a(n);
        size_t c = 0;
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < q.w[i]; ++m) a[i].push_back(th[c++]);
        CVec xi(th.begin() + c, th.end());
        std::vector<LogEquation> eqs;
        eqs.reserve(off.back());
        for (int i = 1; i <= n; ++i) {
            for (int k = 0; k < q.vv(i); ++k) {
                LogEquation e;
                e.self = off[i - 1] + k;
                e.terms.reserve(2 * (q.vv(i) - 1 + q.w[i - 1] + q.vv(i - 1) + q.vv(i + 1)));
                // the self pair of Q_i(h s)/Q_i(s/h) contributes -h, cancelling the -1
                e.constant = std::log(xi[i - 1] / xi[i] * h);
                for (int kk = 0; kk < q.vv(i); ++kk)
                    if (kk != k) push_pair(e.terms, h, 1.0 / h, off[i - 1] + kk, 1.0);
                for (cplx av : a[i - 1]) push_pair(e.terms, 1.0 / h, 1.0, -1, av);
                if (i > 1)
                    for (int kk = 0; kk < q.vv(i - 1); ++kk) push_pair(e.terms, 1.0, h, off[i - 2] + kk, 1.0);
                if (i < n)
                    for (int kk = 0; kk < q.vv(i + 1); ++kk) push_pair(e.terms, 1.0 / h, 1.0, off[i] + kk, 1.0);
                eqs.push_back(std::move(e));
            }
        }
        return eqs;
    };
    sys.eqs = sys.builder(sys.theta);
    return sys;
}

BetheSystem build_adhm(int k, int N, const CVec& a, cplx xi, cplx t, cplx hbar) {
    if (k < 1 || N < 1 || int(a.size()) != N)
        fail(ErrorKind::InvalidArgument, "build_adhm needs k >= 1, N >= 1 and N framing parameters");
    BetheSystem sys;
    sys.kind = SystemKind::toroidal;
    sys.quiver = Quiver({k}, {N});
    sys.k = k;
    sys.N = N;
    sys.t = t;
    sys.xi1 = xi;
    sys.params.a = {a};
    sys.params.xi = {xi};
    sys.params.hbar = hbar;
    sys.groups = {k};
    sys.theta = a;
    sys.theta.push_back(xi);
    sys.theta.push_back(t);
    sys.start_log_lo = -3;
    sys.start_log_hi = 3;
    const cplx h = hbar;
    sys.builder = [k, N, h](const CVec& th) {
        const cplx xi = th[N], t = th[N + 1];
        std::vector<LogEquation> eqs;
        for (int al = 0; al < k; ++al) {
            LogEquation e;
            e.self = al;
            e.constant = std::log(xi);
            for (int l = 0; l < N; ++l) push_pair(e.terms, 1.0, 1.0 / h, -1, th[l]);
            for (int b = 0; b < k; ++b) {
                if (b == al) continue;
                push_pair(e.terms, t, 1.0 / t, b, 1.0);
                push_pair(e.terms, 1.0 / h, h, b, 1.0);
                push_pair(e.terms, h / t, t / h, b, 1.0);
            }
            eqs.push_back(std::move(e));
        }
        return eqs;
    };
    sys.eqs = sys.builder(sys.theta);
    return sys;
}

BetheSystem build_cyclic(int N, int k, const CVec& zeta, cplx framing, cplx c, cplx hbar) {
    if (N < 1 || k < 1 || int(zeta.size()) != N)
        fail(ErrorKind::InvalidArgument, "build_cyclic needs N twists");
    BetheSystem sys;
    sys.kind = SystemKind::cyclic;
    sys.quiver = Quiver(std::vector<int>(N, k), std::vector<int>(N, 0));
    sys.quiver.w[0] = 1;
    sys.k = k;
    sys.N = N;
    sys.params.hbar = hbar;
    sys.groups = std::vector<int>(N, k);
    sys.theta = zeta;
    sys.theta.push_back(framing);
    sys.theta.push_back(c);
    sys.start_log_lo = -3;
    sys.start_log_hi = 3;
    const cplx h = hbar;
    sys.builder = [N, k, h](const CVec& th) {
        const cplx fr = th[N], c = th[N + 1];
        std::vector<LogEquation> eqs;
        for (int i = 0; i < N; ++i) {
            const int lo = (i + N - 1) % N, up = (i + 1) % N;
            const cplx blo = (i == 0) ? 1.0 / c : cplx(1.0);
            const cplx bup = (i == N - 1) ? c : cplx(1.0);
            for (int r = 0; r < k; ++r) {
                LogEquation e;
                e.self = i * k + r;
                e.constant = std::log(th[i] * h);
                for (int rr = 0; rr < k; ++rr)
                    if (rr != r) push_pair(e.terms, h, 1.0 / h, i * k + rr, 1.0);
                if (i == 0) push_pair(e.terms, 1.0 / h, 1.0, -1, fr);
                for (int rr = 0; rr < k; ++rr) push_pair(e.terms, 1.0, h, lo * k + rr, blo);
                for (int rr = 0; rr < k; ++rr) push_pair(e.terms, 1.0 / h, 1.0, up * k + rr, bup);
                eqs.push_back(std::move(e));
            }
        }
        return eqs;
    };
    sys.eqs = sys.builder(sys.theta);
    return sys;
}

// ---- evaluation ----

namespace {

inline cplx wrap(cplx f) { return {f.real(), std::remainder(f.imag(), 2 * std::numbers::pi)}; }

// F and (optionally) J in log coordinates; false when a factor is within
// pole_guard (relative) of zero.
bool evaluate(const std::vector<LogEquation>& eqs, const CVector& x, CVector& F, CMatrix* J,
              double pole_guard, std::string* which = nullptr) {
    const int m = int(x.size());
    CVector s = x.array().exp();
    F.resize(eqs.size());
    if (J) J->setZero(eqs.size(), m);
    for (size_t r = 0; r < eqs.size(); ++r) {
        const auto& e = eqs[r];
        // one log per equation: F is only defined mod 2 pi i anyway
        double scale = 0;
        cplx prod = 1;
        const cplx ss = s[e.self];
        for (const auto& t : e.terms) {
            const cplx u = t.alpha * ss;
            const cplx v = t.var >= 0 ? t.beta * s[t.var] : t.beta;
            const cplx d = u - v;
            if (std::abs(d) <= pole_guard * std::max(std::abs(u), std::abs(v))) {
                if (which)
                    *which = "equation " + std::to_string(r) + (t.var >= 0 ? ", root factor with unknown " + std::to_string(t.var)
                                                                          : std::string(", framing factor"));
                return false;
            }
            prod = t.sigma > 0 ? prod * d : prod / d;
            const double mag = std::abs(prod);
            if (mag > 1e100 || mag < 1e-100) {
                scale += std::log(mag);
                prod /= mag;
            }
            if (J) {
                (*J)(r, e.self) += t.sigma * u / d;
                if (t.var >= 0) (*J)(r, t.var) -= t.sigma * v / d;
            }
        }
        F[r] = wrap(e.constant + scale + std::log(prod));
    }
    for (int i = 0; i < F.size(); ++i)
        if (!std::isfinite(F[i].real()) || !std::isfinite(F[i].imag())) return false;
    return true;
}

bool collided(const std::vector<int>& groups, const CVector& x, double rel) {
    int off = 0;
    for (int g : groups) {
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < i; ++j) {
                cplx a = std::exp(x[off + i]), b = std::exp(x[off + j]);
                if (std::abs(a - b) < rel * std::max(std::abs(a), std::abs(b))) return true;
            }
        off += g;
    }
    return false;
}

bool separate(const std::vector<int>& groups, CVector& x, double rel, int salt) {
    bool moved = false;
    int off = 0;
    for (int g : groups) {
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < i; ++j) {
                cplx a = std::exp(x[off + i]), b = std::exp(x[off + j]);
                if (std::abs(a - b) < rel * std::max(std::abs(a), std::abs(b))) {
                    const double phase = 2.399963 * (i + 3 * salt);  // golden angle
                    x[off + i] += 0.3 * cplx(std::cos(phase), std::sin(phase));
                    moved = true;
                }
            }
        off += g;
    }
    return moved;
}

bool escaped(const CVector& x) {
    for (int i = 0; i < x.size(); ++i)
        if (std::abs(x[i].real()) > 18 || !std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) return true;
    return false;
}

// |e^F - 1| does not jump when a log term changes branch, unlike |F|.
double merit(const CVector& F) {
    double m = 0;
    for (int i = 0; i < F.size(); ++i) m += std::norm(std::exp(F[i]) - 1.0);
    return std::sqrt(m);
}

// Damped Newton with backtracking on the merit above.
bool newton(const std::vector<LogEquation>& eqs, const std::vector<int>& groups, CVector& x, double tol,
            int max_iter) {
    CVector F, Fn;
    CMatrix J, Jn;
    if (!evaluate(eqs, x, F, &J, 1e-10)) return false;
    int pushes = 0;
    for (int it = 0; it < max_iter; ++it) {
        if (F.norm() < 1e-2 * tol) break;
        const double nf = merit(F);
        Eigen::PartialPivLU<CMatrix> lu(J);
        CVector step = lu.solve(-F);
        if (!step.allFinite()) return false;
        double lam = 1;
        bool moved = false;
        CVector xn;
        for (int b = 0; b < 30; ++b) {
            xn = x + lam * step;
            if (!escaped(xn) && evaluate(eqs, xn, Fn, &Jn, 1e-10) && merit(Fn) < nf) {
                moved = true;
                break;
            }
            lam /= 2;
        }
        if (!moved) break;
        x = xn;
        F = Fn;
        J = Jn;
        // coincident roots on one node solve the log form spuriously; push
        // them apart a few times before giving up on this start
        if (collided(groups, x, 1e-3)) {
            if (pushes++ >= 4 || !separate(groups, x, 1e-3, pushes)) return false;
            if (!evaluate(eqs, x, F, &J, 1e-10)) return false;
        }
    }
    return F.cwiseAbs().maxCoeff() < tol;
}

// Plain Newton corrector used while tracking.
bool correct(const std::vector<LogEquation>& eqs, CVector& x, int iters, double tol) {
    CVector F;
    CMatrix J;
    for (int it = 0; it < iters; ++it) {
        if (!evaluate(eqs, x, F, &J, 1e-12)) return false;
        if (F.norm() < tol) return true;
        Eigen::PartialPivLU<CMatrix> lu(J);
        CVector step = lu.solve(-F);
        if (!step.allFinite()) return false;
        x += step;
        if (escaped(x)) return false;
    }
    if (!evaluate(eqs, x, F, nullptr, 1e-12)) return false;
    return F.norm() < tol;
}

bool track(const EquationBuilder& builder, const CVec& ta, const CVec& tb, CVector& x) {
    double tau = 0, dt = 0.05;
    CVec th(ta.size());
    CVector velocity = CVector::Zero(x.size());  // secant estimate of dx/dtau
    while (tau < 1) {
        double tn = std::min(1.0, tau + dt);
        for (size_t i = 0; i < ta.size(); ++i) th[i] = (1 - tn) * ta[i] + tn * tb[i];
        CVector y = x + (tn - tau) * velocity;
        bool ok = correct(builder(th), y, tn < 1 ? 4 : 20, 1e-11);
        if (!ok || (y - x).norm() > 0.3) {
            dt /= 2;
            if (dt < 1e-6) return false;
            continue;
        }
        velocity = (y - x) / (tn - tau);
        x = y;
        tau = tn;
        dt = std::min(0.25, dt * 1.5);
    }
    return true;
}

}  // namespace

std::vector<CVec> split_roots(const BetheSystem& sys, const CVec& flat) {
    std::vector<CVec> r;
    size_t c = 0;
    for (int g : sys.groups) {
        r.emplace_back(flat.begin() + c, flat.begin() + c + g);
        c += g;
    }
    return r;
}

std::vector<CVec> canonical_roots(std::vector<CVec> roots) {
    for (auto& r : roots) std::sort(r.begin(), r.end(), lex_less);
    return roots;
}

CVec residual(const BetheSystem& sys, const std::vector<CVec>& roots) {
    if (roots.size() != sys.groups.size()) fail(ErrorKind::InvalidArgument, "root groups differ from system");
    CVec flat;
    for (size_t i = 0; i < roots.size(); ++i) {
        if (int(roots[i].size()) != sys.groups[i]) fail(ErrorKind::InvalidArgument, "root count differs at node");
        flat.insert(flat.end(), roots[i].begin(), roots[i].end());
    }
    CVector x(flat.size());
    for (size_t i = 0; i < flat.size(); ++i) {
        if (flat[i] == cplx(0.0)) fail(ErrorKind::PoleEncountered, "root at zero");
        x[i] = std::log(flat[i]);
    }
    CVector F;
    std::string which;
    if (!evaluate(sys.eqs, x, F, nullptr, 0.0, &which)) fail(ErrorKind::PoleEncountered, which);
    return CVec(F.data(), F.data() + F.size());
}

double residual_norm(const BetheSystem& sys, const std::vector<CVec>& roots) {
    double m = 0;
    for (cplx z : residual(sys, roots)) m = std::max(m, std::abs(z));
    return m;
}

namespace {

// Product form of every equation; guards against branch artefacts of the log form.
double cleared_defect(const std::vector<LogEquation>& eqs, const CVector& x) {
    CVector s = x.array().exp();
    double worst = 0;
    for (const auto& e : eqs) {
        cplx prod = std::exp(e.constant);
        for (const auto& t : e.terms) {
            cplx d = t.alpha * s[e.self] - (t.var >= 0 ? t.beta * s[t.var] : t.beta);
            prod *= t.sigma > 0 ? d : 1.0 / d;
        }
        worst = std::max(worst, std::abs(prod - 1.0));
    }
    return worst;
}

struct Pool {
    const BetheSystem& sys;
    double dedup;
    std::vector<CVector> xs;
    std::vector<CVec> keys;

    bool add(const CVector& x) {
        CVec flat(x.size());
        for (int i = 0; i < x.size(); ++i) flat[i] = std::exp(x[i]);
        auto can = canonical_roots(split_roots(sys, flat));
        CVec key;
        for (auto& r : can) key.insert(key.end(), r.begin(), r.end());
        double nk = 0;
        for (auto z : key) nk += std::norm(z);
        nk = std::sqrt(nk);
        for (auto& k2 : keys) {
            double d = 0;
            for (size_t i = 0; i < key.size(); ++i) d += std::norm(key[i] - k2[i]);
            if (std::sqrt(d) < dedup * nk) return false;
        }
        xs.push_back(x);
        keys.push_back(key);
        return true;
    }
};

}  // namespace

std::vector<BetheSolution> solve(const BetheSystem& sys, const SolveOptions& opts) {
    if (opts.starts < 1) fail(ErrorKind::InvalidArgument, "starts must be >= 1");
    const int m = sys.unknowns();
    Rng rng(opts.seed);
    Pool pool{sys, opts.dedup_tol, {}, {}};

    auto good = [&](CVector& x) {
        if (!newton(sys.eqs, sys.groups, x, opts.newton_tol, opts.max_iter)) return false;
        if (collided(sys.groups, x, 1e-6)) return false;
        return cleared_defect(sys.eqs, x) < 1e-8;
    };

    if (m == 0) {
        BetheSolution s;
        s.roots = std::vector<CVec>(sys.groups.size());
        s.canonical = true;
        return {s};
    }

    for (int st = 0; st < opts.starts; ++st) {
        CVector x(m);
        for (int i = 0; i < m; ++i)
            x[i] = cplx(rng.uniform(sys.start_log_lo, sys.start_log_hi), rng.uniform(0, 2 * std::numbers::pi));
        if (good(x)) pool.add(x);
    }
    log_msg(2, "solve: " + std::to_string(pool.xs.size()) + " solutions from " + std::to_string(opts.starts) + " starts");

    if (opts.monodromy && !pool.xs.empty() && sys.builder) {
        int stale = 0, loops = 0;
        // a known census keeps the loops going longer before giving up
        const int patience = opts.expected > 0 ? std::max(opts.stale_loops, opts.stale_loops_target) : opts.stale_loops;
        while (stale < patience && loops < opts.max_loops &&
               (opts.expected < 0 || int(pool.xs.size()) < opts.expected)) {
            ++loops;
            CVec p1 = rng.generic(int(sys.theta.size())), p2 = rng.generic(int(sys.theta.size()));
            int fresh = 0;
            const size_t known = pool.xs.size();
            for (size_t j = 0; j < known; ++j) {
                CVector y = pool.xs[j];
                if (!track(sys.builder, sys.theta, p1, y)) continue;
                if (!track(sys.builder, p1, p2, y)) continue;
                if (!track(sys.builder, p2, sys.theta, y)) continue;
                if (!good(y)) continue;
                fresh += pool.add(y);
            }
            stale = fresh ? 0 : stale + 1;
            log_msg(2, "monodromy loop " + std::to_string(loops) + ": " + std::to_string(pool.xs.size()));
        }
    }
    if (pool.xs.empty()) fail(ErrorKind::EmptyResult, "no solutions found");

    std::vector<BetheSolution> out;
    for (auto& x : pool.xs) {
        CVec flat(m);
        for (int i = 0; i < m; ++i) flat[i] = std::exp(x[i]);
        BetheSolution s;
        s.roots = canonical_roots(split_roots(sys, flat));
        s.canonical = true;
        s.residual = residual_norm(sys, s.roots);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const BetheSolution& a, const BetheSolution& b) {
        CVec fa = a.flat(), fb = b.flat();
        return std::lexicographical_compare(fa.begin(), fa.end(), fb.begin(), fb.end(), lex_less);
    });
    return out;
}

// ---- counts ----

long partition_count(int k) { return colored_partition_count(1, k); }

long colored_partition_count(int N, int k) {
    if (k < 0 || N < 0) return 0;
    // coefficients of prod_m (1 - q^m)^{-N}
    std::vector<long> c(k + 1, 0);
    c[0] = 1;
    for (int col = 0; col < N; ++col)
        for (int m = 1; m <= k; ++m)
            for (int j = m; j <= k; ++j) c[j] += c[j - m];
    return c[k];
}

long expected_count(const Family& f) {
    switch (f.kind) {
    case Family::full_flag: {
        long r = 1;
        for (int i = 2; i <= f.a; ++i) r *= i;
        return r;
    }
    case Family::grassmannian: {
        long r = 1;
        for (int i = 1; i <= f.a; ++i) r = r * (f.b - f.a + i) / i;
        return r;
    }
    case Family::hilb: return partition_count(f.a);
    case Family::adhm: return colored_partition_count(f.a, f.b);
    default: break;
    }
    fail(ErrorKind::Unsupported, "family without a closed-form count");
}

}  // namespace qmirror
