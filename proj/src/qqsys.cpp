#include "qmirror/qqsys.hpp"

#include <algorithm>
#include <cmath>

#include "qmirror/branes.hpp"

namespace qmirror {

CPoly QQData::Qp(int i) const { return (i >= 1 && i <= n()) ? Qplus[i - 1] : CPoly::one(); }

CPoly QQData::Lambda(int i) const {
    return (i >= 1 && i <= n()) ? poly_from_roots(params.a[i - 1]) : CPoly::one();
}

double QQData::max_residual() const {
    double m = 0;
    for (double r : residuals) m = std::max(m, r);
    return m;
}

PolySolve solve_linear_poly(const std::function<CPoly(const CPoly&)>& op, int d, const CPoly& rhs) {
    if (d < 0) fail(ErrorKind::NotRealizable, "negative target degree");
    std::vector<CPoly> cols;
    int rows = rhs.degree() + 1;
    for (int k = 0; k <= d; ++k) {
        cols.push_back(op(CPoly::monomial(k)));
        rows = std::max(rows, cols.back().degree() + 1);
    }
    CMatrix A = CMatrix::Zero(rows, d + 1);
    CVector b = CVector::Zero(rows);
    for (int k = 0; k <= d; ++k)
        for (int r = 0; r <= cols[k].degree(); ++r) A(r, k) = cols[k].coeff(r);
    for (int r = 0; r <= rhs.degree(); ++r) b[r] = rhs.coeff(r);
    Lstsq ls = lstsq_solve(A, b);
    PolySolve out;
    out.poly = CPoly(CVec(ls.x.data(), ls.x.data() + ls.x.size()));
    out.residual = ls.residual / std::max(b.norm(), 1e-300);
    return out;
}

PolySolve solve_qminus(const std::vector<CPoly>& Qplus, const Quiver& q, const ModelParams& p, int i) {
    const int n = q.n();
    auto Q = [&](int j) { return (j >= 1 && j <= n) ? Qplus[j - 1] : CPoly::one(); };
    const cplx h = p.hbar;
    CPoly rhs = poly_from_roots(p.a[i - 1]) * poly_dilate(Q(i - 1), h) * Q(i + 1);
    const int d = q.ww(i) + q.vv(i - 1) + q.vv(i + 1) - q.vv(i);
    if (d < 0) fail(ErrorKind::NotRealizable, "Q^- degree is negative at node " + std::to_string(i));
    CPoly Qi = Q(i), Qih = poly_dilate(Q(i), h);
    cplx xl = p.xi[i - 1], xr = p.xi[i];
    return solve_linear_poly([&](const CPoly& m) { return Qih * m * xl - Qi * poly_dilate(m, h) * xr; }, d, rhs);
}

QQData qq_from_roots(const Quiver& q, const ModelParams& p, const std::vector<CVec>& roots) {
    p.check(q);
    if (int(roots.size()) != q.n()) fail(ErrorKind::InvalidArgument, "root lists differ from node count");
    QQData d;
    d.quiver = q;
    d.params = p;
    for (int i = 0; i < q.n(); ++i) d.Qplus.push_back(poly_from_roots(roots[i]));
    for (int i = 1; i <= q.n(); ++i) {
        PolySolve s = solve_qminus(d.Qplus, q, p, i);
        d.Qminus.push_back(s.poly);
        d.residuals.push_back(s.residual);
    }
    return d;
}

QQData qq_from_solution(const BetheSystem& sys, const BetheSolution& sol) {
    if (sys.kind != SystemKind::finite_Ar) fail(ErrorKind::Unsupported, "QQ data needs a finite A_r system");
    return qq_from_roots(sys.quiver, sys.params, sol.roots);
}

QQData extend_chain(QQData d, double tol) {
    const int n = d.n();
    const cplx h = d.params.hbar;
    const auto& q = d.quiver;
    d.chain.clear();
    for (int i = 1; i <= n; ++i) {
        if (d.residuals[i - 1] > tol)
            fail(ErrorKind::ChainInconsistent, "QQ relation fails at node " + std::to_string(i));
        d.chain[{i, i}] = d.Qminus[i - 1];
    }
    for (int i = 1; i <= n; ++i) {
        int wsum = q.ww(i);
        for (int j = i + 1; j <= n; ++j) {
            wsum += q.ww(j);
            const int predicted = wsum + q.vv(i - 1) + q.vv(j + 1) - q.vv(i);
            CPoly rhs = d.Lambda(j) * poly_dilate(d.chain[{i, j - 1}], h) * d.Qp(j + 1);
            const int deg = rhs.degree() - q.vv(j);
            if (deg != predicted || deg < 0)
                fail(ErrorKind::ChainInconsistent, "degree drift at level (" + std::to_string(i) + "," +
                                                       std::to_string(j) + ")");
            CPoly Qj = d.Qp(j), Qjh = poly_dilate(d.Qp(j), h);
            cplx xl = d.params.xi[i - 1], xr = d.params.xi[j];
            PolySolve s = solve_linear_poly(
                [&](const CPoly& m) { return Qjh * m * xl - Qj * poly_dilate(m, h) * xr; }, deg, rhs);
            if (s.residual > tol)
                fail(ErrorKind::ChainInconsistent,
                     "chain residual " + std::to_string(s.residual) + " at level (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
            d.chain[{i, j}] = s.poly;
        }
    }
    d.section.clear();
    for (int k = 1; k <= n; ++k) d.section.push_back(d.chain[{k, n}]);
    d.section.push_back(d.Qp(n));
    auto rho = section_degrees(q);
    for (int k = 0; k <= n; ++k)
        if (d.section[k].degree() != rho[k])
            fail(ErrorKind::ChainInconsistent, "section degree mismatch at s_" + std::to_string(k + 1));
    return d;
}

QQData backlund_qq(const QQData& d, int i) {
    if (i < 1 || i > d.n()) fail(ErrorKind::InvalidArgument, "node index out of range");
    QQData r = d;
    r.quiver = backlund_labels(d.quiver, i);
    std::swap(r.params.xi[i - 1], r.params.xi[i]);
    const CPoly& qm = d.Qminus[i - 1];
    if (qm.is_zero()) fail(ErrorKind::Degenerate, "Q^- vanishes");
    r.Qplus[i - 1] = qm.monic();
    r.Qminus[i - 1] = d.Qplus[i - 1] * (-qm.lead());
    CVec roots = r.Qplus[i - 1].degree() > 0 ? poly_roots(r.Qplus[i - 1]) : CVec{};
    for (size_t a = 0; a < roots.size(); ++a) {
        if (std::abs(roots[a]) < 1e-12) fail(ErrorKind::Degenerate, "transformed root at zero");
        for (size_t b = 0; b < a; ++b)
            if (std::abs(roots[a] - roots[b]) < 1e-8 * std::abs(roots[a]))
                fail(ErrorKind::Degenerate, "transformed Q^+ has a repeated root");
    }
    r.residuals.assign(d.n(), 0.0);
    for (int j = 1; j <= d.n(); ++j) {
        if (j == i) continue;
        PolySolve s = solve_qminus(r.Qplus, r.quiver, r.params, j);
        r.residuals[j - 1] = s.residual;
        if (std::abs(j - i) == 1) r.Qminus[j - 1] = s.poly;
    }
    // node i itself: the relation is inherited, recompute the defect for the record
    {
        CPoly Qi = r.Qplus[i - 1], Qm = r.Qminus[i - 1];
        const cplx h = r.params.hbar;
        CPoly lhs = poly_dilate(Qi, h) * Qm * r.params.xi[i - 1] - Qi * poly_dilate(Qm, h) * r.params.xi[i];
        CPoly rhs = r.Lambda(i) * poly_dilate(r.Qp(i - 1), h) * r.Qp(i + 1);
        r.residuals[i - 1] = (lhs - rhs).norm() / std::max(rhs.norm(), 1e-300);
    }
    r.chain.clear();
    r.section.clear();
    return r;
}

CPoly poly_det(const std::vector<std::vector<CPoly>>& M) {
    const size_t k = M.size();
    if (k == 0) return CPoly::one();
    if (k == 1) return M[0][0];
    CPoly tot;
    for (size_t c = 0; c < k; ++c) {
        std::vector<std::vector<CPoly>> minor;
        for (size_t r = 1; r < k; ++r) {
            std::vector<CPoly> row;
            for (size_t cc = 0; cc < k; ++cc)
                if (cc != c) row.push_back(M[r][cc]);
            minor.push_back(std::move(row));
        }
        CPoly term = M[0][c] * poly_det(minor);
        tot = (c % 2 == 0) ? tot + term : tot - term;
    }
    return tot;
}

CPoly wronskian_W(const Quiver& q, const ModelParams& p, int k) {
    const int n = q.n();
    auto Lam = [&](int i) { return (i >= 1 && i <= n) ? poly_from_roots(p.a[i - 1]) : CPoly::one(); };
    CPoly W = CPoly::one();
    CPoly P = CPoly::one();
    cplx hp = 1.0;
    for (int j = 1; j <= k - 1; ++j) {
        P = P * Lam(n - j + 1);
        W = W * poly_dilate(P, hp);
        hp *= p.hbar;
    }
    return W;
}

WronskianResult wronskian_extract(const std::vector<CPoly>& section, const Quiver& q, const ModelParams& p,
                                  int k) {
    const int R = int(section.size());
    if (k < 0 || k > R) fail(ErrorKind::InvalidArgument, "Wronskian size out of range");
    WronskianResult out;
    if (k == 0) {
        out.V = CPoly::one();
        out.alpha = 1.0;
        return out;
    }
    const cplx h = p.hbar;
    std::vector<std::vector<CPoly>> M(k, std::vector<CPoly>(k));
    for (int i = 1; i <= k; ++i) {
        const int idx = R - k + i;
        for (int j = 1; j <= k; ++j)
            M[i - 1][j - 1] = poly_dilate(section[idx - 1], std::pow(h, j - 1)) * std::pow(p.xi[idx - 1], k - j);
    }
    CPoly D = poly_det(M);
    CPoly W = wronskian_W(q, p, k);
    PolyDiv dv = poly_divmod(D, W);
    out.remainder = dv.rem.norm() / std::max(D.norm(), 1e-300);
    if (out.remainder > 1e-8) fail(ErrorKind::WronskianMismatch, "W_k does not divide the Wronskian minor");
    // quotient = alpha * V(h^{k-1} z) with V monic
    CPoly und = poly_dilate(dv.quot, std::pow(h, -(k - 1)));
    out.alpha = und.lead();
    out.V = und.monic();
    return out;
}

DDData dd_scale(const QQData& d, double tol) {
    const int n = d.n();
    const cplx h = d.params.hbar;
    DDData dd;
    // F_i(z) = W_{n+1-i}(h^{-(n-i)} z)
    for (int i = 0; i <= n + 1; ++i)
        dd.F.push_back(i == n + 1 ? CPoly::one()
                                  : poly_dilate(wronskian_W(d.quiver, d.params, n + 1 - i), std::pow(h, -(n - i))));
    for (int i = 1; i <= n; ++i) {
        CPoly lhs = dd.F[i] * poly_dilate(dd.F[i], h) * d.Lambda(i);
        CPoly rhs = poly_dilate(dd.F[i - 1], h) * dd.F[i + 1];
        if (lhs.degree() != rhs.degree()) fail(ErrorKind::DDInconsistent, "F multipliers have mismatched degrees");
        cplx kap = lhs.lead() / rhs.lead();
        if ((lhs - rhs * kap).norm() > tol * lhs.norm())
            fail(ErrorKind::DDInconsistent, "F relation fails at node " + std::to_string(i));
        dd.kappa.push_back(kap);
    }
    for (int i = 1; i <= n; ++i) {
        cplx c = (d.params.xi[i - 1] - d.params.xi[i]) / dd.kappa[i - 1];
        dd.Dplus.push_back(d.Qplus[i - 1] * dd.F[i]);
        dd.Dminus.push_back(d.Qminus[i - 1] * dd.F[i] * c);
    }
    auto Dp = [&](int i) { return (i >= 1 && i <= n) ? dd.Dplus[i - 1] : dd.F[i]; };
    for (int i = 1; i <= n; ++i) {
        const cplx xl = d.params.xi[i - 1], xr = d.params.xi[i];
        CPoly lhs = poly_dilate(Dp(i), h) * dd.Dminus[i - 1] * xl - Dp(i) * poly_dilate(dd.Dminus[i - 1], h) * xr;
        CPoly rhs = poly_dilate(Dp(i - 1), h) * Dp(i + 1) * (xl - xr);
        double r = (lhs - rhs).norm() / std::max(rhs.norm(), 1e-300);
        dd.residuals.push_back(r);
        if (r > tol) fail(ErrorKind::DDInconsistent, "DD relation fails at node " + std::to_string(i));
    }
    return dd;
}

CPoly qwronskian(const std::vector<CPoly>& f, const CVec& g, cplx h) {
    const size_t k = f.size();
    if (g.size() != k) fail(ErrorKind::InvalidArgument, "one gamma per polynomial");
    std::vector<std::vector<CPoly>> M(k, std::vector<CPoly>(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) M[i][j] = poly_dilate(f[i], std::pow(h, double(j))) * std::pow(g[i], double(j));
    return poly_det(M);
}

std::vector<CPoly> reconstruct_polys(const CPoly& g, const CVec& gammas, const std::vector<CPoly>& seeds, cplx h) {
    const size_t k = gammas.size();
    if (seeds.size() + 1 != k) fail(ErrorKind::InvalidArgument, "need k-1 seed polynomials");
    for (auto& s : seeds)
        if (std::abs(s(0.0)) < 1e-14 * std::max(1.0, s.norm()))
            fail(ErrorKind::InvalidArgument, "seed polynomial vanishes at 0");
    const cplx gk = gammas[k - 1];
    for (size_t j = 0; j + 1 < k; ++j) {
        cplx r = gammas[j] / gk;
        cplx p = 1.0;
        for (int m = 0; m <= 64; ++m) {
            if (std::abs(r - p) < 1e-8 * std::abs(p)) fail(ErrorKind::IllConditioned, "gamma ratio lies in h^N");
            p *= h;
        }
    }
    int dk = g.degree();
    for (auto& s : seeds) dk -= s.degree();
    if (dk < 0) fail(ErrorKind::InvalidArgument, "g has too small a degree for these seeds");
    auto op = [&](const CPoly& m) {
        std::vector<CPoly> f = seeds;
        f.push_back(m);
        return qwronskian(f, gammas, h);
    };
    PolySolve s = solve_linear_poly(op, dk, g);
    if (s.residual > 1e-8) fail(ErrorKind::IllConditioned, "no polynomial completes the determinant");
    std::vector<CPoly> out = seeds;
    out.push_back(s.poly);
    return out;
}

}  // namespace qmirror
