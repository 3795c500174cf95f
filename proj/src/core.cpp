#include "qmirror/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qmirror {

const char* error_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidQuiver: return "InvalidQuiver";
    case ErrorKind::NotRealizable: return "NotRealizable";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::PoleEncountered: return "PoleEncountered";
    case ErrorKind::EmptyResult: return "EmptyResult";
    case ErrorKind::ChainInconsistent: return "ChainInconsistent";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::WronskianMismatch: return "WronskianMismatch";
    case ErrorKind::DDInconsistent: return "DDInconsistent";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::CoordinateCollision: return "CoordinateCollision";
    case ErrorKind::DegenerateZero: return "DegenerateZero";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::NotPartialFlagOrder: return "NotPartialFlagOrder";
    case ErrorKind::CalibrationFailed: return "CalibrationFailed";
    case ErrorKind::InvalidPattern: return "InvalidPattern";
    case ErrorKind::MapShapeError: return "MapShapeError";
    case ErrorKind::ReductionInconsistent: return "ReductionInconsistent";
    }
    return "Error";
}

// ---- CPoly ----

CPoly::CPoly(CVec coeffs) : c_(std::move(coeffs)) {
    double m = 0;
    for (auto& z : c_) m = std::max(m, std::abs(z));
    while (!c_.empty() && std::abs(c_.back()) <= kTrimTol * m) c_.pop_back();
    if (m == 0) c_.clear();
}

CPoly CPoly::monomial(int k, cplx c) {
    CVec v(k + 1, 0.0);
    v[k] = c;
    return CPoly(std::move(v));
}

cplx CPoly::operator()(cplx z) const {
    cplx r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
    return r;
}

CPoly CPoly::derivative() const {
    if (c_.size() <= 1) return {};
    CVec d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * double(k);
    return CPoly(std::move(d));
}

CPoly CPoly::monic() const {
    if (is_zero()) fail(ErrorKind::InvalidArgument, "monic of zero polynomial");
    return *this * (1.0 / lead());
}

double CPoly::norm() const {
    double s = 0;
    for (auto& z : c_) s += std::norm(z);
    return std::sqrt(s);
}

CPoly CPoly::operator+(const CPoly& o) const {
    CVec r(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
    return CPoly(std::move(r));
}

CPoly CPoly::operator-(const CPoly& o) const { return *this + o * cplx(-1.0); }

CPoly CPoly::operator*(const CPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    CVec r(c_.size() + o.c_.size() - 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return CPoly(std::move(r));
}

CPoly CPoly::operator*(cplx s) const {
    CVec r = c_;
    for (auto& z : r) z *= s;
    return CPoly(std::move(r));
}

CPoly poly_from_roots(const CVec& roots, cplx leading) {
    if (leading == cplx(0.0)) fail(ErrorKind::InvalidArgument, "leading coefficient is zero");
    CVec c{leading};
    for (cplx r : roots) {
        CVec n(c.size() + 1, 0.0);
        for (size_t k = 0; k < c.size(); ++k) {
            n[k + 1] += c[k];
            n[k] -= r * c[k];
        }
        c = std::move(n);
    }
    return CPoly(std::move(c));
}

CPoly poly_dilate(const CPoly& p, cplx q) {
    CVec c = p.coeffs();
    cplx f = 1.0;
    for (auto& z : c) {
        z *= f;
        f *= q;
    }
    return CPoly(std::move(c));
}

PolyDiv poly_divmod(const CPoly& a, const CPoly& b) {
    if (b.is_zero()) fail(ErrorKind::InvalidArgument, "division by zero polynomial");
    int da = a.degree(), db = b.degree();
    if (da < db) return {CPoly(), a};
    CVec r = a.coeffs(), q(da - db + 1, 0.0);
    for (int k = da - db; k >= 0; --k) {
        cplx f = r[k + db] / b.lead();
        q[k] = f;
        for (int j = 0; j <= db; ++j) r[k + j] -= f * b.coeffs()[j];
        r[k + db] = 0;
    }
    r.resize(db > 0 ? db : 1);
    return {CPoly(std::move(q)), CPoly(std::move(r))};
}

// ---- roots ----

namespace {

// value and derivative by Horner
void horner2(const CVec& c, cplx z, cplx& p, cplx& dp) {
    p = 0;
    dp = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
}

// rounding error bound of Horner evaluation
double horner_bound(const CVec& c, cplx z) {
    double az = std::abs(z), s = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * az + std::abs(*it);
    return s;
}

}  // namespace

CVec poly_roots(const CPoly& p, int max_iter) {
    if (p.is_zero()) fail(ErrorKind::InvalidArgument, "roots of zero polynomial");
    CVec c = p.coeffs();
    CVec out;
    size_t z0 = 0;
    while (z0 < c.size() - 1 && c[z0] == cplx(0.0)) ++z0;
    for (size_t k = 0; k < z0; ++k) out.push_back(0.0);
    c.erase(c.begin(), c.begin() + z0);
    int n = int(c.size()) - 1;
    if (n <= 0) return out;
    cplx ld = c.back();
    for (auto& z : c) z /= ld;
    if (n == 1) {
        out.push_back(-c[0]);
        return out;
    }

    double r0 = std::pow(std::abs(c[0]), 1.0 / n);
    if (!(r0 > 0) || !std::isfinite(r0)) r0 = 1;
    CVec z(n);
    for (int k = 0; k < n; ++k)
        z[k] = std::polar(r0, 2 * std::numbers::pi * k / n + 0.4);

    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<bool> done(n, false);
    bool ok = false;
    for (int it = 0; it < max_iter; ++it) {
        int active = 0;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            cplx pv, dv;
            horner2(c, z[i], pv, dv);
            if (std::abs(pv) <= 4 * eps * horner_bound(c, z[i])) {
                done[i] = true;
                continue;
            }
            ++active;
            cplx w = pv / dv;
            cplx s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            cplx step = w / (1.0 - w * s);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = w;
            z[i] -= step;
            if (std::abs(step) <= 2 * eps * std::abs(z[i])) done[i] = true;
        }
        if (active == 0) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        // accept if every point has small backward error
        for (int i = 0; i < n; ++i) {
            cplx pv, dv;
            horner2(c, z[i], pv, dv);
            if (std::abs(pv) > 1e-12 * horner_bound(c, z[i]))
                fail(ErrorKind::NumericalFailure, "Aberth iteration did not converge");
        }
    }
    // Newton polish; keep a step only if it reduces |p|
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) {
            cplx pv, dv;
            horner2(c, z[i], pv, dv);
            if (dv == cplx(0.0)) break;
            cplx zn = z[i] - pv / dv;
            cplx pn, dn;
            horner2(c, zn, pn, dn);
            if (std::abs(pn) < std::abs(pv)) z[i] = zn;
            else break;
        }
    }
    out.insert(out.end(), z.begin(), z.end());
    return out;
}

// ---- matrices ----

CPoly char_poly(const CMatrix& A) { return char_poly_extended(A.cast<std::complex<long double>>()); }

CPoly char_poly_extended(const LMatrix& A) {
    if (A.rows() != A.cols()) fail(ErrorKind::InvalidArgument, "char_poly of non-square matrix");
    const int n = int(A.rows());
    if (n == 0) return CPoly::one();
    // Householder reduction to Hessenberg form, then the determinant recurrence
    // p_k = (z - h_kk) p_{k-1} - sum_i h_ik (h_{i+1,i} ... h_{k,k-1}) p_{i-1}
    using lc = std::complex<long double>;
    const LMatrix H = Eigen::HessenbergDecomposition<LMatrix>(A).matrixH();
    std::vector<std::vector<lc>> p(n + 1);
    p[0] = {lc(1)};
    for (int k = 1; k <= n; ++k) {
        std::vector<lc> next(k + 1, lc(0));
        const lc hkk = H(k - 1, k - 1);
        for (int d = 0; d < k; ++d) {
            next[d + 1] += p[k - 1][d];
            next[d] -= hkk * p[k - 1][d];
        }
        lc sub = 1;
        for (int i = k - 1; i >= 1; --i) {
            sub *= H(i, i - 1);
            const lc f = H(i - 1, k - 1) * sub;
            for (size_t d = 0; d < p[i - 1].size(); ++d) next[d] -= f * p[i - 1][d];
        }
        p[k] = std::move(next);
    }
    CVec out(n + 1);
    for (int k = 0; k <= n; ++k) out[k] = cplx(double(p[n][k].real()), double(p[n][k].imag()));
    out[n] = 1.0;
    return CPoly(std::move(out));
}

CVec eigenvalues(const CMatrix& A) { return poly_roots(char_poly(A)); }

Lstsq lstsq_solve(const CMatrix& A, const CVector& b) {
    if (A.rows() < A.cols()) fail(ErrorKind::InvalidArgument, "lstsq needs rows >= cols");
    Lstsq r;
    if (A.cols() == 0) {
        r.x = CVector(0);
        r.residual = b.norm();
        return r;
    }
    Eigen::ColPivHouseholderQR<CMatrix> qr(A);
    qr.setThreshold(1e-10);
    r.x = qr.solve(b);
    r.residual = (A * r.x - b).norm();
    r.rank_deficient = qr.rank() < A.cols();
    return r;
}

CVec esym(const CVec& x) {
    CVec e(x.size() + 1, 0.0);
    e[0] = 1;
    for (size_t m = 0; m < x.size(); ++m)
        for (size_t k = m + 1; k >= 1; --k) e[k] += e[k - 1] * x[m];
    return e;
}

bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

double multiset_distance(CVec a, CVec b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::sort(a.begin(), a.end(), lex_less);
    std::vector<bool> used(b.size(), false);
    double worst = 0;
    for (cplx x : a) {
        int best = -1;
        double bd = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(b[j] - x);
            if (best < 0 || d < bd) {
                best = int(j);
                bd = d;
            }
        }
        used[best] = true;
        worst = std::max(worst, bd / std::max(1.0, std::abs(x)));
    }
    return worst;
}

// ---- rng ----

double Rng::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
}

cplx Rng::generic() {
    double r = uniform(0.6, 1.8);
    double t = uniform(0.0, 2 * std::numbers::pi);
    return std::polar(r, t);
}

CVec Rng::generic(int n) {
    CVec v(n);
    for (auto& z : v) z = generic();
    return v;
}

cplx Rng::hbar() {
    for (;;) {
        cplx h = generic();
        bool ok = true;
        cplx p = 1;
        for (int k = 1; k <= 12; ++k) {
            p *= h;
            if (std::abs(p - 1.0) < 0.05) ok = false;
        }
        if (ok) return h;
    }
}

// ---- quiver ----

int Quiver::rank_sum() const {
    int s = 0;
    for (int x : v) s += x;
    return s;
}

int Quiver::framing_sum() const {
    int s = 0;
    for (int x : w) s += x;
    return s;
}

bool Quiver::well_formed() const {
    if (v.size() != w.size() || v.empty()) return false;
    for (int x : v)
        if (x <= 0) return false;
    for (int x : w)
        if (x < 0) return false;
    return framing_sum() >= 1;
}

bool Quiver::balanced() const {
    if (v.size() != w.size()) return false;
    for (int i = 1; i <= n(); ++i)
        if (vv(i - 1) + vv(i + 1) + ww(i) < 2 * vv(i)) return false;
    return true;
}

void Quiver::validate() const {
    if (!well_formed()) fail(ErrorKind::InvalidQuiver, "malformed quiver labels " + str());
}

Quiver Quiver::reflect() const {
    return Quiver(std::vector<int>(v.rbegin(), v.rend()), std::vector<int>(w.rbegin(), w.rend()));
}

std::string Quiver::str() const {
    std::ostringstream os;
    os << "v=(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ") w=(";
    for (size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << ")";
    return os.str();
}

Quiver Quiver::full_flag(int L) {
    if (L < 2) fail(ErrorKind::InvalidArgument, "full flag needs L >= 2");
    Quiver q;
    for (int i = 1; i < L; ++i) {
        q.v.push_back(i);
        q.w.push_back(0);
    }
    q.w.back() = L;
    return q;
}

Quiver Quiver::grassmannian(int k, int L) { return Quiver({k}, {L}); }

Quiver Quiver::xkl(int k, int l) {
    if (k < 1 || l < 2) fail(ErrorKind::InvalidArgument, "X_{k,l} needs k >= 1, l >= 2");
    Quiver q;
    for (int i = 1; i < k; ++i) {
        q.v.push_back(i);
        q.w.push_back(0);
    }
    for (int i = 0; i < l; ++i) {
        q.v.push_back(k);
        q.w.push_back(i + 1 < l ? 1 : k + 1);
    }
    return q;
}

}  // namespace qmirror
