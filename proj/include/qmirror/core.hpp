#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmirror/errors.hpp"

namespace qmirror {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::VectorXcd;
using CVec = std::vector<cplx>;

// Polynomial with complex coefficients, ascending order. The zero polynomial
// has no coefficients and degree -1.
class CPoly {
public:
    CPoly() = default;
    explicit CPoly(CVec coeffs);
    static CPoly constant(cplx c) { return CPoly(CVec{c}); }
    static CPoly one() { return constant(1.0); }
    static CPoly monomial(int k, cplx c = 1.0);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const CVec& coeffs() const { return c_; }
    cplx coeff(int k) const { return (k >= 0 && k < int(c_.size())) ? c_[k] : cplx(0.0); }
    cplx lead() const { return c_.empty() ? cplx(0.0) : c_.back(); }
    cplx operator()(cplx z) const;
    CPoly derivative() const;
    CPoly monic() const;
    double norm() const;  // 2-norm of the coefficient vector

    CPoly operator+(const CPoly& o) const;
    CPoly operator-(const CPoly& o) const;
    CPoly operator*(const CPoly& o) const;
    CPoly operator*(cplx s) const;
    CPoly operator-() const { return *this * cplx(-1.0); }

private:
    CVec c_;
};

constexpr double kTrimTol = 1e-13;

inline CPoly operator*(cplx s, const CPoly& p) { return p * s; }

CPoly poly_from_roots(const CVec& roots, cplx leading = 1.0);
// p(q z)
CPoly poly_dilate(const CPoly& p, cplx q);

struct PolyDiv {
    CPoly quot, rem;
};
PolyDiv poly_divmod(const CPoly& a, const CPoly& b);

// Aberth-Ehrlich with a Newton polish. Throws NumericalFailure when the
// iteration does not settle within max_iter sweeps.
CVec poly_roots(const CPoly& p, int max_iter = 500);

CPoly char_poly(const CMatrix& A);
CPoly char_poly_extended(const LMatrix& A);
CVec eigenvalues(const CMatrix& A);

struct Lstsq {
    CVector x;
    double residual = 0;
    bool rank_deficient = false;
};
Lstsq lstsq_solve(const CMatrix& A, const CVector& b);

// elementary symmetric polynomials e_0..e_n
CVec esym(const CVec& x);

// Greedy nearest-neighbour matching after a lexicographic sort. Returns the
// largest |x - y| / max(1, |x|) over matched pairs, or +inf on a size mismatch.
double multiset_distance(CVec a, CVec b);
inline bool multiset_match(const CVec& a, const CVec& b, double tol = 1e-8) {
    return multiset_distance(a, b) < tol;
}

bool lex_less(cplx a, cplx b);

// Deterministic sampler for generic complex parameters.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi);
    cplx generic();  // modulus in [0.6, 1.8], uniform phase
    CVec generic(int n);
    cplx hbar();  // generic and |h^k - 1| >= 0.05 for k <= 12
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

struct Quiver {
    std::vector<int> v, w;

    Quiver() = default;
    Quiver(std::vector<int> v_, std::vector<int> w_) : v(std::move(v_)), w(std::move(w_)) {}

    int n() const { return static_cast<int>(v.size()); }
    int vv(int i) const { return (i >= 1 && i <= n()) ? v[i - 1] : 0; }  // 1-based, 0 outside
    int ww(int i) const { return (i >= 1 && i <= n()) ? w[i - 1] : 0; }
    int rank_sum() const;
    int framing_sum() const;
    // positive ranks, nonnegative framings, at least one framing
    bool well_formed() const;
    // v_{i-1} + v_{i+1} + w_i >= 2 v_i at every node
    bool balanced() const;
    bool valid() const { return well_formed() && balanced(); }
    void validate() const;  // throws InvalidQuiver unless well formed
    Quiver reflect() const;
    std::string str() const;

    bool operator==(const Quiver& o) const { return v == o.v && w == o.w; }

    static Quiver full_flag(int L);  // v = (1..L-1), w = (0..0, L)
    static Quiver grassmannian(int k, int L);
    static Quiver xkl(int k, int l);
};

}  // namespace qmirror
