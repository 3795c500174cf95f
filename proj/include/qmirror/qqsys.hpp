#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qmirror/bethe.hpp"
#include "qmirror/core.hpp"

namespace qmirror {

struct QQData {
    Quiver quiver;
    ModelParams params;
    std::vector<CPoly> Qplus;   // node i at index i-1, monic
    std::vector<CPoly> Qminus;  // node i at index i-1
    std::vector<double> residuals;
    std::map<std::pair<int, int>, CPoly> chain;  // Q^-_{i..j}, 1-based, i <= j
    std::vector<CPoly> section;                  // s_1 .. s_{n+1}

    int n() const { return quiver.n(); }
    CPoly Qp(int i) const;  // 1 outside 1..n
    CPoly Lambda(int i) const;
    double max_residual() const;
};

struct PolySolve {
    CPoly poly;
    double residual = 0;  // relative to the right-hand side
};

// Least-squares solve of op(m) = rhs for m of degree d.
PolySolve solve_linear_poly(const std::function<CPoly(const CPoly&)>& op, int d, const CPoly& rhs);

// xi_i Q_i(hz) m(z) - xi_{i+1} Q_i(z) m(hz) = Lambda_i(z) Q_{i-1}(hz) Q_{i+1}(z)
PolySolve solve_qminus(const std::vector<CPoly>& Qplus, const Quiver& q, const ModelParams& p, int i);

QQData qq_from_roots(const Quiver& q, const ModelParams& p, const std::vector<CVec>& roots);
QQData qq_from_solution(const BetheSystem& sys, const BetheSolution& sol);

// Fills Q^-_{i..j} and the section s_k = Q^-_{k..n}, s_{n+1} = Q^+_n.
QQData extend_chain(QQData data, double tol = 1e-7);

QQData backlund_qq(const QQData& data, int i);

// Laplace expansion; fine for the k <= 6 matrices used here.
CPoly poly_det(const std::vector<std::vector<CPoly>>& M);

// W_k(z) = prod_{j=1}^{k-1} P_j(h^{j-1} z), P_j = Lambda_n ... Lambda_{n-j+1}
CPoly wronskian_W(const Quiver& q, const ModelParams& p, int k);

struct WronskianResult {
    CPoly V;  // monic, undilated; matches Q^+_{n+1-k}
    cplx alpha = 0;
    double remainder = 0;
};
WronskianResult wronskian_extract(const std::vector<CPoly>& section, const Quiver& q, const ModelParams& p,
                                  int k);

struct DDData {
    std::vector<CPoly> F;       // F_0 .. F_{n+1}
    std::vector<cplx> kappa;    // F relation constants, node i at index i-1
    std::vector<CPoly> Dplus;   // node i at index i-1
    std::vector<CPoly> Dminus;
    std::vector<double> residuals;
};
DDData dd_scale(const QQData& data, double tol = 1e-8);

// g = det[gamma_i^j f_i(h^j z)], rows i = 1..k, columns j = 0..k-1
CPoly qwronskian(const std::vector<CPoly>& f, const CVec& gammas, cplx hbar);
// Completes f_1..f_{k-1} with the unique f_k reproducing g.
std::vector<CPoly> reconstruct_polys(const CPoly& g, const CVec& gammas, const std::vector<CPoly>& seeds,
                                     cplx hbar);

}  // namespace qmirror
