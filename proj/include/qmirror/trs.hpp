#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qmirror/bethe.hpp"
#include "qmirror/core.hpp"
#include "qmirror/qqsys.hpp"

namespace qmirror {

struct ResonancePattern {
    std::vector<std::pair<int, int>> groups;  // (base index, length); strings a, h a, h^2 a, ...
    int total() const;
    int max_length() const;
};

struct TRSFrame {
    enum Kind { electric, magnetic };
    CVec coords;
    CVec momenta;
    cplx hbar = 2.0;
    Kind kind = electric;
    ResonancePattern pattern;  // empty unless produced by resonance_rescale
};

// T[j][i] = p_j prod_{k!=i}(x_j - h x_k) / prod_{k!=j}(x_j - x_k)
CMatrix lax(const CVec& coords, const CVec& momenta, cplx hbar);
CMatrix lax(const TRSFrame& f);

struct CMResidual {
    double ratio = 0;  // sigma_2 / sigma_1 of R = h M T - T M
    CVector u, v;      // R ~ u v^T
};
CMResidual cm_residual(const CMatrix& M, const CMatrix& T, cplx hbar);

// Closed-form H_k, k = 1..L, with weights (x_i - h x_j)/(x_i - x_j).
CVec hamiltonians(const CVec& coords, const CVec& momenta, cplx hbar);
CVec hamiltonians(const TRSFrame& f);
// (-1)^k times the coefficient of u^{L-k} in det(u - T), k = 1..L
CVec charpoly_invariants(const CMatrix& T);
// Same for lax(x, p, h), with the matrix assembled in extended precision.
CVec charpoly_invariants(const CVec& coords, const CVec& momenta, cplx hbar);
CVec charpoly_invariants(const TRSFrame& f);

// Partial-flag quivers framed at the last node only; L = w_n.
bool is_partial_flag(const Quiver& q);
// p_c = xi_{n+1} h^{L-1} Q_n(a_c) / Q_n(h a_c); the frame uses hbar^{-1}.
CVec electric_momenta(const BetheSolution& sol, const Quiver& q, const ModelParams& p);
TRSFrame electric_frame(const BetheSolution& sol, const Quiver& q, const ModelParams& p);

// String lengths mu_j = v_j - v_{j-1}, v_0 = 0, v_{n+1} = L.
std::vector<int> string_lengths(const Quiver& q);
CVec spectrum_target(const Quiver& q, const CVec& xi, cplx hbar, const std::vector<int>& offsets = {});
std::vector<int> calibrate_offsets(const Quiver& q, std::uint64_t seed = 1);

// Degree-one sections: p_i = h^{L-2} (root of s_i), L = n+1; the frame uses hbar^{-1}.
CVec magnetic_momenta(const QQData& data);
TRSFrame magnetic_frame(const QQData& data);
// PM_j = Q^+_{j-1}(0) / Q^+_j(0), j = 1..n+1, Q^+_0 = Q^+_{n+1} = 1
CVec qratio_momenta(const QQData& data);

// Snaps coordinates onto the declared strings and rescales momenta by
// h^{-(lmax-1)}; the result is read through slodowy_lax.
TRSFrame resonance_rescale(const TRSFrame& frame, const ResonancePattern& pattern, const CVec& raw_momenta,
                           double tol = 1e-8);
// Column-gauged Lax matrix D T D^{-1}, D = diag(prod_{k!=i}(x_i - x_k)); finite on strings.
CMatrix slodowy_lax(const TRSFrame& frame);

}  // namespace qmirror
