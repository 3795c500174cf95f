#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmirror/bethe.hpp"
#include "qmirror/core.hpp"
#include "qmirror/qqsys.hpp"

namespace qmirror {

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v);

struct MatchedPair {
    int left = -1, right = -1;
    double mismatch = 0;
};

struct MirrorReport {
    std::string kind;          // finite | hilb | cyclic
    Quiver quiver, dual;       // finite: brane-oriented q and its dual
    ModelParams left_params;   // finite: parameters of the magnetic side reflect(q)
    ModelParams right_params;  // finite: parameters of the dual
    long expected = -1;        // closed-form census when known
    int count_left = 0, count_right = 0;
    std::vector<MatchedPair> pairs;
    CVec constants;  // per-component calibration constants
    double tol = 1e-7;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> notes;
};

struct MirrorMap {
    ModelParams dual;
    std::vector<int> order;  // dual framing slot -> index j of the twist it came from
};

// p holds the parameters of the magnetic side X = reflect(q).
MirrorMap mirror_param_map(const Quiver& q, const ModelParams& p);

// Momentum vectors compared across the mirror.
CVec magnetic_observables(const Quiver& X, const BetheSolution& sol);
CVec electric_observables(const Quiver& dual, const ModelParams& pd, const std::vector<int>& order,
                          const BetheSolution& sol);

// Finds constants c with {c * b : b in B} = A as multisets of vectors.
struct VectorMatch {
    bool ok = false;
    CVec constants;
    std::vector<MatchedPair> pairs;
};
VectorMatch match_with_constants(const std::vector<CVec>& A, const std::vector<CVec>& B, double tol);

struct VerifyOptions {
    std::uint64_t seed = 1;
    int starts = 200;
    double newton_tol = 1e-12;
    double dedup_tol = 1e-7;
    double tol = 1e-7;
};

MirrorReport verify_finite(const Quiver& q, const VerifyOptions& opts = {},
                           const std::optional<ModelParams>& left = std::nullopt,
                           const std::optional<ModelParams>& right_override = std::nullopt);

// ---- truncation of X_{k,l} ----

struct QQEquation {
    int node;
    cplx left, right;  // coefficients of Q_i(hz)Q^-_i(z) and Q_i(z)Q^-_i(hz)
    CPoly Lambda;
};

struct TruncatedQQ {
    int k = 0, l = 0;
    Quiver quiver;                // brane-oriented X_{k,l}
    ModelParams params;           // with the vanishing twists and framings imposed
    std::vector<int> dropped;     // nodes whose equation disappears
    std::vector<QQEquation> eqs;  // surviving equations, ascending node
};

TruncatedQQ truncate_xkl(int k, int l, const ModelParams& p);
// relative residual of every surviving equation for given Q^+ and Q^- (index i-1)
std::vector<double> truncated_residuals(const TruncatedQQ& t, const std::vector<CPoly>& Qplus,
                                        const std::vector<CPoly>& Qminus);

// ---- periodic reduction ----

struct PeriodicData {
    int k = 1, N = 1;
    cplx xi0 = 1, xi = 0, t = 0, hbar = 0;
    CVec a;
};

// Node residuals of the infinite chain at s_{i,a} = s_a t^{-i}, a_i = a t^{-i},
// xi_i = xi0 xi^i, compared with minus the toroidal residual on nodes -W..W.
double periodic_window_defect(const PeriodicData& d, const CVec& roots, int W);

struct PeriodicReduction {
    BetheSystem toroidal;
    std::vector<BetheSolution> solutions;
    double defect = 0;  // worst window defect over solutions and a probe point
    int W = 3;
};
PeriodicReduction periodic_reduce(const PeriodicData& d, int W = 3, const SolveOptions& opts = {});

// ---- toroidal self-duality ----

struct HilbParams {
    cplx a = 1, xi = 0, t = 0, hbar = 0;
    static HilbParams random(Rng& rng);
};

// (p_xi, p_t): prod s / a^k and the pair product over alpha < beta
CVec hilb_invariants(const CVec& roots, cplx a, cplx t, cplx hbar);
cplx hilb_k1_root(cplx a, cplx xi, cplx hbar);

MirrorReport verify_hilb_selfdual(int k, const HilbParams& p, const VerifyOptions& opts = {});

struct CyclicParams {
    CVec a;
    cplx xi = 0, t = 0, hbar = 0;
    static CyclicParams random(int N, Rng& rng);
};

// twists, framing and loop scale of the affine chain from (a, xi, t)
struct CyclicSide {
    CVec zeta;
    cplx framing, c, hbar;
};
CyclicSide cyclic_param_map(const CyclicParams& p);

MirrorReport verify_cyclic(int N, int k, const CyclicParams& p, const VerifyOptions& opts = {});

}  // namespace qmirror
