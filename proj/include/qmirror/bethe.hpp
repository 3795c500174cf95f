#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmirror/core.hpp"

namespace qmirror {

struct ModelParams {
    std::vector<CVec> a;  // roots of Lambda_i, one list per node
    CVec xi;              // xi_1 .. xi_{n+1}
    cplx hbar = 2.0;

    cplx zeta(int i) const { return xi[i - 1] / xi[i]; }  // 1-based node
    void check(const Quiver& q) const;                    // throws InvalidArgument
    static ModelParams random(const Quiver& q, Rng& rng);
};

// sigma * log(alpha * s_self - beta * s_var), or sigma * log(alpha * s_self - beta)
// when var < 0.
struct LogTerm {
    double sigma;
    cplx alpha;
    int var;
    cplx beta;
};

struct LogEquation {
    int self;
    cplx constant;
    std::vector<LogTerm> terms;
};

enum class SystemKind { finite_Ar, toroidal, cyclic };

using EquationBuilder = std::function<std::vector<LogEquation>(const CVec& theta)>;

struct BetheSystem {
    SystemKind kind = SystemKind::finite_Ar;
    Quiver quiver;          // node structure; toroidal uses v = (k)
    ModelParams params;     // finite_Ar only
    int k = 0, N = 0;       // toroidal / cyclic
    cplx t = 0, xi1 = 0;    // toroidal
    std::vector<int> groups;  // unknowns per node, used for canonical ordering
    CVec theta;               // parameter point the equations were built at
    EquationBuilder builder;  // equations as a function of theta (hbar held fixed)
    std::vector<LogEquation> eqs;
    double start_log_lo = -0.51, start_log_hi = 0.59;  // log|s| range of random starts

    int unknowns() const;
};

struct BetheSolution {
    std::vector<CVec> roots;  // per node
    double residual = 0;
    bool canonical = false;

    CVec flat() const;
};

BetheSystem build_system(const Quiver& q, const ModelParams& p);
BetheSystem build_adhm(int k, int N, const CVec& a, cplx xi, cplx t, cplx hbar);
// Affine A_{N-1} chain with k roots per node, one framing parameter at node 0
// and loop scale c.
BetheSystem build_cyclic(int N, int k, const CVec& zeta, cplx framing, cplx c, cplx hbar);

// Principal-branch log residual of every equation, reduced to (-pi, pi].
CVec residual(const BetheSystem& sys, const std::vector<CVec>& roots);
double residual_norm(const BetheSystem& sys, const std::vector<CVec>& roots);

struct SolveOptions {
    std::uint64_t seed = 1;
    int starts = 200;
    double newton_tol = 1e-12;
    int max_iter = 100;
    double dedup_tol = 1e-7;
    bool monodromy = true;  // fill in with parameter-space loops
    int stale_loops = 3;
    int stale_loops_target = 15;  // used while fewer than `expected` are known
    int max_loops = 60;
    int expected = -1;  // stop the loops early once this many are known
};

std::vector<BetheSolution> solve(const BetheSystem& sys, const SolveOptions& opts = {});

struct Family {
    enum Kind { full_flag, grassmannian, hilb, adhm, other } kind = other;
    int a = 0, b = 0;  // (n) | (k, n) | (k) | (N, k)
};
long expected_count(const Family& f);
long partition_count(int k);
long colored_partition_count(int N, int k);

// helpers shared with the other modules
std::vector<CVec> split_roots(const BetheSystem& sys, const CVec& flat);
std::vector<CVec> canonical_roots(std::vector<CVec> roots);

}  // namespace qmirror
