#include "qmirror/cli.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "qmirror/io.hpp"
#include "qmirror/log.hpp"
#include "qmirror/mirror.hpp"
#include "qmirror/trs.hpp"

namespace qmirror {

void RunConfig::check() const {
    if (starts < 1) fail(ErrorKind::InvalidArgument, "--starts must be >= 1");
    if (!(tol_newton > 0) || !(tol_dedup > 0) || !(tol_match > 0))
        fail(ErrorKind::InvalidArgument, "tolerances must be positive");
}

namespace {

SolveOptions solve_options(const RunConfig& c) {
    SolveOptions o;
    o.seed = c.seed;
    o.starts = c.starts;
    o.newton_tol = c.tol_newton;
    o.dedup_tol = c.tol_dedup;
    return o;
}

VerifyOptions verify_options(const RunConfig& c) {
    VerifyOptions o;
    o.seed = c.seed;
    o.starts = c.starts;
    o.newton_tol = c.tol_newton;
    o.dedup_tol = c.tol_dedup;
    o.tol = c.tol_match;
    return o;
}

int verdict_code(Verdict v) {
    switch (v) {
        case Verdict::pass: return exit_ok;
        case Verdict::fail: return exit_fail;
        default: return exit_inconclusive;
    }
}

const std::string& need_input(const RunConfig& c, size_t i, const char* what) {
    if (c.inputs.size() <= i) fail(ErrorKind::InvalidArgument, std::string("missing ") + what + " file");
    return c.inputs[i];
}

// A model file is either a bare quiver {"v","w"} or {"model": quiver|adhm|cyclic, ...}.
// Missing parameters are sampled from the seed.
struct Model {
    BetheSystem sys;
    json echo;
    long expected = -1;
};

Model load_model(const json& j, std::uint64_t seed) {
    Model m;
    Rng rng(seed);
    const std::string kind = j.value("model", "quiver");
    if (kind == "quiver") {
        const Quiver q = json_quiver(j.contains("quiver") ? j.at("quiver") : j);
        q.validate();
        const ModelParams p = j.contains("params") ? json_params(j.at("params")) : ModelParams::random(q, rng);
        m.sys = build_system(q, p);
        m.echo = {{"model", "quiver"}, {"quiver", quiver_json(q)}, {"params", params_json(p)}};
        if (q.n() == 1 && q.w[0] >= q.v[0]) m.expected = expected_count({Family::grassmannian, q.v[0], q.w[0]});
        for (int L = 2; L <= 8; ++L)
            if (q == Quiver::full_flag(L) || q == Quiver::full_flag(L).reflect())
                m.expected = expected_count({Family::full_flag, L, 0});
    } else if (kind == "adhm") {
        const int k = j.value("k", 1), N = j.value("N", 1);
        if (k < 1 || N < 1) fail(ErrorKind::InvalidArgument, "adhm model needs k, N >= 1");
        const cplx h = j.contains("hbar") ? json_cplx(j.at("hbar")) : rng.hbar();
        const CVec a = j.contains("a") ? json_cvec(j.at("a")) : rng.generic(N);
        const cplx xi = j.contains("xi") ? json_cplx(j.at("xi")) : rng.generic();
        const cplx t = j.contains("t") ? json_cplx(j.at("t")) : rng.generic();
        m.sys = build_adhm(k, N, a, xi, t, h);
        m.echo = {{"model", "adhm"}, {"k", k}, {"N", N}, {"a", cvec_json(a)},
                  {"xi", cplx_json(xi)}, {"t", cplx_json(t)}, {"hbar", cplx_json(h)}};
        m.expected = colored_partition_count(N, k);
    } else if (kind == "cyclic") {
        const int k = j.value("k", 1), N = j.value("N", 1);
        if (k < 1 || N < 1) fail(ErrorKind::InvalidArgument, "cyclic model needs k, N >= 1");
        const cplx h = j.contains("hbar") ? json_cplx(j.at("hbar")) : rng.hbar();
        const CVec zeta = j.contains("zeta") ? json_cvec(j.at("zeta")) : rng.generic(N);
        const cplx fr = j.contains("framing") ? json_cplx(j.at("framing")) : rng.generic();
        const cplx c = j.contains("c") ? json_cplx(j.at("c")) : rng.generic();
        m.sys = build_cyclic(N, k, zeta, fr, c, h);
        m.echo = {{"model", "cyclic"}, {"k", k}, {"N", N}, {"zeta", cvec_json(zeta)},
                  {"framing", cplx_json(fr)}, {"c", cplx_json(c)}, {"hbar", cplx_json(h)}};
        m.expected = colored_partition_count(N, k);
    } else {
        fail(ErrorKind::InvalidArgument, "unknown model '" + kind + "'");
    }
    return m;
}

json solve_json(const Model& m, const RunConfig& c) {
    SolveOptions o = solve_options(c);
    o.expected = int(m.expected);
    std::vector<BetheSolution> sols;
    try {
        sols = solve(m.sys, o);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyResult) throw;
    }
    return {{"schema", kSchema}, {"input", m.echo},         {"seed", c.seed},
            {"count", sols.size()}, {"expected", m.expected}, {"solutions", solutions_json(sols)}};
}

int cmd_dual(const RunConfig& c) {
    const Quiver q = json_quiver(read_json_file(need_input(c, 0, "quiver")));
    q.validate();
    write_output(linking_json(q), c.out);
    return exit_ok;
}

int cmd_solve(const RunConfig& c) {
    const Model m = load_model(read_json_file(need_input(c, 0, "model")), c.seed);
    write_output(solve_json(m, c), c.out);
    return exit_ok;
}

int cmd_verify(const RunConfig& c, const std::string& dual_params) {
    const json jq = read_json_file(need_input(c, 0, "quiver"));
    const Quiver q = json_quiver(jq.contains("quiver") ? jq.at("quiver") : jq);
    std::optional<ModelParams> left, right;
    if (c.inputs.size() > 1) left = json_params(read_json_file(c.inputs[1]));
    else if (jq.contains("params")) left = json_params(jq.at("params"));
    if (!dual_params.empty()) right = json_params(read_json_file(dual_params));
    const MirrorReport r = verify_finite(q, verify_options(c), left, right);
    write_output(report_json(r), c.out);
    return verdict_code(r.verdict);
}

struct Check {
    std::string name;
    double worst = 0, tol = 0;
};

int cmd_trs_check(const RunConfig& c) {
    const Model m = load_model(read_json_file(need_input(c, 0, "model")), c.seed);
    if (m.sys.kind != SystemKind::finite_Ar) fail(ErrorKind::Unsupported, "trs-check needs a quiver model");
    const Quiver& q = m.sys.quiver;
    const ModelParams& p = m.sys.params;
    SolveOptions o = solve_options(c);
    o.expected = int(m.expected);
    const auto sols = solve(m.sys, o);

    std::vector<Check> checks;
    auto cm_of = [](const TRSFrame& f) {
        const int L = int(f.coords.size());
        if (L < 2) return 0.0;
        CMatrix M = CMatrix::Zero(L, L);
        for (int i = 0; i < L; ++i) M(i, i) = f.coords[i];
        return cm_residual(M, lax(f).transpose(), f.hbar).ratio;
    };
    if (is_partial_flag(q)) {
        const CVec target = spectrum_target(q, p.xi, p.hbar, calibrate_offsets(q, c.seed));
        Check spectrum{"electric_spectrum", 0, 1e-8}, cm{"electric_cm_rank_one", 0, 1e-10};
        for (auto& s : sols) {
            const TRSFrame f = electric_frame(s, q, p);
            spectrum.worst = std::max(spectrum.worst, multiset_distance(eigenvalues(lax(f)), target));
            cm.worst = std::max(cm.worst, cm_of(f));
        }
        checks.push_back(spectrum);
        checks.push_back(cm);
    }
    bool magnetic = false;
    for (int L = 2; L <= 8; ++L) magnetic |= q == Quiver::full_flag(L).reflect();
    if (magnetic) {
        const CVec e = esym(p.a[0]);
        Check ham{"magnetic_hamiltonians", 0, 1e-7}, cm{"magnetic_cm_rank_one", 0, 1e-10};
        for (auto& s : sols) {
            const TRSFrame f = magnetic_frame(extend_chain(qq_from_solution(m.sys, s)));
            const CVec H = charpoly_invariants(lax(f));
            for (size_t k = 1; k < e.size(); ++k)
                ham.worst = std::max(ham.worst, std::abs(H[k - 1] - e[k]) / std::max(1.0, std::abs(e[k])));
            cm.worst = std::max(cm.worst, cm_of(f));
        }
        checks.push_back(ham);
        checks.push_back(cm);
    }
    json jc = json::array();
    bool ok = true;
    for (auto& ch : checks) {
        const bool pass = ch.worst < ch.tol;
        ok &= pass;
        jc.push_back({{"name", ch.name}, {"worst", ch.worst}, {"tol", ch.tol}, {"pass", pass}});
    }
    const Verdict v = checks.empty() ? Verdict::inconclusive : ok ? Verdict::pass : Verdict::fail;
    write_output({{"schema", kSchema}, {"input", m.echo}, {"count", sols.size()}, {"checks", jc},
                  {"verdict", verdict_name(v)}},
                 c.out);
    return verdict_code(v);
}

int cmd_hilb(const RunConfig& c, int k, int N) {
    json j = c.inputs.empty() ? json{{"model", "adhm"}, {"k", k}, {"N", N}} : read_json_file(c.inputs[0]);
    j["model"] = "adhm";
    write_output(solve_json(load_model(j, c.seed), c), c.out);
    return exit_ok;
}

int cmd_selfdual(const RunConfig& c, int k, int N) {
    Rng rng(c.seed);
    const VerifyOptions o = verify_options(c);
    const MirrorReport r = N == 1 ? verify_hilb_selfdual(k, HilbParams::random(rng), o)
                                  : verify_cyclic(N, k, CyclicParams::random(N, rng), o);
    write_output(report_json(r), c.out);
    return verdict_code(r.verdict);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"qmirror: Bethe, QQ and tRS checks of 3d mirror symmetry"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string dual_params;
    int k = 1, N = 1;

    auto common = [&](CLI::App* sub) {
        sub->add_option("inputs", cfg.inputs, "input files");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--starts", cfg.starts, "random Newton starts");
        sub->add_option("--tol-newton", cfg.tol_newton, "Newton residual tolerance");
        sub->add_option("--tol-dedup", cfg.tol_dedup, "relative distance for identifying solutions");
        sub->add_option("--tol-match", cfg.tol_match, "relative momentum mismatch tolerance");
        sub->add_option("--out", cfg.out, "output file (stdout when omitted)");
    };
    auto* dual = app.add_subcommand("dual", "mirror dual quiver and linking numbers");
    auto* solve_c = app.add_subcommand("solve", "solve a Bethe system from a model file");
    auto* verify = app.add_subcommand("verify", "finite A_r mirror check");
    auto* trs = app.add_subcommand("trs-check", "tRS frame consistency on a solved instance");
    auto* hilb = app.add_subcommand("hilb", "toroidal (ADHM) solve");
    auto* selfdual = app.add_subcommand("selfdual", "Hilbert scheme / cyclic self-duality check");
    for (auto* s : {dual, solve_c, verify, trs, hilb, selfdual}) common(s);
    verify->add_option("--dual-params", dual_params, "override the mapped dual parameters");
    for (auto* s : {hilb, selfdual}) {
        s->add_option("--k", k, "number of boxes");
        s->add_option("--N", N, "framing rank");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_input;
    }

    try {
        cfg.check();
        if (*dual) return cmd_dual(cfg);
        if (*solve_c) return cmd_solve(cfg);
        if (*verify) return cmd_verify(cfg, dual_params);
        if (*trs) return cmd_trs_check(cfg);
        if (*hilb) return cmd_hilb(cfg, k, N);
        if (*selfdual) return cmd_selfdual(cfg, k, N);
    } catch (const Error& e) {
        std::cerr << "qmirror: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::InvalidArgument:
            case ErrorKind::InvalidQuiver:
            case ErrorKind::MapShapeError:
            case ErrorKind::Unsupported: return exit_input;
            case ErrorKind::NotRealizable: return exit_not_realizable;
            case ErrorKind::EmptyResult:
            case ErrorKind::NumericalFailure:
            case ErrorKind::IllConditioned: return exit_inconclusive;
            default: return exit_internal;
        }
    } catch (const json::exception& e) {
        std::cerr << "qmirror: malformed input: " << e.what() << "\n";
        return exit_input;
    }
    return exit_internal;
}

}  // namespace qmirror
