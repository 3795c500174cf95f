#include "qmirror/io.hpp"

#include <fstream>
#include <iostream>

namespace qmirror {

namespace {

[[noreturn]] void bad(const std::string& msg) { fail(ErrorKind::InvalidArgument, msg); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::vector<int> int_list(const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be an array");
    std::vector<int> out;
    for (auto& x : j) {
        if (!x.is_number_integer()) bad(std::string(what) + " entries must be integers");
        out.push_back(x.get<int>());
    }
    return out;
}

Verdict verdict_from(const std::string& s) {
    if (s == "pass") return Verdict::pass;
    if (s == "fail") return Verdict::fail;
    if (s == "inconclusive") return Verdict::inconclusive;
    bad("unknown verdict " + s);
}

}  // namespace

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx json_cplx(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    bad("complex number must be [re, im]");
}

json cvec_json(const CVec& v) {
    json j = json::array();
    for (cplx z : v) j.push_back(cplx_json(z));
    return j;
}

CVec json_cvec(const json& j) {
    if (!j.is_array()) bad("expected an array of complex numbers");
    CVec v;
    for (auto& x : j) v.push_back(json_cplx(x));
    return v;
}

json quiver_json(const Quiver& q) { return {{"v", q.v}, {"w", q.w}}; }

Quiver json_quiver(const json& j) {
    Quiver q(int_list(field(j, "v"), "v"), int_list(field(j, "w"), "w"));
    if (q.v.size() != q.w.size() || q.v.empty()) bad("v and w must be nonempty and of equal length");
    return q;
}

json params_json(const ModelParams& p) {
    json a = json::array();
    for (auto& ai : p.a) a.push_back(cvec_json(ai));
    return {{"a", a}, {"xi", cvec_json(p.xi)}, {"hbar", cplx_json(p.hbar)}};
}

ModelParams json_params(const json& j) {
    ModelParams p;
    const json& a = field(j, "a");
    if (!a.is_array()) bad("a must be an array of arrays");
    for (auto& ai : a) p.a.push_back(json_cvec(ai));
    p.xi = json_cvec(field(j, "xi"));
    p.hbar = json_cplx(field(j, "hbar"));
    return p;
}

json solutions_json(const std::vector<BetheSolution>& sols) {
    json arr = json::array();
    for (auto& s : sols) {
        json roots = json::array();
        for (auto& r : s.roots) roots.push_back(cvec_json(r));
        arr.push_back({{"roots", roots}, {"residual", s.residual}});
    }
    return arr;
}

std::vector<BetheSolution> json_solutions(const json& j) {
    if (!j.is_array()) bad("solutions must be an array");
    std::vector<BetheSolution> out;
    for (auto& x : j) {
        BetheSolution s;
        for (auto& r : field(x, "roots")) s.roots.push_back(json_cvec(r));
        s.residual = field(x, "residual").get<double>();
        s.canonical = true;
        out.push_back(std::move(s));
    }
    return out;
}

json linking_json(const Quiver& q) {
    const LinkingData ld = linking_numbers(q);
    const Quiver d = mirror_dual(q);
    return {{"schema", kSchema},
            {"quiver", quiver_json(q)},
            {"dual", quiver_json(d)},
            {"ns5", ld.ns5.parts},
            {"d5", ld.d5.parts},
            {"ns5_by_position", ld.ns5_by_position},
            {"dual_ns5_by_position", ns5_positions(d)}};
}

json report_json(const MirrorReport& r) {
    json pairs = json::array();
    for (auto& p : r.pairs) pairs.push_back({{"left", p.left}, {"right", p.right}, {"mismatch", p.mismatch}});
    return {{"schema", kSchema},
            {"kind", r.kind},
            {"quiver", quiver_json(r.quiver)},
            {"dual", quiver_json(r.dual)},
            {"params", {{"left", params_json(r.left_params)}, {"right", params_json(r.right_params)}}},
            {"expected", r.expected},
            {"counts", {r.count_left, r.count_right}},
            {"pairs", pairs},
            {"constants", cvec_json(r.constants)},
            {"tol", r.tol},
            {"verdict", verdict_name(r.verdict)},
            {"notes", r.notes}};
}

MirrorReport json_report(const json& j) {
    MirrorReport r;
    r.kind = field(j, "kind").get<std::string>();
    r.quiver = json_quiver(field(j, "quiver"));
    r.dual = json_quiver(field(j, "dual"));
    r.left_params = json_params(field(field(j, "params"), "left"));
    r.right_params = json_params(field(field(j, "params"), "right"));
    r.expected = field(j, "expected").get<long>();
    const auto counts = int_list(field(j, "counts"), "counts");
    if (counts.size() != 2) bad("counts must have two entries");
    r.count_left = counts[0];
    r.count_right = counts[1];
    for (auto& p : field(j, "pairs"))
        r.pairs.push_back({field(p, "left").get<int>(), field(p, "right").get<int>(), field(p, "mismatch").get<double>()});
    r.constants = json_cvec(field(j, "constants"));
    r.tol = field(j, "tol").get<double>();
    r.verdict = verdict_from(field(j, "verdict").get<std::string>());
    r.notes = field(j, "notes").get<std::vector<std::string>>();
    return r;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        bad(path + ": " + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_output(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << dump(j);
        return;
    }
    std::ofstream out(path);
    if (!out) bad("cannot write " + path);
    out << dump(j);
}

}  // namespace qmirror
