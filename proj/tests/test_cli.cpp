#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmirror/cli.hpp"
#include "qmirror/io.hpp"

using namespace qmirror;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(QMIRROR_FIXTURES) + "/" + name; }

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qmirror_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "qmirror");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    return cli_main(int(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("dual of X_{2,4} is itself") {
    const auto out = scratch("dual_x24.json");
    REQUIRE(run({"dual", fixture("xkl24.json"), "--out", out.string()}) == exit_ok);
    const json j = read_json_file(out.string());
    CHECK(j["schema"] == kSchema);
    CHECK(json_quiver(j["dual"]) == Quiver::xkl(2, 4));
    CHECK(j["ns5"] == json({4, 3, 2, 1, 1, 1}));
    CHECK(j["d5"] == json({4, 3, 2, 1, 1, 1}));
}

TEST_CASE("dual of the A_3 example") {
    const auto out = scratch("dual_a3.json");
    REQUIRE(run({"dual", fixture("a3.json"), "--out", out.string()}) == exit_ok);
    CHECK(json_quiver(read_json_file(out.string())["dual"]) == Quiver({1, 1, 2, 1}, {1, 0, 2, 1}));
}

TEST_CASE("input errors and unrealizable quivers") {
    CHECK(run({"dual", fixture("unrealizable.json")}) == exit_not_realizable);
    CHECK(run({"dual", fixture("malformed.json")}) == exit_input);
    CHECK(run({"dual", fixture("does_not_exist.json")}) == exit_input);
    CHECK(run({"dual"}) == exit_input);
    CHECK(run({"solve", fixture("tp1.json"), "--starts", "0"}) == exit_input);
    CHECK(run({"solve", fixture("tp1.json"), "--tol-newton", "-1"}) == exit_input);
    CHECK(run({"frobnicate"}) == exit_input);
}

TEST_CASE("solve fixtures") {
    const std::pair<const char*, int> cases[] = {{"tp1.json", 2}, {"fflag3.json", 6}, {"hilb2.json", 2}};
    for (auto [name, count] : cases) {
        const auto out = scratch(std::string("solve_") + name);
        REQUIRE(run({"solve", fixture(name), "--out", out.string()}) == exit_ok);
        const json j = read_json_file(out.string());
        CHECK(j["count"] == count);
        CHECK(j["solutions"].size() == size_t(count));
    }
}

TEST_CASE("solve output is byte identical across runs") {
    const auto a = scratch("det_a.json"), b = scratch("det_b.json");
    REQUIRE(run({"solve", fixture("fflag3.json"), "--seed", "7", "--out", a.string()}) == exit_ok);
    REQUIRE(run({"solve", fixture("fflag3.json"), "--seed", "7", "--out", b.string()}) == exit_ok);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("verify passes on the full flag and X_{2,2}") {
    for (const char* name : {"flag3.json", "xkl22.json"}) {
        const auto out = scratch(std::string("verify_") + name);
        CHECK(run({"verify", fixture(name), "--out", out.string()}) == exit_ok);
        CHECK(read_json_file(out.string())["verdict"] == "pass");
    }
}

TEST_CASE("verify with mismatched dual parameters exits with 4") {
    const auto rep = scratch("verify_ok.json");
    REQUIRE(run({"verify", fixture("flag3.json"), "--out", rep.string()}) == exit_ok);
    ModelParams right = json_params(read_json_file(rep.string())["params"]["right"]);
    right.xi[1] *= cplx(0.9, 0.4);
    const auto bad = scratch("bad_dual.json");
    write_output(params_json(right), bad.string());
    const auto out = scratch("verify_bad.json");
    CHECK(run({"verify", fixture("flag3.json"), "--dual-params", bad.string(), "--out", out.string()}) == exit_fail);
    CHECK(read_json_file(out.string())["verdict"] == "fail");
}

TEST_CASE("trs-check and selfdual") {
    CHECK(run({"trs-check", fixture("tp1.json"), "--out", scratch("trs.json").string()}) == exit_ok);
    CHECK(run({"trs-check", fixture("fflag3.json"), "--out", scratch("trs3.json").string()}) == exit_ok);
    CHECK(run({"selfdual", "--k", "2", "--out", scratch("sd.json").string()}) == exit_ok);
    CHECK(run({"selfdual", "--k", "2", "--N", "2", "--out", scratch("sd2.json").string()}) == exit_ok);
    const auto h = scratch("hilb.json");
    CHECK(run({"hilb", "--k", "3", "--out", h.string()}) == exit_ok);
    CHECK(read_json_file(h.string())["count"] == 3);
}

TEST_CASE("outputs round-trip through the parser") {
    const auto out = scratch("rt_solve.json");
    REQUIRE(run({"solve", fixture("fflag3.json"), "--out", out.string()}) == exit_ok);
    const json j = read_json_file(out.string());
    const auto sols = json_solutions(j["solutions"]);
    CHECK(solutions_json(sols) == j["solutions"]);
    const ModelParams p = json_params(j["input"]["params"]);
    CHECK(params_json(p) == j["input"]["params"]);
    CHECK(quiver_json(json_quiver(j["input"]["quiver"])) == j["input"]["quiver"]);

    const auto rep = scratch("rt_report.json");
    REQUIRE(run({"verify", fixture("flag3.json"), "--out", rep.string()}) == exit_ok);
    const json r = read_json_file(rep.string());
    CHECK(report_json(json_report(r)) == r);
    CHECK(dump(report_json(json_report(r))) == slurp(rep));
}

TEST_CASE("complex numbers are [re, im] pairs") {
    CHECK(cplx_json(cplx(1.5, -2.0)) == json({1.5, -2.0}));
    CHECK(json_cplx(json({0.25, 4.0})) == cplx(0.25, 4.0));
    CHECK(json_cplx(json(3.0)) == cplx(3.0, 0.0));
    CHECK_THROWS_AS(json_cplx(json("x")), Error);
    CHECK_THROWS_AS(json_quiver(json{{"v", {1, 2}}, {"w", {1}}}), Error);
}
