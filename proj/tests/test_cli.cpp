#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "lvgraph/cli.hpp"
#include "lvgraph/error.hpp"

using namespace lvg;
using namespace lvg::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("lvgraph-test-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kParams = R"("params": {"d1": 1, "d2": 1, "a1": 2, "a2": 1, "b1": 1, "b2": 1, "c1": 1, "c2": 1})";

std::string config(const std::string& solver, const std::string& extra = "") {
    return std::string("{\n\"graph\": {\"generator\": \"cycle\", \"n\": 10},\n") + kParams +
           ",\n\"initial\": {\"prey\": {\"uniform\": [0, 3], \"seed\": 4}, \"pred\": {\"uniform\": [0, 3], \"seed\": 5}},\n"
           "\"solver\": " + solver + extra + "\n}\n";
}

int simulate(const TempDir& dir, const std::string& text, std::string* out_text = nullptr,
             std::string* err_text = nullptr) {
    const auto cfg = dir.write("run.json", text);
    Options opts;
    opts.output_dir = dir.path;
    std::ostringstream out, err;
    const int code = cmd_simulate(cfg, opts, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("parse_run_config") {
    SUBCASE("minimal config uses defaults") {
        const auto c = parse_run_config(config("{}"));
        CHECK(c.graph.generator == "cycle");
        CHECK(c.params.a1 == 2);
        CHECK(c.solver.method == Method::rk4);
        CHECK_FALSE(c.solver.dt.has_value());
        CHECK_FALSE(c.neumann);
    }
    SUBCASE("errors name the field") {
        CHECK_THROWS_WITH_AS(parse_run_config(config(R"({"dt": -1})")), doctest::Contains("dt"), InvalidInput);
        CHECK_THROWS_WITH_AS(parse_run_config(config(R"({"method": "heun"})")), doctest::Contains("method"),
                             InvalidInput);
        CHECK_THROWS_WITH_AS(parse_run_config(config("{}", R"(, "bogus": 1)")), doctest::Contains("bogus"),
                             InvalidInput);
        CHECK_THROWS_AS(parse_run_config("{ not json"), InvalidInput);
        std::string missing = config("{}");
        missing.replace(missing.find("\"c2\": 1"), 7, "\"c2\": 0");
        CHECK_THROWS_WITH_AS(parse_run_config(missing), doctest::Contains("c2"), InvalidInput);
        CHECK_THROWS_WITH_AS(build_domain(parse_run_config(config("{}", R"(, "mode": "neumann")"))),
                             doctest::Contains("interior"), InvalidInput);
    }
}

TEST_CASE("cmd_equilibrium") {
    std::ostringstream out, err;
    CHECK(cmd_equilibrium({1, 1, 2, 1, 1, 1, 1, 1}, out, err) == ok);
    CHECK(out.str().find("e=0.5 g=1.5") != std::string::npos);

    out.str("");
    CHECK(cmd_equilibrium({1, 1, 3, 1, 2, 1, 1, 2}, out, err) == ok);
    CHECK(out.str().find("e=1 g=1") != std::string::npos);

    out.str("");
    CHECK(cmd_equilibrium({1, 1, 2, 1, 1, 1, 2, 1}, out, err) == invalid_input);
    CHECK(out.str().find("violated") != std::string::npos);

    CHECK(cmd_equilibrium({1, 1, 2}, out, err) == invalid_input);
    CHECK(cmd_equilibrium({1, 1, 2, 1, 1, 1, -1, 1}, out, err) == invalid_input);
}

TEST_CASE("cmd_verify") {
    Options opts;
    opts.jobs = 1;
    std::ostringstream out, err;
    CHECK(cmd_verify(1, 2, {"no-such-check"}, opts, out, err) == invalid_input);
    CHECK(err.str().find("green-identity") != std::string::npos);

    out.str("");
    CHECK(cmd_verify(1, 3, {"green-identity"}, opts, out, err) == ok);
    CHECK(out.str().find("PASS  green-identity") != std::string::npos);
    CHECK(out.str().find("summary: 1 checks") != std::string::npos);

    out.str("");
    CHECK(cmd_verify(1, 2, {"p3-neumann"}, opts, out, err) == ok);
    CHECK(out.str().find("p3-neumann/neumann-residual") != std::string::npos);

    CHECK(cmd_verify(1, 0, {}, opts, out, err) == invalid_input);
}

TEST_CASE("cmd_simulate exit codes and outputs") {
    TempDir dir;
    SUBCASE("converged run exits 0 and writes both CSVs") {
        std::string out;
        CHECK(simulate(dir, config(R"({"t_end": 500, "convergence_tol": 1e-6, "record_every": 50})"), &out) == ok);
        CHECK(out.find("stop reason: converged") != std::string::npos);
        const auto diag = slurp(dir.path / "diagnostics.csv");
        const auto states = slurp(dir.path / "states.csv");
        CHECK(diag.rfind("t,L,F_prey,F_pred,prey_min,prey_max,pred_min,pred_max,neumann_residual\n", 0) == 0);
        CHECK(states.rfind("t,vertex,prey,pred\n", 0) == 0);
    }
    SUBCASE("horizon reached without convergence exits 3") {
        std::string err;
        CHECK(simulate(dir, config(R"({"t_end": 1, "convergence_tol": 1e-6})"), nullptr, &err) == not_converged);
        CHECK(err.find("t_end") != std::string::npos);
    }
    SUBCASE("an unstable step size exits 2 and names the bound") {
        std::string err;
        CHECK(simulate(dir, config(R"({"method": "euler", "dt": 2, "t_end": 10})"), nullptr, &err) ==
              invariant_violation);
        CHECK(err.find("M_p") != std::string::npos);
    }
    SUBCASE("coexistence violation with stopping enabled exits 1") {
        std::string text = config(R"({"convergence_tol": 1e-6})");
        text.replace(text.find("\"c1\": 1"), 7, "\"c1\": 3");
        CHECK(simulate(dir, text) == invalid_input);
    }
    SUBCASE("bad config exits 1") {
        CHECK(simulate(dir, "{}") == invalid_input);
    }
    SUBCASE("Neumann run from a marked graph file") {
        dir.write("p3.graph", "v 1 1\nv 2 1\nv 3 1\ne 1 2 1\ne 2 3 1\nb 3\n");
        const std::string text = std::string("{\"graph\": {\"file\": \"p3.graph\"}, \"mode\": \"neumann\", ") + kParams +
                                 R"(, "initial": {"prey": {"constant": 1}, "pred": {"constant": 1}},
                                    "solver": {"t_end": 500, "convergence_tol": 1e-6}})";
        std::string out;
        CHECK(simulate(dir, text, &out) == ok);
        CHECK(out.find("mode: neumann") != std::string::npos);
    }
    SUBCASE("runs are bit-for-bit reproducible") {
        const auto text = config(R"({"t_end": 20, "record_every": 7})");
        REQUIRE(simulate(dir, text) == ok);
        const auto d1 = slurp(dir.path / "diagnostics.csv");
        const auto s1 = slurp(dir.path / "states.csv");
        REQUIRE(simulate(dir, text) == ok);
        CHECK(slurp(dir.path / "diagnostics.csv") == d1);
        CHECK(slurp(dir.path / "states.csv") == s1);
    }
}

TEST_CASE("cmd_sweep") {
    TempDir dir;
    Options opts;
    opts.output_dir = dir.path;
    opts.jobs = 2;
    std::ostringstream out, err;

    const auto cfg = dir.write("sweep.json", config(R"({"t_end": 500, "convergence_tol": 1e-6, "record_every": 100})",
                                                    R"(, "sweep": {"c1": [0.5, 1.0, 2.5]})"));
    REQUIRE(cmd_sweep(cfg, opts, out, err) == ok);
    const auto csv = slurp(dir.path / "sweep.csv");
    CHECK(csv == out.str());
    std::istringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    CHECK(header == "index,d1,d2,a1,a2,b1,b2,c1,c2,status,stop_reason,time_to_tolerance,final_error");
    std::vector<std::string> rows;
    while (std::getline(lines, row)) rows.push_back(row);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].find(",ok,converged,") != std::string::npos);
    CHECK(rows[1].find(",ok,converged,") != std::string::npos);
    CHECK(rows[2].find(",skipped,coexistence-violated,") != std::string::npos);

    const auto empty = dir.write("empty.json", config("{}", R"(, "sweep": {})"));
    CHECK(cmd_sweep(empty, opts, out, err) == invalid_input);
}
