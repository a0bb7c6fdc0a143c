#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "catch_amalgamated.hpp"

#include "epflow/epflow.hpp"

using namespace epflow;
namespace fs = std::filesystem;

namespace {

const char* zero_yaml = R"(scenario:
  kind: zero
grid:
  d: 3
  r_max: 20.0
  n: 128
control:
  horizon: 0.5
outputs:
  directory: unused
)";

template <class F>
int config_error_line(F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("epflow_test_" + name);
    fs::remove_all(p);
    return p;
}

/// Runs the built CLI named by EPFLOW_CLI.
int run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " \"" + std::getenv("EPFLOW_CLI") + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("run config parsing", "[cli]") {
    SECTION("defaults and explicit values") {
        const RunConfig c = parse_run_config(zero_yaml);
        CHECK(c.scenario.kind == ScenarioKind::Zero);
        CHECK(c.grid.n == 128);
        CHECK(c.control.horizon == 0.5);
        CHECK(c.outputs.directory == "unused");
        CHECK(c.outputs.formats == std::vector<std::string>{"csv", "json"});
    }
    SECTION("round trip through the JSON echo") {
        RunConfig c = parse_run_config(zero_yaml);
        CHECK(parse_run_config(to_json(c).dump()) == c);
        c.scenario.kind = ScenarioKind::FamilyAData;
        c.scenario.t0 = 0.0125;
        c.control.dt_init = 1.0 / 3.0;
        c.outputs.formats = {"json"};
        CHECK(parse_run_config(to_json(c).dump()) == c);
    }
    SECTION("t0 accepts auto or a number") {
        const std::string base = "scenario:\n  kind: family_a\n  t0: ";
        CHECK_FALSE(parse_run_config(base + "auto\n").scenario.t0);
        CHECK(parse_run_config(base + "0.01\n").scenario.t0 == 0.01);
        CHECK_THROWS_AS(parse_run_config(base + "soon\n"), ConfigError);
    }
    SECTION("unknown keys report their line") {
        const std::string text = "scenario:\n  kind: zero\ngrid:\n  d: 3\n  rmax: 10\n";
        CHECK(config_error_line([&] { parse_run_config(text); }) == 5);
        try {
            parse_run_config(text);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("grid.rmax") != std::string::npos);
        }
    }
    SECTION("invalid values name their field") {
        const std::string text = "scenario:\n  kind: family_a\n  c1: 3.0\n  c2: 2.0\n";
        try {
            parse_run_config(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.field() == "scenario.c2");
            CHECK(e.line() > 0);
        }
    }
    SECTION("missing or unknown kind") {
        CHECK_THROWS_AS(parse_run_config("grid:\n  d: 3\n"), ConfigError);
        CHECK_THROWS_AS(parse_run_config("scenario:\n  sigma: 1\n"), ConfigError);
        CHECK(config_error_line([] { parse_run_config("scenario:\n  kind: blob\n"); }) == 2);
    }
    SECTION("malformed YAML and wrong types") {
        CHECK_THROWS_AS(parse_run_config("scenario: [unclosed\n"), ConfigError);
        CHECK_THROWS_AS(parse_run_config("scenario:\n  kind: zero\ngrid:\n  n: -5\n"), ConfigError);
        CHECK_THROWS_AS(parse_run_config("scenario:\n  kind: zero\noutputs:\n  formats: [xml]\n"), ConfigError);
        CHECK_THROWS_AS(parse_run_config(""), ConfigError);
    }
}

TEST_CASE("sweep config and cells", "[cli]") {
    SweepConfig c = parse_sweep_config("sweep:\n  amplitudes: [1.0, -0.5, 1.0]\n  sigmas: [2.0, 1.0]\n  dims: [3, 2]\n");
    std::vector<std::string> warnings;
    const std::vector<SweepCell> cells = sweep_cells(c, &warnings);
    CHECK(cells.size() == 8);
    CHECK(std::is_sorted(cells.begin(), cells.end()));
    CHECK(cells.front().d == 2);
    CHECK(cells.front().amplitude == -0.5);
    CHECK(warnings.size() == 4);
    CHECK_THROWS_AS(parse_sweep_config("grid:\n  n: 128\n"), ConfigError);

    SECTION("empty sweep gives a header-only table") {
        c.amplitudes.clear();
        const SweepResult r = run_sweep(c);
        CHECK(r.rows.empty());
        CHECK(phase_csv(r) == "d,amplitude,sigma,reason,t_star,final_phi0,message\n");
    }
    SECTION("zero amplitude is an error row, not an abort") {
        c.amplitudes = {0.0};
        c.sigmas = {1.0};
        c.dims = {3};
        c.n = 64;
        const SweepResult r = run_sweep(c);
        REQUIRE(r.rows.size() == 1);
        CHECK(r.rows[0].reason == "Error");
        CHECK(phase_csv(r).find("Error") != std::string::npos);
    }
}

TEST_CASE("number and table formatting", "[cli]") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_hash(0xabcULL) == "0000000000000abc");
    CsvWriter w({"a", "b"});
    w.row({"1", "2"});
    CHECK(w.str() == "a,b\n1,2\n");
    CHECK_THROWS_AS(w.row({"1"}), std::logic_error);
    CHECK(series_header().size() == 11);
}

TEST_CASE("simulation outputs", "[cli]") {
    RunConfig cfg = parse_run_config(zero_yaml);
    cfg.outputs.snapshot_every = 10;
    cfg.control.snapshot_every = 10;
    const RunResult res = run_simulation(cfg);
    CHECK(res.report.reason == Termination::HorizonReached);
    CHECK(exit_code(res.report.reason) == exit_ok);

    const fs::path dir = scratch("outputs");
    write_run_outputs(dir, cfg, res);
    CHECK(fs::exists(dir / "series.csv"));
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "snapshots" / "index.csv"));
    CHECK(fs::exists(dir / "snapshots" / "snap_000000.csv"));
    for (const auto& e : fs::recursive_directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");

    const auto report = nlohmann::json::parse(read_text_file((dir / "report.json").string()));
    CHECK(report["termination"]["reason"] == "HorizonReached");
    CHECK(report["version"] == version);
    CHECK(parse_run_config(report["config"].dump()) == cfg);
    fs::remove_all(dir);
}

TEST_CASE("command-line exit codes", "[cli]") {
    if (!std::getenv("EPFLOW_CLI")) SKIP("EPFLOW_CLI not set");
    const fs::path dir = scratch("cli");
    const fs::path cfg = dir / "zero.yaml", bad = dir / "bad.yaml", out = dir / "out";
    write(cfg, zero_yaml);
    write(bad, "scenario:\n  kind: zero\n  colour: blue\n");

    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("simulate " + bad.string()) == 1);
    CHECK(run_cli("simulate " + (dir / "missing.yaml").string()) == 1);
    CHECK(run_cli("verify nosuchsuite") == 1);
    CHECK(run_cli("simulate " + cfg.string(), "EPFLOW_OUT=" + out.string()) == 0);
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "series.csv"));
    CHECK(run_cli("oracle-check") == 0);
    fs::remove_all(dir);
}
