// epflow: simulate, verify, sweep and oracle-check front end.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "epflow/epflow.hpp"

namespace {

using namespace epflow;

std::filesystem::path output_dir(const std::string& configured) {
    if (const char* env = std::getenv("EPFLOW_OUT"); env && *env) return env;
    return configured;
}

int cmd_simulate(const std::string& path) {
    RunConfig cfg;
    try {
        cfg = parse_run_config(read_text_file(path));
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    }
    const auto dir = output_dir(cfg.outputs.directory);
    RunResult res;
    try {
        res = run_simulation(cfg);
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ConstructionFailure& e) {
        std::cerr << "construction failed: " << e.what() << " (r = " << e.radius() << ")\n";
        return exit_numerical;
    }
    try {
        write_run_outputs(dir, cfg, res);
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return exit_usage;
    }
    for (const auto& w : res.scenario.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& w : res.traj.warnings) std::cerr << "warning: " << w << "\n";
    std::printf("%s at t=%.10g after %zu steps", to_string(res.report.reason), res.report.t_end, res.report.steps);
    if (res.report.t_star_estimate) {
        std::printf(", T* = %.10g +- %.3g", res.report.t_star_estimate->t_star, res.report.t_star_estimate->uncertainty);
    }
    std::printf("\noutputs in %s\n", dir.string().c_str());
    return exit_code(res.report.reason);
}

void list_suites(std::ostream& os) {
    os << "available suites:";
    for (const auto& [name, ids] : suites()) os << " " << name;
    os << "\n";
}

int cmd_verify(const std::string& suite) {
    const auto ids = suite_criteria(suite);
    if (!ids) {
        std::cerr << "unknown suite '" << suite << "'\n";
        list_suites(std::cerr);
        return exit_usage;
    }
    VerifyContext ctx;
    bool all = true;
    for (int id : *ids) {
        const CriterionResult r = run_criterion(id, ctx);
        std::cout << format_result(r) << std::flush;
        all = all && r.pass();
    }
    std::cout << (all ? "suite passed\n" : "suite FAILED\n");
    return all ? exit_ok : exit_numerical;
}

int cmd_sweep(const std::string& path) {
    SweepConfig cfg;
    try {
        cfg = parse_sweep_config(read_text_file(path));
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    }
    const auto dir = output_dir(cfg.directory);
    const SweepResult res = run_sweep(cfg);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    try {
        write_file_atomic(dir / "phase.csv", phase_csv(res));
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return exit_usage;
    }
    std::printf("%zu cells written to %s\n", res.rows.size(), (dir / "phase.csv").string().c_str());
    return exit_ok;
}

int cmd_oracle_check() {
    bool ok = true;
    std::printf("%-3s %-34s %-22s %-22s %-12s\n", "d", "field", "solve g(0)", "oracle g(0)", "rel diff");
    for (int d : {1, 2, 3}) {
        auto grid = make_grid(d, 20.0, 2048);
        for (const auto& [name, f] : oracle_fields()) {
            const RadialField phi = RadialField::sample(grid, f);
            const double a = solve_helmholtz(phi).g[0], b = helmholtz_oracle(phi);
            const double rel = std::abs(a - b) / phi.sup_norm();
            ok = ok && rel <= 1e-3;
            std::printf("%-3d %-34s %-22.15g %-22.15g %-12.3e %s\n", d, name.c_str(), a, b, rel, rel <= 1e-3 ? "pass" : "FAIL");
        }
    }
    return ok ? exit_ok : exit_numerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial Euler-Poincare flow laboratory"};
    app.require_subcommand(1);
    std::string path, suite;
    auto* sim = app.add_subcommand("simulate", "run one configuration");
    sim->add_option("config", path, "run configuration (YAML)")->required();
    auto* ver = app.add_subcommand("verify", "run a named verification suite");
    ver->add_option("suite", suite, "suite name, or 'all'")->required();
    auto* swp = app.add_subcommand("sweep", "run a parameter sweep");
    swp->add_option("config", path, "sweep configuration (YAML)")->required();
    app.add_subcommand("oracle-check", "compare the Helmholtz solve with the kernel oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }
    try {
        if (*sim) return cmd_simulate(path);
        if (*ver) return cmd_verify(suite);
        if (*swp) return cmd_sweep(path);
        return cmd_oracle_check();
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
}
