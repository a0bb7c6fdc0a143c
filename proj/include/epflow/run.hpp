#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "epflow/config.hpp"
#include "epflow/dynamics.hpp"
#include "epflow/io.hpp"
#include "epflow/scenarios.hpp"

namespace epflow {

/// Process exit codes.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_numerical = 2 };

inline int exit_code(Termination r) {
    return (r == Termination::HorizonReached || r == Termination::BlowupDetected) ? exit_ok : exit_numerical;
}

struct RunResult {
    GridPtr grid;
    ScenarioData scenario;
    Trajectory traj;
    TerminationReport report;
};

/// Builds the initial data for a config and evolves it to the horizon.
inline RunResult run_simulation(const RunConfig& cfg) {
    cfg.validate();
    RunResult out;
    out.grid = make_grid(cfg.grid.d, cfg.grid.r_max, cfg.grid.n);
    out.scenario = build_scenario(cfg.scenario, out.grid, cfg.control);
    StepControl control = cfg.control;
    control.snapshot_every = cfg.outputs.snapshot_every;
    std::tie(out.traj, out.report) = evolve(SimState{out.scenario.phi, 0.0, std::nullopt}, control);
    return out;
}

inline nlohmann::json run_report_json(const RunConfig& cfg, const RunResult& res) {
    std::vector<std::string> warnings = res.scenario.warnings;
    warnings.insert(warnings.end(), res.traj.warnings.begin(), res.traj.warnings.end());
    nlohmann::json j = {{"termination", to_json(res.report)},
                        {"config", to_json(cfg)},
                        {"version", version},
                        {"grid_hash", format_hash(res.grid->hash())},
                        {"warnings", warnings}};
    if (res.scenario.family) {
        const FamilyAReport& f = *res.scenario.family;
        j["family_a"] = {{"t0", f.t0},
                         {"B_hat", f.B_hat},
                         {"attempts", f.attempts},
                         {"max_phi0", f.max_phi0},
                         {"phi0_origin", f.phi0_origin},
                         {"backward", to_json(f.backward)}};
    }
    return j;
}

/// series.csv and snapshots/ for "csv", report.json for "json".
inline void write_run_outputs(const std::filesystem::path& dir, const RunConfig& cfg, const RunResult& res) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto& f = cfg.outputs.formats;
    if (std::find(f.begin(), f.end(), "csv") != f.end()) {
        write_file_atomic(dir / "series.csv", series_csv(res.traj.records));
        CsvWriter index({"index", "t", "file"});
        for (std::size_t k = 0; k < res.traj.snapshots.size(); ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "snap_%06zu.csv", k);
            write_file_atomic(dir / "snapshots" / name, snapshot_csv(res.traj.snapshots[k]));
            index.row({std::to_string(k), format_number(res.traj.snapshots[k].t), name});
        }
        write_file_atomic(dir / "snapshots" / "index.csv", index.str());
    }
    if (std::find(f.begin(), f.end(), "json") != f.end()) {
        write_file_atomic(dir / "report.json", run_report_json(cfg, res).dump(2) + "\n");
    }
}

/// One cell of a sweep; key order (d, amplitude, sigma) is the row order.
struct SweepCell {
    int d = 3;
    double amplitude = 1.0;
    double sigma = 1.0;

    auto key() const { return std::tie(d, amplitude, sigma); }
    bool operator<(const SweepCell& o) const { return key() < o.key(); }
    bool operator==(const SweepCell& o) const { return key() == o.key(); }
};

struct SweepRow {
    SweepCell cell;
    std::string reason;
    double t_star = std::numeric_limits<double>::quiet_NaN();
    double final_phi0 = std::numeric_limits<double>::quiet_NaN();
    std::string message;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
};

/// Cells in lexicographic order with duplicates removed (each duplicate is reported once).
inline std::vector<SweepCell> sweep_cells(const SweepConfig& cfg, std::vector<std::string>* warnings = nullptr) {
    std::vector<SweepCell> cells;
    for (int d : cfg.dims) {
        for (double a : cfg.amplitudes) {
            for (double s : cfg.sigmas) cells.push_back({d, a, s});
        }
    }
    std::sort(cells.begin(), cells.end());
    const auto last = std::unique(cells.begin(), cells.end());
    if (warnings) {
        for (auto it = last; it != cells.end(); ++it) {
            warnings->push_back("duplicate sweep cell d=" + std::to_string(it->d) + " amplitude=" +
                                format_number(it->amplitude) + " sigma=" + format_number(it->sigma) + " ignored");
        }
    }
    cells.erase(last, cells.end());
    return cells;
}

/// A > 0 runs gaussian_bump(A, sigma), A < 0 runs monotone_negative(|A|, sigma).
inline SweepRow run_sweep_cell(const SweepCell& cell, const SweepConfig& cfg) {
    SweepRow row{cell, "", std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), ""};
    try {
        if (cell.amplitude == 0.0) throw ParameterError("sweep.amplitudes", "amplitude 0 is not admissible data");
        auto grid = make_grid(cell.d, cfg.r_max, cfg.n);
        const RadialField phi = cell.amplitude > 0.0 ? gaussian_bump(cell.amplitude, cell.sigma, grid)
                                                     : monotone_negative(-cell.amplitude, cell.sigma, grid);
        StepControl control = cfg.control;
        control.snapshot_every = std::numeric_limits<std::size_t>::max();
        auto [traj, rep] = evolve(SimState{phi, 0.0, std::nullopt}, control);
        row.reason = to_string(rep.reason);
        if (rep.t_star_estimate) row.t_star = rep.t_star_estimate->t_star;
        row.final_phi0 = traj.records.back().phi0;
        row.message = rep.message;
    } catch (const std::exception& e) {
        row.reason = "Error";
        row.message = e.what();
    }
    return row;
}

inline SweepResult run_sweep(const SweepConfig& cfg) {
    SweepResult out;
    for (const SweepCell& c : sweep_cells(cfg, &out.warnings)) out.rows.push_back(run_sweep_cell(c, cfg));
    return out;
}

inline std::string phase_csv(const SweepResult& res) {
    CsvWriter csv({"d", "amplitude", "sigma", "reason", "t_star", "final_phi0", "message"});
    for (const auto& r : res.rows) {
        std::string msg = r.message;
        std::replace_if(msg.begin(), msg.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
        csv.row({std::to_string(r.cell.d), format_number(r.cell.amplitude), format_number(r.cell.sigma), r.reason,
                 format_number(r.t_star), format_number(r.final_phi0), msg});
    }
    return csv.str();
}

}  // namespace epflow
