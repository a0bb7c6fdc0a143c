#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include <yaml-cpp/yaml.h>

#include "epflow/dynamics.hpp"
#include "epflow/errors.hpp"
#include "epflow/scenarios.hpp"

namespace epflow {

/// Malformed or invalid configuration. line() is 1-based, 0 when unknown.
class ConfigError : public ParameterError {
public:
    ConfigError(std::string field, int line, const std::string& what)
        : ParameterError(field, (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + what),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

struct OutputSpec {
    std::string directory = "epflow_out";
    std::size_t snapshot_every = 0;                    ///< 0 selects about 200 snapshots per run
    std::vector<std::string> formats{"csv", "json"};

    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
    ScenarioSpec scenario;
    GridSpec grid;
    StepControl control;
    OutputSpec outputs;

    void validate() const {
        if (grid.d < 1) throw ParameterError("grid.d", "dimension must be >= 1");
        if (grid.n < RadialGrid::min_nodes) throw ParameterError("grid.n", "need at least 16 nodes");
        if (!(grid.r_max > 0.0) || !std::isfinite(grid.r_max)) throw ParameterError("grid.r_max", "must be > 0");
        scenario.validate();
        control.validate();
        for (const auto& f : outputs.formats) {
            if (f != "csv" && f != "json") throw ParameterError("outputs.formats", "unknown format '" + f + "'");
        }
        if (outputs.directory.empty()) throw ParameterError("outputs.directory", "must not be empty");
    }

    bool operator==(const RunConfig&) const = default;
};

/// Parameter grid of a sweep; amplitude sign selects bump (A > 0) or monotone negative (A < 0) data.
struct SweepConfig {
    std::vector<double> amplitudes;
    std::vector<double> sigmas{1.0};
    std::vector<int> dims{3};
    double r_max = 20.0;
    std::size_t n = 2048;
    StepControl control;
    std::string directory = "epflow_out";

    bool operator==(const SweepConfig&) const = default;
};

namespace detail {

inline int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

inline void require_map(const YAML::Node& node, const std::string& path) {
    if (!node.IsMap()) throw ConfigError(path, line_of(node), "expected a mapping");
}

inline void reject_unknown(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> keys) {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            throw ConfigError(path.empty() ? key : path + "." + key, line_of(kv.first), "unknown key");
        }
    }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) throw ConfigError(path, line_of(node), "expected a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(path, line_of(node), "cannot read '" + node.Scalar() + "'");
    }
}

template <class T>
void read(const YAML::Node& parent, const char* key, const std::string& path, T& out) {
    if (const YAML::Node v = parent[key]) out = scalar<T>(v, path + "." + key);
}

inline std::size_t read_count(const YAML::Node& node, const std::string& path) {
    const auto v = scalar<long long>(node, path);
    if (v < 0) throw ConfigError(path, line_of(node), "must be >= 0");
    return static_cast<std::size_t>(v);
}

/// Re-throws a validation error from a parsed section with the line of the offending key.
template <class F>
void validated(const YAML::Node& root, F&& check) {
    try {
        check();
    } catch (const ConfigError&) {
        throw;
    } catch (const ParameterError& e) {
        YAML::Node at = root;
        std::string field = e.field();
        std::stringstream ss(field);
        std::string part;
        while (std::getline(ss, part, '.')) {
            if (!at.IsMap() || !at[part]) break;
            at = at[part];
        }
        const std::string what = e.what();
        const auto colon = what.find(": ");
        throw ConfigError(field, line_of(at), colon == std::string::npos ? what : what.substr(colon + 2));
    }
}

inline YAML::Node load_yaml(const std::string& text) {
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("config", e.mark.line + 1, e.msg);
    }
}

inline void read_control(const YAML::Node& c, StepControl& control) {
    require_map(c, "control");
    reject_unknown(c, "control", {"dt_init", "dt_min", "safety", "blowup_threshold", "horizon"});
    read(c, "dt_init", "control", control.dt_init);
    read(c, "dt_min", "control", control.dt_min);
    read(c, "safety", "control", control.safety);
    read(c, "blowup_threshold", "control", control.blowup_threshold);
    read(c, "horizon", "control", control.horizon);
}

}  // namespace detail

/**
 * Run configuration from YAML text (JSON is accepted as a YAML subset).
 *
 *   scenario: {kind, amplitude, sigma, ratio_target, c1, c2, t0}
 *   grid:     {d, r_max, n}
 *   control:  {dt_init, dt_min, safety, blowup_threshold, horizon}
 *   outputs:  {directory, snapshot_every, formats}
 *
 * Missing keys keep their defaults; unknown keys are errors.
 */
inline RunConfig parse_run_config(const std::string& text) {
    using namespace detail;
    const YAML::Node root = load_yaml(text);
    if (!root || root.IsNull()) throw ConfigError("config", 0, "empty configuration");
    require_map(root, "config");
    reject_unknown(root, "", {"scenario", "grid", "control", "outputs"});
    RunConfig cfg;

    if (const YAML::Node s = root["scenario"]) {
        require_map(s, "scenario");
        reject_unknown(s, "scenario", {"kind", "amplitude", "sigma", "ratio_target", "c1", "c2", "t0"});
        if (const YAML::Node k = s["kind"]) {
            const auto name = scalar<std::string>(k, "scenario.kind");
            const auto kind = scenario_kind_from_string(name);
            if (!kind) throw ConfigError("scenario.kind", line_of(k), "unknown scenario kind '" + name + "'");
            cfg.scenario.kind = *kind;
        } else {
            throw ConfigError("scenario.kind", line_of(s), "missing");
        }
        read(s, "amplitude", "scenario", cfg.scenario.amplitude);
        read(s, "sigma", "scenario", cfg.scenario.sigma);
        read(s, "ratio_target", "scenario", cfg.scenario.ratio_target);
        read(s, "c1", "scenario", cfg.scenario.c1);
        read(s, "c2", "scenario", cfg.scenario.c2);
        if (const YAML::Node t0 = s["t0"]) {
            if (t0.IsScalar() && t0.Scalar() == "auto") {
                cfg.scenario.t0.reset();
            } else {
                cfg.scenario.t0 = scalar<double>(t0, "scenario.t0");
            }
        }
    } else {
        throw ConfigError("scenario", 0, "missing");
    }

    if (const YAML::Node g = root["grid"]) {
        require_map(g, "grid");
        reject_unknown(g, "grid", {"d", "r_max", "n"});
        read(g, "d", "grid", cfg.grid.d);
        read(g, "r_max", "grid", cfg.grid.r_max);
        if (const YAML::Node n = g["n"]) cfg.grid.n = read_count(n, "grid.n");
    }
    if (const YAML::Node c = root["control"]) read_control(c, cfg.control);
    if (const YAML::Node o = root["outputs"]) {
        require_map(o, "outputs");
        reject_unknown(o, "outputs", {"directory", "snapshot_every", "formats"});
        read(o, "directory", "outputs", cfg.outputs.directory);
        if (const YAML::Node se = o["snapshot_every"]) cfg.outputs.snapshot_every = read_count(se, "outputs.snapshot_every");
        if (const YAML::Node f = o["formats"]) {
            if (!f.IsSequence()) throw ConfigError("outputs.formats", line_of(f), "expected a list");
            cfg.outputs.formats.clear();
            for (const auto& item : f) cfg.outputs.formats.push_back(scalar<std::string>(item, "outputs.formats"));
        }
    }
    cfg.control.snapshot_every = cfg.outputs.snapshot_every;
    validated(root, [&] { cfg.validate(); });
    return cfg;
}

/**
 * Sweep configuration:
 *
 *   sweep:   {amplitudes: [...], sigmas: [...], dims: [...]}
 *   grid:    {r_max, n}
 *   control: {...}
 *   outputs: {directory}
 */
inline SweepConfig parse_sweep_config(const std::string& text) {
    using namespace detail;
    const YAML::Node root = load_yaml(text);
    if (!root || root.IsNull()) throw ConfigError("config", 0, "empty configuration");
    require_map(root, "config");
    reject_unknown(root, "", {"sweep", "grid", "control", "outputs"});
    SweepConfig cfg;
    const YAML::Node s = root["sweep"];
    if (!s) throw ConfigError("sweep", 0, "missing");
    require_map(s, "sweep");
    reject_unknown(s, "sweep", {"amplitudes", "sigmas", "dims"});
    auto list = [&](const char* key, auto& out) {
        if (const YAML::Node v = s[key]) {
            const std::string path = std::string("sweep.") + key;
            if (!v.IsSequence()) throw ConfigError(path, line_of(v), "expected a list");
            out.clear();
            for (const auto& item : v) out.push_back(scalar<typename std::decay_t<decltype(out)>::value_type>(item, path));
        }
    };
    list("amplitudes", cfg.amplitudes);
    list("sigmas", cfg.sigmas);
    list("dims", cfg.dims);
    if (const YAML::Node g = root["grid"]) {
        require_map(g, "grid");
        reject_unknown(g, "grid", {"r_max", "n"});
        read(g, "r_max", "grid", cfg.r_max);
        if (const YAML::Node n = g["n"]) cfg.n = read_count(n, "grid.n");
    }
    if (const YAML::Node c = root["control"]) read_control(c, cfg.control);
    if (const YAML::Node o = root["outputs"]) {
        require_map(o, "outputs");
        reject_unknown(o, "outputs", {"directory"});
        read(o, "directory", "outputs", cfg.directory);
    }
    validated(root, [&] {
        for (double sgm : cfg.sigmas) {
            if (!(sgm > 0.0)) throw ParameterError("sweep.sigmas", "entries must be > 0");
        }
        for (int d : cfg.dims) {
            if (d < 1) throw ParameterError("sweep.dims", "entries must be >= 1");
        }
        if (!(cfg.r_max > 0.0)) throw ParameterError("grid.r_max", "must be > 0");
        if (cfg.n < RadialGrid::min_nodes) throw ParameterError("grid.n", "need at least 16 nodes");
        cfg.control.validate();
    });
    return cfg;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", 0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json to_json(const StepControl& c) {
    return {{"dt_init", c.dt_init},
            {"dt_min", c.dt_min},
            {"safety", c.safety},
            {"blowup_threshold", c.blowup_threshold},
            {"horizon", c.horizon}};
}

/// Config in the same schema parse_run_config reads, so parse(dump(to_json(c))) == c.
inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json scenario = {{"kind", to_string(c.scenario.kind)},
                               {"amplitude", c.scenario.amplitude},
                               {"sigma", c.scenario.sigma},
                               {"ratio_target", c.scenario.ratio_target},
                               {"c1", c.scenario.c1},
                               {"c2", c.scenario.c2}};
    scenario["t0"] = c.scenario.t0 ? nlohmann::json(*c.scenario.t0) : nlohmann::json("auto");
    return {{"scenario", scenario},
            {"grid", {{"d", c.grid.d}, {"r_max", c.grid.r_max}, {"n", c.grid.n}}},
            {"control", to_json(c.control)},
            {"outputs",
             {{"directory", c.outputs.directory},
              {"snapshot_every", c.outputs.snapshot_every},
              {"formats", c.outputs.formats}}}};
}

}  // namespace epflow
