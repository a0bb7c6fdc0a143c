#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "epflow/dynamics.hpp"
#include "epflow/grid.hpp"
#include "epflow/helmholtz.hpp"

namespace epflow {

enum class ScenarioKind { Zero, PositiveBump, MonotoneNegative, ConcentratedPositive, FamilyASeed, FamilyAData };

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Zero: return "zero";
        case ScenarioKind::PositiveBump: return "gaussian_bump";
        case ScenarioKind::MonotoneNegative: return "monotone_negative";
        case ScenarioKind::ConcentratedPositive: return "concentrated_positive";
        case ScenarioKind::FamilyASeed: return "family_a_seed";
        case ScenarioKind::FamilyAData: return "family_a";
    }
    return "?";
}

inline std::optional<ScenarioKind> scenario_kind_from_string(const std::string& s) {
    for (auto k : {ScenarioKind::Zero, ScenarioKind::PositiveBump, ScenarioKind::MonotoneNegative,
                   ScenarioKind::ConcentratedPositive, ScenarioKind::FamilyASeed, ScenarioKind::FamilyAData}) {
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

struct GridSpec {
    int d = 3;
    double r_max = 20.0;
    std::size_t n = 2048;

    bool operator==(const GridSpec&) const = default;
};

/// Initial-data recipe; which parameters matter depends on kind.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::PositiveBump;
    double amplitude = 1.0;
    double sigma = 1.0;
    double ratio_target = 1.0;
    double c1 = 1.0;
    double c2 = 2.0;
    std::optional<double> t0;  ///< backward time; empty selects it automatically

    void validate() const {
        switch (kind) {
            case ScenarioKind::Zero: break;
            case ScenarioKind::PositiveBump:
            case ScenarioKind::MonotoneNegative:
                if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
                    throw ParameterError("scenario.amplitude", "must be > 0 (data may not vanish identically)");
                }
                if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("scenario.sigma", "must be > 0");
                break;
            case ScenarioKind::ConcentratedPositive:
                if (!(ratio_target > 0.0) || !std::isfinite(ratio_target)) {
                    throw ParameterError("scenario.ratio_target", "must be > 0");
                }
                break;
            case ScenarioKind::FamilyASeed:
            case ScenarioKind::FamilyAData:
                if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw ParameterError("scenario.amplitude", "must be > 0");
                if (!(c1 > 0.0)) throw ParameterError("scenario.c1", "must be > 0");
                if (!(c2 > c1)) throw ParameterError("scenario.c2", "must exceed scenario.c1");
                if (t0 && !(*t0 > 0.0)) throw ParameterError("scenario.t0", "must be > 0 or auto");
                break;
        }
    }

    bool operator==(const ScenarioSpec&) const = default;
};

/// Warning text when |f(r_max)| is not negligible against ||f||_inf, empty otherwise.
inline std::optional<std::string> tail_warning(const RadialField& f, double rel_tol = 1e-12) {
    const double s = f.sup_norm();
    if (s > 0.0 && std::abs(f.back()) >= rel_tol * s) {
        return "initial data not decayed at r_max: |f(r_max)| / ||f||_inf = " + std::to_string(std::abs(f.back()) / s);
    }
    return std::nullopt;
}

/// A exp(-r^2 / sigma^2).
inline RadialField gaussian_bump(double A, double sigma, const GridPtr& grid) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::PositiveBump;
    spec.amplitude = A;
    spec.sigma = sigma;
    spec.validate();
    return RadialField::sample(grid, [=](double r) { return A * std::exp(-r * r / (sigma * sigma)); });
}

/// -A exp(-r^2 / sigma^2): nonpositive and increasing in r.
inline RadialField monotone_negative(double A, double sigma, const GridPtr& grid) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::MonotoneNegative;
    spec.amplitude = A;
    spec.sigma = sigma;
    spec.validate();
    return RadialField::sample(grid, [=](double r) { return -A * std::exp(-r * r / (sigma * sigma)); });
}

/// Width at which phi(0) / ||phi||_2 of a unit Gaussian equals ratio: sigma = (2/pi)^{1/2} ratio^{-2/d}.
inline double concentration_sigma(double ratio, int d) {
    return std::sqrt(2.0 / std::numbers::pi) * std::pow(ratio, -2.0 / d);
}

/// phi(0) / ||phi||_2 of exp(-r^2/sigma^2) on R^d, (2 / (pi sigma^2))^{d/4}.
inline double gaussian_concentration(double sigma, int d) {
    return std::pow(2.0 / (std::numbers::pi * sigma * sigma), 0.25 * d);
}

/// Unit Gaussian with phi(0) / ||phi||_2 = ratio_target.
inline RadialField concentrated_positive(double ratio_target, const GridPtr& grid) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::ConcentratedPositive;
    spec.ratio_target = ratio_target;
    spec.validate();
    const double sigma = concentration_sigma(ratio_target, grid->dim());
    if (sigma < 4.0 * grid->spacing()) {
        throw ParameterError("scenario.ratio_target",
                             "width " + std::to_string(sigma) + " is below 4 grid spacings; refine the grid");
    }
    return RadialField::sample(grid, [=](double r) { return std::exp(-r * r / (sigma * sigma)); });
}

/// Width of the family seed: the geometric mean of c1 and c2.
inline double family_seed_width(double c1, double c2) { return std::sqrt(c1 * c2); }

namespace detail {

/// The three sign conditions on a seed, node by node. Throws ConstructionFailure.
inline void check_seed_conditions(const RadialField& psi, double c1, double c2) {
    const RadialGrid& g = psi.grid();
    const RadialField dpsi = differentiate_radial(psi);
    const double tol = 1e-12 * std::max(psi.sup_norm(), 1e-300);
    if (psi[0] != 0.0) throw ConstructionFailure("seed: psi(0) must be exactly 0", 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.r(i);
        if (r <= c1 && dpsi[i] > tol) throw ConstructionFailure("seed: psi' > 0 inside r <= c1", r);
        if (r > c2 && r <= 3.0 * c2 && !(dpsi[i] > 0.0)) throw ConstructionFailure("seed: psi' <= 0 for c2 < r <= 3 c2", r);
        if (r > 0.5 * c1 && r < 2.0 * c2 && !(psi[i] < 0.0)) throw ConstructionFailure("seed: psi >= 0 for c1/2 < r < 2 c2", r);
        if (psi[i] > 0.0) throw ConstructionFailure("seed: psi > 0", r);
    }
}

}  // namespace detail

/**
 * psi_0(r) = -A (r/s)^2 exp(-(r/s)^2) with s = sqrt(c1 c2).
 *
 * psi_0(0) = 0, psi_0' < 0 on (0, s) and > 0 beyond s, psi_0 < 0 for r > 0,
 * so c1 < s < c2 gives every sign condition of the family construction.
 */
inline RadialField family_a_seed(double c1, double c2, const GridPtr& grid, double A = 1.0) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::FamilyASeed;
    spec.c1 = c1;
    spec.c2 = c2;
    spec.amplitude = A;
    spec.validate();
    if (!(4.0 * c2 < grid->r_max())) throw ParameterError("scenario.c2", "need 2 c2 < r_max / 2");
    const double s = family_seed_width(c1, c2);
    RadialField psi = RadialField::sample(grid, [=](double r) {
        const double x = r / s;
        return -A * x * x * std::exp(-x * x);
    });
    psi[0] = 0.0;
    detail::check_seed_conditions(psi, c1, c2);
    return psi;
}

struct FamilyAReport {
    double t0 = 0.0;            ///< backward time actually used
    double B_hat = 0.0;         ///< ||g'||_inf + ||g''||_inf of the seed
    int attempts = 0;
    double max_phi0 = 0.0;      ///< max over nodes of the returned data (< 0)
    double phi0_origin = 0.0;
    TerminationReport backward;
};

struct FamilyAData {
    RadialField seed;
    RadialField phi0;
    FamilyAReport report;
};

/// B = sup |b| + sup |b'| for the transport coefficient b = g' of phi.
inline double transport_bound(const HelmholtzSolve& s) {
    return s.gprime.sup_norm() + differentiate(s.gprime).sup_norm();
}

/**
 * Integrates the seed backward to time -t0 and returns phi0 = psi(., -t0),
 * strictly negative at every node.
 *
 * Without an explicit t0 the first attempt uses min(c1 / (8 B), 0.05) and
 * halves on failure, up to eight attempts. An explicit t0 is tried once.
 * Throws ConstructionFailure with the offending radius.
 */
inline FamilyAData construct_family_a(double c1, double c2, std::optional<double> t0, const GridPtr& grid,
                                      double A = 1.0, StepControl control = {}) {
    FamilyAData out{family_a_seed(c1, c2, grid, A), RadialField(grid), {}};
    const HelmholtzSolve seed_solve = solve_helmholtz(out.seed);
    out.report.B_hat = transport_bound(seed_solve);
    double t = t0 ? *t0 : std::min(c1 / (8.0 * out.report.B_hat), 0.05);
    const int max_attempts = t0 ? 1 : 8;
    for (int attempt = 1; attempt <= max_attempts; ++attempt, t *= 0.5) {
        out.report.attempts = attempt;
        StepControl back = control;
        back.horizon = -t;
        back.snapshot_every = std::numeric_limits<std::size_t>::max();
        auto [traj, rep] = evolve(SimState{out.seed, 0.0, seed_solve}, back);
        out.report.backward = rep;
        if (rep.reason != Termination::HorizonReached) {
            throw ConstructionFailure(std::string("backward integration ended with ") + to_string(rep.reason));
        }
        const RadialField& phi = traj.snapshots.back().solve.phi;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            if (phi[i] > phi[worst]) worst = i;
        }
        if (phi[worst] < 0.0) {
            out.phi0 = phi;
            out.report.t0 = t;
            out.report.max_phi0 = phi[worst];
            out.report.phi0_origin = phi[0];
            return out;
        }
        if (attempt == max_attempts) {
            throw ConstructionFailure("backward data not strictly negative at t0 = " + std::to_string(t),
                                      grid->r(worst));
        }
    }
    throw ConstructionFailure("unreachable");
}

/// Initial data for a spec, with any non-fatal warnings and the construction record.
struct ScenarioData {
    RadialField phi;
    std::vector<std::string> warnings;
    std::optional<FamilyAReport> family;
};

inline ScenarioData build_scenario(const ScenarioSpec& spec, const GridPtr& grid, const StepControl& control = {}) {
    spec.validate();
    ScenarioData out{RadialField(grid), {}, std::nullopt};
    switch (spec.kind) {
        case ScenarioKind::Zero: break;
        case ScenarioKind::PositiveBump: out.phi = gaussian_bump(spec.amplitude, spec.sigma, grid); break;
        case ScenarioKind::MonotoneNegative: out.phi = monotone_negative(spec.amplitude, spec.sigma, grid); break;
        case ScenarioKind::ConcentratedPositive: out.phi = concentrated_positive(spec.ratio_target, grid); break;
        case ScenarioKind::FamilyASeed: out.phi = family_a_seed(spec.c1, spec.c2, grid, spec.amplitude); break;
        case ScenarioKind::FamilyAData: {
            FamilyAData fa = construct_family_a(spec.c1, spec.c2, spec.t0, grid, spec.amplitude, control);
            out.phi = std::move(fa.phi0);
            out.family = fa.report;
            break;
        }
    }
    if (auto w = tail_warning(out.phi)) out.warnings.push_back(*w);
    return out;
}

}  // namespace epflow
