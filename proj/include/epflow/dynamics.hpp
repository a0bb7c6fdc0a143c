#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "epflow/functionals.hpp"
#include "epflow/grid.hpp"
#include "epflow/helmholtz.hpp"

namespace epflow {

struct SimState {
    RadialField phi;
    double t = 0.0;
    std::optional<HelmholtzSolve> cached_solve;  ///< solve of the current phi when present
};

struct StepControl {
    double dt_init = 0.01;
    double dt_min = 1e-4;
    double safety = 0.5;
    double blowup_threshold = 1e3;  ///< amplitude ratio ||phi||_inf / ||phi_0||_inf
    double horizon = 10.0;          ///< final time; negative integrates backward
    std::size_t snapshot_every = 0; ///< steps between field snapshots, 0 = about 200 per run

    void validate() const {
        if (!(dt_init > 0.0)) throw ParameterError("control.dt_init", "must be > 0");
        if (!(dt_min > 0.0)) throw ParameterError("control.dt_min", "must be > 0");
        if (!(safety > 0.0 && safety <= 1.0)) throw ParameterError("control.safety", "must lie in (0, 1]");
        if (!(blowup_threshold > 1.0)) throw ParameterError("control.blowup_threshold", "must be > 1");
        if (!std::isfinite(horizon)) throw ParameterError("control.horizon", "must be finite");
    }

    bool operator==(const StepControl&) const = default;
};

enum class Termination { HorizonReached, BlowupDetected, StepUnderflow, NumericalFault };

inline const char* to_string(Termination r) {
    switch (r) {
        case Termination::HorizonReached: return "HorizonReached";
        case Termination::BlowupDetected: return "BlowupDetected";
        case Termination::StepUnderflow: return "StepUnderflow";
        case Termination::NumericalFault: return "NumericalFault";
    }
    return "?";
}

struct BlowupEstimate {
    double t_star = 0.0;
    double uncertainty = 0.0;
};

struct TerminationReport {
    Termination reason = Termination::HorizonReached;
    double t_end = 0.0;
    std::optional<BlowupEstimate> t_star_estimate;  ///< present iff reason == BlowupDetected
    double criterion_integral = 0.0;               ///< int_0^t_end ||phi(t)||_inf dt
    std::size_t steps = 0;
    std::string message;
};

struct Snapshot {
    double t = 0.0;
    HelmholtzSolve solve;  ///< phi, g, g' at time t
};

struct Trajectory {
    std::vector<DiagnosticsRecord> records;  ///< one per step, including the initial state
    std::vector<Snapshot> snapshots;
    std::vector<std::string> warnings;

    std::vector<double> times() const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(r.t);
        return out;
    }

    std::vector<double> origin_values() const {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(r.phi0);
        return out;
    }
};

namespace detail {

inline void require_finite(const RadialField& f, const char* what) {
    if (!f.all_finite()) throw NumericalFault(std::string("non-finite values in ") + what);
}

}  // namespace detail

/// d phi / dt = 1/2 phi^2 + int_r^R phi' g ds - g' phi', given the Helmholtz solve of phi.
inline RadialField rhs(const HelmholtzSolve& s) {
    const RadialField phip = differentiate_radial(s.phi);
    RadialField out = tail_integral(phip, s.g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += 0.5 * s.phi[i] * s.phi[i] - s.gprime[i] * phip[i];
    }
    return out;
}

inline RadialField rhs(const HelmholtzSolver& solver, const RadialField& phi) {
    return rhs(solver.solve(phi));
}

inline RadialField rhs(const SimState& state) {
    detail::require_finite(state.phi, "state");
    if (state.cached_solve) return rhs(*state.cached_solve);
    return rhs(solve_helmholtz(state.phi));
}

/// One classical RK4 step of size dt (negative dt steps backward). Throws NumericalFault.
inline SimState step(const HelmholtzSolver& solver, const SimState& s, double dt) {
    detail::require_finite(s.phi, "state");
    const RadialField k1 = s.cached_solve ? rhs(*s.cached_solve) : rhs(solver, s.phi);
    const RadialField k2 = rhs(solver, s.phi.axpy(0.5 * dt, k1));
    const RadialField k3 = rhs(solver, s.phi.axpy(0.5 * dt, k2));
    const RadialField k4 = rhs(solver, s.phi.axpy(dt, k3));
    RadialField next = s.phi;
    for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    detail::require_finite(next, "RK4 update");
    SimState out{std::move(next), s.t + dt, std::nullopt};
    out.cached_solve = solver.solve(out.phi);
    detail::require_finite(out.cached_solve->g, "Helmholtz solve");
    return out;
}

inline SimState step(const SimState& s, double dt) { return step(HelmholtzSolver(s.phi.grid_ptr()), s, dt); }

/**
 * Blowup time from the Riccati profile phi(0,t) ~ 1 / (c (T* - t)).
 *
 * Fits 1/phi(0,t) linearly in t over the final growth window and
 * extrapolates its zero. The window holds the samples above both five times
 * |phi(0,t_0)| and 1/30 of the last value, widened to the last ten samples of
 * the positive increasing tail when shorter. Refits on the last half and
 * quarter of the window, with the fit residual, give the uncertainty.
 */
inline BlowupEstimate estimate_blowup_time(std::span<const double> t, std::span<const double> phi0) {
    if (t.size() != phi0.size() || t.size() < 3) throw FitFailure("need at least 3 samples");
    const std::size_t n = t.size();

    std::size_t start = n;  // trailing run of positive, increasing samples
    while (start > 0 && phi0[start - 1] > 0.0 &&
           (start == n || phi0[start - 1] <= phi0[start])) {
        --start;
    }
    if (n - start < 3) throw FitFailure("phi(0,t) is not positive and increasing at the end of the series");

    const double level = std::max(5.0 * std::abs(phi0[0]), phi0[n - 1] / 30.0);
    std::size_t window = start;
    while (window < n && phi0[window] <= level) ++window;
    if (n - window < 10) window = std::max(start, n >= 10 ? n - 10 : 0);

    struct Fit {
        double t_star, resid;
    };
    auto fit = [&](std::size_t from) -> Fit {
        const std::size_t m = n - from;
        double st = 0, sy = 0, stt = 0, sty = 0;
        for (std::size_t i = from; i < n; ++i) {
            const double y = 1.0 / phi0[i];
            st += t[i];
            sy += y;
            stt += t[i] * t[i];
            sty += t[i] * y;
        }
        const double mt = st / m, my = sy / m;
        const double var = stt / m - mt * mt;
        if (!(var > 0.0)) throw FitFailure("degenerate time window");
        const double slope = (sty / m - mt * my) / var;
        if (!(slope < 0.0)) throw FitFailure("1/phi(0,t) is not decreasing over the fit window");
        const double icpt = my - slope * mt;
        double ss = 0.0;
        for (std::size_t i = from; i < n; ++i) {
            const double e = 1.0 / phi0[i] - (icpt + slope * t[i]);
            ss += e * e;
        }
        const double sigma = m > 2 ? std::sqrt(ss / (m - 2)) : 0.0;
        return {-icpt / slope, sigma / std::abs(slope)};
    };

    for (std::size_t i = window + 1; i < n; ++i) {
        if (!(1.0 / phi0[i] < 1.0 / phi0[i - 1])) throw FitFailure("1/phi(0,t) is not decreasing over the fit window");
    }

    const std::size_t len = n - window;
    const Fit main = fit(window);
    double spread = 0.0;
    for (std::size_t from : {std::min(window + len / 2, n - 3), std::min(window + 3 * len / 4, n - 3)}) {
        spread = std::max(spread, std::abs(fit(from).t_star - main.t_star));
    }
    return {main.t_star, std::max(spread, main.resid)};
}

inline BlowupEstimate estimate_blowup_time(const Trajectory& traj) {
    const auto t = traj.times();
    const auto p = traj.origin_values();
    return estimate_blowup_time(t, p);
}

namespace detail {

/// dphi(0)/dt at every sample by the 5-point finite-difference stencil on nonuniform times.
inline void fill_time_derivative(std::vector<DiagnosticsRecord>& recs) {
    const std::size_t n = recs.size();
    if (n < 2) return;
    // Fornberg weights for the first derivative at x0 from nodes xs
    auto weights = [](double x0, const double* xs, int m, double* w) {
        // Lagrange basis derivative: w_j = L_j'(x0)
        for (int j = 0; j < m; ++j) {
            double sum = 0.0;
            for (int k = 0; k < m; ++k) {
                if (k == j) continue;
                double prod = 1.0 / (xs[j] - xs[k]);
                for (int l = 0; l < m; ++l) {
                    if (l == j || l == k) continue;
                    prod *= (x0 - xs[l]) / (xs[j] - xs[l]);
                }
                sum += prod;
            }
            w[j] = sum;
        }
    };
    const int m = static_cast<int>(std::min<std::size_t>(5, n));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= static_cast<std::size_t>(m / 2) ? i - m / 2 : 0;
        if (lo + m > n) lo = n - m;
        double xs[5], w[5];
        for (int j = 0; j < m; ++j) xs[j] = recs[lo + j].t;
        weights(recs[i].t, xs, m, w);
        double d = 0.0;
        for (int j = 0; j < m; ++j) d += w[j] * recs[lo + j].phi0;
        recs[i].origin_identity_lhs = d;
    }
}

}  // namespace detail

/**
 * Adaptive RK4 integration up to control.horizon.
 *
 * Step: dt = safety * min(dt_init, 1/||phi||_inf, h / max(1, ||g'||_inf)).
 * Blowup is declared only when the amplitude has grown by blowup_threshold
 * and the step has collapsed below 10 dt_min; a step below dt_min without
 * amplitude growth is a StepUnderflow. Terminal conditions are reported,
 * never thrown.
 */
inline std::pair<Trajectory, TerminationReport> evolve(SimState state, const StepControl& control) {
    control.validate();
    const RadialGrid& grid = state.phi.grid();
    const HelmholtzSolver solver(state.phi.grid_ptr());
    Trajectory traj;
    TerminationReport report;

    const double t_begin = state.t;
    const double direction = control.horizon >= t_begin ? 1.0 : -1.0;
    const double h = grid.spacing();

    auto finish = [&](Termination reason, std::string msg) {
        report.reason = reason;
        report.t_end = state.t;
        report.message = std::move(msg);
        detail::fill_time_derivative(traj.records);
        if (reason == Termination::BlowupDetected) {
            try {
                report.t_star_estimate = estimate_blowup_time(traj);
            } catch (const FitFailure& e) {
                report.t_star_estimate = BlowupEstimate{state.t, std::abs(state.t - t_begin)};
                traj.warnings.push_back(std::string("blowup fit failed: ") + e.what());
            }
        }
        if (traj.snapshots.empty() || traj.snapshots.back().t != state.t) {
            if (state.cached_solve) traj.snapshots.push_back({state.t, *state.cached_solve});
        }
        return std::pair{std::move(traj), std::move(report)};
    };

    if (!state.phi.all_finite()) return finish(Termination::NumericalFault, "initial data not finite");
    if (!state.cached_solve) state.cached_solve = solver.solve(state.phi);

    const double sup0 = state.phi.sup_norm();
    bool tail_warned = false;
    auto record = [&](const SimState& s) {
        DiagnosticsRecord rec = make_record(s.t, *s.cached_solve);
        rec.criterion_integral = report.criterion_integral;
        traj.records.push_back(rec);
        if (!tail_warned) {
            const RadialField phip = differentiate_radial(s.phi);
            const double bp = tail_boundary_product(phip, s.cached_solve->g);
            if (bp > default_tail_tolerance) {
                tail_warned = true;
                traj.warnings.push_back("tail product |phi' g| at r_max = " + std::to_string(bp) +
                                        " exceeds tolerance at t = " + std::to_string(s.t));
            }
        }
    };
    record(state);

    std::size_t every = control.snapshot_every;
    {
        const double dt0 = control.safety *
                           std::min({control.dt_init, sup0 > 0 ? 1.0 / sup0 : control.dt_init,
                                     h / std::max(1.0, state.cached_solve->gprime.sup_norm())});
        if (every == 0) {
            const double est = std::abs(control.horizon - t_begin) / dt0;
            every = std::max<std::size_t>(1, static_cast<std::size_t>(est / 200.0));
        }
    }
    traj.snapshots.push_back({state.t, *state.cached_solve});

    while (true) {
        const double remaining = (control.horizon - state.t) * direction;
        if (remaining <= 1e-12 * std::max(1.0, std::abs(control.horizon))) {
            return finish(Termination::HorizonReached, "horizon reached");
        }
        const double sup = state.phi.sup_norm();
        const double gsup = state.cached_solve->gprime.sup_norm();
        double dt = control.safety *
                    std::min({control.dt_init, sup > 0 ? 1.0 / sup : control.dt_init, h / std::max(1.0, gsup)});
        if (sup0 > 0.0 && sup >= control.blowup_threshold * sup0 && dt < 10.0 * control.dt_min) {
            return finish(Termination::BlowupDetected, "amplitude grew by the blowup threshold with collapsing step");
        }
        if (dt < control.dt_min) {
            return finish(Termination::StepUnderflow, "step fell below dt_min before the amplitude threshold");
        }
        dt = std::min(dt, remaining);
        try {
            SimState next = step(solver, state, direction * dt);
            report.criterion_integral += 0.5 * dt * (sup + next.phi.sup_norm());
            state = std::move(next);
        } catch (const NumericalFault& e) {
            return finish(Termination::NumericalFault, e.what());
        }
        ++report.steps;
        record(state);
        if (report.steps % every == 0) traj.snapshots.push_back({state.t, *state.cached_solve});
    }
}

/// Outcome of tracing dz/dt = g'(z, t) from seed radii through stored snapshots.
struct CharacteristicReport {
    std::vector<double> seeds;
    std::vector<double> final_positions;
    std::size_t sign_flips = 0;          ///< seeds where phi' changed sign along the curve
    std::size_t left_domain = 0;
    double bound_B = 0.0;                ///< sup_t ||g'||_inf + ||g''||_inf
    double max_displacement = 0.0;       ///< max over seeds and times of |z - alpha|
    double max_displacement_ratio = 0.0; ///< max of |z - alpha| / (|t - t0| B)
};

/**
 * Traces characteristics through a snapshot sequence with Heun's method,
 * interpolating g' linearly in r and in t. Checks that phi' keeps its sign
 * along each curve (ignoring seeds with |phi_0'(alpha)| <= sign_tol) and
 * compares the displacement with |t - t0| B.
 */
inline CharacteristicReport characteristic_flow(std::span<const Snapshot> snaps, std::span<const double> seeds,
                                                double dt_min, double sign_tol) {
    if (snaps.size() < 2) throw ParameterError("snapshots", "need at least two snapshots");
    for (std::size_t k = 1; k < snaps.size(); ++k) {
        if (std::abs(snaps[k].t - snaps[k - 1].t) > 100.0 * dt_min * (1 + 1e-12)) {
            throw ParameterError("snapshots", "snapshot spacing exceeds 100 dt_min");
        }
    }
    CharacteristicReport rep;
    rep.seeds.assign(seeds.begin(), seeds.end());
    const double r_max = snaps.front().solve.g.grid().r_max();

    std::vector<RadialField> phip;
    phip.reserve(snaps.size());
    for (const auto& s : snaps) {
        phip.push_back(differentiate_radial(s.solve.phi));
        const double b = s.solve.gprime.sup_norm() + differentiate(s.solve.gprime).sup_norm();
        rep.bound_B = std::max(rep.bound_B, b);
    }

    const double t0 = snaps.front().t;
    for (double alpha : seeds) {
        const double sign0 = phip.front().interpolate(alpha);
        const bool tracked = std::abs(sign0) > sign_tol;
        double z = alpha;
        bool flipped = false, left = false;
        for (std::size_t k = 0; k + 1 < snaps.size() && !left; ++k) {
            const double dt = snaps[k + 1].t - snaps[k].t;
            const double v1 = snaps[k].solve.gprime.interpolate(z);
            const double zs = z + dt * v1;
            const double v2 = snaps[k + 1].solve.gprime.interpolate(zs);
            z += 0.5 * dt * (v1 + v2);
            if (z > r_max || z < 0.0) {
                left = true;
                break;
            }
            const double disp = std::abs(z - alpha);
            rep.max_displacement = std::max(rep.max_displacement, disp);
            const double elapsed = std::abs(snaps[k + 1].t - t0);
            if (rep.bound_B > 0.0 && elapsed > 0.0) {
                rep.max_displacement_ratio = std::max(rep.max_displacement_ratio, disp / (elapsed * rep.bound_B));
            }
            if (tracked) {
                const double v = phip[k + 1].interpolate(z);
                if (v * sign0 < 0.0 && std::abs(v) > sign_tol) flipped = true;
            }
        }
        rep.final_positions.push_back(z);
        if (flipped) ++rep.sign_flips;
        if (left) ++rep.left_domain;
    }
    return rep;
}

}  // namespace epflow
