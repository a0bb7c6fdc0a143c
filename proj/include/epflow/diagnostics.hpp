#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "epflow/dynamics.hpp"
#include "epflow/functionals.hpp"
#include "epflow/grid.hpp"
#include "epflow/helmholtz.hpp"

namespace epflow {

/// Weighted decay of a negative origin value over the second half of a run.
struct EnvelopeReport {
    double t_half = 0.0;
    double t_end = 0.0;
    double sup_weighted = 0.0;     ///< sup over [t_half, t_end] of w(t) |phi(0,t)|
    double weighted_start = 0.0;   ///< w |phi(0)| at t_half
    double weighted_end = 0.0;     ///< w |phi(0)| at t_end
    double max_increase = 0.0;     ///< largest relative rise of w |phi(0)| inside the window
    bool negative = true;          ///< phi(0,t) < 0 at every sample
    bool consistent = true;        ///< w |phi(0)| non-increasing over the window
};

/// Weight of the decay envelope: 1 + t for d >= 3, log(10 + t) for d = 2.
inline double envelope_weight(int d, double t) {
    if (d < 2) throw ParameterError("grid.d", "decay envelopes need d >= 2");
    return d >= 3 ? 1.0 + t : std::log(10.0 + t);
}

/**
 * Checks phi(0,t) < 0 and nondecreasing over the whole series, then measures
 * w(t)|phi(0,t)| on the second half [t_end/2, t_end] (or [t_half, t_end]
 * when t_half >= 0 is supplied).
 *
 * Throws MonotonicityViolation if phi(0,t) drops by more than
 * mono_tol * max(1, |phi(0,t)|) between consecutive samples.
 */
inline EnvelopeReport decay_envelope_check(std::span<const double> t, std::span<const double> phi0, int d,
                                           double t_half = -1.0, double mono_tol = 1e-12,
                                           double flat_tol = 1e-9) {
    if (t.size() != phi0.size() || t.size() < 2) throw ParameterError("trajectory", "need at least two samples");
    if (!(phi0[0] < 0.0)) throw ParameterError("trajectory", "decay envelope needs phi(0,0) < 0");
    EnvelopeReport rep;
    rep.t_end = t.back();
    rep.t_half = t_half >= 0.0 ? t_half : 0.5 * (t.front() + t.back());
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(phi0[i] < 0.0)) rep.negative = false;
        if (i > 0 && phi0[i] < phi0[i - 1] - mono_tol * std::max(1.0, std::abs(phi0[i - 1]))) {
            throw MonotonicityViolation("phi(0,t) decreased between t = " + std::to_string(t[i - 1]) +
                                        " and t = " + std::to_string(t[i]));
        }
    }
    bool first = true;
    double prev = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < rep.t_half) continue;
        const double w = envelope_weight(d, t[i]) * std::abs(phi0[i]);
        rep.sup_weighted = std::max(rep.sup_weighted, w);
        if (first) {
            rep.weighted_start = w;
            first = false;
        } else if (w > prev) {
            rep.max_increase = std::max(rep.max_increase, (w - prev) / prev);
            if (w > prev * (1.0 + flat_tol)) rep.consistent = false;
        }
        rep.weighted_end = w;
        prev = w;
    }
    if (first) throw ParameterError("trajectory", "no samples in the envelope window");
    return rep;
}

inline EnvelopeReport decay_envelope_check(const Trajectory& traj, int d, double t_half = -1.0) {
    const auto t = traj.times();
    const auto p = traj.origin_values();
    return decay_envelope_check(t, p, d, t_half);
}

/// L2 growth bound ||phi(t)||_2 <= B (1+t)^p, B fitted on t in [t0, t0 + fit_window].
struct GrowthReport {
    double exponent = 1.0;
    double B = 0.0;
    double max_ratio = 0.0;   ///< max over the run of ||phi(t)||_2 / (B (1+t)^p)
    double t_worst = 0.0;
    bool holds = true;
};

inline GrowthReport growth_envelope_check(const Trajectory& traj, int d, double fit_window = 1.0) {
    if (traj.records.empty()) throw ParameterError("trajectory", "empty trajectory");
    if (d < 2) throw ParameterError("grid.d", "growth envelopes are stated for d >= 2");
    GrowthReport rep;
    rep.exponent = d >= 3 ? 1.0 : 0.5;
    const double t0 = traj.records.front().t;
    auto env = [&](double t) { return std::pow(1.0 + std::abs(t - t0), rep.exponent); };
    for (const auto& r : traj.records) {
        if (std::abs(r.t - t0) <= fit_window) rep.B = std::max(rep.B, r.l2_norm / env(r.t));
    }
    for (const auto& r : traj.records) {
        const double q = rep.B > 0.0 ? r.l2_norm / (rep.B * env(r.t)) : (r.l2_norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (q > rep.max_ratio) {
            rep.max_ratio = q;
            rep.t_worst = r.t;
        }
    }
    rep.holds = rep.max_ratio <= 1.0 + 1e-12;
    return rep;
}

/// f_t(r) = exp(-t r^2) measured on its own grid.
struct GaussianProbe {
    double t = 0.0;
    double h_half = 0.0;
    double gap = 0.0;             ///< |g(0) - f(0)|
    double ratio = 0.0;           ///< gap / f(0)
    std::vector<std::string> warnings;
};

/// Builds exp(-t r^2) on r_max = 10 / sqrt(t) with n nodes.
inline GaussianProbe gaussian_probe(double t, int d, std::size_t n = 4096) {
    if (!(t > 0.0)) throw ParameterError("t", "probe width parameter must be > 0");
    if (d < 1 || d > 3) throw ParameterError("grid.d", "probe supports d in {1, 2, 3}");
    const double r_max = 10.0 / std::sqrt(t);
    auto grid = make_grid(d, r_max, n);
    const RadialField f = RadialField::sample(grid, [t](double r) { return std::exp(-t * r * r); });
    const HelmholtzSolve s = solve_helmholtz(f);
    GaussianProbe out;
    out.t = t;
    out.h_half = h_half_norm(s);
    out.gap = std::abs(dispersion_gap(s));
    out.ratio = out.gap / f[0];
    // the solve is trustworthy only if the profile spans many nodes and g has decayed
    if (1.0 / std::sqrt(t) < 8.0 * grid->spacing()) out.warnings.push_back("width below 8 grid spacings");
    if (std::abs(s.g.back()) > 1e-6 * std::abs(s.g.front())) out.warnings.push_back("g not decayed at r_max");
    return out;
}

/// Minimum of poincare_ratio(exp(-t r^2)) over the supplied t values.
struct PoincareStudy {
    std::vector<double> ts;
    std::vector<double> ratios;
    double min_ratio = 0.0;
    double argmin_t = 0.0;
};

inline PoincareStudy poincare_study(std::span<const double> ts, int d, std::size_t n) {
    PoincareStudy out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    for (double t : ts) {
        const double r = gaussian_probe(t, d, n).ratio;
        out.ts.push_back(t);
        out.ratios.push_back(r);
        if (r < out.min_ratio) {
            out.min_ratio = r;
            out.argmin_t = t;
        }
    }
    return out;
}

}  // namespace epflow
