#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epflow/diagnostics.hpp"
#include "epflow/dynamics.hpp"
#include "epflow/functionals.hpp"
#include "epflow/helmholtz.hpp"
#include "epflow/scenarios.hpp"

namespace epflow {

/// One measured quantity compared against its tolerance.
struct Check {
    std::string label;
    double measured = 0.0;
    std::string relation;  ///< "<=", ">=", "==", "in"
    double bound = 0.0;
    double bound_hi = 0.0; ///< upper end when relation is "in"
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    double seconds = 0.0;

    bool pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return !checks.empty();
    }
};

inline Check check_le(std::string label, double v, double bound) {
    return {std::move(label), v, "<=", bound, 0.0, v <= bound};
}
inline Check check_ge(std::string label, double v, double bound) {
    return {std::move(label), v, ">=", bound, 0.0, v >= bound};
}
inline Check check_in(std::string label, double v, double lo, double hi) {
    return {std::move(label), v, "in", lo, hi, v >= lo && v <= hi};
}
inline Check check_true(std::string label, bool ok) { return {std::move(label), ok ? 1.0 : 0.0, "==", 1.0, 0.0, ok}; }

inline std::string format_check(const Check& c) {
    char buf[256];
    if (c.relation == "in") {
        std::snprintf(buf, sizeof buf, "%-44s %-14.6g in [%.6g, %.6g]  %s", c.label.c_str(), c.measured, c.bound,
                      c.bound_hi, c.pass ? "pass" : "FAIL");
    } else {
        std::snprintf(buf, sizeof buf, "%-44s %-14.6g %s %-12.6g  %s", c.label.c_str(), c.measured, c.relation.c_str(),
                      c.bound, c.pass ? "pass" : "FAIL");
    }
    return buf;
}

inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// A finished run kept for reuse by several criteria.
struct CachedRun {
    GridPtr grid;
    Trajectory traj;
    TerminationReport report;
};

/**
 * Reference runs shared between criteria, computed on first use.
 *
 * blowup(d, n): gaussian_bump(1, 1) on r_max = 20 with default controls.
 * global3: monotone_negative(1, 1), d = 3, r_max = 10, n = 2048, horizon 50,
 *   dt_min = 1e-3 and snapshots every 20 steps (spacing about 0.05).
 * global2: monotone_negative(1, 1), d = 2, r_max = 30, n = 2048, horizon 200.
 */
class VerifyContext {
public:
    const CachedRun& blowup(int d, std::size_t n) {
        auto key = std::pair{d, n};
        auto it = blowup_.find(key);
        if (it == blowup_.end()) {
            auto grid = make_grid(d, 20.0, n);
            StepControl c;
            c.horizon = 100.0;
            c.snapshot_every = std::numeric_limits<std::size_t>::max();
            auto [traj, rep] = evolve(SimState{gaussian_bump(1.0, 1.0, grid), 0.0, std::nullopt}, c);
            it = blowup_.emplace(key, CachedRun{grid, std::move(traj), rep}).first;
        }
        return it->second;
    }

    static StepControl global3_control() {
        StepControl c;
        c.horizon = 50.0;
        c.dt_min = 1e-3;
        c.snapshot_every = 20;
        return c;
    }

    const CachedRun& global3() {
        if (!global3_) {
            auto grid = make_grid(3, 10.0, 2048);
            auto [traj, rep] = evolve(SimState{monotone_negative(1.0, 1.0, grid), 0.0, std::nullopt}, global3_control());
            global3_ = CachedRun{grid, std::move(traj), rep};
        }
        return *global3_;
    }

    const CachedRun& global2() {
        if (!global2_) {
            auto grid = make_grid(2, 30.0, 2048);
            StepControl c;
            c.horizon = 200.0;
            c.snapshot_every = std::numeric_limits<std::size_t>::max();
            auto [traj, rep] = evolve(SimState{monotone_negative(1.0, 1.0, grid), 0.0, std::nullopt}, c);
            global2_ = CachedRun{grid, std::move(traj), rep};
        }
        return *global2_;
    }

private:
    std::map<std::pair<int, std::size_t>, CachedRun> blowup_;
    std::optional<CachedRun> global3_;
    std::optional<CachedRun> global2_;
};

namespace detail {

/// Least-squares slope of log(err) against log(h).
inline double log_slope(const std::vector<double>& h, const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline double manufactured_error(double r_max, std::size_t n) {
    auto grid = make_grid(3, r_max, n);
    const auto phi = RadialField::sample(grid, [](double r) { return (7.0 - 4.0 * r * r) * std::exp(-r * r); });
    const HelmholtzSolve s = solve_helmholtz(phi);
    double err = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        err = std::max(err, std::abs(s.g[i] - std::exp(-grid->r(i) * grid->r(i))));
    }
    return err;  // exact solution has sup norm 1
}

/// Smallest relative step phi0[i] - phi0[i-1], negative when the series decreases.
inline double min_increment(const Trajectory& traj, double* worst_t = nullptr) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        const double a = traj.records[i - 1].phi0, b = traj.records[i].phi0;
        const double rel = (b - a) / std::max(1.0, std::abs(a));
        if (rel < worst) {
            worst = rel;
            if (worst_t) *worst_t = traj.records[i].t;
        }
    }
    return worst;
}

/// Running integral at time t by linear interpolation between records.
inline double criterion_integral_at(const Trajectory& traj, double t) {
    const auto& r = traj.records;
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (r[i].t >= t) {
            const double s = (t - r[i - 1].t) / (r[i].t - r[i - 1].t);
            return r[i - 1].criterion_integral + s * (r[i].criterion_integral - r[i - 1].criterion_integral);
        }
    }
    return r.back().criterion_integral;
}

inline double origin_identity_good_fraction(const Trajectory& traj, std::size_t* bad_out = nullptr,
                                        std::size_t* total_out = nullptr) {
    std::size_t total = 0, bad = 0;
    for (const auto& r : traj.records) {
        if (!std::isfinite(r.origin_identity_lhs)) continue;
        ++total;
        if (std::abs(r.origin_identity_lhs - r.origin_identity_rhs) > 1e-3 * std::max(1.0, std::abs(r.origin_identity_rhs))) ++bad;
    }
    if (bad_out) *bad_out = bad;
    if (total_out) *total_out = total;
    return total ? 1.0 - static_cast<double>(bad) / static_cast<double>(total) : 0.0;
}

inline std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(lo * std::pow(hi / lo, k / double(count - 1)));
    return out;
}

}  // namespace detail

// -- criteria ---------------------------------------------------------------

inline CriterionResult criterion_helmholtz_manufactured(VerifyContext&) {
    CriterionResult res{1, "Helmholtz manufactured solution, d=3, r_max=20", {}, {}, 0.0};
    std::vector<double> hs, errs;
    for (std::size_t n : {512u, 1024u, 2048u, 4096u}) {
        hs.push_back(20.0 / static_cast<double>(n - 1));
        errs.push_back(detail::manufactured_error(20.0, n));
        res.notes.push_back("n=" + std::to_string(n) + " rel Linf error " + format_value(errs.back()));
    }
    res.checks.push_back(check_le("rel Linf error at n=4096", errs.back(), 1e-5));
    res.checks.push_back(check_in("convergence slope", detail::log_slope(hs, errs), 1.7, 2.3));
    res.notes.push_back("same error at r_max=10, n=4096: " + format_value(detail::manufactured_error(10.0, 4096)));
    return res;
}

/// Five smooth decaying test fields used for the oracle comparison.
inline std::vector<std::pair<std::string, std::function<double(double)>>> oracle_fields() {
    return {
        {"exp(-r^2)", [](double r) { return std::exp(-r * r); }},
        {"(7-4r^2)exp(-r^2)", [](double r) { return (7.0 - 4.0 * r * r) * std::exp(-r * r); }},
        {"exp(-r^2/4)", [](double r) { return std::exp(-0.25 * r * r); }},
        {"(1+r^2)exp(-r^2)-0.5exp(-r^2/9)", [](double r) { return (1.0 + r * r) * std::exp(-r * r) - 0.5 * std::exp(-r * r / 9.0); }},
        {"sech(r)^2", [](double r) { return 1.0 / (std::cosh(r) * std::cosh(r)); }},
    };
}

inline CriterionResult criterion_oracle(VerifyContext&) {
    CriterionResult res{2, "Helmholtz solve vs kernel oracle at the origin", {}, {}, 0.0};
    for (int d : {1, 2, 3}) {
        auto grid = make_grid(d, 20.0, 2048);
        double worst = 0.0;
        std::string which;
        for (const auto& [name, f] : oracle_fields()) {
            const RadialField phi = RadialField::sample(grid, f);
            const double diff = std::abs(solve_helmholtz(phi).g[0] - helmholtz_oracle(phi)) / phi.sup_norm();
            if (diff >= worst) {
                worst = diff;
                which = name;
            }
        }
        res.checks.push_back(check_le("d=" + std::to_string(d) + " max |g(0)-oracle| / ||phi||_inf", worst, 1e-3));
        res.notes.push_back("d=" + std::to_string(d) + " worst field " + which);
    }
    return res;
}

inline CriterionResult criterion_energy(VerifyContext&) {
    CriterionResult res{3, "Energy conservation, d=3, t in [0,1]", {}, {}, 0.0};
    auto grid = make_grid(3, 20.0, 2048);
    for (double A : {1.0, -1.0}) {
        const RadialField phi = A > 0 ? gaussian_bump(A, 1.0, grid) : monotone_negative(-A, 1.0, grid);
        StepControl c;
        c.horizon = 1.0;
        c.snapshot_every = std::numeric_limits<std::size_t>::max();
        auto [traj, rep] = evolve(SimState{phi, 0.0, std::nullopt}, c);
        const double e0 = traj.records.front().energy;
        double drift = 0.0;
        for (const auto& r : traj.records) drift = std::max(drift, std::abs(r.energy - e0) / e0);
        res.checks.push_back(check_true(std::string("A=") + format_value(A) + " reached t=1",
                                        rep.reason == Termination::HorizonReached));
        res.checks.push_back(check_le(std::string("A=") + format_value(A) + " relative energy drift", drift, 1e-5));
    }
    return res;
}

inline CriterionResult criterion_origin_identity(VerifyContext& ctx) {
    CriterionResult res{4, "Origin identity residual along the d=3 blowup run, n=2048", {}, {}, 0.0};
    const CachedRun& run = ctx.blowup(3, 2048);
    std::size_t bad = 0, total = 0;
    const double frac = detail::origin_identity_good_fraction(run.traj, &bad, &total);
    res.checks.push_back(check_ge("fraction of steps within 1e-3 max(1,RHS)", frac, 0.99));
    res.notes.push_back(std::to_string(bad) + " of " + std::to_string(total) + " steps outside tolerance");
    double worst_t = 0.0, worst = 0.0;
    for (const auto& r : run.traj.records) {
        if (!std::isfinite(r.origin_identity_lhs)) continue;
        const double e = std::abs(r.origin_identity_lhs - r.origin_identity_rhs) / std::max(1.0, std::abs(r.origin_identity_rhs));
        if (e > worst) {
            worst = e;
            worst_t = r.t;
        }
    }
    res.notes.push_back("largest scaled residual " + format_value(worst) + " at t=" + format_value(worst_t));
    return res;
}

inline CriterionResult criterion_blowup(VerifyContext& ctx) {
    CriterionResult res{5, "Blowup for gaussian_bump(1,1), d in {2,3}", {}, {}, 0.0};
    for (int d : {2, 3}) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, ci_min = lo;
        bool all_blowup = true, all_increasing = true;
        for (std::size_t n : {1024u, 2048u, 4096u}) {
            const CachedRun& run = ctx.blowup(d, n);
            const bool blew = run.report.reason == Termination::BlowupDetected && run.report.t_star_estimate;
            all_blowup = all_blowup && blew;
            if (!blew) {
                res.notes.push_back("d=" + std::to_string(d) + " n=" + std::to_string(n) + " ended with " +
                                    to_string(run.report.reason));
                continue;
            }
            const double ts = run.report.t_star_estimate->t_star;
            lo = std::min(lo, ts);
            hi = std::max(hi, ts);
            all_increasing = all_increasing && detail::min_increment(run.traj) > 0.0;
            const double ratio = run.report.criterion_integral / detail::criterion_integral_at(run.traj, 0.5 * ts);
            ci_min = std::min(ci_min, ratio);
            res.notes.push_back("d=" + std::to_string(d) + " n=" + std::to_string(n) + " T*=" + format_value(ts) +
                                " +- " + format_value(run.report.t_star_estimate->uncertainty) +
                                ", integral ratio " + format_value(ratio));
        }
        const std::string tag = "d=" + std::to_string(d) + " ";
        res.checks.push_back(check_true(tag + "BlowupDetected at every n", all_blowup));
        res.checks.push_back(check_true(tag + "phi(0,t) strictly increasing", all_increasing));
        res.checks.push_back(check_le(tag + "T* spread (max-min)/min", all_blowup ? (hi - lo) / lo : 1.0, 0.05));
        res.checks.push_back(check_ge(tag + "min integral(t_end)/integral(T*/2)", ci_min, 10.0));
    }
    res.notes.push_back("pure Riccati growth caps the integral ratio near ln(threshold)/ln(2) = 9.97 at threshold 1e3");
    return res;
}

inline CriterionResult criterion_global_existence(VerifyContext& ctx) {
    CriterionResult res{6, "Global run for monotone_negative(1,1), d=3, horizon 50", {}, {}, 0.0};
    const CachedRun& run = ctx.global3();
    double min_pp = std::numeric_limits<double>::infinity(), t_min = 0.0;
    for (const auto& r : run.traj.records) {
        if (r.min_phi_prime < min_pp) {
            min_pp = r.min_phi_prime;
            t_min = r.t;
        }
    }
    res.checks.push_back(check_true("HorizonReached", run.report.reason == Termination::HorizonReached));
    res.checks.push_back(check_ge("min phi'(r,t)", min_pp, -1e-6));
    res.checks.push_back(check_ge("min relative increment of phi(0,t)", detail::min_increment(run.traj), -1e-12));
    res.notes.push_back("grid r_max=10 n=2048; min phi' attained at t=" + format_value(t_min) +
                        "; phi(0,50)=" + format_value(run.traj.records.back().phi0));
    return res;
}


inline CriterionResult criterion_decay(VerifyContext& ctx) {
    CriterionResult res{7, "Decay envelopes of phi(0,t) for monotone negative data", {}, {}, 0.0};
    struct Case {
        int d;
        const CachedRun* run;
        double t_half;
        const char* weight;
    };
    for (const Case& c : {Case{3, &ctx.global3(), 25.0, "(1+t)"}, Case{2, &ctx.global2(), 100.0, "log(10+t)"}}) {
        const std::string tag = "d=" + std::to_string(c.d) + " ";
        res.checks.push_back(check_true(tag + "HorizonReached", c.run->report.reason == Termination::HorizonReached));
        try {
            const EnvelopeReport e = decay_envelope_check(c.run->traj, c.d, c.t_half);
            res.checks.push_back(check_true(tag + "phi(0,t) < 0 throughout", e.negative));
            res.checks.push_back(check_true(tag + "sup " + c.weight + "|phi(0,t)| finite", std::isfinite(e.sup_weighted)));
            res.checks.push_back(check_le(tag + "max relative rise of weighted |phi(0,t)|", e.max_increase, 1e-9));
            res.notes.push_back(tag + "weighted |phi(0,t)| from " + format_value(e.weighted_start) + " at t=" +
                                format_value(e.t_half) + " to " + format_value(e.weighted_end) + " at t=" +
                                format_value(e.t_end) + ", sup " + format_value(e.sup_weighted));
        } catch (const MonotonicityViolation& ex) {
            res.checks.push_back(check_true(tag + "phi(0,t) monotone", false));
            res.notes.push_back(ex.what());
        }
    }
    return res;
}

inline CriterionResult criterion_negative_family(VerifyContext&) {
    CriterionResult res{8, "Negative data from backward flow of the seed, c1=1, c2=2", {}, {}, 0.0};
    auto grid = make_grid(3, 20.0, 2048);
    const FamilyAData fa = construct_family_a(1.0, 2.0, std::nullopt, grid);
    res.checks.push_back(check_le("max over nodes of phi_0", fa.report.max_phi0, -1e-300));
    res.notes.push_back("t0=" + format_value(fa.report.t0) + " B_hat=" + format_value(fa.report.B_hat) +
                        " attempts=" + std::to_string(fa.report.attempts) +
                        " phi_0(0)=" + format_value(fa.report.phi0_origin));

    StepControl to_t0;
    to_t0.horizon = fa.report.t0;
    to_t0.snapshot_every = std::numeric_limits<std::size_t>::max();
    auto [first, first_rep] = evolve(SimState{fa.phi0, 0.0, std::nullopt}, to_t0);
    const RadialField& at_t0 = first.snapshots.back().solve.phi;
    res.checks.push_back(check_le("|phi(0,t0)|", std::abs(at_t0[0]), 1e-3));

    StepControl onward;
    onward.horizon = 200.0;
    onward.snapshot_every = std::numeric_limits<std::size_t>::max();
    auto [second, rep] = evolve(SimState{at_t0, fa.report.t0, std::nullopt}, onward);
    Trajectory whole = first;
    whole.records.insert(whole.records.end(), second.records.begin() + 1, second.records.end());
    res.checks.push_back(check_true("BlowupDetected", rep.reason == Termination::BlowupDetected));
    res.checks.push_back(check_ge("min relative increment of phi(0,t)", detail::min_increment(whole), 0.0));
    if (rep.t_star_estimate) {
        res.notes.push_back("T*=" + format_value(rep.t_star_estimate->t_star) + " +- " +
                            format_value(rep.t_star_estimate->uncertainty) + ", t_end=" + format_value(rep.t_end));
    }
    return res;
}

inline CriterionResult criterion_concentration(VerifyContext&) {
    CriterionResult res{9, "Concentrated positive data blows up at d=1 (sigma=0.1)", {}, {}, 0.0};
    auto grid = make_grid(1, 20.0, 2048);
    const double ratio = gaussian_concentration(0.1, 1);
    const RadialField phi = concentrated_positive(ratio, grid);
    StepControl c;
    c.horizon = 50.0;
    c.snapshot_every = std::numeric_limits<std::size_t>::max();
    auto [traj, rep] = evolve(SimState{phi, 0.0, std::nullopt}, c);
    res.checks.push_back(check_true("BlowupDetected", rep.reason == Termination::BlowupDetected));
    res.notes.push_back("ratio_target=" + format_value(ratio) + ", reason " + to_string(rep.reason) +
                        (rep.t_star_estimate ? ", T*=" + format_value(rep.t_star_estimate->t_star) : std::string()));
    return res;
}

inline CriterionResult criterion_constructive_bound(VerifyContext&) {
    CriterionResult res{10, "Constructive Poincare bound, C1=1, p=2, R in [2,30]", {}, {}, 0.0};
    const ConstructiveGap g = constructive_gap(1.0, 2.0, 2.0, 30.0);
    res.checks.push_back(check_le("min_R b(R)", g.min_bound, 1.0 - 1e-12));
    res.checks.push_back(check_ge("implied eps0", g.eps0, 1e-12));
    res.notes.push_back("minimum at R=" + format_value(g.argmin_R));
    return res;
}

inline CriterionResult criterion_gaussian_family(VerifyContext&) {
    CriterionResult res{11, "Gaussian family: gap collapse at d=2, positive Poincare ratio at d=3", {}, {}, 0.0};
    const GaussianProbe a = gaussian_probe(0.01, 2), b = gaussian_probe(1.0, 2);
    res.checks.push_back(check_le("d=2 gap(0.01)/gap(1)", a.gap / b.gap, 0.05));
    res.checks.push_back(check_in("d=2 h_half(0.01)/h_half(1)", a.h_half / b.h_half, 1.0 / 3.0, 3.0));
    const auto ts = detail::log_spaced(0.01, 1.0, 9);
    const PoincareStudy coarse = poincare_study(ts, 3, 2048), fine = poincare_study(ts, 3, 4096);
    res.checks.push_back(check_ge("d=3 min poincare ratio, n=4096", fine.min_ratio, 1e-12));
    res.checks.push_back(check_le("d=3 relative change n=2048 to 4096", std::abs(coarse.min_ratio - fine.min_ratio) / fine.min_ratio, 0.2));
    res.notes.push_back("d=3 min ratio " + format_value(fine.min_ratio) + " at t=" + format_value(fine.argmin_t));
    return res;
}

inline CriterionResult criterion_growth(VerifyContext& ctx) {
    CriterionResult res{12, "L2 growth envelopes on the global runs", {}, {}, 0.0};
    for (auto [d, run] : {std::pair{3, &ctx.global3()}, std::pair{2, &ctx.global2()}}) {
        const GrowthReport g = growth_envelope_check(run->traj, d);
        res.checks.push_back(check_le("d=" + std::to_string(d) + " max ||phi||_2 / (B (1+t)^p)", g.max_ratio, 1.0 + 1e-12));
        res.notes.push_back("d=" + std::to_string(d) + " p=" + format_value(g.exponent) + " B=" + format_value(g.B) +
                            " ||phi(t_end)||_2=" + format_value(run->traj.records.back().l2_norm));
    }
    return res;
}

inline CriterionResult criterion_sign_transport(VerifyContext& ctx) {
    CriterionResult res{13, "Sign of phi' along characteristics, d=3 global run", {}, {}, 0.0};
    const CachedRun& run = ctx.global3();
    std::vector<double> seeds;
    for (int k = 1; k <= 24; ++k) seeds.push_back(0.25 * k);
    const double scale = differentiate_radial(run.traj.snapshots.front().solve.phi).sup_norm();
    const CharacteristicReport c = characteristic_flow(run.traj.snapshots, seeds, VerifyContext::global3_control().dt_min,
                                                       1e-8 * scale);
    res.checks.push_back(check_le("sign flips", static_cast<double>(c.sign_flips), 0.0));
    res.checks.push_back(check_le("characteristics leaving the domain", static_cast<double>(c.left_domain), 0.0));
    res.checks.push_back(check_le("max |z-alpha| / (t B)", c.max_displacement_ratio, 1.1));
    res.notes.push_back(std::to_string(run.traj.snapshots.size()) + " snapshots, B=" + format_value(c.bound_B) +
                        ", max displacement " + format_value(c.max_displacement));
    return res;
}

// -- registry ---------------------------------------------------------------

struct CriterionEntry {
    int id;
    const char* slug;
    CriterionResult (*fn)(VerifyContext&);
};

inline const std::vector<CriterionEntry>& criteria() {
    static const std::vector<CriterionEntry> list = {
        {1, "helmholtz", criterion_helmholtz_manufactured},
        {2, "oracle", criterion_oracle},
        {3, "conservation", criterion_energy},
        {4, "origin-identity", criterion_origin_identity},
        {5, "blowup", criterion_blowup},
        {6, "global-existence", criterion_global_existence},
        {7, "decay", criterion_decay},
        {8, "negative-family", criterion_negative_family},
        {9, "concentration", criterion_concentration},
        {10, "constructive-bound", criterion_constructive_bound},
        {11, "gaussian-family", criterion_gaussian_family},
        {12, "growth", criterion_growth},
        {13, "sign-transport", criterion_sign_transport},
    };
    return list;
}

/// Named suites and the criteria they run.
inline const std::vector<std::pair<std::string, std::vector<int>>>& suites() {
    static const std::vector<std::pair<std::string, std::vector<int>>> list = {
        {"helmholtz", {1}},     {"oracle", {2}},     {"conservation", {3}},   {"origin-identity", {4}},
        {"blowup", {5}},         {"global-existence", {6}},      {"decay", {7}},          {"negative-family", {8}},
        {"concentration", {9}},         {"constructive-bound", {10}},  {"gap-functionals", {10, 11}}, {"gaussian-family", {11}},
        {"growth", {12}},       {"sign-transport", {13}},
        {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}},
    };
    return list;
}

inline std::optional<std::vector<int>> suite_criteria(const std::string& name) {
    for (const auto& [n, ids] : suites()) {
        if (n == name) return ids;
    }
    return std::nullopt;
}

/// Runs one criterion, converting exceptions into a failed check.
inline CriterionResult run_criterion(int id, VerifyContext& ctx) {
    for (const auto& e : criteria()) {
        if (e.id != id) continue;
        const auto start = std::chrono::steady_clock::now();
        CriterionResult res;
        try {
            res = e.fn(ctx);
        } catch (const std::exception& ex) {
            res = CriterionResult{id, e.slug, {check_true("completed without error", false)}, {ex.what()}, 0.0};
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return res;
    }
    throw ParameterError("criterion", "unknown criterion " + std::to_string(id));
}

inline const char* criterion_slug(int id) {
    for (const auto& e : criteria()) {
        if (e.id == id) return e.slug;
    }
    return "?";
}

/// Summary line followed by one indented line per check and note.
inline std::string format_result(const CriterionResult& r) {
    char head[256];
    std::snprintf(head, sizeof head, "criterion %02d %-18s %s  %s (%.1f s)\n", r.id, criterion_slug(r.id),
                  r.pass() ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    std::string out = head;
    for (const auto& c : r.checks) out += "    " + format_check(c) + "\n";
    for (const auto& n : r.notes) out += "    note: " + n + "\n";
    return out;
}

}  // namespace epflow
