#pragma once

#include <cmath>
#include <limits>

#include "epflow/grid.hpp"
#include "epflow/helmholtz.hpp"

namespace epflow {

/// Scalar diagnostics of one state of the flow.
struct DiagnosticsRecord {
    double t = 0.0;
    double phi0 = 0.0;               ///< phi(0, t)
    double sup_norm = 0.0;           ///< ||phi(t)||_inf
    double l2_norm = 0.0;            ///< ||phi(t)||_2 over R^d
    double energy = 0.0;             ///< int |u|^2 + |grad u|^2
    double origin_identity_lhs = std::numeric_limits<double>::quiet_NaN();  ///< d/dt phi(0,t), finite differences in time
    double origin_identity_rhs = 0.0;
    double gap = 0.0;                ///< g(0) - phi(0)
    double criterion_integral = 0.0; ///< running int ||phi||_inf dt
    double min_phi_prime = 0.0;
    double sup_gprime = 0.0;         ///< ||g'||_inf, the characteristic speed bound
};

/**
 * Right-hand side of the origin identity
 *
 *   d/dt phi(0,t) = (d-1) int_0^inf (g')^2 / r dr + 1/2 (phi(0,t) - g(0,t))^2,
 *
 * evaluated from a Helmholtz solve. The integrand tends to r g''(0)^2 at the
 * origin, so node 0 contributes zero.
 */
inline double origin_identity_rhs(const HelmholtzSolve& s) {
    const RadialGrid& grid = s.g.grid();
    const int d = grid.dim();
    double radial = 0.0;
    if (d > 1) {
        const std::size_t n = grid.size();
        const double h = grid.spacing();
        for (std::size_t i = 1; i < n; ++i) {
            const double v = s.gprime[i] * s.gprime[i] / grid.r(i);
            radial += (i + 1 == n) ? 0.5 * h * v : h * v;
        }
    }
    const double gap = s.phi[0] - s.g[0];
    return (d - 1) * radial + 0.5 * gap * gap;
}

inline double origin_identity_rhs(const RadialField& phi) { return origin_identity_rhs(solve_helmholtz(phi)); }

/// Diagnostics of (phi, t) from its Helmholtz solve. Time-history fields are left for the caller.
inline DiagnosticsRecord make_record(double t, const HelmholtzSolve& s) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.phi0 = s.phi[0];
    rec.sup_norm = s.phi.sup_norm();
    rec.l2_norm = l2_norm(s.phi);
    rec.energy = energy(s);
    rec.origin_identity_rhs = origin_identity_rhs(s);
    rec.gap = dispersion_gap(s);
    rec.min_phi_prime = differentiate_radial(s.phi).min();
    rec.sup_gprime = s.gprime.sup_norm();
    return rec;
}

/**
 * |((Lap/(1-Lap)) f)(0)| / |f(0)| for 0 <= f <= f(0).
 *
 * Throws ParameterError when f(0) == 0 or the sign/maximum condition fails.
 */
inline double poincare_ratio(const RadialField& f) {
    const double f0 = f[0];
    if (f0 == 0.0 || !std::isfinite(f0)) throw ParameterError("f", "f(0) must be nonzero");
    const double slack = 1e-12 * std::abs(f0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f0 > 0.0 ? (f[i] < -slack || f[i] > f0 + slack) : true) {
            throw ParameterError("f", "requires 0 <= f(r) <= f(0); violated at r = " +
                                          std::to_string(f.grid().r(i)));
        }
    }
    return std::abs(dispersion_gap(f)) / std::abs(f0);
}

/**
 * Upper bound b(R) on int K f / ||f||_inf in three dimensions for data with
 * ||f||_p <= C1 ||f||_inf, obtained by splitting at |y| = R:
 *
 *   b(R) = 1 - (R+1) e^{-R}
 *        + C1 [ (4 pi)^{1-p'} R^{1-p'} e^{(1-p')R} (R+1) e^{-R} ]^{1/p'}.
 *
 * Any R with b(R) < 1 gives the Poincare-type gap eps0 = 1 - b(R).
 */
inline double constructive_bound(double C1, double p, double R) {
    if (!(p > 1.0)) throw ParameterError("p", "requires p > 1");
    if (!(R > 1.0)) throw ParameterError("R", "requires R > 1");
    if (!(C1 >= 0.0)) throw ParameterError("C1", "requires C1 >= 0");
    const double q = p / (p - 1.0);  // Hoelder conjugate
    const double inner = std::pow(4.0 * std::numbers::pi, 1.0 - q) * std::pow(R, 1.0 - q) *
                         std::exp((1.0 - q) * R) * (R + 1.0) * std::exp(-R);
    return 1.0 - (R + 1.0) * std::exp(-R) + C1 * std::pow(inner, 1.0 / q);
}

struct ConstructiveGap {
    double min_bound = 0.0;   ///< min of b(R) over the scanned grid
    double argmin_R = 0.0;
    double eps0 = 0.0;        ///< 1 - min_bound when positive, else 0
};

inline ConstructiveGap constructive_gap(double C1, double p, double R_lo, double R_hi, int samples = 2801) {
    if (!(R_lo > 1.0) || !(R_hi > R_lo) || samples < 2) throw ParameterError("R", "need 1 < R_lo < R_hi");
    ConstructiveGap out{std::numeric_limits<double>::infinity(), R_lo, 0.0};
    for (int k = 0; k < samples; ++k) {
        const double R = R_lo + (R_hi - R_lo) * k / (samples - 1);
        const double b = constructive_bound(C1, p, R);
        if (b < out.min_bound) {
            out.min_bound = b;
            out.argmin_R = R;
        }
    }
    out.eps0 = out.min_bound < 1.0 ? 1.0 - out.min_bound : 0.0;
    return out;
}

}  // namespace epflow
