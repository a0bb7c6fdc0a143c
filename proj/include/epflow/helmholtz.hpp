#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "epflow/grid.hpp"

namespace epflow {

/// g = (1 - Laplacian)^{-1} phi for a radial phi, together with g'.
struct HelmholtzSolve {
    RadialField phi;
    RadialField g;
    RadialField gprime;
};

/**
 * Radial (1 - Laplacian) on a RadialGrid as a tridiagonal matrix.
 *
 * Interior rows use g'' + (d-1)/r g' with central differences. Row 0 uses
 * the regular limit Lap g(0) = d g''(0) with the even ghost g_{-1} = g_1.
 * The last row closes with the outflow condition g'(R) = -kappa g(R),
 * kappa = 1 + (d-1)/(2R), which matches e^{-r} r^{-(d-1)/2} decay to two orders.
 *
 * The LU factors are computed once; solve() is two O(n) sweeps.
 */
class HelmholtzSolver {
public:
    explicit HelmholtzSolver(GridPtr grid) : grid_(std::move(grid)) {
        const std::size_t n = grid_->size();
        const double h = grid_->spacing();
        const double ih2 = 1.0 / (h * h);
        const int d = grid_->dim();
        const double R = grid_->r_max();
        kappa_ = 1.0 + (d - 1) / (2.0 * R);

        lower_.assign(n, 0.0);
        diag_.assign(n, 0.0);
        upper_.assign(n, 0.0);

        diag_[0] = 1.0 + 2.0 * d * ih2;
        upper_[0] = -2.0 * d * ih2;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double adv = (d - 1) / (2.0 * grid_->r(i) * h);
            lower_[i] = -(ih2 - adv);
            diag_[i] = 1.0 + 2.0 * ih2;
            upper_[i] = -(ih2 + adv);
        }
        lower_[n - 1] = -2.0 * ih2;
        diag_[n - 1] = 1.0 + 2.0 * ih2 + 2.0 * kappa_ / h + (d - 1) * kappa_ / R;

        // Thomas factorization
        cprime_.assign(n, 0.0);
        denom_.assign(n, 0.0);
        denom_[0] = diag_[0];
        cprime_[0] = upper_[0] / denom_[0];
        for (std::size_t i = 1; i < n; ++i) {
            denom_[i] = diag_[i] - lower_[i] * cprime_[i - 1];
            if (!(std::abs(denom_[i]) > 1e-300)) {
                throw NumericalFault("helmholtz: singular tridiagonal system");
            }
            cprime_[i] = upper_[i] / denom_[i];
        }
    }

    const GridPtr& grid_ptr() const { return grid_; }
    double outflow_rate() const { return kappa_; }

    HelmholtzSolve solve(const RadialField& phi) const {
        const std::size_t n = grid_->size();
        RadialField g(grid_);
        std::vector<double> dprime(n);
        dprime[0] = phi[0] / denom_[0];
        for (std::size_t i = 1; i < n; ++i) {
            dprime[i] = (phi[i] - lower_[i] * dprime[i - 1]) / denom_[i];
        }
        g[n - 1] = dprime[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) g[i] = dprime[i] - cprime_[i] * g[i + 1];

        RadialField gp = differentiate(g);
        gp[0] = 0.0;
        gp[n - 1] = -kappa_ * g[n - 1];
        return {phi, std::move(g), std::move(gp)};
    }

    /// The discrete operator (1 - Lap_h) applied to g, same rows as the matrix.
    RadialField apply(const RadialField& g) const {
        const std::size_t n = grid_->size();
        RadialField out(grid_);
        out[0] = diag_[0] * g[0] + upper_[0] * g[1];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            out[i] = lower_[i] * g[i - 1] + diag_[i] * g[i] + upper_[i] * g[i + 1];
        }
        out[n - 1] = lower_[n - 1] * g[n - 2] + diag_[n - 1] * g[n - 1];
        return out;
    }

private:
    GridPtr grid_;
    double kappa_ = 1.0;
    std::vector<double> lower_, diag_, upper_;
    std::vector<double> cprime_, denom_;
};

inline HelmholtzSolve solve_helmholtz(const RadialField& phi) {
    return HelmholtzSolver(phi.grid_ptr()).solve(phi);
}

/**
 * Modified Bessel function K_0 for x > 0.
 *
 * Power series below x = 2. Above, the integral representation
 * K_0(x) = int_0^inf exp(-x cosh t) dt by the trapezoid rule, which converges
 * geometrically for this analytic, doubly-decaying integrand.
 */
inline double bessel_k0(double x) {
    if (!(x > 0.0)) throw ParameterError("x", "K0 requires x > 0");
    if (x < 2.0) {
        const double q = 0.25 * x * x;
        double term = 1.0;
        double i0 = 1.0;
        double harmonic = 0.0;
        double tail = 0.0;
        for (int k = 1; k < 60; ++k) {
            term *= q / (static_cast<double>(k) * k);
            harmonic += 1.0 / k;
            i0 += term;
            tail += term * harmonic;
            if (term * harmonic < 1e-18 * tail) break;
        }
        return -(std::log(0.5 * x) + std::numbers::egamma) * i0 + tail;
    }
    constexpr double step = 0.125;
    const double scale = std::exp(-x);
    double sum = 0.5 * scale;
    for (int k = 1; k < 4000; ++k) {
        const double term = std::exp(-x * std::cosh(k * step));
        sum += term;
        if (term < 1e-19 * scale) break;
    }
    return step * sum;
}

/// Kernel of (1 - Laplacian)^{-1} on R^d as a function of r = |x|, for d in {1, 2, 3}.
inline double bessel_kernel(int d, double r) {
    switch (d) {
        case 1:
            if (r < 0.0) throw ParameterError("r", "radius must be >= 0");
            return 0.5 * std::exp(-r);
        case 2:
            if (!(r > 0.0)) throw ParameterError("r", "kernel is singular at r = 0 for d = 2");
            return bessel_k0(r) / (2.0 * std::numbers::pi);
        case 3:
            if (!(r > 0.0)) throw ParameterError("r", "kernel is singular at r = 0 for d = 3");
            return std::exp(-r) / (4.0 * std::numbers::pi * r);
        default:
            throw ParameterError("d", "kernel available only for d in {1, 2, 3}");
    }
}

/// g(0) = int K(|y|) phi(|y|) dy by shell quadrature; independent of the tridiagonal solve.
inline double helmholtz_oracle(const RadialField& phi) {
    const RadialGrid& grid = phi.grid();
    const int d = grid.dim();
    if (d < 1 || d > 3) throw ParameterError("grid.d", "kernel oracle supports d in {1, 2, 3}");
    const auto w = grid.shell_weights();
    double s = 0.0;
    // for d >= 2 the origin weight is zero and r^{d-1} K(r) -> 0, so node 0 drops out
    const std::size_t first = d == 1 ? 0 : 1;
    for (std::size_t i = first; i < phi.size(); ++i) s += w[i] * bessel_kernel(d, grid.r(i)) * phi[i];
    return s;
}

/// ((Lap / (1 - Lap)) phi)(0) = g(0) - phi(0).
inline double dispersion_gap(const HelmholtzSolve& s) { return s.g[0] - s.phi[0]; }

inline double dispersion_gap(const RadialField& phi) { return dispersion_gap(solve_helmholtz(phi)); }

/// int grad g . grad phi over R^d, before clamping; equals int |u|^2 + |grad u|^2 for u = grad g.
inline double energy_raw(const HelmholtzSolve& s) {
    const RadialField phip = differentiate_radial(s.phi);
    const RadialField gp = differentiate_radial(s.g);
    const auto w = s.phi.grid().shell_weights();
    double e = 0.0;
    for (std::size_t i = 0; i < phip.size(); ++i) e += w[i] * gp[i] * phip[i];
    return e;
}

inline double energy(const HelmholtzSolve& s) { return std::max(energy_raw(s), 0.0); }

inline double energy(const RadialField& phi) { return energy(solve_helmholtz(phi)); }

/// Multiplier norm with symbol |xi| / (1 + |xi|^2)^{1/2}; within sqrt(2) of the |xi|/(1+|xi|) norm.
inline double h_half_norm(const HelmholtzSolve& s) { return std::sqrt(energy(s)); }

inline double h_half_norm(const RadialField& phi) { return std::sqrt(energy(phi)); }

}  // namespace epflow
