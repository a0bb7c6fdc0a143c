#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "epflow/errors.hpp"

namespace epflow {

/// Surface area of the unit sphere in R^d (omega_1 = 2).
inline double unit_sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

/**
 * Uniform radial mesh on [0, r_max] for radial functions on R^d.
 *
 * Shell weights integrate a radial function over the whole space:
 * sum_i w_i f(r_i) ~ omega_d * int_0^r_max f(r) r^(d-1) dr (trapezoid rule,
 * half weight at both ends; the r = 0 weight vanishes for d >= 2).
 */
class RadialGrid {
public:
    static constexpr std::size_t min_nodes = 16;

    RadialGrid(int d, double r_max, std::size_t n)
        : d_(d), n_(n), r_max_(r_max) {
        if (d < 1) {
            throw ParameterError("grid.d", "dimension must be >= 1, got " + std::to_string(d));
        }
        if (n < min_nodes) {
            throw ParameterError("grid.n", "need at least 16 nodes, got " + std::to_string(n));
        }
        if (!(r_max > 0.0) || !std::isfinite(r_max)) {
            throw ParameterError("grid.r_max", "domain radius must be positive and finite");
        }
        h_ = r_max / static_cast<double>(n - 1);
        nodes_.resize(n);
        weights_.resize(n);
        const double omega = unit_sphere_area(d);
        for (std::size_t i = 0; i < n; ++i) {
            nodes_[i] = static_cast<double>(i) * h_;
            weights_[i] = omega * std::pow(nodes_[i], d - 1) * h_;
        }
        nodes_.back() = r_max;
        weights_.back() = 0.5 * omega * std::pow(r_max, d - 1) * h_;
        // pow(0, 0) == 1 takes care of d == 1; for d >= 2 the origin weight is already 0
        weights_.front() *= 0.5;
    }

    int dim() const { return d_; }
    std::size_t size() const { return n_; }
    double r_max() const { return r_max_; }
    double spacing() const { return h_; }
    double omega() const { return unit_sphere_area(d_); }

    double r(std::size_t i) const { return nodes_[i]; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> shell_weights() const { return weights_; }

    /// Identity used to tag outputs: equal grids hash equal.
    std::uint64_t hash() const {
        // FNV-1a over (d, n, r_max bits)
        std::uint64_t hv = 1469598103934665603ull;
        auto mix = [&hv](std::uint64_t v) {
            for (int b = 0; b < 8; ++b) {
                hv ^= (v >> (8 * b)) & 0xffu;
                hv *= 1099511628211ull;
            }
        };
        std::uint64_t bits = 0;
        static_assert(sizeof(bits) == sizeof(r_max_));
        std::memcpy(&bits, &r_max_, sizeof(bits));
        mix(static_cast<std::uint64_t>(d_));
        mix(static_cast<std::uint64_t>(n_));
        mix(bits);
        return hv;
    }

    bool operator==(const RadialGrid& o) const {
        return d_ == o.d_ && n_ == o.n_ && r_max_ == o.r_max_;
    }

private:
    int d_;
    std::size_t n_;
    double r_max_;
    double h_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_grid(int d, double r_max, std::size_t n) {
    return std::make_shared<const RadialGrid>(d, r_max, n);
}

/// Samples of a radial scalar function on a RadialGrid.
class RadialField {
public:
    RadialField() = default;

    explicit RadialField(GridPtr grid, double fill = 0.0)
        : grid_(std::move(grid)), values_(grid_->size(), fill) {}

    RadialField(GridPtr grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_->size()) {
            throw ParameterError("field", "sample count does not match grid size");
        }
    }

    /// Sample f(r) at every node.
    template <class F>
    static RadialField sample(GridPtr grid, F&& f) {
        RadialField out(grid);
        for (std::size_t i = 0; i < grid->size(); ++i) out.values_[i] = f(grid->r(i));
        return out;
    }

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    bool all_finite() const {
        for (double v : values_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    double sup_norm() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    double min() const {
        double m = values_.front();
        for (double v : values_) m = std::min(m, v);
        return m;
    }

    double max() const {
        double m = values_.front();
        for (double v : values_) m = std::max(m, v);
        return m;
    }

    /// Linear interpolation in r; clamps outside [0, r_max].
    double interpolate(double r) const {
        const double h = grid_->spacing();
        if (r <= 0.0) return values_.front();
        if (r >= grid_->r_max()) return values_.back();
        const double x = r / h;
        auto i = static_cast<std::size_t>(x);
        if (i >= values_.size() - 1) i = values_.size() - 2;
        const double s = x - static_cast<double>(i);
        return (1.0 - s) * values_[i] + s * values_[i + 1];
    }

    RadialField& operator+=(const RadialField& o) {
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }

    RadialField& operator*=(double c) {
        for (double& v : values_) v *= c;
        return *this;
    }

    friend RadialField operator*(double c, RadialField f) { return f *= c; }

    /// this + c * o
    RadialField axpy(double c, const RadialField& o) const {
        RadialField out = *this;
        for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] += c * o.values_[i];
        return out;
    }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const RadialField& a, const RadialField& b) {
    if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
        throw ParameterError("field", "fields live on different grids");
    }
}

/// Second-order central differences; one-sided second-order at both ends.
inline RadialField differentiate(const RadialField& f) {
    const std::size_t n = f.size();
    const double h = f.grid().spacing();
    RadialField out(f.grid_ptr());
    const double inv2h = 0.5 / h;
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
    return out;
}

/**
 * Radial derivative of an even (radial) field: fourth-order central
 * differences in the interior using the mirror values f(-r) = f(r) near the
 * origin, f'(0) = 0 exactly, second order in the last two nodes.
 */
inline RadialField differentiate_radial(const RadialField& f) {
    const std::size_t n = f.size();
    const double h = f.grid().spacing();
    RadialField out(f.grid_ptr());
    const double inv12h = 1.0 / (12.0 * h);
    out[0] = 0.0;
    out[1] = (f[1] - 8.0 * f[0] + 8.0 * f[2] - f[3]) * inv12h;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv12h;
    }
    out[n - 2] = (f[n - 1] - f[n - 3]) * (0.5 / h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * (0.5 / h);
    return out;
}

/// Integral over R^d of a radial function.
inline double shell_integral(const RadialField& f) {
    const auto w = f.grid().shell_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
}

/// L2(R^d) norm by shell quadrature.
inline double l2_norm(const RadialField& f) {
    const auto w = f.grid().shell_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i] * f[i];
    return std::sqrt(s);
}

/// h(r_i) = int_{r_i}^{r_max} fprime(s) g(s) ds, backward cumulative trapezoid.
inline RadialField tail_integral(const RadialField& fprime, const RadialField& g) {
    require_same_grid(fprime, g);
    const std::size_t n = fprime.size();
    const double half_h = 0.5 * fprime.grid().spacing();
    RadialField out(fprime.grid_ptr());
    double prev = fprime[n - 1] * g[n - 1];
    double acc = 0.0;
    out[n - 1] = 0.0;
    for (std::size_t k = n - 1; k-- > 0;) {
        const double cur = fprime[k] * g[k];
        acc += half_h * (cur + prev);
        out[k] = acc;
        prev = cur;
    }
    return out;
}

/// |fprime * g| at r_max; truncating the slab integral is admissible when this is small.
inline double tail_boundary_product(const RadialField& fprime, const RadialField& g) {
    return std::abs(fprime.back() * g.back());
}

inline constexpr double default_tail_tolerance = 1e-10;

}  // namespace epflow
