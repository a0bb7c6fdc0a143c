#include <cmath>
#include <numbers>
#include <vector>

#include "catch_amalgamated.hpp"

#include "epflow/besov.hpp"
#include "epflow/diagnostics.hpp"

using namespace epflow;
using Catch::Approx;

namespace {

std::pair<std::vector<double>, std::vector<double>> series(double t_end, int m, double (*f)(double)) {
    std::vector<double> t, p;
    for (int i = 0; i < m; ++i) {
        t.push_back(t_end * i / (m - 1));
        p.push_back(f(t.back()));
    }
    return {t, p};
}

RadialField gaussian(const GridPtr& g, double sigma = 1.0) {
    return RadialField::sample(g, [sigma](double r) { return std::exp(-r * r / (sigma * sigma)); });
}

}  // namespace

TEST_CASE("origin identity right-hand side", "[diagnostics]") {
    SECTION("zero") { CHECK(origin_identity_rhs(RadialField(make_grid(3, 10.0, 64))) == 0.0); }
    SECTION("manufactured value 20") {
        auto g = make_grid(3, 20.0, 4096);
        const RadialField phi = RadialField::sample(g, [](double r) { return (7.0 - 4.0 * r * r) * std::exp(-r * r); });
        CHECK(origin_identity_rhs(phi) == Approx(20.0).margin(1e-3));
    }
    SECTION("bounded below by half the squared gap") {
        for (int d : {2, 3, 4}) {
            auto g = make_grid(d, 20.0, 1024);
            const RadialField phi = RadialField::sample(g, [](double r) { return std::cos(2 * r) * std::exp(-r * r); });
            const double gap = dispersion_gap(phi);
            CHECK(origin_identity_rhs(phi) >= 0.5 * gap * gap);
        }
    }
    SECTION("one dimension is exactly half the squared gap") {
        auto g = make_grid(1, 20.0, 1024);
        const HelmholtzSolve s = solve_helmholtz(gaussian(g));
        const double gap = dispersion_gap(s);
        CHECK(origin_identity_rhs(s) == 0.5 * gap * gap);
    }
}

TEST_CASE("decay envelope on synthetic series", "[diagnostics]") {
    SECTION("-1/(1+t) saturates the d >= 3 envelope") {
        auto [t, p] = series(50.0, 501, [](double s) { return -1.0 / (1.0 + s); });
        const EnvelopeReport e = decay_envelope_check(t, p, 3);
        CHECK(e.sup_weighted == Approx(1.0).epsilon(1e-12));
        CHECK(e.consistent);
        CHECK(e.negative);
    }
    SECTION("-(1+t)^{-1/2} grows against the envelope") {
        auto [t, p] = series(50.0, 501, [](double s) { return -1.0 / std::sqrt(1.0 + s); });
        const EnvelopeReport e = decay_envelope_check(t, p, 3);
        CHECK_FALSE(e.consistent);
        CHECK(e.weighted_end == Approx(std::sqrt(51.0)).epsilon(1e-12));
    }
    SECTION("log weight in two dimensions") {
        auto [t, p] = series(200.0, 401, [](double s) { return -1.0 / std::log(10.0 + s); });
        const EnvelopeReport e = decay_envelope_check(t, p, 2);
        CHECK(e.sup_weighted == Approx(1.0).epsilon(1e-12));
        CHECK(e.consistent);
    }
    SECTION("a decreasing origin value is a monotonicity violation") {
        auto [t, p] = series(10.0, 101, [](double s) { return -1.0 - 0.01 * s; });
        CHECK_THROWS_AS(decay_envelope_check(t, p, 3), MonotonicityViolation);
    }
    SECTION("positive start is rejected") {
        auto [t, p] = series(10.0, 11, [](double s) { return 1.0 + s; });
        CHECK_THROWS_AS(decay_envelope_check(t, p, 3), ParameterError);
    }
    SECTION("no envelope below two dimensions") { CHECK_THROWS_AS(envelope_weight(1, 0.0), ParameterError); }
}

TEST_CASE("growth envelope", "[diagnostics]") {
    Trajectory traj;
    for (int i = 0; i <= 100; ++i) {
        DiagnosticsRecord r;
        r.t = 0.1 * i;
        r.l2_norm = 2.0 * std::sqrt(1.0 + r.t) * (1.0 - 0.01 * r.t);
        traj.records.push_back(r);
    }
    const GrowthReport d2 = growth_envelope_check(traj, 2);
    CHECK(d2.exponent == 0.5);
    CHECK(d2.B == Approx(2.0));
    CHECK(d2.holds);
    traj.records.back().l2_norm = 100.0;
    CHECK_FALSE(growth_envelope_check(traj, 3).holds);
}

TEST_CASE("Poincare ratio", "[diagnostics]") {
    auto g = make_grid(3, 20.0, 2048);
    const RadialField f = gaussian(g);
    const double q = poincare_ratio(f);
    SECTION("equals 1 - g(0) and lies in (0, 1)") {
        CHECK(q == Approx(1.0 - solve_helmholtz(f).g[0]).epsilon(1e-14));
        CHECK(q > 0.0);
        CHECK(q < 1.0);
    }
    SECTION("scale invariant") { CHECK(poincare_ratio(f.axpy(6.0, f)) == Approx(q).epsilon(1e-13)); }
    SECTION("rejects data outside 0 <= f <= f(0)") {
        CHECK_THROWS_AS(poincare_ratio(RadialField(g)), ParameterError);
        CHECK_THROWS_AS(poincare_ratio(RadialField::sample(g, [](double r) { return std::cos(r) * std::exp(-r); })),
                        ParameterError);
        CHECK_THROWS_AS(poincare_ratio(f.axpy(-2.0, f)), ParameterError);
    }
    SECTION("bounded below along the three-dimensional Gaussian family") {
        const std::vector<double> ts{1.0, 0.1, 0.01};
        const PoincareStudy s = poincare_study(ts, 3, 2048);
        CHECK(s.min_ratio > 0.05);
        CHECK(s.argmin_t == 0.01);
    }
}

TEST_CASE("Gaussian probes", "[diagnostics]") {
    SECTION("two dimensions: gap collapses while the norm stays put") {
        const GaussianProbe a = gaussian_probe(0.01, 2), b = gaussian_probe(1.0, 2);
        CHECK(a.warnings.empty());
        // K0 tail at r_max = 10 is about 1e-5 of g(0)
        REQUIRE(b.warnings.size() == 1);
        CHECK(b.warnings[0] == "g not decayed at r_max");
        CHECK(a.gap / b.gap < 0.06);
        CHECK(a.h_half / b.h_half >= 1.0 / 3.0);
        CHECK(a.h_half / b.h_half <= 3.0);
    }
    SECTION("under-resolved widths are flagged") {
        CHECK_FALSE(gaussian_probe(1.0, 3, 16).warnings.empty());
    }
    SECTION("invalid arguments") {
        CHECK_THROWS_AS(gaussian_probe(0.0, 3), ParameterError);
        CHECK_THROWS_AS(gaussian_probe(1.0, 4), ParameterError);
    }
}

TEST_CASE("constructive bound", "[diagnostics]") {
    SECTION("tends to 1 from below for large R") {
        double prev = constructive_bound(1.0, 2.0, 5.0);
        // (R + 1) e^{-R} drops below the double resolution of 1 beyond R ~ 38
        for (double R = 6.0; R <= 30.0; R += 1.0) {
            const double b = constructive_bound(1.0, 2.0, R);
            CHECK(b > prev);
            CHECK(b < 1.0);
            prev = b;
        }
        CHECK(constructive_bound(1.0, 2.0, 50.0) == Approx(1.0).margin(1e-15));
    }
    SECTION("C1 = 1, p = 2 admits b(R) < 1 on [2, 30]") {
        const ConstructiveGap gap = constructive_gap(1.0, 2.0, 2.0, 30.0);
        CHECK(gap.min_bound < 1.0);
        CHECK(gap.eps0 == Approx(1.0 - gap.min_bound));
        CHECK(gap.eps0 > 0.0);
    }
    SECTION("C1 = 0 leaves the first term") {
        for (double R : {1.5, 3.0, 10.0}) CHECK(constructive_bound(0.0, 3.0, R) == Approx(1.0 - (R + 1) * std::exp(-R)));
    }
    SECTION("invalid exponents and radii") {
        CHECK_THROWS_AS(constructive_bound(1.0, 1.0, 3.0), ParameterError);
        CHECK_THROWS_AS(constructive_bound(1.0, 2.0, 1.0), ParameterError);
    }
}

TEST_CASE("fast J0 against the standard library", "[besov]") {
    for (double x = 0.0; x <= 60.0; x += 0.0137) {
        REQUIRE(std::abs(detail::bessel_j0_fast(x) - std::cyl_bessel_j(0.0, x)) <= 1e-7);
    }
}

TEST_CASE("dyadic multipliers", "[besov]") {
    CHECK(detail::lp_cutoff(0.5) == 1.0);
    CHECK(detail::lp_cutoff(2.5) == 0.0);
    CHECK(detail::lp_annulus(0.4) == 0.0);
    CHECK(detail::lp_annulus(2.1) == 0.0);
    // the shells telescope to 1 away from the origin
    for (double x : {0.013, 0.3, 1.0, 1.7, 5.0}) {
        double s = 0.0;
        for (int e = -12; e <= 12; ++e) s += detail::lp_annulus(x / std::ldexp(1.0, e));
        CHECK(s == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Besov diagnostic", "[besov]") {
    SECTION("zero") { CHECK(besov_b01inf(RadialField(make_grid(2, 20.0, 512))) == 0.0); }
    SECTION("linear scaling") {
        auto g = make_grid(2, 20.0, 1024);
        const RadialField f = gaussian(g);
        CHECK(besov_b01inf(f.axpy(-4.0, f)) == Approx(3.0 * besov_b01inf(f)).epsilon(1e-12));
    }
    SECTION("one interpolation constant across widths") {
        std::vector<double> C;
        for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
            auto g = make_grid(2, 20.0 * sigma, 1024);
            const RadialField f = gaussian(g, sigma);
            const RadialField fp = differentiate_radial(f);
            double grad2 = 0.0;
            for (std::size_t i = 0; i < g->size(); ++i) grad2 += g->shell_weights()[i] * fp[i] * fp[i];
            C.push_back(l2_norm(f) / std::sqrt(besov_b01inf(f) * std::sqrt(grad2)));
        }
        for (double c : C) CHECK(c == Approx(C[1]).epsilon(0.1));
    }
    SECTION("other dimensions are rejected") {
        CHECK_THROWS_AS(besov_b01inf(gaussian(make_grid(3, 10.0, 64))), ParameterError);
    }
}
