#include <cmath>
#include <numbers>

#include "catch_amalgamated.hpp"

#include "epflow/scenarios.hpp"

using namespace epflow;
using Catch::Approx;

TEST_CASE("scenario kind names round-trip", "[scenarios]") {
    for (ScenarioKind k : {ScenarioKind::Zero, ScenarioKind::PositiveBump, ScenarioKind::MonotoneNegative,
                           ScenarioKind::ConcentratedPositive, ScenarioKind::FamilyASeed, ScenarioKind::FamilyAData}) {
        const auto back = scenario_kind_from_string(to_string(k));
        REQUIRE(back);
        CHECK(*back == k);
    }
    CHECK_FALSE(scenario_kind_from_string("bump"));
}

TEST_CASE("Gaussian bump", "[scenarios]") {
    SECTION("squared L2 norm is (pi/2)^{d/2}") {
        for (int d : {1, 2, 3}) {
            auto g = make_grid(d, 20.0, 4096);
            const double h = g->spacing();
            // d = 2 keeps the trapezoid endpoint term h^2 F'(0) / 12 of the shell integral
            const double tol = d == 2 ? h * h : 1e-8;
            CHECK(std::abs(l2_norm(gaussian_bump(1.0, 1.0, g)) - std::pow(std::numbers::pi / 2.0, 0.25 * d)) <= tol);
        }
    }
    SECTION("amplitude and width") {
        auto g = make_grid(3, 20.0, 201);
        const RadialField f = gaussian_bump(2.5, 2.0, g);
        CHECK(f[0] == 2.5);
        CHECK(f[10] == Approx(2.5 * std::exp(-1.0 / 4.0)).epsilon(1e-14));
    }
    SECTION("vanishing amplitude or width is rejected") {
        auto g = make_grid(3, 20.0, 64);
        CHECK_THROWS_AS(gaussian_bump(0.0, 1.0, g), ParameterError);
        CHECK_THROWS_AS(gaussian_bump(-1.0, 1.0, g), ParameterError);
        CHECK_THROWS_AS(gaussian_bump(1.0, 0.0, g), ParameterError);
    }
}

TEST_CASE("monotone negative data", "[scenarios]") {
    auto g = make_grid(3, 20.0, 512);
    const RadialField f = monotone_negative(1.5, 1.0, g);
    const RadialField b = gaussian_bump(1.5, 1.0, g);
    for (std::size_t i = 0; i < g->size(); ++i) {
        REQUIRE(f[i] == -b[i]);
        REQUIRE(f[i] <= 0.0);
        if (i > 0) REQUIRE(f[i] >= f[i - 1]);
    }
}

TEST_CASE("concentrated positive data", "[scenarios]") {
    SECTION("width law inverts the concentration law") {
        for (int d : {1, 2, 3})
            for (double q : {0.3, 1.0, 4.0}) CHECK(gaussian_concentration(concentration_sigma(q, d), d) == Approx(q).epsilon(1e-14));
    }
    SECTION("measured ratio hits the target") {
        auto g = make_grid(1, 20.0, 4096);
        const RadialField f = concentrated_positive(2.0, g);
        CHECK(f[0] / l2_norm(f) == Approx(2.0).epsilon(1e-6));
    }
    SECTION("widths under 4 grid spacings are refused") {
        CHECK_THROWS_AS(concentrated_positive(50.0, make_grid(1, 20.0, 256)), ParameterError);
        CHECK_THROWS_AS(concentrated_positive(0.0, make_grid(1, 20.0, 256)), ParameterError);
    }
}

TEST_CASE("family seed", "[scenarios]") {
    auto g = make_grid(3, 20.0, 2048);
    const RadialField psi = family_a_seed(1.0, 2.0, g);
    SECTION("vanishes at the origin and is nonpositive") {
        CHECK(psi[0] == 0.0);
        CHECK(psi.max() == 0.0);
        CHECK_NOTHROW(detail::check_seed_conditions(psi, 1.0, 2.0));
    }
    SECTION("sign conditions reject a positive bump") {
        try {
            detail::check_seed_conditions(RadialField::sample(g, [](double r) { return r * r * std::exp(-r * r); }), 1.0, 2.0);
            FAIL("expected ConstructionFailure");
        } catch (const ConstructionFailure& e) {
            CHECK(e.radius() > 0.0);
        }
    }
    SECTION("nonzero origin value is rejected") {
        RadialField bad = psi;
        bad[0] = -1e-3;
        CHECK_THROWS_AS(detail::check_seed_conditions(bad, 1.0, 2.0), ConstructionFailure);
    }
    SECTION("parameter errors") {
        CHECK_THROWS_AS(family_a_seed(2.0, 2.0, g), ParameterError);
        CHECK_THROWS_AS(family_a_seed(3.0, 2.0, g), ParameterError);
        CHECK_THROWS_AS(family_a_seed(1.0, 5.0, g), ParameterError);
        CHECK_THROWS_AS(family_a_seed(0.0, 2.0, g), ParameterError);
    }
}

TEST_CASE("family construction by backward flow", "[scenarios]") {
    auto g = make_grid(3, 20.0, 1024);
    SECTION("automatic backward time gives strictly negative data") {
        const FamilyAData fa = construct_family_a(1.0, 2.0, std::nullopt, g);
        CHECK(fa.report.t0 > 0.0);
        CHECK(fa.report.t0 <= 0.05);
        CHECK(fa.report.B_hat > 0.0);
        CHECK(fa.phi0.max() < 0.0);
        CHECK(fa.report.max_phi0 == fa.phi0.max());
        CHECK(fa.report.phi0_origin == fa.phi0[0]);
        CHECK(fa.report.backward.reason == Termination::HorizonReached);
    }
    SECTION("forward flow from the data returns to the seed") {
        const FamilyAData fa = construct_family_a(1.0, 2.0, std::nullopt, g);
        StepControl c;
        c.horizon = fa.report.t0;
        c.snapshot_every = std::numeric_limits<std::size_t>::max();
        auto [traj, rep] = evolve(SimState{fa.phi0, 0.0, std::nullopt}, c);
        REQUIRE(rep.reason == Termination::HorizonReached);
        const RadialField& back = traj.snapshots.back().solve.phi;
        double e = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) e = std::max(e, std::abs(back[i] - fa.seed[i]));
        CHECK(e <= 1e-8 * fa.seed.sup_norm());
    }
    SECTION("explicit backward time is used once") {
        const FamilyAData fa = construct_family_a(1.0, 2.0, 0.02, g);
        CHECK(fa.report.t0 == 0.02);
        CHECK(fa.report.attempts == 1);
        CHECK(fa.phi0.max() < 0.0);
    }
}

TEST_CASE("build_scenario", "[scenarios]") {
    SECTION("zero data") {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::Zero;
        const ScenarioData s = build_scenario(spec, make_grid(3, 10.0, 64));
        CHECK(s.phi.sup_norm() == 0.0);
        CHECK(s.warnings.empty());
        CHECK_FALSE(s.family);
    }
    SECTION("undecayed data warns") {
        ScenarioSpec spec;
        spec.sigma = 3.0;
        const ScenarioData s = build_scenario(spec, make_grid(3, 5.0, 256));
        REQUIRE(s.warnings.size() == 1);
        CHECK(s.warnings[0].find("not decayed") != std::string::npos);
        CHECK(build_scenario(ScenarioSpec{}, make_grid(3, 20.0, 256)).warnings.empty());
    }
    SECTION("family data carries its construction record") {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::FamilyAData;
        const ScenarioData s = build_scenario(spec, make_grid(3, 20.0, 512));
        REQUIRE(s.family);
        CHECK(s.family->max_phi0 < 0.0);
    }
    SECTION("identical specs give identical data") {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::FamilyAData;
        auto g = make_grid(3, 20.0, 512);
        const ScenarioData a = build_scenario(spec, g), b = build_scenario(spec, g);
        for (std::size_t i = 0; i < g->size(); ++i) REQUIRE(a.phi[i] == b.phi[i]);
    }
}
