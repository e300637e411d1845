#include <phasesep/solver.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

using namespace phasesep;
using doctest::Approx;

TEST_SUITE("solver") {

TEST_CASE("condition construction and evaluation") {
    const CubicCondition g1 = general_condition(1.0);
    CHECK(g1.c3 == Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(g1.c2 == Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(g1.c1 == 1.0);
    CHECK(g1.c0 == -1.0);
    CHECK(g1.rhs == 0.0);
    CHECK(g1.value(3.0) == Approx(5.0).epsilon(1e-14));
    CHECK(g1.satisfied(3.0));
    CHECK_FALSE(g1.satisfied(1.0));
    CHECK_THROWS_AS(general_condition(0.0), std::invalid_argument);

    const CubicCondition e = epr_condition(1.0);
    CHECK(e.c3 == Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(e.c2 == 4.0);
    CHECK(e.c1 == 8.0);
    CHECK(e.c0 == Approx(0.25).epsilon(1e-15));  // saturated sX2 = 1/(4c)
    CHECK(e.rhs == 2.0);
    CHECK_THROWS_AS(epr_condition(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(epr_condition(1.0, -0.5), std::invalid_argument);

    const CubicCondition e2 = epr_condition(2.0, 0.25, 0.8);
    CHECK(e2.c2 == 8.0);
    CHECK(e2.c0 == Approx(0.8 + 1.0).epsilon(1e-15));
    CHECK_THROWS_AS(epr_condition(1.0, 0.0, -0.1), std::invalid_argument);

    const CubicCondition env = epr_envelope_condition();
    CHECK(env.c3 == Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(env.c2 == 0.0);
    CHECK(env.c1 == 10.0);
    CHECK(env.rhs == 2.0);

    CubicCondition bad;
    bad.c3 = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("threshold for the balanced one-particle condition") {
    const ThresholdResult r = general_threshold(1.0);
    CHECK(r.t_bar == Approx(1.3926467817026408).epsilon(1e-12));
    CHECK_FALSE(r.already_satisfied);
    CHECK(r.parameter == 1.0);
    CHECK(r.residual <= 1e-9);
    // Reported in units where the diffusion constant carries a factor two.
    CHECK(r.conversion_factor() ==
          Approx(r.t_bar * std::numbers::sqrt2).epsilon(1e-15));
    CHECK(r.conversion_factor() == Approx(1.9694971).epsilon(1e-6));
    CHECK(r.t_physical(PhysicalParams{1.0, 4.0, 1.0}) ==
          Approx(2.0 * r.t_bar).epsilon(1e-14));

    // The returned time really is the last crossing.
    const CubicCondition cond = general_condition(1.0);
    CHECK(cond.value(r.t_bar) == Approx(cond.rhs).epsilon(1e-10));
    CHECK(cond.satisfied(r.t_bar + 1e-6));
    CHECK_FALSE(cond.satisfied(r.t_bar - 1e-6));
}

TEST_CASE("threshold for the correlated-pair condition") {
    const ThresholdResult r = epr_threshold(1.0);
    CHECK(r.t_bar == Approx(0.19683575417565074).epsilon(1e-12));
    CHECK(r.parameter == 1.0);

    // Weak initial correlation: the sum starts above the bound and the
    // condition holds from t = 0 on.
    const ThresholdResult weak = epr_threshold(0.1);
    CHECK(weak.already_satisfied);
    CHECK(weak.t_bar == 0.0);
    CHECK(weak.residual == 0.0);
}

TEST_CASE("pair threshold rises toward the worst case and falls beyond it") {
    // Tighter correlations start with a narrower relative-position width, so
    // the threshold first grows with c; past the worst case the saturated
    // width 1/(4c) is already so small that the criterion trips sooner.
    double prev = 0.0;
    for (double c : {0.2, 0.3, 0.6, 1.0, 1.2}) {
        const double t = epr_threshold(c).t_bar;
        CHECK(t > prev);
        prev = t;
    }
    prev = epr_threshold(1.3).t_bar;
    for (double c : {2.0, 4.0, 8.0}) {
        const double t = epr_threshold(c).t_bar;
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("envelope threshold dominates every correlation strength") {
    const auto [c_star, r] = worst_case_epr();
    CHECK(r.t_bar == Approx(0.19793215587970935).epsilon(1e-12));
    CHECK(c_star == Approx(1.2630590461103965).epsilon(1e-12));
    CHECK(c_star == Approx(1.0 / (4.0 * r.t_bar)).epsilon(1e-15));
    CHECK(r.conversion_factor() == Approx(0.2799183).epsilon(1e-6));

    for (int k = 0; k <= 100; ++k) {
        const double c = 0.01 * std::pow(1e4, k / 100.0);  // log grid to 1e2
        CHECK(epr_threshold(c).t_bar <= r.t_bar + 1e-9);
    }
}

TEST_CASE("optimizing the squeezing parameter") {
    const auto [s_star, r] = optimize_s(0.5, 1.5);
    CHECK(s_star == Approx(0.8887620314553472).epsilon(1e-3));
    CHECK(r.t_bar == Approx(1.3780346459963756).epsilon(1e-9));
    CHECK(r.parameter == s_star);
    CHECK(r.conversion_factor() == Approx(1.9488353).epsilon(1e-6));

    // The optimum beats the balanced choice and is detected from a narrower
    // bracket as well.
    CHECK(r.t_bar < general_threshold(1.0).t_bar);
    const auto [s2, r2] = optimize_s(0.75, 1.05);
    CHECK(s2 == Approx(s_star).epsilon(1e-4));
    CHECK(r2.t_bar == Approx(r.t_bar).epsilon(1e-10));

    // Deterministic: same bracket, same bits.
    const auto [s3, r3] = optimize_s(0.5, 1.5);
    CHECK(s3 == s_star);
    CHECK(r3.t_bar == r.t_bar);

    CHECK_THROWS_AS(optimize_s(1.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(optimize_s(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("thresholds respond to the squeezing parameter") {
    // s -> 0 and s -> infinity both blow up the waiting time.
    CHECK(general_threshold(0.05).t_bar > general_threshold(1.0).t_bar);
    CHECK(general_threshold(20.0).t_bar > general_threshold(1.0).t_bar);
    // Permanence: once satisfied, satisfied for good (spot check).
    const ThresholdResult r = general_threshold(7.0);
    const CubicCondition cond = general_condition(7.0);
    for (double dt = 0.0; dt <= 5.0; dt += 0.05) {
        CHECK(cond.satisfied(r.t_bar + dt + 1e-9));
    }
}

TEST_CASE("settings resolve from the environment") {
    unsetenv("PHASESEP_PRECISION");
    CHECK(SolverSettings::from_env().root_tol == SolverSettings::strict().root_tol);

    setenv("PHASESEP_PRECISION", "fast", 1);
    CHECK(SolverSettings::from_env().root_tol == SolverSettings::fast().root_tol);
    // Fast mode still nails the root to its looser tolerance.
    const ThresholdResult r = general_threshold(1.0, SolverSettings::from_env());
    CHECK(r.t_bar == Approx(1.3926467817026408).epsilon(1e-8));

    setenv("PHASESEP_PRECISION", "sloppy", 1);
    CHECK_THROWS_AS(SolverSettings::from_env(), std::invalid_argument);
    unsetenv("PHASESEP_PRECISION");
}

}  // TEST_SUITE
