#include <phasesep/single_particle.hpp>

#include <Eigen/Dense>

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "test_states.hpp"

using namespace phasesep;
using doctest::Approx;

namespace {
const PhysicalParams kUnit = PhysicalParams::dimensionless();
}

TEST_SUITE("single_particle") {

TEST_CASE("propagator coefficients in reduced units") {
    const PropagatorCoefficients c = propagator_coefficients(1.0, kUnit);
    CHECK(c.alpha == Approx(1.0).epsilon(1e-15));
    CHECK(c.beta == Approx(3.0).epsilon(1e-15));
    CHECK(c.epsilon == Approx(-3.0).epsilon(1e-15));
    CHECK_THROWS_AS(propagator_coefficients(0.0, kUnit), std::invalid_argument);
    CHECK_THROWS_AS(propagator_coefficients(-1.0, kUnit), std::invalid_argument);
}

TEST_CASE("propagator quadratic form is half the inverse noise matrix") {
    std::mt19937 rng(11);
    for (int i = 0; i < 40; ++i) {
        const PhysicalParams params{1.0, testutil::log_uniform(rng, 0.2, 5.0),
                                    testutil::log_uniform(rng, 0.2, 5.0)};
        const double t = testutil::log_uniform(rng, 0.05, 5.0);
        const PropagatorCoefficients c = propagator_coefficients(t, params);
        const Eigen::Matrix2d inv = noise_matrix(t, params).matrix().inverse();
        CHECK(c.alpha == Approx(0.5 * inv(0, 0)).epsilon(1e-11));
        CHECK(c.beta == Approx(0.5 * inv(1, 1)).epsilon(1e-11));
        CHECK(c.epsilon == Approx(inv(0, 1)).epsilon(1e-11));
    }
}

TEST_CASE("accumulated noise matrix entries and determinant") {
    const CovarianceMatrix2 a1 = noise_matrix(1.0, kUnit);
    CHECK(a1.spp == Approx(2.0).epsilon(1e-15));
    CHECK(a1.spx == Approx(1.0).epsilon(1e-15));
    CHECK(a1.sxx == Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(a1.det() == Approx(1.0 / 3.0).epsilon(1e-14));

    CHECK(noise_matrix(1.39, kUnit).sxx == Approx(1.7904126666666667).epsilon(1e-15));

    const CovarianceMatrix2 a0 = noise_matrix(0.0, kUnit);
    CHECK(a0.spp == 0.0);
    CHECK(a0.spx == 0.0);
    CHECK(a0.sxx == 0.0);
    CHECK_THROWS_AS(noise_matrix(-0.1, kUnit), std::invalid_argument);

    // |A| = D^2 t^4 / (3 m^2) for any parameters.
    std::mt19937 rng(12);
    for (int i = 0; i < 40; ++i) {
        const PhysicalParams params{1.0, testutil::log_uniform(rng, 0.2, 5.0),
                                    testutil::log_uniform(rng, 0.2, 5.0)};
        const double t = testutil::log_uniform(rng, 0.05, 5.0);
        const double expected = params.diffusion * params.diffusion * std::pow(t, 4) /
                                (3.0 * params.mass * params.mass);
        CHECK(noise_matrix(t, params).det() == Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("noise matrix composes as a semigroup under the shear") {
    const Eigen::Matrix2d s1 = drift_shear(1.0, kUnit);
    const Eigen::Matrix2d a1 = noise_matrix(1.0, kUnit).matrix();
    const Eigen::Matrix2d composed = s1 * a1 * s1.transpose() + a1;
    CHECK(composed(0, 0) == Approx(4.0).epsilon(1e-14));
    CHECK(composed(0, 1) == Approx(4.0).epsilon(1e-14));
    CHECK(composed(1, 1) == Approx(16.0 / 3.0).epsilon(1e-14));
    const Eigen::Matrix2d a2 = noise_matrix(2.0, kUnit).matrix();
    CHECK((composed - a2).norm() == Approx(0.0).epsilon(1e-12));

    std::mt19937 rng(13);
    for (int i = 0; i < 40; ++i) {
        const PhysicalParams params{1.0, testutil::log_uniform(rng, 0.2, 5.0),
                                    testutil::log_uniform(rng, 0.2, 5.0)};
        const double t1 = testutil::log_uniform(rng, 0.05, 3.0);
        const double t2 = testutil::log_uniform(rng, 0.05, 3.0);
        const Eigen::Matrix2d s = drift_shear(t2, params);
        const Eigen::Matrix2d lhs =
            s * noise_matrix(t1, params).matrix() * s.transpose() +
            noise_matrix(t2, params).matrix();
        const Eigen::Matrix2d rhs = noise_matrix(t1 + t2, params).matrix();
        CHECK((lhs - rhs).norm() <= 1e-13 * rhs.norm());
    }
}

TEST_CASE("closed-form evolution of a minimum-uncertainty state") {
    const GaussianState st = GaussianState::one_mode({0.3, -0.2}, {0.5, 0.5, 0.0});
    const GaussianState out = evolve(st, 1.0, kUnit);
    CHECK(out.mean(0) == Approx(0.3).epsilon(1e-15));
    CHECK(out.mean(1) == Approx(0.1).epsilon(1e-14));
    const CovarianceMatrix2 c = out.mode_cov(0);
    CHECK(c.spp == Approx(2.5).epsilon(1e-15));
    CHECK(c.spx == Approx(1.5).epsilon(1e-15));
    CHECK(c.sxx == Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("evolution matches the componentwise variance formulas") {
    std::mt19937 rng(14);
    for (int i = 0; i < 100; ++i) {
        const PhysicalParams params{1.0, testutil::log_uniform(rng, 0.2, 5.0),
                                    testutil::log_uniform(rng, 0.2, 5.0)};
        const GaussianState st = testutil::random_one_mode(rng);
        const double t = testutil::log_uniform(rng, 0.01, 4.0);
        const CovarianceMatrix2 c0 = st.mode_cov(0);
        const CovarianceMatrix2 c = evolve(st, t, params).mode_cov(0);
        const double m = params.mass, d = params.diffusion;
        CHECK(c.spp == Approx(c0.spp + 2.0 * d * t).epsilon(1e-13));
        CHECK(c.spx ==
              Approx(c0.spx + (t / m) * c0.spp + d * t * t / m).epsilon(1e-13));
        CHECK(c.sxx == Approx(c0.sxx + 2.0 * (t / m) * c0.spx +
                              (t / m) * (t / m) * c0.spp +
                              2.0 * d * t * t * t / (3.0 * m * m))
                           .epsilon(1e-13));
    }
}

TEST_CASE("evolution preserves validity and forms a semigroup") {
    std::mt19937 rng(15);
    for (int i = 0; i < 60; ++i) {
        const PhysicalParams params{1.0, testutil::log_uniform(rng, 0.3, 3.0),
                                    testutil::log_uniform(rng, 0.3, 3.0)};
        const GaussianState st = testutil::random_one_mode(rng);
        const double t1 = testutil::log_uniform(rng, 0.05, 2.0);
        const double t2 = testutil::log_uniform(rng, 0.05, 2.0);
        const GaussianState two_leg = evolve(evolve(st, t1, params), t2, params);
        const GaussianState one_leg = evolve(st, t1 + t2, params);
        CHECK((two_leg.mean - one_leg.mean).norm() <= 1e-12);
        CHECK((two_leg.cov - one_leg.cov).norm() <=
              1e-12 * std::max(1.0, one_leg.cov.norm()));
        CHECK(wigner_valid(one_leg.mode_cov(0)));
        // Mixedness only grows: |C(t)| is nondecreasing.
        CHECK(one_leg.mode_cov(0).det() >= st.mode_cov(0).det() - 1e-14);
    }
}

TEST_CASE("reduced scales multiply back to hbar") {
    std::mt19937 rng(16);
    for (int i = 0; i < 20; ++i) {
        const PhysicalParams params{testutil::log_uniform(rng, 0.1, 10.0),
                                    testutil::log_uniform(rng, 0.1, 10.0),
                                    testutil::log_uniform(rng, 0.1, 10.0)};
        const DimensionlessScaling sc = DimensionlessScaling::from_params(params);
        CHECK(sc.p_scale * sc.x_scale == Approx(params.hbar).epsilon(1e-14));
        CHECK(sc.t_scale ==
              Approx(std::sqrt(params.hbar * params.mass / params.diffusion))
                  .epsilon(1e-14));
        // x_scale = p_scale * t_scale / m makes the drift term dimensionless.
        CHECK(sc.x_scale ==
              Approx(sc.p_scale * sc.t_scale / params.mass).epsilon(1e-14));
    }
}

TEST_CASE("scalar unit conversions round trip") {
    const PhysicalParams params{2.0, 3.0, 5.0};
    for (Quantity q : {Quantity::time, Quantity::momentum, Quantity::position}) {
        const double v = 1.7;
        CHECK(from_dimensionless(to_dimensionless(v, q, params), q, params) ==
              Approx(v).epsilon(1e-15));
    }
    CHECK(to_dimensionless(std::sqrt(2.0 * 3.0 / 5.0), Quantity::time, params) ==
          Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(to_dimensionless(1.0, static_cast<Quantity>(42), params),
                    std::invalid_argument);
}

TEST_CASE("state conversion commutes with evolution") {
    std::mt19937 rng(17);
    const PhysicalParams params{0.7, 2.5, 1.3};
    for (int i = 0; i < 30; ++i) {
        const GaussianState si = testutil::random_one_mode(rng, UnitSystem::si);
        const double t = testutil::log_uniform(rng, 0.05, 2.0);

        const GaussianState direct = evolve(si, t, params);
        // The rescaled state evolves with unit constants by construction.
        const GaussianState via_reduced =
            to_si(evolve(to_dimensionless(si, params),
                         to_dimensionless(t, Quantity::time, params),
                         PhysicalParams::dimensionless()),
                  params);
        CHECK((direct.mean - via_reduced.mean).norm() <=
              1e-12 * std::max(1.0, direct.mean.norm()));
        CHECK((direct.cov - via_reduced.cov).norm() <= 1e-12 * direct.cov.norm());
    }
    const GaussianState already = testutil::random_one_mode(rng);
    CHECK_THROWS_AS(to_dimensionless(already, params), std::invalid_argument);
    CHECK_THROWS_AS(to_si(testutil::random_one_mode(rng, UnitSystem::si), params),
                    std::invalid_argument);
}

}  // TEST_SUITE
