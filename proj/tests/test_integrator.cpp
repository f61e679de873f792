#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stirap/integrator.hpp"
#include "stirap/linear_lambda.hpp"
#include "stirap/nonlinear_lambda.hpp"

using namespace stirap;

TEST_CASE("zero right-hand side keeps the state constant") {
  const StateVector y0{0.3, Complex(0.1, -0.2), 0.5};
  const Rhs<StateVector> zero = [](double, const StateVector&) { return StateVector{}; };
  const auto traj = integrate(zero, y0, IntegrationConfig{0.0, 1.0, 0.1, 1});
  REQUIRE(traj.size() == 11);
  for (const auto& s : traj) CHECK(s.state == y0);
}

TEST_CASE("sampling grid") {
  const Rhs<StateVector> zero = [](double, const StateVector&) { return StateVector{}; };
  SUBCASE("record_every keeps the first and last samples") {
    const auto traj = integrate(zero, StateVector::atomic(), IntegrationConfig{0.0, 1.0, 0.1, 3});
    REQUIRE(traj.size() == 5);  // steps 0, 3, 6, 9, 10
    CHECK(traj.front().t == 0.0);
    CHECK(traj[1].t == doctest::Approx(0.3));
    CHECK(traj.back().t == 1.0);
    for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj[i].t > traj[i - 1].t);
  }
  SUBCASE("step that does not divide the window is evened out") {
    const IntegrationConfig cfg{0.0, 1.0, 0.3, 1};
    CHECK(cfg.steps() == 3);
    CHECK(cfg.effective_step() == doctest::Approx(1.0 / 3.0));
    CHECK(integrate(zero, StateVector::atomic(), cfg).back().t == 1.0);
  }
  SUBCASE("invalid configs") {
    CHECK_THROWS_AS(IntegrationConfig({1.0, 0.0, 0.1, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(IntegrationConfig({0.0, 1.0, 0.0, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(IntegrationConfig({0.0, 1.0, 2.0, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(IntegrationConfig({0.0, 1.0, 0.1, 0}).validate(), std::invalid_argument);
  }
}

TEST_CASE("non-finite states are reported") {
  const Rhs<StateVector> bad = [](double t, const StateVector& y) {
    return t > 0.5 ? StateVector{NAN, 0.0, 0.0} : StateVector{} + 0.0 * y;
  };
  CHECK_THROWS_AS(integrate(bad, StateVector::atomic(), IntegrationConfig{0.0, 1.0, 0.01, 1}),
                  NonFiniteState);
}

TEST_CASE("bright eigenstate returns to itself after one period") {
  const auto sample = PulseSample::frozen(3.0, 4.0);
  const SystemParams params{};
  const auto eig = linear::eigensystem(sample, params);
  const auto& bright = eig.bright_plus();
  const double period = 2.0 * std::numbers::pi / bright.frequency;

  const FrozenSchedule schedule(sample);
  const auto traj =
      linear::simulate(schedule, params, bright.state, IntegrationConfig{0.0, period, 1e-3, 100});
  CHECK((traj.back().state - bright.state).max_abs() < 1e-8);

  // Intermediate samples follow exp(-i w t) exactly.
  for (const auto& [t, s] : traj.samples) {
    const StateVector expected = std::polar(1.0, -bright.frequency * t) * bright.state;
    CHECK((s - expected).max_abs() < 1e-8);
  }
}

TEST_CASE("fourth-order convergence on the nonlinear Gaussian run") {
  const GaussianSchedule schedule(GaussianPulsePair{5.0, 3.8, 3.0});
  auto endpoint = [&](double h) {
    return nonlinear::simulate(schedule, SystemParams{}, StateVector::atomic(),
                               IntegrationConfig{0.0, 8.0, h, 1 << 30})
        .back()
        .state;
  };
  const auto reference = endpoint(1e-4);
  const double e1 = (endpoint(0.02) - reference).max_abs();
  const double e2 = (endpoint(0.01) - reference).max_abs();
  MESSAGE("RK4 endpoint errors " << e1 << " -> " << e2 << ", ratio " << e1 / e2);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}
