#pragma once

// Fixed-step classical Runge-Kutta integration of complex triples.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stirap/model_core.hpp"

namespace stirap {

struct IntegrationConfig {
  double t0 = 0.0;
  double t1 = 8.0;
  double step = 1e-3;
  int record_every = 1;

  void validate() const {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0))
      throw std::invalid_argument("integration window requires finite t0 < t1");
    if (!(step > 0.0) || step > (t1 - t0))
      throw std::invalid_argument("step must be positive and no longer than the window");
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  }

  /// Number of RK4 steps. The window is split evenly, so the effective step
  /// is (t1 - t0) / steps(), which equals `step` whenever it divides the
  /// window.
  [[nodiscard]] std::int64_t steps() const {
    const auto n = static_cast<std::int64_t>(std::llround((t1 - t0) / step));
    return n < 1 ? 1 : n;
  }
  [[nodiscard]] double effective_step() const { return (t1 - t0) / static_cast<double>(steps()); }
  [[nodiscard]] double time_at(std::int64_t i) const {
    return i == steps() ? t1 : t0 + static_cast<double>(i) * effective_step();
  }
};

template <class State>
struct TimedState {
  double t;
  State state;
};

template <class State>
using Rhs = std::function<State(double, const State&)>;

/// One classical RK4 step.
template <class State>
State rk4_step(const Rhs<State>& rhs, double t, const State& y, double h) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
  const State k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
  const State k4 = rhs(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrates dy/dt = rhs(t, y) from config.t0 to config.t1.
///
/// Keeps every `record_every`-th step plus the initial and final samples.
/// Throws NonFiniteState as soon as a component stops being finite.
template <class State>
std::vector<TimedState<State>> integrate(const Rhs<State>& rhs, const State& initial,
                                         const IntegrationConfig& config) {
  config.validate();
  const std::int64_t n = config.steps();
  const double h = config.effective_step();

  std::vector<TimedState<State>> out;
  out.reserve(static_cast<std::size_t>(n / config.record_every + 2));
  out.push_back({config.t0, initial});

  State y = initial;
  for (std::int64_t i = 0; i < n; ++i) {
    y = rk4_step(rhs, config.time_at(i), y, h);
    if (!y.all_finite()) {
      throw NonFiniteState("state became non-finite at t=" + std::to_string(config.time_at(i + 1)));
    }
    if ((i + 1) % config.record_every == 0 || i + 1 == n) out.push_back({config.time_at(i + 1), y});
  }
  return out;
}

/// Which population counts as "transferred" into |g>.
enum class Dynamics { Linear, Nonlinear };

struct PopulationSample {
  double pop_a;
  double pop_e;
  double pop_g;
  /// |psi_g|^2 for the linear system, 2|psi_g|^2 for the nonlinear one.
  double transfer;
};

PopulationSample populations(const StateVector& s, Dynamics dynamics);

/// Sampled state history with per-sample populations.
struct Trajectory {
  Dynamics dynamics = Dynamics::Nonlinear;
  std::vector<TimedState<StateVector>> samples;

  [[nodiscard]] PopulationSample populations_at(std::size_t i) const {
    return populations(samples.at(i).state, dynamics);
  }
  [[nodiscard]] const TimedState<StateVector>& back() const { return samples.back(); }
};

inline PopulationSample populations(const StateVector& s, Dynamics dynamics) {
  const double pa = std::norm(s.a());
  const double pe = std::norm(s.e());
  const double pg = std::norm(s.g());
  return {pa, pe, pg, dynamics == Dynamics::Nonlinear ? 2.0 * pg : pg};
}

}  // namespace stirap
