#include "stirap/linear_lambda.hpp"

#include <cmath>

namespace stirap::linear {
namespace {

constexpr Complex kMinusI{0.0, -1.0};

double omega_eff_checked(const PulseSample& sample, const char* where) {
  const double eff = effective_rabi_linear(sample);
  if (!(eff > 0.0) || eff < guard_threshold(sample)) {
    throw DegeneratePulse(std::string(where) + ": effective Rabi frequency below the guard");
  }
  return eff;
}

StateVector unit_bright_state(double omega_p, double omega_d, double frequency) {
  // Rows a and g of (H - w) v = 0 give v ~ (Omega_p/2, w, Omega_d/2).
  const double a = 0.5 * omega_p;
  const double g = 0.5 * omega_d;
  const double n = std::sqrt(a * a + frequency * frequency + g * g);
  double sign = 1.0;
  if (a == 0.0) sign = frequency >= 0.0 ? 1.0 : -1.0;  // first nonzero is psi_e
  return {sign * a / n, sign * frequency / n, sign * g / n};
}

}  // namespace

std::array<std::array<double, 3>, 3> hamiltonian(const PulseSample& sample,
                                                 const SystemParams& params) {
  const double hp = 0.5 * sample.omega_p;
  const double hd = 0.5 * sample.omega_d;
  return {{{0.0, hp, 0.0}, {hp, -params.delta, hd}, {0.0, hd, 0.0}}};
}

StateVector rhs(const StateVector& s, const PulseSample& sample, const SystemParams& params) {
  const double hp = 0.5 * sample.omega_p;
  const double hd = 0.5 * sample.omega_d;
  return {kMinusI * (hp * s.e()), kMinusI * (-params.delta * s.e() + hp * s.a() + hd * s.g()),
          kMinusI * (hd * s.e())};
}

StateVector cpt_state(const PulseSample& sample) {
  const double eff = omega_eff_checked(sample, "linear::cpt_state");
  return {sample.omega_d / eff, 0.0, -sample.omega_p / eff};
}

LinearEigenSet eigensystem(const PulseSample& sample, const SystemParams& params) {
  const double eff = omega_eff_checked(sample, "linear::eigensystem");
  const double root = std::sqrt(params.delta * params.delta + eff * eff);
  const double w_plus = 0.5 * (-params.delta + root);
  const double w_minus = 0.5 * (-params.delta - root);
  return LinearEigenSet{{{
      {0.0, cpt_state(sample)},
      {w_plus, unit_bright_state(sample.omega_p, sample.omega_d, w_plus)},
      {w_minus, unit_bright_state(sample.omega_p, sample.omega_d, w_minus)},
  }}};
}

double r_lin(const PulseSample& sample) {
  const double eff = omega_eff_checked(sample, "linear::r_lin");
  const double num = sample.omega_p_dot * sample.omega_d - sample.omega_d_dot * sample.omega_p;
  return std::abs(num) / (eff * eff * eff);
}

double r_lin_mixing_form(const PulseSample& sample) {
  const auto [chi, chi_dot] = mixing_ratio(sample);
  return std::abs(chi_dot) / (1.0 + chi * chi) / effective_rabi_linear(sample);
}

Trajectory simulate(const PulseSchedule& schedule, const SystemParams& params,
                    const StateVector& initial, const IntegrationConfig& config) {
  params.validate();
  const Rhs<StateVector> f = [&](double t, const StateVector& y) {
    return rhs(y, schedule.at(t), params);
  };
  return Trajectory{Dynamics::Linear, integrate(f, initial, config)};
}

}  // namespace stirap::linear
