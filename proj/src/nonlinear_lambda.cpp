#include "stirap/nonlinear_lambda.hpp"

#include <cmath>

namespace stirap::nonlinear {
namespace {
constexpr Complex kMinusI{0.0, -1.0};
}

StateVector generator(const StateVector& s, const PulseSample& sample, const SystemParams& params) {
  const double op = sample.omega_p;
  const double od = sample.omega_d;
  return {op * std::conj(s.a()) * s.e(),
          params.delta * s.e() + 0.5 * op * s.a() * s.a() + 0.5 * od * s.g(),
          0.5 * od * s.e()};
}

StateVector rhs(const StateVector& s, const PulseSample& sample, const SystemParams& params) {
  return kMinusI * generator(s, sample, params);
}

CptPoint cpt(const PulseSample& sample) {
  require_dump_above_guard(sample, "nonlinear::cpt");
  const double op = sample.omega_p;
  const double od = sample.omega_d;
  const double op_dot = sample.omega_p_dot;
  const double od_dot = sample.omega_d_dot;

  const double eff = effective_rabi_nonlinear(sample);
  const double eff_dot = (od * od_dot + 8.0 * op * op_dot) / eff;
  const double denom = od + eff;
  const double denom_dot = od_dot + eff_dot;

  const double psi_a = std::sqrt(2.0 * od / denom);
  const double psi_g = -2.0 * op / denom;
  // d/dt sqrt(u) = u' / (2 sqrt(u)) with u = 2 Omega_d / denom
  const double u_dot = 2.0 * (od_dot * denom - od * denom_dot) / (denom * denom);
  const double psi_a_dot = u_dot / (2.0 * psi_a);
  const double psi_g_dot = -2.0 * (op_dot * denom - op * denom_dot) / (denom * denom);

  return CptPoint{{psi_a, 0.0, psi_g}, {psi_a_dot, 0.0, psi_g_dot}, eff};
}

std::string_view to_string(FixedPointFamily family) {
  switch (family) {
    case FixedPointFamily::Cpt:
      return "cpt";
    case FixedPointFamily::MolecularPair:
      return "molecular_pair";
    case FixedPointFamily::MixedPair:
      return "mixed_pair";
  }
  return "unknown";
}

double stationary_residual(const FixedPoint& point, const PulseSample& sample,
                           const SystemParams& params) {
  const StateVector lhs = Complex(point.frequency, 0.0) * point.state;
  return (lhs - generator(point.state, sample, params)).max_abs();
}

std::vector<FixedPoint> enumerate_fixed_points(const PulseSample& sample,
                                               const SystemParams& params) {
  if (params.delta != 0.0) {
    throw UnsupportedDetuning("fixed-point enumeration is only available at delta = 0");
  }
  if (!(sample.omega_p > 0.0) || sample.omega_p < guard_threshold(sample)) {
    throw DegeneratePulse("enumerate_fixed_points: pump Rabi frequency below the guard");
  }
  const double op = sample.omega_p;
  const double od = sample.omega_d;

  std::vector<FixedPoint> points;
  points.push_back({0.0, cpt(sample).state, FixedPointFamily::Cpt});

  // Molecular pair, printed as (0, +-1, 1)/sqrt(2); rescaled to unit atom number.
  for (const double sign : {1.0, -1.0}) {
    points.push_back({sign * 0.5 * od, {0.0, sign * 0.5, 0.5}, FixedPointFamily::MolecularPair});
  }

  if (od < op) {
    const double ratio = od / op;
    const double psi_a = std::sqrt(0.5 * (1.0 - ratio * ratio));
    for (const double sign : {1.0, -1.0}) {
      points.push_back(
          {sign * 0.5 * op, {psi_a, sign * 0.5, 0.5 * ratio}, FixedPointFamily::MixedPair});
    }
  }
  return points;
}

double atom_number(const StateVector& s) {
  return std::norm(s.a()) + 2.0 * (std::norm(s.e()) + std::norm(s.g()));
}

double energy(const StateVector& s, const PulseSample& sample, const SystemParams& params) {
  const Complex e_conj = std::conj(s.e());
  return params.delta * std::norm(s.e()) + (sample.omega_p * e_conj * s.a() * s.a()).real() +
         (sample.omega_d * e_conj * s.g()).real();
}

StateVector apply_gauge(const StateVector& s, double theta) {
  const Complex p1 = std::polar(1.0, theta);
  const Complex p2 = std::polar(1.0, 2.0 * theta);
  return {p1 * s.a(), p2 * s.e(), p2 * s.g()};
}

Trajectory simulate(const PulseSchedule& schedule, const SystemParams& params,
                    const StateVector& initial, const IntegrationConfig& config) {
  params.validate();
  const Rhs<StateVector> f = [&](double t, const StateVector& y) {
    return rhs(y, schedule.at(t), params);
  };
  return Trajectory{Dynamics::Nonlinear, integrate(f, initial, config)};
}

}  // namespace stirap::nonlinear
