#include "stirap/stability.hpp"

#include <cmath>
#include <string>

#include "stirap/linear_lambda.hpp"

namespace stirap::stability {
namespace {

constexpr Complex kI{0.0, 1.0};

Vec3 normalized(const Vec3& x, double& norm_constant) {
  const double n = std::sqrt(dot(x, x));
  norm_constant = 1.0 / n;
  return {x[0] / n, x[1] / n, x[2] / n};
}

struct GridSource {
  double omega_plus;
  double omega_minus;
  Vec3 source;  // (w0, w+, w-)^T dPsi0/dt
};

GridSource source_at(const PulseSchedule& schedule, const SystemParams& params, double t) {
  const PulseSample s = schedule.at(t);
  const auto cpt = nonlinear::cpt(s);
  const auto modes = normal_modes(s, params);
  return {modes.omega_plus, modes.omega_minus,
          {mode_source(modes.w0, cpt), mode_source(modes.w_plus, cpt),
           mode_source(modes.w_minus, cpt)}};
}

bool is_recorded(std::int64_t i, std::int64_t n, int every) { return i % every == 0 || i == n; }

}  // namespace

Vec3 StabilityMatrix::apply(const Vec3& x) const {
  return {dot(m[0], x), dot(m[1], x), dot(m[2], x)};
}

StabilityMatrix build_stability_matrix(const PulseSample& sample, const SystemParams& params) {
  const double coupling = sample.omega_p * nonlinear::cpt(sample).psi_a();
  const double hd = 0.5 * sample.omega_d;
  return {{{{0.0, coupling, 0.0}, {coupling, params.delta, hd}, {0.0, hd, 0.0}}}};
}

double discriminant(const PulseSample& sample, const SystemParams& params) {
  return params.delta * params.delta + sample.omega_d * effective_rabi_nonlinear(sample);
}

void require_real_frequencies(double disc) {
  if (disc < 0.0) {
    throw DynamicalInstability("linearization has complex eigenfrequencies (discriminant " +
                               std::to_string(disc) + ")");
  }
}

double NormalModeSet::frequency(std::size_t alpha) const {
  switch (alpha) {
    case 0:
      return omega0;
    case 1:
      return omega_plus;
    default:
      return omega_minus;
  }
}

const Vec3& NormalModeSet::mode(std::size_t alpha) const {
  switch (alpha) {
    case 0:
      return w0;
    case 1:
      return w_plus;
    default:
      return w_minus;
  }
}

NormalModeSet normal_modes(const PulseSample& sample, const SystemParams& params) {
  const auto cpt = nonlinear::cpt(sample);
  const double disc = discriminant(sample, params);
  require_real_frequencies(disc);

  const double coupling = sample.omega_p * cpt.psi_a();
  const double hd = 0.5 * sample.omega_d;
  const double root = std::sqrt(disc);

  NormalModeSet modes;
  modes.omega_plus = 0.5 * (params.delta + root);
  modes.omega_minus = 0.5 * (params.delta - root);
  modes.w0 = normalized({-hd, 0.0, coupling}, modes.n0);
  modes.w_plus = normalized({coupling, modes.omega_plus, hd}, modes.n_plus);
  modes.w_minus = normalized({coupling, modes.omega_minus, hd}, modes.n_minus);
  return modes;
}

double mode_source(const Vec3& w, const nonlinear::CptPoint& cpt) {
  return w[0] * cpt.psi_a_dot() + w[1] * cpt.state_dot.e().real() + w[2] * cpt.psi_g_dot();
}

double zero_mode_source(const nonlinear::CptPoint& cpt, const NormalModeSet& modes) {
  return mode_source(modes.w0, cpt);
}

AmplitudeSeries mode_amplitudes_quadrature(const PulseSchedule& schedule,
                                           const SystemParams& params,
                                           const IntegrationConfig& grid, Kernel kernel) {
  grid.validate();
  params.validate();
  const std::int64_t n = grid.steps();
  const double h = grid.effective_step();

  std::vector<GridSource> src;
  src.reserve(static_cast<std::size_t>(n + 1));
  for (std::int64_t i = 0; i <= n; ++i) src.push_back(source_at(schedule, params, grid.time_at(i)));

  AmplitudeSeries out;
  out.reserve(static_cast<std::size_t>(n / grid.record_every + 2));

  if (kernel == Kernel::AccumulatedPhase) {
    Complex c0 = 0.0, cp = 0.0, cm = 0.0;
    out.push_back({grid.t0, {c0, cp, cm}});
    for (std::int64_t i = 1; i <= n; ++i) {
      const auto& a = src[static_cast<std::size_t>(i - 1)];
      const auto& b = src[static_cast<std::size_t>(i)];
      const Complex ph_p = std::exp(-kI * (0.5 * (a.omega_plus + b.omega_plus) * h));
      const Complex ph_m = std::exp(-kI * (0.5 * (a.omega_minus + b.omega_minus) * h));
      c0 -= 0.5 * h * (a.source[0] + b.source[0]);
      cp = cp * ph_p - 0.5 * h * (a.source[1] * ph_p + b.source[1]);
      cm = cm * ph_m - 0.5 * h * (a.source[2] * ph_m + b.source[2]);
      if (is_recorded(i, n, grid.record_every)) out.push_back({grid.time_at(i), {c0, cp, cm}});
    }
    return out;
  }

  // Frozen frequency: each output time gets its own kernel, so the sum is
  // redone per recorded point with the phasor stepped backwards in t'.
  for (std::int64_t k = 0; k <= n; ++k) {
    if (!is_recorded(k, n, grid.record_every)) continue;
    const auto& at_k = src[static_cast<std::size_t>(k)];
    const Complex step_p = std::exp(-kI * (at_k.omega_plus * h));
    const Complex step_m = std::exp(-kI * (at_k.omega_minus * h));
    Complex c0 = 0.0, cp = 0.0, cm = 0.0;
    Complex kp = 1.0, km = 1.0;  // kernel at t' = t_i
    for (std::int64_t i = k; i >= 1; --i) {
      const auto& hi = src[static_cast<std::size_t>(i)];
      const auto& lo = src[static_cast<std::size_t>(i - 1)];
      const Complex kp_lo = kp * step_p;
      const Complex km_lo = km * step_m;
      c0 -= 0.5 * h * (hi.source[0] + lo.source[0]);
      cp -= 0.5 * h * (kp * hi.source[1] + kp_lo * lo.source[1]);
      cm -= 0.5 * h * (km * hi.source[2] + km_lo * lo.source[2]);
      kp = kp_lo;
      km = km_lo;
    }
    out.push_back({grid.time_at(k), {c0, cp, cm}});
  }
  return out;
}

std::vector<TimedState<StateVector>> linearized_deviation(const PulseSchedule& schedule,
                                                          const SystemParams& params,
                                                          const IntegrationConfig& grid) {
  params.validate();
  const Rhs<StateVector> f = [&](double t, const StateVector& dpsi) {
    const PulseSample s = schedule.at(t);
    const auto m = build_stability_matrix(s, params);
    const auto cpt = nonlinear::cpt(s);
    StateVector out;
    for (std::size_t i = 0; i < 3; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < 3; ++j) acc += m(i, j) * dpsi[j];
      out[i] = -kI * acc - cpt.state_dot[i];
    }
    return out;
  };
  return integrate(f, StateVector{}, grid);
}

AmplitudeSeries mode_amplitudes_ode(const PulseSchedule& schedule, const SystemParams& params,
                                    const IntegrationConfig& grid, OdeRoute route) {
  params.validate();
  if (route == OdeRoute::Modal) {
    const Rhs<ModeAmplitudes> f = [&](double t, const ModeAmplitudes& c) {
      const auto g = source_at(schedule, params, t);
      return ModeAmplitudes{-g.source[0], -kI * g.omega_plus * c.c_plus() - g.source[1],
                            -kI * g.omega_minus * c.c_minus() - g.source[2]};
    };
    return integrate(f, ModeAmplitudes{}, grid);
  }

  AmplitudeSeries out;
  for (const auto& [t, dpsi] : linearized_deviation(schedule, params, grid)) {
    const auto modes = normal_modes(schedule.at(t), params);
    ModeAmplitudes c;
    for (std::size_t alpha = 0; alpha < 3; ++alpha) {
      const Vec3& w = modes.mode(alpha);
      c[alpha] = w[0] * dpsi[0] + w[1] * dpsi[1] + w[2] * dpsi[2];
    }
    out.push_back({t, c});
  }
  return out;
}

double r_nl_exact(Complex c_plus, Complex c_minus) {
  return 0.5 * std::sqrt(std::norm(c_plus) + std::norm(c_minus));
}

double r_nl_closed(const PulseSample& sample, const SystemParams& params) {
  if (params.delta != 0.0) {
    throw UnsupportedDetuning("closed-form r_nl is only valid at delta = 0");
  }
  const auto [chi, chi_dot] = mixing_ratio(sample);
  const double eff = effective_rabi_nonlinear(sample);
  return std::abs(chi_dot) / (1.0 + std::sqrt(1.0 + 8.0 * chi * chi)) / (0.5 * eff);
}

double r_nl_mode_form(const PulseSample& sample, const SystemParams& params) {
  const auto modes = normal_modes(sample, params);
  const double eff = effective_rabi_nonlinear(sample);
  const double drive = std::abs(sample.omega_p_dot * sample.omega_d -
                                sample.omega_p * sample.omega_d_dot) /
                       (sample.omega_d + eff);
  const double fp = modes.n_plus / modes.omega_plus;
  const double fm = modes.n_minus / modes.omega_minus;
  return 0.5 * std::sqrt(fp * fp + fm * fm) * drive;
}

std::pair<Complex, Complex> stationary_phase_amplitude(const PulseSample& sample,
                                                       const NormalModeSet& modes,
                                                       double elapsed) {
  require_dump_above_guard(sample, "stationary_phase_amplitude");
  const double eff = effective_rabi_nonlinear(sample);
  const double drive = (sample.omega_p_dot * sample.omega_d - sample.omega_p * sample.omega_d_dot) /
                       (sample.omega_d + eff);
  auto amplitude = [&](double n, double w) {
    const Complex projected = -n * drive;  // w^T dPsi0/dt
    return -projected * (1.0 - std::exp(-kI * (w * elapsed))) / (kI * w);
  };
  return {amplitude(modes.n_plus, modes.omega_plus), amplitude(modes.n_minus, modes.omega_minus)};
}

std::vector<AdiabaticityPoint> adiabaticity_trace(const PulseSchedule& schedule,
                                                  const SystemParams& params,
                                                  const IntegrationConfig& grid,
                                                  const AdiabaticityOptions& options) {
  if (options.require_closed_form && params.delta != 0.0) {
    throw UnsupportedDetuning("closed-form r_nl requested at delta != 0");
  }
  const auto quad = mode_amplitudes_quadrature(schedule, params, grid, options.kernel);
  const auto ode = mode_amplitudes_ode(schedule, params, grid, options.route);

  std::vector<AdiabaticityPoint> trace;
  trace.reserve(quad.size());
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const double t = quad[i].t;
    const PulseSample s = schedule.at(t);
    AdiabaticityPoint p;
    p.t = t;
    p.chi = mixing_ratio(s).chi;
    p.r_lin = linear::r_lin(s);
    if (params.delta == 0.0) p.r_nl_closed = r_nl_closed(s, params);
    p.r_nl_mode_form = r_nl_mode_form(s, params);
    p.c_quadrature = quad[i].state;
    p.c_ode = ode[i].state;
    p.r_nl_quadrature = r_nl_exact(p.c_quadrature.c_plus(), p.c_quadrature.c_minus());
    p.r_nl_ode = r_nl_exact(p.c_ode.c_plus(), p.c_ode.c_minus());
    trace.push_back(p);
  }
  return trace;
}

}  // namespace stirap::stability
