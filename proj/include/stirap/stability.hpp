#pragma once

// Linear stability analysis around the nonlinear dark-state branch.
//
// Writing psi = Psi0(t) + dpsi and keeping first order in dpsi gives
//
//   i d(dpsi)/dt = M dpsi - i dPsi0/dt,
//
//       | 0           Omega_p psi_a0   0         |
//   M = | Omega_p psi_a0   Delta       Omega_d/2 |
//       | 0           Omega_d/2        0         |
//
// M is real symmetric with eigenfrequencies 0 and
// w_pm = (Delta +- sqrt(Delta^2 + Omega_d Omega_eff_nl)) / 2. Expanding
// dpsi = sum_alpha c_alpha w_alpha over the orthonormal modes gives
//
//   i dc_alpha/dt = w_alpha c_alpha - i w_alpha^T dPsi0/dt.
//
// The zero mode is not driven (w_0^T dPsi0/dt vanishes identically on the
// branch), so departure from the dark state is measured by
// r_nl = |c|/2 over the two nonzero modes.

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "stirap/integrator.hpp"
#include "stirap/model_core.hpp"
#include "stirap/nonlinear_lambda.hpp"

namespace stirap::stability {

using Vec3 = std::array<double, 3>;
using Matrix3 = std::array<Vec3, 3>;

inline double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }

struct StabilityMatrix {
  Matrix3 m{};

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return m[i][j]; }
  [[nodiscard]] Vec3 apply(const Vec3& x) const;
};

StabilityMatrix build_stability_matrix(const PulseSample& sample, const SystemParams& params);

/// Delta^2 + Omega_d Omega_eff_nl. Positive for any physical pulse pair.
double discriminant(const PulseSample& sample, const SystemParams& params);

/// Throws DynamicalInstability when the discriminant is negative, i.e. the
/// linearization has complex frequencies.
void require_real_frequencies(double discriminant);

/// Normal modes ordered (0, +, -). Each w has unit norm; n_* are the
/// normalization constants of the unnormalized forms
///   w0 ~ (-Omega_d/2, 0, Omega_p psi_a0),  w_pm ~ (Omega_p psi_a0, w_pm, Omega_d/2).
struct NormalModeSet {
  double omega0 = 0.0;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  Vec3 w0{};
  Vec3 w_plus{};
  Vec3 w_minus{};
  double n0 = 0.0;
  double n_plus = 0.0;
  double n_minus = 0.0;

  [[nodiscard]] double frequency(std::size_t alpha) const;
  [[nodiscard]] const Vec3& mode(std::size_t alpha) const;
};

NormalModeSet normal_modes(const PulseSample& sample, const SystemParams& params);

/// w^T dPsi0/dt for a real mode vector w.
double mode_source(const Vec3& w, const nonlinear::CptPoint& cpt);

/// w0^T dPsi0/dt = N0 (-(Omega_d/2) dpsi_a0/dt + Omega_p psi_a0 dpsi_g0/dt).
/// Vanishes on the branch; takes the CptPoint by value so callers can probe a
/// perturbed branch.
double zero_mode_source(const nonlinear::CptPoint& cpt, const NormalModeSet& modes);

/// Mode amplitudes (c0, c+, c-).
struct ModeAmplitudes : ComplexTriple {
  ModeAmplitudes() = default;
  ModeAmplitudes(Complex c0, Complex cp, Complex cm) : ComplexTriple{{c0, cp, cm}} {}
  ModeAmplitudes(const ComplexTriple& t) : ComplexTriple(t) {}  // NOLINT(implicit)

  [[nodiscard]] Complex c0() const { return v[0]; }
  [[nodiscard]] Complex c_plus() const { return v[1]; }
  [[nodiscard]] Complex c_minus() const { return v[2]; }
};

using AmplitudeSeries = std::vector<TimedState<ModeAmplitudes>>;

/// How the phase kernel of the amplitude integral treats the time-dependent
/// mode frequencies.
enum class Kernel {
  /// exp(-i int_{t'}^{t} w(s) ds), piecewise-constant w per grid step.
  AccumulatedPhase,
  /// exp(i w(t) (t' - t)) with w frozen at the output time.
  FrozenFrequency,
};

/// c_pm(t) = -int_{t0}^{t} dt' K(t, t') w_pm^T(t') dPsi0/dt(t'), trapezoidal on
/// the uniform grid given by `grid`, with c(t0) = 0. The zero-mode amplitude
/// is accumulated the same way with w0 = 0.
AmplitudeSeries mode_amplitudes_quadrature(const PulseSchedule& schedule,
                                           const SystemParams& params,
                                           const IntegrationConfig& grid,
                                           Kernel kernel = Kernel::AccumulatedPhase);

enum class OdeRoute {
  /// RK4 on the projected mode equations i dc/dt = w c - i w^T dPsi0/dt.
  Modal,
  /// RK4 on the full linearized equation for dpsi, projected afterwards on
  /// the instantaneous modes. Also carries the couplings through dw/dt.
  LabFrame,
};

AmplitudeSeries mode_amplitudes_ode(const PulseSchedule& schedule, const SystemParams& params,
                                    const IntegrationConfig& grid,
                                    OdeRoute route = OdeRoute::Modal);

/// Linearized deviation dpsi(t) from the dark-state branch, dpsi(t0) = 0.
std::vector<TimedState<StateVector>> linearized_deviation(const PulseSchedule& schedule,
                                                          const SystemParams& params,
                                                          const IntegrationConfig& grid);

/// (1/2) sqrt(|c+|^2 + |c-|^2)
double r_nl_exact(Complex c_plus, Complex c_minus);

/// Resonant closed form |dchi/dt| / (1 + sqrt(1 + 8 chi^2)) / (Omega_eff_nl / 2).
/// Throws UnsupportedDetuning if delta != 0.
double r_nl_closed(const PulseSample& sample, const SystemParams& params);

/// Stationary-phase estimate for any detuning:
///   (1/2) sqrt(N+^2/w+^2 + N-^2/w-^2) |dOmega_p/dt Omega_d - Omega_p dOmega_d/dt|
///   / (Omega_d + Omega_eff_nl).
/// Equals r_nl_closed on resonance.
double r_nl_mode_form(const PulseSample& sample, const SystemParams& params);

/// Stationary-phase amplitudes
///   c_pm(t) = -(w_pm^T dPsi0/dt) (1 - exp(-i w_pm t)) / (i w_pm),
/// with w_pm^T dPsi0/dt = -N_pm (dOmega_p/dt Omega_d - Omega_p dOmega_d/dt)
/// / (Omega_d + Omega_eff_nl). `elapsed` is the time since c = 0.
std::pair<Complex, Complex> stationary_phase_amplitude(const PulseSample& sample,
                                                       const NormalModeSet& modes,
                                                       double elapsed);

struct AdiabaticityPoint {
  double t = 0.0;
  double chi = 0.0;
  double r_lin = 0.0;
  std::optional<double> r_nl_closed;  // resonance only
  double r_nl_mode_form = 0.0;
  double r_nl_quadrature = 0.0;
  double r_nl_ode = 0.0;
  ModeAmplitudes c_quadrature;
  ModeAmplitudes c_ode;
};

struct AdiabaticityOptions {
  Kernel kernel = Kernel::AccumulatedPhase;
  OdeRoute route = OdeRoute::Modal;
  /// Throw UnsupportedDetuning instead of leaving r_nl_closed empty when
  /// delta != 0.
  bool require_closed_form = false;
};

/// Both adiabaticity parameters and all r_nl variants on the analysis grid.
std::vector<AdiabaticityPoint> adiabaticity_trace(const PulseSchedule& schedule,
                                                  const SystemParams& params,
                                                  const IntegrationConfig& grid,
                                                  const AdiabaticityOptions& options = {});

}  // namespace stirap::stability
