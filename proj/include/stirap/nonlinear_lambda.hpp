#pragma once

// Mean-field atom-molecule Lambda system. |a> is atomic, |e> and |g> are
// excited and ground molecular states; two atoms make one molecule:
//
//   i dpsi_a/dt = Omega_p psi_a^* psi_e
//   i dpsi_e/dt = Delta psi_e + (Omega_p/2) psi_a^2 + (Omega_d/2) psi_g
//   i dpsi_g/dt = (Omega_d/2) psi_e
//
// normalized so that |psi_a|^2 + 2(|psi_e|^2 + |psi_g|^2) = 1.

#include <string_view>
#include <vector>

#include "stirap/integrator.hpp"
#include "stirap/model_core.hpp"

namespace stirap::nonlinear {

/// The mean-field equations of motion, d(psi)/dt.
StateVector rhs(const StateVector& state, const PulseSample& sample, const SystemParams& params);

/// Right-hand sides of the equations above without the leading i, i.e. the
/// value of i dpsi/dt.
StateVector generator(const StateVector& state, const PulseSample& sample,
                      const SystemParams& params);

/// Instantaneous dark-state fixed point and its time derivative along the
/// pulse schedule.
struct CptPoint {
  StateVector state;       // (psi_a0 >= 0, 0, psi_g0 <= 0), real
  StateVector state_dot;   // analytic chain rule in (dOmega_p/dt, dOmega_d/dt)
  double omega_eff_nl = 0.0;

  [[nodiscard]] double psi_a() const { return state.a().real(); }
  [[nodiscard]] double psi_g() const { return state.g().real(); }
  [[nodiscard]] double psi_a_dot() const { return state_dot.a().real(); }
  [[nodiscard]] double psi_g_dot() const { return state_dot.g().real(); }
};

/// psi_a0 = sqrt(2 Omega_d / (Omega_d + Omega_eff_nl)), psi_e0 = 0,
/// psi_g0 = -2 Omega_p / (Omega_d + Omega_eff_nl).
/// Throws DegeneratePulse if omega_d is under the guard.
CptPoint cpt(const PulseSample& sample);

enum class FixedPointFamily { Cpt, MolecularPair, MixedPair };

std::string_view to_string(FixedPointFamily family);

struct FixedPoint {
  double frequency;
  StateVector state;
  FixedPointFamily family;
};

/// Max-abs residual of omega * psi - generator(psi).
double stationary_residual(const FixedPoint& point, const PulseSample& sample,
                           const SystemParams& params);

/// All gauge-fixed stationary states on one-photon resonance: the CPT state,
/// the molecular pair (0, +-1/2, 1/2) at +-Omega_d/2 and, iff
/// Omega_d < Omega_p, the mixed pair at +-Omega_p/2. Every state carries unit
/// atom number. Throws UnsupportedDetuning if delta != 0.
std::vector<FixedPoint> enumerate_fixed_points(const PulseSample& sample,
                                               const SystemParams& params);

/// |psi_a|^2 + 2(|psi_e|^2 + |psi_g|^2)
double atom_number(const StateVector& state);

/// Conserved functional generating the equations of motion at frozen pulses:
/// Delta |psi_e|^2 + Re[Omega_p psi_e^* psi_a^2] + Re[Omega_d psi_e^* psi_g].
double energy(const StateVector& state, const PulseSample& sample, const SystemParams& params);

/// (e^{i theta} psi_a, e^{2i theta} psi_e, e^{2i theta} psi_g)
StateVector apply_gauge(const StateVector& state, double theta);

Trajectory simulate(const PulseSchedule& schedule, const SystemParams& params,
                    const StateVector& initial, const IntegrationConfig& config);

}  // namespace stirap::nonlinear
