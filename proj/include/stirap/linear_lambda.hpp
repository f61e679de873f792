#pragma once

// Linear three-level Lambda system (single atom):
//
//   H_lin = -Delta |e><e| + 1/2 (Omega_p |a><e| + Omega_d |g><e| + h.c.)
//
// with its dark (CPT) state, eigen-structure and the adiabaticity parameter
// r_lin.

#include <array>

#include "stirap/integrator.hpp"
#include "stirap/model_core.hpp"

namespace stirap::linear {

/// H_lin as a real symmetric matrix in (a, e, g) order.
std::array<std::array<double, 3>, 3> hamiltonian(const PulseSample& sample,
                                                 const SystemParams& params);

/// d(psi)/dt = -i H_lin psi.
StateVector rhs(const StateVector& state, const PulseSample& sample, const SystemParams& params);

/// (Omega_d, 0, -Omega_p) / Omega_eff. Throws DegeneratePulse if Omega_eff
/// is under the guard.
StateVector cpt_state(const PulseSample& sample);

struct Eigenpair {
  double frequency;
  StateVector state;
};

/// Ordered (dark, bright+, bright-). Each vector has unit norm and its first
/// nonzero component real positive.
struct LinearEigenSet {
  std::array<Eigenpair, 3> pairs;

  [[nodiscard]] const Eigenpair& dark() const { return pairs[0]; }
  [[nodiscard]] const Eigenpair& bright_plus() const { return pairs[1]; }
  [[nodiscard]] const Eigenpair& bright_minus() const { return pairs[2]; }
};

/// Bright frequencies solve w^2 + Delta w - Omega_eff^2 / 4 = 0.
LinearEigenSet eigensystem(const PulseSample& sample, const SystemParams& params);

/// |dOmega_p/dt Omega_d - dOmega_d/dt Omega_p| / Omega_eff^3.
double r_lin(const PulseSample& sample);

/// The same quantity written through the mixing ratio:
/// |dchi/dt| / (1 + chi^2) / Omega_eff. Requires omega_d above the guard.
double r_lin_mixing_form(const PulseSample& sample);

/// Integrates the Schroedinger equation under `schedule`.
Trajectory simulate(const PulseSchedule& schedule, const SystemParams& params,
                    const StateVector& initial, const IntegrationConfig& config);

}  // namespace stirap::linear
