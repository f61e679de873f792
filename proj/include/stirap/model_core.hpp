#pragma once

// Shared domain types for the three-level Lambda system: detuning parameters,
// pulse schedules, instantaneous pulse samples and complex state triples.
//
// Units: time is measured in Gaussian pulse widths, Rabi frequencies in
// inverse pulse widths, hbar = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>

namespace stirap {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The dark-state branch is undefined because a Rabi frequency vanished.
class DegeneratePulse : public Error {
 public:
  using Error::Error;
};

/// A closed form that only holds on one-photon resonance was asked for at
/// nonzero detuning.
class UnsupportedDetuning : public Error {
 public:
  using Error::Error;
};

/// A state component became NaN or infinite during integration.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

/// The linearization has a complex eigenfrequency.
class DynamicalInstability : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Parameters and pulses
// ---------------------------------------------------------------------------

/// One-photon detuning. The two-photon detuning is fixed to zero.
struct SystemParams {
  double delta = 0.0;

  void validate() const {
    if (!std::isfinite(delta)) throw std::invalid_argument("detuning must be finite");
  }
};

/// Rabi frequencies and their time derivatives at one instant.
///
/// `rabi_scale` is the peak Rabi frequency of the schedule the sample came
/// from; it sets the underflow guard. Zero means "unknown", in which case the
/// guard falls back to max(omega_p, omega_d).
struct PulseSample {
  double omega_p = 0.0;
  double omega_d = 0.0;
  double omega_p_dot = 0.0;
  double omega_d_dot = 0.0;
  double rabi_scale = 0.0;

  /// Sample with both derivatives zero (frozen Hamiltonian).
  static PulseSample frozen(double omega_p, double omega_d) {
    return PulseSample{omega_p, omega_d, 0.0, 0.0, 0.0};
  }
};

/// Relative threshold below which a Rabi frequency counts as vanished.
inline constexpr double kUnderflowGuard = 1e-12;

/// Absolute guard threshold for a sample: kUnderflowGuard times the scale.
double guard_threshold(const PulseSample& sample);

/// Throws DegeneratePulse when omega_d is under the guard.
void require_dump_above_guard(const PulseSample& sample, const char* where);

/// Abstract time -> PulseSample mapping.
class PulseSchedule {
 public:
  virtual ~PulseSchedule() = default;
  [[nodiscard]] virtual PulseSample at(double t) const = 0;
};

/// Two equal-amplitude, unit-width Gaussians:
///   Omega_{p,d}(t) = omega0 * exp(-(t - t_{p,d})^2).
/// A counter-intuitive sequence has t_d < t_p.
struct GaussianPulsePair {
  double omega0 = 5.0;
  double t_p = 3.8;
  double t_d = 3.0;

  void validate() const;
};

/// Exact Gaussian values and analytic derivatives at time t.
PulseSample sample_pulses(const GaussianPulsePair& pulses, double t);

class GaussianSchedule final : public PulseSchedule {
 public:
  explicit GaussianSchedule(GaussianPulsePair pulses);
  [[nodiscard]] PulseSample at(double t) const override { return sample_pulses(pulses_, t); }
  [[nodiscard]] const GaussianPulsePair& pulses() const { return pulses_; }

 private:
  GaussianPulsePair pulses_;
};

/// Holds the Rabi frequencies of an underlying schedule fixed at `t_freeze`
/// with zero derivatives.
class FrozenSchedule final : public PulseSchedule {
 public:
  FrozenSchedule(std::shared_ptr<const PulseSchedule> base, double t_freeze);
  explicit FrozenSchedule(PulseSample sample);
  [[nodiscard]] PulseSample at(double) const override { return sample_; }

 private:
  PulseSample sample_;
};

struct MixingRatio {
  double chi = 0.0;      // Omega_p / Omega_d
  double chi_dot = 0.0;  // d/dt of chi
};

/// chi = Omega_p / Omega_d and its time derivative by the quotient rule.
/// Throws DegeneratePulse when omega_d is under the guard.
MixingRatio mixing_ratio(const PulseSample& sample);

/// sqrt(Omega_p^2 + Omega_d^2)
double effective_rabi_linear(const PulseSample& sample);

/// sqrt(Omega_d^2 + 8 Omega_p^2); a molecule takes two atoms, hence the 8.
double effective_rabi_nonlinear(const PulseSample& sample);

// ---------------------------------------------------------------------------
// State triples
// ---------------------------------------------------------------------------

/// Fixed-size complex 3-vector with the arithmetic the integrator needs.
/// Component order is (a, e, g) for states and (0, +, -) for mode amplitudes.
struct ComplexTriple {
  std::array<Complex, 3> v{};

  Complex& operator[](std::size_t i) { return v[i]; }
  const Complex& operator[](std::size_t i) const { return v[i]; }

  ComplexTriple& operator+=(const ComplexTriple& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
    return *this;
  }
  ComplexTriple& operator-=(const ComplexTriple& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
    return *this;
  }
  ComplexTriple& operator*=(Complex s) {
    for (auto& x : v) x *= s;
    return *this;
  }
  friend ComplexTriple operator+(ComplexTriple a, const ComplexTriple& b) { return a += b; }
  friend ComplexTriple operator-(ComplexTriple a, const ComplexTriple& b) { return a -= b; }
  friend ComplexTriple operator*(Complex s, ComplexTriple a) { return a *= s; }
  friend ComplexTriple operator*(double s, ComplexTriple a) { return a *= Complex(s, 0.0); }
  friend bool operator==(const ComplexTriple&, const ComplexTriple&) = default;

  [[nodiscard]] bool all_finite() const {
    for (const auto& x : v)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
  }
  [[nodiscard]] double norm() const {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
  }
  [[nodiscard]] double max_abs() const {
    return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
  }
};

/// Amplitudes (psi_a, psi_e, psi_g) of the atomic state |a>, the excited
/// state |e> and the ground state |g>.
struct StateVector : ComplexTriple {
  StateVector() = default;
  StateVector(Complex a, Complex e, Complex g) : ComplexTriple{{a, e, g}} {}
  StateVector(const ComplexTriple& t) : ComplexTriple(t) {}  // NOLINT(implicit)

  [[nodiscard]] Complex a() const { return v[0]; }
  [[nodiscard]] Complex e() const { return v[1]; }
  [[nodiscard]] Complex g() const { return v[2]; }

  /// All population in |a>.
  static StateVector atomic() { return {1.0, 0.0, 0.0}; }
};

}  // namespace stirap
