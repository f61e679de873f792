#include "stirap/model_core.hpp"

#include <algorithm>
#include <string>

namespace stirap {

double guard_threshold(const PulseSample& sample) {
  const double scale =
      sample.rabi_scale > 0.0 ? sample.rabi_scale : std::max(sample.omega_p, sample.omega_d);
  return kUnderflowGuard * scale;
}

void require_dump_above_guard(const PulseSample& sample, const char* where) {
  if (!(sample.omega_d > 0.0) || sample.omega_d < guard_threshold(sample)) {
    throw DegeneratePulse(std::string(where) + ": dump Rabi frequency " +
                          std::to_string(sample.omega_d) + " is below the underflow guard");
  }
}

void GaussianPulsePair::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0))
    throw std::invalid_argument("omega0 must be positive and finite");
  if (!std::isfinite(t_p) || !std::isfinite(t_d))
    throw std::invalid_argument("pulse centers must be finite");
}

PulseSample sample_pulses(const GaussianPulsePair& pulses, double t) {
  const double xp = t - pulses.t_p;
  const double xd = t - pulses.t_d;
  PulseSample s;
  s.omega_p = pulses.omega0 * std::exp(-xp * xp);
  s.omega_d = pulses.omega0 * std::exp(-xd * xd);
  s.omega_p_dot = -2.0 * xp * s.omega_p;
  s.omega_d_dot = -2.0 * xd * s.omega_d;
  s.rabi_scale = pulses.omega0;
  return s;
}

GaussianSchedule::GaussianSchedule(GaussianPulsePair pulses) : pulses_(pulses) {
  pulses_.validate();
}

FrozenSchedule::FrozenSchedule(std::shared_ptr<const PulseSchedule> base, double t_freeze)
    : sample_(base->at(t_freeze)) {
  sample_.omega_p_dot = 0.0;
  sample_.omega_d_dot = 0.0;
}

FrozenSchedule::FrozenSchedule(PulseSample sample) : sample_(sample) {
  sample_.omega_p_dot = 0.0;
  sample_.omega_d_dot = 0.0;
}

MixingRatio mixing_ratio(const PulseSample& sample) {
  require_dump_above_guard(sample, "mixing_ratio");
  const double od = sample.omega_d;
  return {sample.omega_p / od,
          (sample.omega_p_dot * od - sample.omega_p * sample.omega_d_dot) / (od * od)};
}

double effective_rabi_linear(const PulseSample& sample) {
  return std::hypot(sample.omega_p, sample.omega_d);
}

double effective_rabi_nonlinear(const PulseSample& sample) {
  return std::sqrt(sample.omega_d * sample.omega_d + 8.0 * sample.omega_p * sample.omega_p);
}

}  // namespace stirap
