#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "stirap/linear_lambda.hpp"
#include "stirap/stability.hpp"

using namespace stirap;
using namespace stirap::stability;

namespace {

const GaussianPulsePair kReference{5.0, 3.8, 3.0};
const IntegrationConfig kWindow{0.5, 7.5, 1e-3, 1};

/// Constant dump pulse with a pump that ramps up smoothly over [0, T]:
/// Omega_p = A (1 - cos(pi t / T)) / 2.
class RampSchedule final : public PulseSchedule {
 public:
  RampSchedule(double amplitude, double duration) : a_(amplitude), t_(duration) {}
  [[nodiscard]] PulseSample at(double t) const override {
    const double k = std::numbers::pi / t_;
    return {0.5 * a_ * (1.0 - std::cos(k * t)), a_, 0.5 * a_ * k * std::sin(k * t), 0.0, a_};
  }

 private:
  double a_, t_;
};

/// Pulses with chi = t and Omega_d Omega_eff_nl = c^2, so that on resonance
/// both nonzero mode frequencies stay at +-c/2 while the mixing ratio moves.
class IsoFrequencySchedule final : public PulseSchedule {
 public:
  explicit IsoFrequencySchedule(double c) : c_(c) {}
  [[nodiscard]] PulseSample at(double t) const override {
    const double u = 1.0 + 8.0 * t * t;
    const double od = c_ * std::pow(u, -0.25);
    const double od_dot = -4.0 * c_ * t * std::pow(u, -1.25);
    return {t * od, od, od + t * od_dot, od_dot, c_};
  }

 private:
  double c_;
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> r_series(const AmplitudeSeries& s) {
  std::vector<double> r;
  for (const auto& p : s) r.push_back(r_nl_exact(p.state.c_plus(), p.state.c_minus()));
  return r;
}

}  // namespace

TEST_CASE("stability matrix") {
  SUBCASE("pure dump pulse") {
    const auto m = build_stability_matrix(PulseSample::frozen(0.0, 2.0), SystemParams{});
    const Matrix3 expected{{{0, 0, 0}, {0, 0, 1.0}, {0, 1.0, 0}}};
    CHECK(m.m == expected);
  }
  SUBCASE("equal pulses") {
    const auto m = build_stability_matrix(PulseSample::frozen(2.0, 2.0), SystemParams{});
    CHECK(m(0, 1) == doctest::Approx(2.0 * std::sqrt(0.5)));
  }
  SUBCASE("symmetry and zero corners") {
    for (int i = 0; i < 100; ++i) {
      const auto m = build_stability_matrix(
          PulseSample::frozen(oracle::uniform(1e-3, 10.0), oracle::uniform(1e-3, 10.0)),
          SystemParams{oracle::uniform(-5.0, 5.0)});
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(m(r, c) == m(c, r));
      CHECK(m(0, 0) == 0.0);
      CHECK(m(0, 2) == 0.0);
      CHECK(m(2, 2) == 0.0);
    }
  }
  SUBCASE("detuned eigenvalues against the characteristic polynomial") {
    const auto s = PulseSample::frozen(3.0, 4.0);
    const auto roots = oracle::charpoly_roots(build_stability_matrix(s, SystemParams{2.0}).m);
    const auto modes = normal_modes(s, SystemParams{2.0});
    CHECK(modes.omega_minus == doctest::Approx(roots[0]).epsilon(1e-13));
    CHECK(std::abs(roots[1]) < 1e-12);
    CHECK(modes.omega_plus == doctest::Approx(roots[2]).epsilon(1e-13));
    // 30-digit reference values
    CHECK(modes.omega_plus == doctest::Approx(4.22192978192369349).epsilon(1e-14));
    CHECK(modes.omega_minus == doctest::Approx(-2.22192978192369349).epsilon(1e-14));
  }
}

TEST_CASE("normal modes") {
  SUBCASE("equal pulses") {
    const auto m = normal_modes(PulseSample::frozen(2.0, 2.0), SystemParams{});
    CHECK(m.omega_plus == doctest::Approx(std::sqrt(3.0)));
    CHECK(m.omega_minus == doctest::Approx(-std::sqrt(3.0)));
  }
  SUBCASE("3-4 pulses at resonance") {
    const auto m = normal_modes(PulseSample::frozen(3.0, 4.0), SystemParams{});
    CHECK(m.omega_plus == doctest::Approx(3.06281431360878603).epsilon(1e-14));
    CHECK(m.omega_minus == doctest::Approx(-3.06281431360878603).epsilon(1e-14));
  }
  SUBCASE("eigen-residual, orthonormality and closed-form frequencies") {
    for (int i = 0; i < 1000; ++i) {
      const auto s = PulseSample::frozen(oracle::uniform(1e-3, 10.0), oracle::uniform(1e-3, 10.0));
      const SystemParams params{oracle::uniform(-5.0, 5.0)};
      const auto mat = build_stability_matrix(s, params);
      const auto modes = normal_modes(s, params);
      const auto roots = oracle::charpoly_roots(mat.m);
      CHECK(std::abs(modes.omega_minus - roots[0]) < 1e-10);
      CHECK(std::abs(modes.omega0 - roots[1]) < 1e-10);
      CHECK(std::abs(modes.omega_plus - roots[2]) < 1e-10);
      for (std::size_t a = 0; a < 3; ++a) {
        const auto mw = mat.apply(modes.mode(a));
        for (std::size_t k = 0; k < 3; ++k)
          CHECK(std::abs(mw[k] - modes.frequency(a) * modes.mode(a)[k]) < 1e-10);
        for (std::size_t b = 0; b < 3; ++b)
          CHECK(std::abs(dot(modes.mode(a), modes.mode(b)) - (a == b ? 1.0 : 0.0)) < 1e-12);
      }
      const double coupling = mat(0, 1);
      CHECK(modes.n_plus == doctest::Approx(1.0 / std::sqrt(coupling * coupling +
                                                            modes.omega_plus * modes.omega_plus +
                                                            0.25 * s.omega_d * s.omega_d)));
      CHECK(modes.w_plus[1] / modes.w_plus[2] ==
            doctest::Approx(modes.omega_plus / (0.5 * s.omega_d)));
      CHECK(modes.w0[1] == 0.0);
      CHECK(modes.w0[0] < 0.0);
    }
  }
  SUBCASE("complex frequencies are reported") {
    CHECK(discriminant(PulseSample::frozen(1.0, 1.0), SystemParams{}) > 0.0);
    CHECK_THROWS_AS(require_real_frequencies(-1e-3), DynamicalInstability);
    CHECK_NOTHROW(require_real_frequencies(0.0));
  }
}

TEST_CASE("zero mode is not driven") {
  SUBCASE("random Gaussian schedules") {
    int checked = 0;
    while (checked < 1000) {
      const GaussianPulsePair p{oracle::uniform(0.5, 20.0), oracle::uniform(2.0, 6.0),
                                oracle::uniform(2.0, 6.0)};
      const auto s = sample_pulses(p, oracle::uniform(0.0, 8.0));
      if (s.omega_d < guard_threshold(s)) continue;  // branch undefined
      ++checked;
      const auto src = zero_mode_source(nonlinear::cpt(s), normal_modes(s, SystemParams{}));
      CHECK(std::abs(src) < 1e-10);
    }
  }
  SUBCASE("frozen pulses give exactly zero") {
    const auto s = PulseSample::frozen(1.7, 2.3);
    CHECK(zero_mode_source(nonlinear::cpt(s), normal_modes(s, SystemParams{})) == 0.0);
  }
  SUBCASE("a perturbed branch derivative is detected") {
    const auto s = sample_pulses(kReference, 3.4);
    auto cpt = nonlinear::cpt(s);
    cpt.state_dot[2] += 1e-3;
    CHECK(std::abs(zero_mode_source(cpt, normal_modes(s, SystemParams{}))) > 1e-4);
  }
}

TEST_CASE("mode amplitudes") {
  const GaussianSchedule schedule(kReference);

  SUBCASE("frozen pulses leave every amplitude at zero") {
    const FrozenSchedule frozen(sample_pulses(kReference, 3.4));
    for (auto kernel : {Kernel::AccumulatedPhase, Kernel::FrozenFrequency})
      for (const auto& p : mode_amplitudes_quadrature(frozen, SystemParams{}, kWindow, kernel))
        CHECK(p.state.max_abs() == 0.0);
    for (auto route : {OdeRoute::Modal, OdeRoute::LabFrame})
      for (const auto& p : mode_amplitudes_ode(frozen, SystemParams{}, kWindow, route))
        CHECK(p.state.max_abs() == 0.0);
  }

  SUBCASE("quadrature agrees with the modal ODE on the Gaussian window") {
    const auto quad = mode_amplitudes_quadrature(schedule, SystemParams{}, kWindow);
    const auto ode = mode_amplitudes_ode(schedule, SystemParams{}, kWindow);
    REQUIRE(quad.size() == ode.size());
    const auto rq = r_series(quad);
    const auto ro = r_series(ode);
    const double peak = *std::max_element(ro.begin(), ro.end());
    CHECK(max_abs_diff(rq, ro) / peak < 0.02);
    for (const auto& p : ode) CHECK(std::abs(p.state.c0()) < 1e-8);
    for (const auto& p : quad) CHECK(std::abs(p.state.c0()) < 1e-8);
  }

  SUBCASE("quadrature converges at second order") {
    auto at_end = [&](double h) {
      return mode_amplitudes_quadrature(schedule, SystemParams{}, {0.5, 5.0, h, 1 << 30})
          .back()
          .state;
    };
    const auto c1 = at_end(4e-3), c2 = at_end(2e-3), c4 = at_end(1e-3);
    const double ratio = (c1 - c2).max_abs() / (c2 - c4).max_abs();
    MESSAGE("quadrature Richardson ratio " << ratio);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
  }

  SUBCASE("kernels coincide when the mode frequencies are constant") {
    const IsoFrequencySchedule iso(3.0);
    const IntegrationConfig grid{0.0, 4.0, 1e-3, 100};
    const auto acc = mode_amplitudes_quadrature(iso, SystemParams{}, grid);
    const auto frz = mode_amplitudes_quadrature(iso, SystemParams{}, grid, Kernel::FrozenFrequency);
    REQUIRE(acc.size() == frz.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
      CHECK(normal_modes(iso.at(acc[i].t), SystemParams{}).omega_plus ==
            doctest::Approx(1.5).epsilon(1e-13));
      CHECK((acc[i].state - frz[i].state).max_abs() < 1e-10);
      peak = std::max(peak, acc[i].state.max_abs());
    }
    CHECK(peak > 1e-2);
  }

  SUBCASE("frozen-frequency kernel matches the accumulated phase early in the pulse") {
    const IntegrationConfig coarse{0.5, 7.5, 1e-3, 50};
    const auto acc = r_series(mode_amplitudes_quadrature(schedule, SystemParams{}, coarse));
    const auto frz = r_series(
        mode_amplitudes_quadrature(schedule, SystemParams{}, coarse, Kernel::FrozenFrequency));
    REQUIRE(acc.size() == frz.size());
    CHECK(std::abs(acc[5] - frz[5]) < 1e-3);
  }

  SUBCASE("lab-frame projection carries the mode-rotation couplings") {
    const auto modal = r_series(mode_amplitudes_ode(schedule, SystemParams{}, kWindow));
    const auto lab = mode_amplitudes_ode(schedule, SystemParams{}, kWindow, OdeRoute::LabFrame);
    const auto rl = r_series(lab);
    const double peak = *std::max_element(modal.begin(), modal.end());
    const double diff = max_abs_diff(modal, rl) / peak;
    MESSAGE("lab-frame vs modal relative max difference " << diff);
    CHECK(diff < 0.10);
    double c0 = 0.0;
    for (const auto& p : lab) c0 = std::max(c0, std::abs(p.state.c0()));
    MESSAGE("lab-frame max |c0| " << c0);
  }
}

TEST_CASE("r_nl") {
  SUBCASE("exact definition") {
    CHECK(r_nl_exact(0.0, 0.0) == 0.0);
    CHECK(r_nl_exact(1.0, 0.0) == 0.5);
    CHECK(r_nl_exact(Complex(0.0, 3.0), 4.0) == 2.5);
  }
  SUBCASE("closed form reduces to r_lin without pump") {
    const PulseSample s{0.0, 2.0, 0.9, 0.0};
    CHECK(r_nl_closed(s, SystemParams{}) == doctest::Approx(0.9 / 4.0));
    CHECK(r_nl_closed(s, SystemParams{}) == doctest::Approx(linear::r_lin(s)).epsilon(1e-15));
  }
  SUBCASE("constant pulses") {
    CHECK(r_nl_closed(PulseSample::frozen(1.0, 2.0), SystemParams{}) == 0.0);
  }
  SUBCASE("late-stage ratio to r_lin at chi = 10") {
    // Equal-width Gaussians, chosen so Omega_p / Omega_d = 10.
    const GaussianPulsePair p{5.0, 3.8, 3.0};
    const double t = 3.4 + std::log(10.0) / (2.0 * 0.8);
    const auto s = sample_pulses(p, t);
    REQUIRE(mixing_ratio(s).chi == doctest::Approx(10.0).epsilon(1e-12));
    const double ratio = r_nl_closed(s, SystemParams{}) / linear::r_lin(s);
    CHECK(ratio == doctest::Approx(2.44793213332266728).epsilon(1e-12));
  }
  SUBCASE("closed form equals the normal-mode form at resonance") {
    for (int i = 0; i < 1000; ++i) {
      const PulseSample s{oracle::uniform(1e-3, 10.0), oracle::uniform(1e-3, 10.0),
                          oracle::uniform(-20.0, 20.0), oracle::uniform(-20.0, 20.0)};
      CHECK(r_nl_closed(s, SystemParams{}) ==
            doctest::Approx(r_nl_mode_form(s, SystemParams{})).epsilon(1e-12));
    }
  }
  SUBCASE("detuning is rejected by the closed form only") {
    const PulseSample s{1.0, 1.0, 0.3, -0.2};
    CHECK_THROWS_AS(r_nl_closed(s, SystemParams{0.5}), UnsupportedDetuning);
    CHECK(r_nl_mode_form(s, SystemParams{0.5}) > 0.0);
  }
}

TEST_CASE("stationary-phase amplitudes") {
  SUBCASE("frozen pulses") {
    const auto s = PulseSample::frozen(1.0, 2.0);
    const auto [cp, cm] = stationary_phase_amplitude(s, normal_modes(s, SystemParams{}), 3.0);
    CHECK(cp == Complex(0.0));
    CHECK(cm == Complex(0.0));
  }
  SUBCASE("projection closed form matches the mode source") {
    for (double t : {1.5, 3.4, 5.0}) {
      const auto s = sample_pulses(kReference, t);
      const auto modes = normal_modes(s, SystemParams{});
      const auto cpt = nonlinear::cpt(s);
      const auto [cp, cm] = stationary_phase_amplitude(s, modes, t);
      const Complex i{0.0, 1.0};
      const Complex expected_p = -mode_source(modes.w_plus, cpt) *
                                 (1.0 - std::exp(-i * modes.omega_plus * t)) /
                                 (i * modes.omega_plus);
      const Complex expected_m = -mode_source(modes.w_minus, cpt) *
                                 (1.0 - std::exp(-i * modes.omega_minus * t)) /
                                 (i * modes.omega_minus);
      CHECK(std::abs(cp - expected_p) < 1e-13);
      CHECK(std::abs(cm - expected_m) < 1e-13);
    }
  }
  SUBCASE("dropping the oscillating factor reproduces the closed form") {
    for (int i = 0; i < 200; ++i) {
      const PulseSample s{oracle::uniform(1e-2, 10.0), oracle::uniform(1e-2, 10.0),
                          oracle::uniform(-5.0, 5.0), oracle::uniform(-5.0, 5.0)};
      const auto modes = normal_modes(s, SystemParams{});
      // |1 - exp(-i w t)| = 1 when w t = pi / 3.
      const double tp = std::numbers::pi / 3.0 / modes.omega_plus;
      const double tm = std::numbers::pi / 3.0 / -modes.omega_minus;
      REQUIRE(tp == doctest::Approx(tm));
      const auto [cp, cm] = stationary_phase_amplitude(s, modes, tp);
      CHECK(r_nl_exact(cp, cm) == doctest::Approx(r_nl_closed(s, SystemParams{})).epsilon(1e-12));
    }
  }
  SUBCASE("envelope tracks the quadrature when the mode frequencies are large") {
    const RampSchedule ramp(40.0, 10.0);
    const auto quad = mode_amplitudes_quadrature(ramp, SystemParams{}, {0.0, 9.0, 1e-3, 500});
    for (const auto& [t, c] : quad) {
      if (t < 1.0) continue;
      const auto s = ramp.at(t);
      const auto modes = normal_modes(s, SystemParams{});
      const auto cpt = nonlinear::cpt(s);
      const double envelope = std::abs(mode_source(modes.w_plus, cpt) / modes.omega_plus);
      CHECK(std::abs(c.c_plus()) / envelope > 0.5);
      CHECK(std::abs(c.c_plus()) / envelope < 2.0);
    }
  }
}

TEST_CASE("adiabaticity trace") {
  const GaussianSchedule schedule(kReference);
  const auto trace = adiabaticity_trace(schedule, SystemParams{}, {0.5, 7.5, 1e-3, 100});
  REQUIRE(trace.size() == 71);
  for (const auto& p : trace) {
    REQUIRE(p.r_nl_closed.has_value());
    CHECK(p.r_nl_quadrature ==
          r_nl_exact(p.c_quadrature.c_plus(), p.c_quadrature.c_minus()));
    CHECK(*p.r_nl_closed == doctest::Approx(p.r_nl_mode_form).epsilon(1e-12));
    if (p.chi < 0.1) CHECK(*p.r_nl_closed / p.r_lin == doctest::Approx(1.0).epsilon(0.1));
    if (p.chi > 10.0) CHECK(*p.r_nl_closed > 2.0 * p.r_lin);
  }
  SUBCASE("detuned traces omit the closed form unless it is required") {
    const IntegrationConfig short_grid{2.0, 3.0, 1e-2, 10};
    const auto detuned = adiabaticity_trace(schedule, SystemParams{0.5}, short_grid);
    CHECK_FALSE(detuned.front().r_nl_closed.has_value());
    AdiabaticityOptions strict;
    strict.require_closed_form = true;
    CHECK_THROWS_AS(adiabaticity_trace(schedule, SystemParams{0.5}, short_grid, strict),
                    UnsupportedDetuning);
  }
}
