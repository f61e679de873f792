// stirap: simulate and analyze population transfer in linear and
// atom-molecule Lambda systems.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace {

using stirap::cli::RunSpec;

struct CommonOptions {
  std::string mode = "nonlinear";
  std::string formats = "csv,json";
  std::string window = "0.5,7.5";
  std::string kernel = "accumulated";
  double freeze = 0.0;
  CLI::Option* freeze_opt = nullptr;
  CLI::Option* window_step_opt = nullptr;
  double window_step = 0.0;
};

void add_common(CLI::App& app, RunSpec& spec, CommonOptions& opts) {
  app.add_option("--mode", opts.mode, "Dynamics")
      ->check(CLI::IsMember({"linear", "nonlinear"}))
      ->capture_default_str();
  app.add_option("--omega0", spec.pulses.omega0, "Peak Rabi frequency")->capture_default_str();
  app.add_option("--t-pump", spec.pulses.t_p, "Pump pulse center")->capture_default_str();
  app.add_option("--t-dump", spec.pulses.t_d, "Dump pulse center")->capture_default_str();
  app.add_option("--delta", spec.params.delta, "One-photon detuning")->capture_default_str();
  app.add_option("--t0", spec.integration.t0, "Integration start")->capture_default_str();
  app.add_option("--t1", spec.integration.t1, "Integration end")->capture_default_str();
  app.add_option("--step", spec.integration.step, "RK4 step")->capture_default_str();
  app.add_option("--record-every", spec.integration.record_every, "Keep every k-th step")
      ->capture_default_str();
  app.add_option("--out", spec.out_prefix, "Output path prefix")->capture_default_str();
  app.add_option("--format", opts.formats, "Comma-separated subset of csv,json,svg")
      ->capture_default_str();
  app.add_option("--window", opts.window, "Adiabaticity analysis window 'start,end'")
      ->capture_default_str();
  opts.window_step_opt =
      app.add_option("--window-step", opts.window_step, "Analysis grid step (default: --step)");
  app.add_option("--kernel", opts.kernel, "Phase kernel of the amplitude integral")
      ->check(CLI::IsMember({"accumulated", "frozen"}))
      ->capture_default_str();
  opts.freeze_opt =
      app.add_option("--freeze", opts.freeze, "Hold the pulses at their values at this time");
}

void finalize(RunSpec& spec, const CommonOptions& opts) {
  spec.mode = opts.mode == "linear" ? stirap::Dynamics::Linear : stirap::Dynamics::Nonlinear;
  spec.outputs = stirap::cli::parse_formats(opts.formats);
  const auto w = stirap::cli::parse_grid(opts.window);
  if (w.size() != 2) throw std::invalid_argument("--window expects 'start,end'");
  spec.window.t0 = w[0];
  spec.window.t1 = w[1];
  spec.window.step = *opts.window_step_opt ? opts.window_step : spec.integration.step;
  spec.window.record_every = spec.integration.record_every;
  spec.kernel = opts.kernel == "frozen" ? stirap::stability::Kernel::FrozenFrequency
                                        : stirap::stability::Kernel::AccumulatedPhase;
  if (*opts.freeze_opt) spec.freeze_at = opts.freeze;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STIRAP simulator and adiabaticity analyzer for linear and atom-molecule systems"};
  app.require_subcommand(1);

  RunSpec sim_spec;
  CommonOptions sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Integrate the population dynamics");
  add_common(*simulate, sim_spec, sim_opts);

  RunSpec adi_spec;
  CommonOptions adi_opts;
  bool require_closed = false;
  auto* adiabaticity =
      app.add_subcommand("adiabaticity", "Adiabaticity parameters along the pulse sequence");
  add_common(*adiabaticity, adi_spec, adi_opts);
  adiabaticity->add_flag("--require-closed-form", require_closed,
                         "Fail unless the resonant closed form applies");

  double fp_omega_p = 4.0, fp_omega_d = 3.0;
  bool fp_json = false;
  auto* fixed = app.add_subcommand("fixed-points", "Stationary states at frozen Rabi frequencies");
  fixed->add_option("--omega-p", fp_omega_p, "Pump Rabi frequency")->capture_default_str();
  fixed->add_option("--omega-d", fp_omega_d, "Dump Rabi frequency")->capture_default_str();
  fixed->add_flag("--json", fp_json, "Emit JSON");

  stirap::cli::SweepSpec sweep_spec;
  CommonOptions sweep_opts;
  std::string omega0_grid = "5", delay_grid = "0.8", sweep_modes = "nonlinear,linear";
  auto* sweep = app.add_subcommand("sweep", "Transfer efficiency and peak adiabaticity on a grid");
  add_common(*sweep, sweep_spec.base, sweep_opts);
  sweep->add_option("--omega0-values", omega0_grid, "List 'a,b,c' or range 'lo:hi:count'")
      ->capture_default_str();
  sweep->add_option("--delay-values", delay_grid, "Pulse delays t_pump - t_dump")
      ->capture_default_str();
  sweep->add_option("--modes", sweep_modes, "Subset of nonlinear,linear")->capture_default_str();
  sweep->add_option("--jobs", sweep_spec.jobs, "Concurrent sweep points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? stirap::cli::kExitOk : stirap::cli::kExitUsage;
  }

  try {
    if (*simulate) {
      finalize(sim_spec, sim_opts);
      return stirap::cli::cmd_simulate(sim_spec, std::cerr);
    }
    if (*adiabaticity) {
      finalize(adi_spec, adi_opts);
      return stirap::cli::cmd_adiabaticity(adi_spec, require_closed, std::cerr);
    }
    if (*fixed) return stirap::cli::cmd_fixed_points(fp_omega_p, fp_omega_d, fp_json, std::cout);
    if (*sweep) {
      finalize(sweep_spec.base, sweep_opts);
      sweep_spec.omega0_values = stirap::cli::parse_grid(omega0_grid);
      sweep_spec.delay_values = stirap::cli::parse_grid(delay_grid);
      sweep_spec.modes.clear();
      for (const auto& m : CLI::detail::split(sweep_modes, ',')) {
        if (m == "linear")
          sweep_spec.modes.push_back(stirap::Dynamics::Linear);
        else if (m == "nonlinear")
          sweep_spec.modes.push_back(stirap::Dynamics::Nonlinear);
        else
          throw std::invalid_argument("unknown mode '" + m + "'");
      }
      return stirap::cli::cmd_sweep(sweep_spec, std::cerr);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return stirap::cli::kExitUsage;
  }
  return stirap::cli::kExitUsage;
}
