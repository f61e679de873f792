#pragma once

// Batch commands behind the `stirap` executable. Each command is a plain
// function of its spec so tests can drive it without a process boundary.

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/csv.hpp"
#include "stirap/integrator.hpp"
#include "stirap/model_core.hpp"
#include "stirap/stability.hpp"

namespace stirap::cli {

enum class OutputFormat { Csv, Json, Svg };

std::set<OutputFormat> parse_formats(const std::string& list);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

struct RunSpec {
  Dynamics mode = Dynamics::Nonlinear;
  GaussianPulsePair pulses{};
  SystemParams params{};
  IntegrationConfig integration{0.0, 8.0, 1e-3, 1};
  /// Adiabaticity analysis grid; the step defaults to the integration step.
  IntegrationConfig window{0.5, 7.5, 1e-3, 1};
  stability::Kernel kernel = stability::Kernel::AccumulatedPhase;
  /// Hold the pulses at their values at this time (zero derivatives).
  std::optional<double> freeze_at;
  std::set<OutputFormat> outputs{OutputFormat::Csv, OutputFormat::Json};
  std::string out_prefix = "stirap";

  void validate() const;
};

std::shared_ptr<const PulseSchedule> make_schedule(const RunSpec& spec);

struct SimulationSummary {
  Dynamics mode;
  PopulationSample final_populations;
  double transfer_efficiency;
  /// max |N(t) - N(0)| of the conserved norm (Euclidean for linear, atom
  /// number for nonlinear).
  double max_norm_drift;
};

Trajectory run_trajectory(const RunSpec& spec);
SimulationSummary summarize(const Trajectory& trajectory);

CsvTable trajectory_table(const Trajectory& trajectory);
nlohmann::json summary_json(const SimulationSummary& summary, const RunSpec& spec);
std::string populations_svg(const Trajectory& trajectory);

CsvTable adiabaticity_table(const std::vector<stability::AdiabaticityPoint>& trace);
std::string adiabaticity_svg(const std::vector<stability::AdiabaticityPoint>& trace);

/// Writes <prefix>_trajectory.csv, <prefix>_summary.json and/or
/// <prefix>_populations.svg. Returns an exit code.
int cmd_simulate(const RunSpec& spec, std::ostream& log);

/// Writes <prefix>_adiabaticity.csv, <prefix>_adiabaticity.json and/or
/// <prefix>_adiabaticity.svg over spec.window.
int cmd_adiabaticity(const RunSpec& spec, bool require_closed_form, std::ostream& log);

nlohmann::json fixed_points_json(double omega_p, double omega_d);

/// Prints the fixed-point census as text or JSON.
int cmd_fixed_points(double omega_p, double omega_d, bool as_json, std::ostream& out);

struct SweepSpec {
  std::vector<double> omega0_values{5.0};
  /// Pulse delay t_p - t_d; t_d stays at base.pulses.t_d.
  std::vector<double> delay_values{0.8};
  std::vector<Dynamics> modes{Dynamics::Nonlinear, Dynamics::Linear};
  RunSpec base{};
  int jobs = 1;

  void validate() const;
};

struct SweepRow {
  double omega0 = 0.0;
  double delay = 0.0;
  Dynamics mode = Dynamics::Nonlinear;
  std::optional<double> transfer_efficiency;
  std::optional<double> peak_r_nl;
  std::optional<double> peak_r_lin;
  std::string error;
};

/// Rows in grid order (omega0 outer, delay, mode inner) regardless of how the
/// points were scheduled across threads.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
CsvTable sweep_table(const std::vector<SweepRow>& rows);

/// Writes <prefix>_sweep.csv.
int cmd_sweep(const SweepSpec& spec, std::ostream& log);

std::string_view to_string(Dynamics mode);

/// Parses "a,b,c" or "lo:hi:count" into a list of values.
std::vector<double> parse_grid(const std::string& text);

}  // namespace stirap::cli
