#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cli/svg.hpp"
#include "stirap/linear_lambda.hpp"
#include "stirap/nonlinear_lambda.hpp"

namespace stirap::cli {
namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::ios_base::failure("cannot open " + path + " for writing");
  os << content;
  if (!os) throw std::ios_base::failure("failed writing " + path);
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double conserved_norm(const StateVector& s, Dynamics mode) {
  return mode == Dynamics::Nonlinear ? nonlinear::atom_number(s) : s.norm() * s.norm();
}

/// Maps library errors onto exit codes; rethrows anything unexpected.
template <class F>
int guarded(std::ostream& log, F&& body) {
  try {
    body();
    return kExitOk;
  } catch (const UnsupportedDetuning& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    log << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    log << "io error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

std::string_view to_string(Dynamics mode) {
  return mode == Dynamics::Linear ? "linear" : "nonlinear";
}

std::set<OutputFormat> parse_formats(const std::string& list) {
  std::set<OutputFormat> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "csv")
      out.insert(OutputFormat::Csv);
    else if (item == "json")
      out.insert(OutputFormat::Json);
    else if (item == "svg")
      out.insert(OutputFormat::Svg);
    else if (!item.empty())
      throw std::invalid_argument("unknown output format '" + item + "'");
  }
  if (out.empty()) throw std::invalid_argument("at least one output format is required");
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string lo, hi, count;
    std::getline(ss, lo, ':');
    std::getline(ss, hi, ':');
    std::getline(ss, count, ':');
    const double a = parse_double(trim(lo));
    const double b = parse_double(trim(hi));
    const int n = std::stoi(trim(count));
    if (n < 1) throw std::invalid_argument("grid count must be >= 1");
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item));
  }
  if (out.empty()) throw std::invalid_argument("empty grid '" + text + "'");
  return out;
}

void RunSpec::validate() const {
  pulses.validate();
  params.validate();
  integration.validate();
  window.validate();
  if (outputs.empty()) throw std::invalid_argument("at least one output format is required");
  if (out_prefix.empty()) throw std::invalid_argument("output prefix must not be empty");
}

std::shared_ptr<const PulseSchedule> make_schedule(const RunSpec& spec) {
  auto gaussian = std::make_shared<const GaussianSchedule>(spec.pulses);
  if (spec.freeze_at) return std::make_shared<const FrozenSchedule>(gaussian, *spec.freeze_at);
  return gaussian;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

Trajectory run_trajectory(const RunSpec& spec) {
  spec.validate();
  const auto schedule = make_schedule(spec);
  const StateVector initial = StateVector::atomic();
  return spec.mode == Dynamics::Linear
             ? linear::simulate(*schedule, spec.params, initial, spec.integration)
             : nonlinear::simulate(*schedule, spec.params, initial, spec.integration);
}

SimulationSummary summarize(const Trajectory& trajectory) {
  const double n0 = conserved_norm(trajectory.samples.front().state, trajectory.dynamics);
  double drift = 0.0;
  for (const auto& s : trajectory.samples)
    drift = std::max(drift, std::abs(conserved_norm(s.state, trajectory.dynamics) - n0));
  const auto last = populations(trajectory.back().state, trajectory.dynamics);
  return {trajectory.dynamics, last, last.transfer, drift};
}

CsvTable trajectory_table(const Trajectory& trajectory) {
  CsvTable table;
  table.header = {"t",        "re_psi_a", "im_psi_a", "re_psi_e", "im_psi_e", "re_psi_g",
                  "im_psi_g", "pop_a",    "pop_e",    "pop_g",    "transfer"};
  for (const auto& [t, s] : trajectory.samples) {
    const auto p = populations(s, trajectory.dynamics);
    table.add_row({format_double(t), format_double(s.a().real()), format_double(s.a().imag()),
                   format_double(s.e().real()), format_double(s.e().imag()),
                   format_double(s.g().real()), format_double(s.g().imag()),
                   format_double(p.pop_a), format_double(p.pop_e), format_double(p.pop_g),
                   format_double(p.transfer)});
  }
  return table;
}

nlohmann::json summary_json(const SimulationSummary& summary, const RunSpec& spec) {
  nlohmann::json j;
  j["mode"] = std::string(to_string(summary.mode));
  j["final_populations"] = {{"a", summary.final_populations.pop_a},
                            {"e", summary.final_populations.pop_e},
                            {"g", summary.final_populations.pop_g}};
  j["transfer_efficiency"] = summary.transfer_efficiency;
  j["max_norm_drift"] = summary.max_norm_drift;
  j["metadata"] = {{"omega0", spec.pulses.omega0},
                   {"t_pump", spec.pulses.t_p},
                   {"t_dump", spec.pulses.t_d},
                   {"delta", spec.params.delta},
                   {"t0", spec.integration.t0},
                   {"t1", spec.integration.t1},
                   {"step", spec.integration.step},
                   {"record_every", spec.integration.record_every},
                   {"frozen_at", spec.freeze_at ? nlohmann::json(*spec.freeze_at) : nullptr}};
  return j;
}

std::string populations_svg(const Trajectory& trajectory) {
  Series a{"|psi_a|^2", "#1f77b4", false, {}, {}};
  Series g{trajectory.dynamics == Dynamics::Nonlinear ? "2|psi_g|^2" : "|psi_g|^2", "#d62728",
           true, {}, {}};
  for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
    const auto p = trajectory.populations_at(i);
    a.x.push_back(trajectory.samples[i].t);
    a.y.push_back(p.pop_a);
    g.x.push_back(trajectory.samples[i].t);
    g.y.push_back(p.transfer);
  }
  ChartSpec spec{"Population dynamics (" + std::string(to_string(trajectory.dynamics)) + ")",
                 "t (pulse widths)", "population", 0.0, 1.0};
  return render_line_chart(spec, {a, g});
}

int cmd_simulate(const RunSpec& spec, std::ostream& log) {
  return guarded(log, [&] {
    const auto trajectory = run_trajectory(spec);
    const auto summary = summarize(trajectory);
    if (spec.outputs.count(OutputFormat::Csv))
      write_file(spec.out_prefix + "_trajectory.csv", to_csv(trajectory_table(trajectory)));
    if (spec.outputs.count(OutputFormat::Json))
      write_file(spec.out_prefix + "_summary.json", summary_json(summary, spec).dump(2) + "\n");
    if (spec.outputs.count(OutputFormat::Svg))
      write_file(spec.out_prefix + "_populations.svg", populations_svg(trajectory));
    log << to_string(spec.mode) << " transfer efficiency " << summary.transfer_efficiency
        << " (max norm drift " << summary.max_norm_drift << ")\n";
  });
}

// ---------------------------------------------------------------------------
// adiabaticity
// ---------------------------------------------------------------------------

CsvTable adiabaticity_table(const std::vector<stability::AdiabaticityPoint>& trace) {
  CsvTable table;
  table.header = {"t",          "chi",         "r_lin",       "r_nl_closed", "r_nl_mode_form",
                  "r_nl_quadrature", "r_nl_ode", "re_c_plus", "im_c_plus",   "re_c_minus",
                  "im_c_minus", "abs_c0_ode"};
  for (const auto& p : trace) {
    table.add_row({format_double(p.t), format_double(p.chi), format_double(p.r_lin),
                   p.r_nl_closed ? format_double(*p.r_nl_closed) : std::string{},
                   format_double(p.r_nl_mode_form), format_double(p.r_nl_quadrature),
                   format_double(p.r_nl_ode), format_double(p.c_quadrature.c_plus().real()),
                   format_double(p.c_quadrature.c_plus().imag()),
                   format_double(p.c_quadrature.c_minus().real()),
                   format_double(p.c_quadrature.c_minus().imag()),
                   format_double(std::abs(p.c_ode.c0()))});
  }
  return table;
}

std::string adiabaticity_svg(const std::vector<stability::AdiabaticityPoint>& trace) {
  Series lin{"r_lin", "#1f77b4", false, {}, {}};
  Series closed{"r_nl (closed)", "#d62728", true, {}, {}};
  Series quad{"r_nl (quadrature)", "#2ca02c", false, {}, {}};
  for (const auto& p : trace) {
    lin.x.push_back(p.t);
    lin.y.push_back(p.r_lin);
    closed.x.push_back(p.t);
    closed.y.push_back(p.r_nl_closed ? *p.r_nl_closed : p.r_nl_mode_form);
    quad.x.push_back(p.t);
    quad.y.push_back(p.r_nl_quadrature);
  }
  ChartSpec spec{"Adiabaticity parameters", "t (pulse widths)", "r", 0.0, 1.0};
  return render_line_chart(spec, {lin, closed, quad});
}

int cmd_adiabaticity(const RunSpec& spec, bool require_closed_form, std::ostream& log) {
  return guarded(log, [&] {
    spec.validate();
    const auto schedule = make_schedule(spec);
    stability::AdiabaticityOptions options;
    options.kernel = spec.kernel;
    options.require_closed_form = require_closed_form;
    const auto trace = stability::adiabaticity_trace(*schedule, spec.params, spec.window, options);

    double peak_nl = 0.0, peak_lin = 0.0, peak_quad = 0.0, max_c0 = 0.0;
    for (const auto& p : trace) {
      peak_nl = std::max(peak_nl, p.r_nl_mode_form);
      peak_lin = std::max(peak_lin, p.r_lin);
      peak_quad = std::max(peak_quad, p.r_nl_quadrature);
      max_c0 = std::max(max_c0, std::abs(p.c_ode.c0()));
    }
    if (spec.outputs.count(OutputFormat::Csv))
      write_file(spec.out_prefix + "_adiabaticity.csv", to_csv(adiabaticity_table(trace)));
    if (spec.outputs.count(OutputFormat::Json)) {
      nlohmann::json j{{"peak_r_lin", peak_lin},
                       {"peak_r_nl_stationary_phase", peak_nl},
                       {"peak_r_nl_quadrature", peak_quad},
                       {"max_abs_c0", max_c0},
                       {"window", {spec.window.t0, spec.window.t1}},
                       {"kernel", spec.kernel == stability::Kernel::AccumulatedPhase
                                      ? "accumulated"
                                      : "frozen"}};
      write_file(spec.out_prefix + "_adiabaticity.json", j.dump(2) + "\n");
    }
    if (spec.outputs.count(OutputFormat::Svg))
      write_file(spec.out_prefix + "_adiabaticity.svg", adiabaticity_svg(trace));
    log << "peak r_lin " << peak_lin << ", peak r_nl (quadrature) " << peak_quad << '\n';
  });
}

// ---------------------------------------------------------------------------
// fixed points
// ---------------------------------------------------------------------------

nlohmann::json fixed_points_json(double omega_p, double omega_d) {
  const auto sample = PulseSample::frozen(omega_p, omega_d);
  const SystemParams params{};
  nlohmann::json list = nlohmann::json::array();
  for (const auto& fp : nonlinear::enumerate_fixed_points(sample, params)) {
    nlohmann::json state = nlohmann::json::array();
    for (std::size_t i = 0; i < 3; ++i) state.push_back({fp.state[i].real(), fp.state[i].imag()});
    list.push_back({{"family", std::string(nonlinear::to_string(fp.family))},
                    {"frequency", fp.frequency},
                    {"state", state},
                    {"atom_number", nonlinear::atom_number(fp.state)},
                    {"residual", nonlinear::stationary_residual(fp, sample, params)}});
  }
  return {{"omega_p", omega_p}, {"omega_d", omega_d}, {"count", list.size()},
          {"fixed_points", list}};
}

int cmd_fixed_points(double omega_p, double omega_d, bool as_json, std::ostream& out) {
  return guarded(out, [&] {
    const auto j = fixed_points_json(omega_p, omega_d);
    if (as_json) {
      out << j.dump(2) << '\n';
      return;
    }
    out << j["count"].get<std::size_t>() << " fixed points at Omega_p=" << omega_p
        << ", Omega_d=" << omega_d << '\n';
    for (const auto& fp : j["fixed_points"]) {
      out << "  " << fp["family"].get<std::string>() << "  w=" << fp["frequency"].get<double>()
          << "  psi=(";
      for (std::size_t i = 0; i < 3; ++i) {
        if (i) out << ", ";
        out << fp["state"][i][0].get<double>();
        if (const double im = fp["state"][i][1].get<double>(); im != 0.0) out << '+' << im << 'i';
      }
      out << ")  residual=" << fp["residual"].get<double>() << '\n';
    }
  });
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

void SweepSpec::validate() const {
  if (omega0_values.empty() || delay_values.empty() || modes.empty())
    throw std::invalid_argument("sweep grids must be nonempty");
  for (double w : omega0_values)
    if (!(w > 0.0)) throw std::invalid_argument("sweep omega0 values must be positive");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  base.validate();
}

namespace {

SweepRow run_point(const SweepSpec& spec, double omega0, double delay, Dynamics mode) {
  SweepRow row{omega0, delay, mode, {}, {}, {}, {}};
  try {
    RunSpec run = spec.base;
    run.mode = mode;
    run.pulses.omega0 = omega0;
    run.pulses.t_p = run.pulses.t_d + delay;
    row.transfer_efficiency = summarize(run_trajectory(run)).transfer_efficiency;

    const auto schedule = make_schedule(run);
    double peak_nl = 0.0, peak_lin = 0.0;
    for (std::int64_t i = 0; i <= run.window.steps(); ++i) {
      const PulseSample s = schedule->at(run.window.time_at(i));
      peak_nl = std::max(peak_nl, stability::r_nl_mode_form(s, run.params));
      peak_lin = std::max(peak_lin, linear::r_lin(s));
    }
    row.peak_r_nl = peak_nl;
    row.peak_r_lin = peak_lin;
  } catch (const std::exception& e) {
    row.error = e.what();
    std::replace(row.error.begin(), row.error.end(), ',', ';');
    std::replace(row.error.begin(), row.error.end(), '\n', ' ');
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  struct Point {
    double omega0, delay;
    Dynamics mode;
  };
  std::vector<Point> points;
  for (double w : spec.omega0_values)
    for (double d : spec.delay_values)
      for (Dynamics m : spec.modes) points.push_back({w, d, m});

  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++)
      rows[i] = run_point(spec, points[i].omega0, points[i].delay, points[i].mode);
  };
  const auto n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), points.size());
  std::vector<std::jthread> pool;
  for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  pool.clear();
  return rows;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable table;
  table.header = {"omega0",     "delay",      "mode", "transfer_efficiency",
                  "peak_r_nl",  "peak_r_lin", "error"};
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
  for (const auto& r : rows) {
    table.add_row({format_double(r.omega0), format_double(r.delay), std::string(to_string(r.mode)),
                   opt(r.transfer_efficiency), opt(r.peak_r_nl), opt(r.peak_r_lin), r.error});
  }
  return table;
}

int cmd_sweep(const SweepSpec& spec, std::ostream& log) {
  return guarded(log, [&] {
    const auto rows = run_sweep(spec);
    write_file(spec.base.out_prefix + "_sweep.csv", to_csv(sweep_table(rows)));
    const auto failed = std::count_if(rows.begin(), rows.end(),
                                      [](const SweepRow& r) { return !r.error.empty(); });
    log << rows.size() << " sweep points, " << failed << " failed\n";
  });
}

}  // namespace stirap::cli
