#include "wgqed/scenario_runner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "wgqed/analytic_series.hpp"
#include "wgqed/dde_engine.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/output.hpp"

namespace wgqed {

using std::numbers::pi;

namespace {

double resolve_distance(const DistanceSpec& spec, double k1) {
  const double lambda1 = 2.0 * pi / k1;
  if (const auto* d = std::get_if<DistanceLength>(&spec)) return d->value;
  if (const auto* w = std::get_if<DistanceWavelengths>(&spec)) return w->value * lambda1;
  const auto& phase = std::get<DistancePhase>(spec);
  return distance_for_phase(k1, 2.0 * pi * static_cast<double>(phase.n) + phase.offset_pi * pi);
}

std::vector<double> sample_times(double t_max, int samples) {
  std::vector<double> times(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    times[static_cast<std::size_t>(i)] = t_max * static_cast<double>(i) / (samples - 1);
  }
  times.back() = t_max;
  return times;
}

SamplePoint make_sample(double t, DickePair dicke) {
  SamplePoint p;
  p.t = t;
  p.dicke = dicke;
  p.bare = bare_from_dicke(dicke);
  p.population = population(p.bare);
  p.concurrence = concurrence(p.bare);
  return p;
}

}  // namespace

ResolvedScenario resolve_scenario(const ScenarioConfig& config) {
  config.validate();
  ResolvedScenario r;
  const auto& geom = config.geometry;
  r.omega_A = config.omega_A.resolve(geom);

  const auto coupled = list_coupled_modes(geom, r.omega_A);
  if (coupled.empty()) {
    throw ValidationError(fmt::format(
        "atoms.omega_A: {} is below the lowest TM cutoff {}; no guided mode propagates",
        r.omega_A, cutoff_frequency(geom, ModeIndex{1, 1})));
  }
  std::vector<ModeIndex> selected = config.modes.empty() ? coupled : config.modes;
  for (const auto& mode : selected) {
    if (!(cutoff_frequency(geom, mode) < r.omega_A)) {
      throw ValidationError(fmt::format("modes.select: {} is evanescent at omega_A = {}",
                                        mode.label(), r.omega_A));
    }
  }
  std::stable_sort(selected.begin(), selected.end(), [&](ModeIndex lhs, ModeIndex rhs) {
    return cutoff_frequency(geom, lhs) < cutoff_frequency(geom, rhs);
  });
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

  // The coupling target and the lambda_1 / tau_1 units always refer to the
  // lowest coupled mode, whether or not it is selected.
  const ModeIndex reference = coupled.front();
  const double ref_cutoff = cutoff_frequency(geom, reference);
  const double k1 = resonant_wavenumber(r.omega_A, ref_cutoff);
  const double v1 = group_velocity(r.omega_A, ref_cutoff);
  r.lambda1 = 2.0 * pi / k1;
  r.coupling_scale = calibrate_coupling(config.coupling_D, geom, r.omega_A, reference);
  r.distance = resolve_distance(config.distance, k1);

  const AtomPairConfig atoms{r.omega_A, r.distance, r.coupling_scale};
  for (const auto& mode : selected) {
    r.modes.push_back(mode_params(geom, atoms, mode));
    r.gamma_total += r.modes.back().gamma;
  }
  for (const auto& mode : modes_near_cutoff(geom, r.omega_A, selected, config.cutoff_margin)) {
    r.warnings.push_back(fmt::format(
        "{} is within {:.0f}% of its cutoff; the linear dispersion approximation degrades",
        mode.label(), 100.0 * config.cutoff_margin));
  }

  r.tau1 = r.distance / v1;
  if (r.tau1 > 0.0) {
    r.time_unit = r.tau1;
  } else if (config.time.reference_lambda1) {
    r.time_unit = *config.time.reference_lambda1 * r.lambda1 / v1;
  } else {
    throw ValidationError(
        "time.reference_lambda1: required when the separation is zero (defines the tau1 unit)");
  }
  r.t_max = config.time.unit == TimeUnit::tau1 ? config.time.t_max * r.time_unit
                                               : config.time.t_max / r.gamma_total;
  return r;
}

std::complex<double> series_amplitude(const ResolvedScenario& resolved, DickeBranch branch,
                                      std::complex<double> initial, double t) {
  const auto& modes = resolved.modes;
  if (modes.size() > 2) {
    throw ValidationError(fmt::format(
        "series oracle undefined for {} modes (closed forms exist for 1 or 2)", modes.size()));
  }
  SeriesParams params;
  params.C0 = initial;
  params.gamma_total = resolved.gamma_total;
  params.branch = branch;
  for (const auto& mode : modes) {
    params.alphas.push_back(std::polar(mode.gamma, mode.phase));
    params.taus.push_back(mode.delay);
  }
  auto delayed = [](double tau) { return tau >= kZeroDelayThreshold; };

  if (modes.size() == 1) {
    return delayed(params.taus[0]) ? single_mode_series(params, t).value
                                   : zero_delay_single_mode(params, t);
  }
  const bool d1 = delayed(params.taus[0]);
  const bool d2 = delayed(params.taus[1]);
  if (!d1 && !d2) return zero_delay_two_mode(params, t);
  if (d1 && d2) return double_series_two_mode(params, t).value;
  if (d1) {
    std::swap(params.alphas[0], params.alphas[1]);
    std::swap(params.taus[0], params.taus[1]);
  }
  return partial_delay_two_mode(params, t).value;
}

const MethodResult* RunReport::find(std::string_view method) const {
  for (const auto& result : results) {
    if (result.method == method) return &result;
  }
  return nullptr;
}

const MethodResult& RunReport::primary() const {
  if (const auto* dde = find("dde")) return *dde;
  return results.at(0);
}

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  RunReport report;
  report.name = config.name;
  try {
    report.resolved = resolve_scenario(config);
  } catch (const std::domain_error& e) {
    throw ValidationError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  const auto& resolved = report.resolved;
  const DickePair initial = config.initial.dicke();
  const auto times = sample_times(resolved.t_max, config.time.samples);

  if (config.methods != Methods::series) {
    SolverOptions solver = config.solver;
    solver.t_max = resolved.t_max;
    auto solve_branch = [&](DickeBranch branch, std::complex<double> c0)
        -> std::optional<Trajectory> {
      if (c0 == std::complex<double>{}) return std::nullopt;
      auto tr = solve_dde(DelayProblem::from_modes(resolved.modes, branch, c0), solver);
      if (tr.richardson_error()) {
        report.richardson_error =
            std::max(report.richardson_error.value_or(0.0), *tr.richardson_error());
      }
      return tr;
    };
    const auto sym = solve_branch(DickeBranch::symmetric, initial.Cs);
    const auto anti = solve_branch(DickeBranch::antisymmetric, initial.Ca);

    MethodResult result{"dde", {}};
    result.samples.reserve(times.size());
    for (double t : times) {
      const DickePair d{sym ? evaluate_history(*sym, t) : std::complex<double>{},
                        anti ? evaluate_history(*anti, t) : std::complex<double>{}};
      result.samples.push_back(make_sample(t, d));
    }
    report.results.push_back(std::move(result));
  }

  if (config.methods != Methods::dde) {
    MethodResult result{"series", {}};
    result.samples.reserve(times.size());
    for (double t : times) {
      const DickePair d{series_amplitude(resolved, DickeBranch::symmetric, initial.Cs, t),
                        series_amplitude(resolved, DickeBranch::antisymmetric, initial.Ca, t)};
      result.samples.push_back(make_sample(t, d));
    }
    report.results.push_back(std::move(result));
  }

  if (config.methods == Methods::both) {
    const auto& a = report.results[0].samples;
    const auto& b = report.results[1].samples;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max({worst, std::abs(a[i].dicke.Cs - b[i].dicke.Cs),
                        std::abs(a[i].dicke.Ca - b[i].dicke.Ca)});
    }
    report.max_deviation = worst;
  }

  for (const auto& result : report.results) {
    for (const auto& s : result.samples) {
      if (!std::isfinite(s.population) || !std::isfinite(s.concurrence)) {
        throw NumericalError(fmt::format("non-finite {} sample at t={}", result.method, s.t));
      }
    }
  }

  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    for (const auto& result : report.results) {
      const auto path = *options.out_dir / fmt::format("{}_{}.csv", config.name, result.method);
      write_text_file(path, format_trajectory_csv(result.samples, resolved.time_unit));
      report.files.push_back(path);
    }
    const auto echo = *options.out_dir / fmt::format("{}.resolved.ini", config.name);
    write_text_file(echo, format_config(config));
    report.files.push_back(echo);
    if (options.plot) {
      std::vector<PlotCurve> curves;
      for (const auto& result : report.results) {
        curves.push_back(concurrence_curve(result.method, result.samples, resolved.time_unit));
      }
      const auto svg = *options.out_dir / fmt::format("{}.svg", config.name);
      write_text_file(svg, render_svg_plot(config.name, curves));
      report.files.push_back(svg);
    }
  }
  return report;
}

CompareReport compare_methods(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioConfig both = config;
  both.methods = Methods::both;
  // Fail before integrating if the closed forms cannot cover the mode set.
  const auto resolved = resolve_scenario(both);
  if (resolved.modes.size() > 2) {
    throw ValidationError(fmt::format(
        "series oracle undefined for {} modes (closed forms exist for 1 or 2)",
        resolved.modes.size()));
  }
  CompareReport report;
  report.run = run_scenario(both, options);
  report.max_deviation = report.run.max_deviation.value_or(0.0);
  report.tolerance = config.compare_tolerance;
  report.within_tolerance = report.max_deviation <= report.tolerance;
  return report;
}

std::vector<ModeTableRow> modes_table(const WaveguideGeometry& geom, double omega_A,
                                      double coupling_D, double distance, double cutoff_margin) {
  std::vector<ModeTableRow> rows;
  const auto modes = list_coupled_modes(geom, omega_A);
  if (modes.empty()) return rows;
  const double mu = coupling_D > 0.0 ? calibrate_coupling(coupling_D, geom, omega_A, modes.front())
                                     : 0.0;
  const AtomPairConfig atoms{omega_A, distance, mu};
  const auto near = modes_near_cutoff(geom, omega_A, modes, cutoff_margin);
  for (const auto& mode : modes) {
    ModeTableRow row;
    row.params = mode_params(geom, atoms, mode);
    row.near_cutoff = std::find(near.begin(), near.end(), mode) != near.end();
    rows.push_back(row);
  }
  // gamma_j / gamma_1 = (Omega_j^2 / Omega_1^2)(v_1 / v_j), independent of mu.
  const auto& first = rows.front().params;
  for (auto& row : rows) {
    const auto& p = row.params;
    row.gamma_ratio = (p.cutoff * p.cutoff) / (first.cutoff * first.cutoff) *
                      (first.group_velocity / p.group_velocity);
  }
  return rows;
}

std::string format_modes_table(const std::vector<ModeTableRow>& rows, double omega_A) {
  std::string out = fmt::format("omega_A = {:.12g}  coupled propagating modes: {}\n", omega_A,
                                rows.size());
  if (rows.empty()) return out;
  out += fmt::format("{:>2} {:>6} {:>14} {:>14} {:>14} {:>14} {:>16} {:>14} {:>14}\n", "j", "mode",
                     "cutoff", "k0", "v", "gamma", "gamma/gamma1", "tau", "phi");
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto& p = rows[j].params;
    out += fmt::format("{:>2} {:>6} {:>14.8g} {:>14.8g} {:>14.8g} {:>14.8g} {:>16.13g} {:>14.8g} "
                       "{:>14.8g}{}\n",
                       j + 1, p.mode.label(), p.cutoff, p.wavenumber, p.group_velocity, p.gamma,
                       rows[j].gamma_ratio, p.delay, p.phase,
                       rows[j].near_cutoff ? "  (near cutoff)" : "");
  }
  return out;
}

std::vector<SweepPoint> run_sweep(const ConfigEntries& entries, const RunOptions& options) {
  const auto param = entries.find("sweep.parameter");
  const auto values = entries.find("sweep.values");
  if (param == entries.end()) throw ValidationError("sweep.parameter: missing");
  if (values == entries.end()) throw ValidationError("sweep.values: missing");
  const std::string key = param->second;
  if (key.rfind("sweep.", 0) == 0 || key == "name") {
    throw ValidationError(fmt::format("sweep.parameter: cannot sweep '{}'", key));
  }

  std::vector<std::string> list;
  std::string current;
  for (char c : values->second + ",") {
    if (c == ',') {
      const auto first = current.find_first_not_of(" \t");
      const auto last = current.find_last_not_of(" \t");
      if (first != std::string::npos) list.push_back(current.substr(first, last - first + 1));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (list.empty()) throw ValidationError("sweep.values: empty list");

  ConfigEntries base = entries;
  base.erase("sweep.parameter");
  base.erase("sweep.values");
  const std::string stem = base.contains("name") ? base.at("name") : "sweep";

  std::vector<SweepPoint> points;
  for (const auto& value : list) {
    ConfigEntries run = base;
    run[key] = value;
    std::string suffix = value;
    std::replace_if(suffix.begin(), suffix.end(),
                    [](char c) { return !(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-'); },
                    '_');
    run["name"] = fmt::format("{}_{}", stem, suffix);
    points.push_back({value, run_scenario(config_from_entries(run), options)});
  }
  return points;
}

}  // namespace wgqed
