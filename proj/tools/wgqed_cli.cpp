// Command-line front end: modes, run, figure, compare, sweep.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure,
// 3 compare tolerance exceeded.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wgqed/errors.hpp"
#include "wgqed/output.hpp"
#include "wgqed/scenario_config.hpp"
#include "wgqed/scenario_runner.hpp"

namespace {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2, kTolerance = 3 };

struct Overrides {
  std::optional<int> step_fraction_tau;
  std::optional<int> step_fraction_gamma;
  std::optional<double> t_max;
  std::optional<int> samples;

  void apply(wgqed::ConfigEntries& entries) const {
    if (step_fraction_tau) entries["solver.step_fraction_tau"] = std::to_string(*step_fraction_tau);
    if (step_fraction_gamma) {
      entries["solver.step_fraction_gamma"] = std::to_string(*step_fraction_gamma);
    }
    if (t_max) entries["time.t_max"] = fmt::format("{}", *t_max);
    if (samples) entries["time.samples"] = std::to_string(*samples);
  }

  void apply(wgqed::ScenarioConfig& config) const {
    if (step_fraction_tau) config.solver.step_fraction_tau = *step_fraction_tau;
    if (step_fraction_gamma) config.solver.step_fraction_gamma = *step_fraction_gamma;
    if (t_max) config.time.t_max = *t_max;
    if (samples) config.time.samples = *samples;
    config.validate();
  }
};

void print_run(const wgqed::RunReport& report, bool quiet) {
  if (quiet) return;
  const auto& r = report.resolved;
  std::string modes;
  for (const auto& m : r.modes) modes += (modes.empty() ? "" : "+") + m.mode.label();
  fmt::print("{}: modes {}  omega_A={:.10g}  d={:.10g}  gamma={:.6g}  gamma1*tau1={:.6g}\n",
             report.name, modes, r.omega_A, r.distance, r.gamma_total, r.gamma1_tau1());
  for (const auto& w : r.warnings) fmt::print("  warning: {}\n", w);
  const auto& last = report.primary().samples.back();
  fmt::print("  final concurrence {:.6g}, population {:.6g}\n", last.concurrence, last.population);
  if (report.max_deviation) fmt::print("  max |dde - series| = {:.3e}\n", *report.max_deviation);
  if (report.richardson_error) fmt::print("  richardson estimate = {:.3e}\n", *report.richardson_error);
  for (const auto& f : report.files) fmt::print("  wrote {}\n", f.string());
}

wgqed::ScenarioConfig load_with_overrides(const std::string& path, const Overrides& overrides) {
  auto entries = wgqed::read_entries(path);
  overrides.apply(entries);
  return wgqed::config_from_entries(entries);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two emitters in a rectangular waveguide: delay-equation dynamics and concurrence"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  bool plot = false;
  bool quiet = false;
  Overrides overrides;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_flag("--plot", plot, "Also render concurrence plots as SVG");
  app.add_flag("--quiet", quiet, "Suppress progress output");
  app.add_option("--step-fraction-tau", overrides.step_fraction_tau, "Steps per shortest delay");
  app.add_option("--step-fraction-gamma", overrides.step_fraction_gamma, "Steps per 1/gamma");
  app.add_option("--t-max", overrides.t_max, "Horizon, in the config's time unit");
  app.add_option("--samples", overrides.samples, "Number of output samples");

  auto* modes_cmd = app.add_subcommand("modes", "Print the coupled guided modes");
  double a = 1.0;
  std::optional<double> b;
  std::string omega_text;
  double coupling_D = 0.05;
  double distance = 0.0;
  modes_cmd->add_option("--a", a, "Waveguide width")->capture_default_str();
  modes_cmd->add_option("--b", b, "Waveguide height (default a/2)");
  modes_cmd->add_option("--omega-A", omega_text, "Transition frequency, number or mid(11,31)")
      ->required();
  modes_cmd->add_option("--D", coupling_D, "gamma_1 lambda_1 / v_1")->capture_default_str();
  modes_cmd->add_option("--distance", distance, "Separation in units of a")->capture_default_str();

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("config", config_path, "Scenario file")->required();
  auto* compare_cmd = app.add_subcommand("compare", "Cross-check the integrator against the series");
  compare_cmd->add_option("config", config_path, "Scenario file")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over a list of parameter values");
  sweep_cmd->add_option("config", config_path, "Scenario file with a [sweep] section")->required();
  std::string figure_name;
  auto* figure_cmd = app.add_subcommand("figure", "Run every curve of a figure preset");
  figure_cmd->add_option("name", figure_name, "fig2a|fig2b|fig2c|fig3|fig4a|fig4b|fig4c|fig4d")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  const wgqed::RunOptions run_options{std::filesystem::path(out_dir), plot};

  try {
    if (*modes_cmd) {
      wgqed::WaveguideGeometry geom{a, b.value_or(a / 2.0)};
      geom.validate();
      const double omega_A = wgqed::OmegaSpec::parse(omega_text).resolve(geom);
      const auto rows = wgqed::modes_table(geom, omega_A, coupling_D, distance);
      fmt::print("{}", wgqed::format_modes_table(rows, omega_A));
      return kOk;
    }

    if (*run_cmd) {
      const auto config = load_with_overrides(config_path, overrides);
      if (!quiet) fmt::print("{}\n", wgqed::format_config(config));
      print_run(wgqed::run_scenario(config, run_options), quiet);
      return kOk;
    }

    if (*compare_cmd) {
      const auto config = load_with_overrides(config_path, overrides);
      const auto report = wgqed::compare_methods(config, run_options);
      print_run(report.run, quiet);
      fmt::print("max deviation {:.3e} (tolerance {:.1e}): {}\n", report.max_deviation,
                 report.tolerance, report.within_tolerance ? "ok" : "EXCEEDED");
      return report.within_tolerance ? kOk : kTolerance;
    }

    if (*sweep_cmd) {
      auto entries = wgqed::read_entries(config_path);
      overrides.apply(entries);
      const auto points = wgqed::run_sweep(entries, run_options);
      std::string summary = "value,gamma1_tau1,final_concurrence,max_concurrence,max_deviation\n";
      for (const auto& p : points) {
        print_run(p.report, quiet);
        double peak = 0.0;
        for (const auto& s : p.report.primary().samples) peak = std::max(peak, s.concurrence);
        summary += fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", p.value,
                               p.report.resolved.gamma1_tau1(),
                               p.report.primary().samples.back().concurrence, peak,
                               p.report.max_deviation ? fmt::format("{:.17g}", *p.report.max_deviation)
                                                      : std::string{});
      }
      std::filesystem::create_directories(out_dir);
      const auto path = std::filesystem::path(out_dir) / "sweep_summary.csv";
      wgqed::write_text_file(path, summary);
      if (!quiet) fmt::print("wrote {}\n", path.string());
      return kOk;
    }

    if (*figure_cmd) {
      auto configs = wgqed::figure_preset(figure_name);
      std::vector<wgqed::PlotCurve> curves;
      for (auto& config : configs) {
        overrides.apply(config);
        const auto report = wgqed::run_scenario(config, {run_options.out_dir, false});
        print_run(report, quiet);
        curves.push_back(wgqed::concurrence_curve(config.name, report.primary().samples,
                                                  report.resolved.time_unit));
      }
      if (plot) {
        const auto path = std::filesystem::path(out_dir) / fmt::format("{}.svg", figure_name);
        wgqed::write_text_file(path, wgqed::render_svg_plot(figure_name, curves));
        if (!quiet) fmt::print("wrote {}\n", path.string());
      }
      return kOk;
    }
  } catch (const wgqed::ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const std::domain_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const wgqed::NumericalError& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNumerical;
  }
  return kOk;
}
