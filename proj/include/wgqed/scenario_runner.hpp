#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wgqed/entanglement.hpp"
#include "wgqed/mode_physics.hpp"
#include "wgqed/scenario_config.hpp"

namespace wgqed {

/// Physical parameters a config resolves to.
struct ResolvedScenario {
  double omega_A = 0.0;
  double coupling_scale = 0.0;
  double distance = 0.0;
  double lambda1 = 0.0;  ///< wavelength of the lowest selected mode
  std::vector<ModeParams> modes;
  double gamma_total = 0.0;
  double tau1 = 0.0;       ///< delay of the lowest selected mode (0 when d = 0)
  double time_unit = 0.0;  ///< tau1, or its reference value when d = 0
  double t_max = 0.0;      ///< absolute horizon
  std::vector<std::string> warnings;

  double gamma1_tau1() const { return modes.empty() ? 0.0 : modes.front().gamma * tau1; }
};

/// Throws ValidationError for unusable configs (including evanescent modes).
ResolvedScenario resolve_scenario(const ScenarioConfig& config);

struct SamplePoint {
  double t = 0.0;
  DickePair dicke{};
  AmplitudePair bare{};
  double population = 0.0;
  double concurrence = 0.0;
};

struct MethodResult {
  std::string method;  ///< "dde" or "series"
  std::vector<SamplePoint> samples;
};

struct RunReport {
  std::string name;
  ResolvedScenario resolved;
  std::vector<MethodResult> results;
  /// Max |C_dde - C_series| over the sample grid, both Dicke amplitudes.
  std::optional<double> max_deviation;
  std::optional<double> richardson_error;
  std::vector<std::filesystem::path> files;

  const MethodResult* find(std::string_view method) const;
  /// dde when present, else series.
  const MethodResult& primary() const;
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  ///< no files are written when empty
  bool plot = false;
};

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Dicke amplitude from the closed form matching the delay regime. Throws
/// ValidationError for more than two modes.
std::complex<double> series_amplitude(const ResolvedScenario& resolved, DickeBranch branch,
                                      std::complex<double> initial, double t);

struct CompareReport {
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool within_tolerance = false;
  RunReport run;
};

/// Runs both methods. Throws ValidationError("series oracle undefined ...")
/// for more than two modes.
CompareReport compare_methods(const ScenarioConfig& config, const RunOptions& options = {});

std::vector<std::string> preset_names();
/// Every curve of a figure panel. Throws ValidationError for unknown names.
std::vector<ScenarioConfig> figure_preset(std::string_view name);

struct ModeTableRow {
  ModeParams params;
  double gamma_ratio = 0.0;  ///< gamma_j / gamma_1
  bool near_cutoff = false;
};

std::vector<ModeTableRow> modes_table(const WaveguideGeometry& geom, double omega_A,
                                      double coupling_D, double distance,
                                      double cutoff_margin = kDefaultCutoffMargin);
std::string format_modes_table(const std::vector<ModeTableRow>& rows, double omega_A);

struct SweepPoint {
  std::string value;
  RunReport report;
};

/// Runs the config once per value of `sweep.values`, overriding the dotted
/// key named by `sweep.parameter`.
std::vector<SweepPoint> run_sweep(const ConfigEntries& entries, const RunOptions& options = {});

}  // namespace wgqed
