#pragma once

// Experiment description and its INI-style file format.
//
// Keys are flat inside dotted sections; top-level keys have no section:
//
//   name = fig2a_pi              ; output file stem
//   methods = both               ; dde | series | both
//
//   [geometry]
//   a = 1
//   b = 0.5
//
//   [atoms]
//   omega_A = mid(11,31)         ; number, or midpoint of two cutoffs
//   coupling_D = 0.05            ; gamma_1 lambda_1 / v_1 on the lowest mode
//   ; exactly one of:
//   distance = 3.2               ; in units of a
//   distance_lambda1 = 10        ; in units of lambda_1
//   phase_n = 2                  ; phi_1 = 2 n pi + phase_offset_pi * pi
//   phase_offset_pi = 0.5
//
//   [modes]
//   select = auto                ; or an explicit list such as "11,31"
//
//   [initial]
//   state = symmetric            ; antisymmetric | bare (then B1_re, B1_im, B2_re, B2_im)
//
//   [time]
//   t_max = 12
//   unit = tau1                  ; tau1 | gamma (1/gamma_total)
//   samples = 2000
//   reference_lambda1 = 10       ; defines the tau1 unit when the separation is 0
//
//   [solver]
//   step_fraction_tau = 64
//   step_fraction_gamma = 200
//   richardson_check = false
//   integrator = exponential_rk4 ; or classical_rk4
//   cutoff_margin = 0.05
//
//   [compare]
//   tolerance = 1e-6
//
//   [sweep]                      ; only read by the sweep command
//   parameter = atoms.phase_n
//   values = 2, 20, 150

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wgqed/dde_engine.hpp"
#include "wgqed/entanglement.hpp"
#include "wgqed/mode_physics.hpp"

namespace wgqed {

/// Transition frequency: a number, or the midpoint between two cutoffs.
struct OmegaSpec {
  std::optional<double> absolute;
  std::optional<std::pair<ModeIndex, ModeIndex>> midpoint;

  static OmegaSpec parse(std::string_view text);
  double resolve(const WaveguideGeometry& geom) const;
  std::string to_string() const;
};

struct DistanceLength {
  double value = 0.0;
};
struct DistanceWavelengths {
  double value = 0.0;
};
/// phi_1 = 2 n pi + offset_pi * pi.
struct DistancePhase {
  long n = 0;
  double offset_pi = 0.0;
};
using DistanceSpec = std::variant<DistanceLength, DistanceWavelengths, DistancePhase>;

enum class InitialKind { symmetric, antisymmetric, bare };

struct InitialState {
  InitialKind kind = InitialKind::symmetric;
  AmplitudePair bare{};  ///< used when kind == bare

  DickePair dicke() const;
};

enum class TimeUnit { tau1, inverse_gamma };

struct TimeGrid {
  double t_max = 12.0;
  TimeUnit unit = TimeUnit::tau1;
  int samples = 2000;
  std::optional<double> reference_lambda1;
};

enum class Methods { dde, series, both };

struct ScenarioConfig {
  std::string name = "scenario";
  WaveguideGeometry geometry;
  OmegaSpec omega_A;
  double coupling_D = 0.0;
  DistanceSpec distance = DistanceLength{};
  std::vector<ModeIndex> modes;  ///< empty selects every coupled propagating mode
  InitialState initial;
  TimeGrid time;
  SolverOptions solver;  ///< t_max is filled in from `time` when running
  Methods methods = Methods::both;
  double compare_tolerance = 1e-6;
  double cutoff_margin = kDefaultCutoffMargin;

  /// Throws ValidationError naming the offending key.
  void validate() const;
};

/// Flat view of a config file: dotted key -> raw value.
using ConfigEntries = std::map<std::string, std::string>;

/// Throws ValidationError on malformed INI syntax.
ConfigEntries parse_entries(std::string_view text);
ConfigEntries read_entries(const std::filesystem::path& path);

ScenarioConfig config_from_entries(const ConfigEntries& entries);
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// The config with every default spelled out, in the file format above.
std::string format_config(const ScenarioConfig& config);

std::string_view to_string(Methods methods);
std::string_view to_string(InitialKind kind);

}  // namespace wgqed
