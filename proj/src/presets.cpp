#include <array>

#include <fmt/format.h>

#include "wgqed/errors.hpp"
#include "wgqed/scenario_runner.hpp"

namespace wgqed {

namespace {

constexpr ModeIndex kTM11{1, 1};
constexpr ModeIndex kTM31{3, 1};
constexpr ModeIndex kTM51{5, 1};

ScenarioConfig base_config() {
  ScenarioConfig c;
  c.geometry = WaveguideGeometry{1.0, 0.5};
  c.time.unit = TimeUnit::tau1;
  c.time.samples = 2000;
  c.methods = Methods::both;
  return c;
}

// Symmetric start, single-mode band, four phases phi_1 = 2 n pi + {0, pi, pi/2, pi/4}.
std::vector<ScenarioConfig> single_mode_phase_panel(const char* panel, long n) {
  struct Curve {
    const char* suffix;
    double offset_pi;
  };
  constexpr std::array<Curve, 4> curves{{{"2npi", 0.0}, {"2npi_pi", 1.0}, {"2npi_pi2", 0.5},
                                         {"2npi_pi4", 0.25}}};
  std::vector<ScenarioConfig> out;
  for (const auto& curve : curves) {
    ScenarioConfig c = base_config();
    c.name = fmt::format("{}_phi_{}", panel, curve.suffix);
    c.omega_A.midpoint = {kTM11, kTM31};
    c.coupling_D = 0.05;
    c.distance = DistancePhase{n, curve.offset_pi};
    c.initial.kind = InitialKind::symmetric;
    c.time.t_max = 12.0;
    out.push_back(c);
  }
  return out;
}

std::vector<ScenarioConfig> dark_state_panel() {
  std::vector<ScenarioConfig> out;
  for (double lambdas : {0.0, 10.0, 200.0}) {
    ScenarioConfig c = base_config();
    c.name = fmt::format("fig3_d_{}lambda1", lambdas);
    c.omega_A.midpoint = {kTM11, kTM31};
    c.coupling_D = 0.05;
    c.distance = DistanceWavelengths{lambdas};
    c.initial.kind = InitialKind::antisymmetric;
    c.time.t_max = 12.0;
    // The zero-separation curve shares the time axis of the 10 lambda_1 curve.
    if (lambdas == 0.0) c.time.reference_lambda1 = 10.0;
    out.push_back(c);
  }
  return out;
}

// Antisymmetric start in the two-mode band: d = 0, TM11 alone, TM11 + TM31.
std::vector<ScenarioConfig> two_mode_panel(const char* panel, long n) {
  std::vector<ScenarioConfig> out;
  auto make = [&](const char* suffix) {
    ScenarioConfig c = base_config();
    c.name = fmt::format("{}_{}", panel, suffix);
    c.omega_A.midpoint = {kTM31, kTM51};
    c.coupling_D = 0.0086;
    c.distance = DistancePhase{n, 0.0};
    c.initial.kind = InitialKind::antisymmetric;
    c.time.t_max = 10.0;
    return c;
  };
  ScenarioConfig zero = make("d0");
  zero.distance = DistanceLength{0.0};
  zero.time.reference_lambda1 = static_cast<double>(n);
  out.push_back(zero);

  ScenarioConfig single = make("tm11");
  single.modes = {kTM11};
  out.push_back(single);

  ScenarioConfig both = make("tm11_tm31");
  both.modes = {kTM11, kTM31};
  out.push_back(both);
  return out;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2a", "fig2b", "fig2c", "fig3", "fig4a", "fig4b", "fig4c", "fig4d"};
}

std::vector<ScenarioConfig> figure_preset(std::string_view name) {
  if (name == "fig2a") return single_mode_phase_panel("fig2a", 2);
  if (name == "fig2b") return single_mode_phase_panel("fig2b", 20);
  if (name == "fig2c") return single_mode_phase_panel("fig2c", 150);
  if (name == "fig3") return dark_state_panel();
  if (name == "fig4a") return two_mode_panel("fig4a", 4);
  if (name == "fig4b") return two_mode_panel("fig4b", 10);
  if (name == "fig4c") return two_mode_panel("fig4c", 30);
  if (name == "fig4d") return two_mode_panel("fig4d", 3000);
  throw ValidationError(fmt::format("unknown figure preset '{}' (known: fig2a, fig2b, fig2c, "
                                    "fig3, fig4a, fig4b, fig4c, fig4d)",
                                    name));
}

}  // namespace wgqed
