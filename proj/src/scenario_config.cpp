#include "wgqed/scenario_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

const std::set<std::string> kKnownKeys = {
    "name",
    "methods",
    "geometry.a",
    "geometry.b",
    "atoms.omega_A",
    "atoms.coupling_D",
    "atoms.distance",
    "atoms.distance_lambda1",
    "atoms.phase_n",
    "atoms.phase_offset_pi",
    "modes.select",
    "initial.state",
    "initial.B1_re",
    "initial.B1_im",
    "initial.B2_re",
    "initial.B2_im",
    "time.t_max",
    "time.unit",
    "time.samples",
    "time.reference_lambda1",
    "solver.step_fraction_tau",
    "solver.step_fraction_gamma",
    "solver.richardson_check",
    "solver.integrator",
    "solver.cutoff_margin",
    "compare.tolerance",
    "sweep.parameter",
    "sweep.values",
};

constexpr const char* kDistanceKeys = "atoms.distance | atoms.distance_lambda1 | atoms.phase_n";

std::string trim(std::string_view s) {
  auto begin = s.begin();
  auto end = s.end();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end != begin && std::isspace(static_cast<unsigned char>(*(end - 1)))) --end;
  return std::string(begin, end);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty() || !std::isfinite(value)) {
    throw ValidationError(fmt::format("{}: expected a number, got '{}'", key, raw));
  }
  return value;
}

long to_long(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  long value = 0;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw ValidationError(fmt::format("{}: expected an integer, got '{}'", key, raw));
  }
  return value;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string text = lower(trim(raw));
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ValidationError(fmt::format("{}: expected true/false, got '{}'", key, raw));
}

// "11", "TM31", "3:1" or "3-1".
std::optional<ModeIndex> parse_mode(std::string_view raw) {
  std::string text = lower(trim(raw));
  if (text.rfind("tm", 0) == 0) text = text.substr(2);
  const auto sep = text.find_first_of(":-");
  std::string m_text;
  std::string n_text;
  if (sep != std::string::npos) {
    m_text = text.substr(0, sep);
    n_text = text.substr(sep + 1);
  } else if (text.size() == 2) {
    m_text = text.substr(0, 1);
    n_text = text.substr(1, 1);
  } else {
    return std::nullopt;
  }
  int m = 0;
  int n = 0;
  auto parse_int = [](const std::string& s, int& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty() && out >= 0;
  };
  if (!parse_int(m_text, m) || !parse_int(n_text, n)) return std::nullopt;
  return ModeIndex{m, n};
}

std::vector<std::string> split_list(std::string_view raw) {
  std::vector<std::string> out;
  std::string current;
  for (char c : raw) {
    if (c == ',') {
      out.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!trim(current).empty() || !out.empty()) out.push_back(trim(current));
  return out;
}

std::string strip_inline_comment(const std::string& value) {
  const auto pos = value.find_first_of(";#");
  return trim(pos == std::string::npos ? value : value.substr(0, pos));
}

std::string mode_token(ModeIndex mode) {
  if (mode.m < 10 && mode.n < 10) return fmt::format("{}{}", mode.m, mode.n);
  return fmt::format("{}:{}", mode.m, mode.n);
}

}  // namespace

OmegaSpec OmegaSpec::parse(std::string_view raw) {
  const std::string text = lower(trim(raw));
  OmegaSpec spec;
  if (text.rfind("mid(", 0) == 0 && text.back() == ')') {
    const auto parts = split_list(std::string_view(text).substr(4, text.size() - 5));
    if (parts.size() == 2) {
      const auto lo = parse_mode(parts[0]);
      const auto hi = parse_mode(parts[1]);
      if (lo && hi) {
        spec.midpoint = std::make_pair(*lo, *hi);
        return spec;
      }
    }
    throw ValidationError(fmt::format("atoms.omega_A: cannot parse '{}'", raw));
  }
  spec.absolute = to_double("atoms.omega_A", text);
  return spec;
}

double OmegaSpec::resolve(const WaveguideGeometry& geom) const {
  if (midpoint) {
    return 0.5 * (cutoff_frequency(geom, midpoint->first) + cutoff_frequency(geom, midpoint->second));
  }
  return absolute.value_or(0.0);
}

std::string OmegaSpec::to_string() const {
  if (midpoint) {
    return fmt::format("mid({},{})", mode_token(midpoint->first), mode_token(midpoint->second));
  }
  return fmt::format("{}", absolute.value_or(0.0));
}

DickePair InitialState::dicke() const {
  switch (kind) {
    case InitialKind::symmetric: return {{1.0, 0.0}, {0.0, 0.0}};
    case InitialKind::antisymmetric: return {{0.0, 0.0}, {1.0, 0.0}};
    case InitialKind::bare: return dicke_from_bare(bare);
  }
  return {};
}

std::string_view to_string(Methods methods) {
  switch (methods) {
    case Methods::dde: return "dde";
    case Methods::series: return "series";
    case Methods::both: return "both";
  }
  return "both";
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::symmetric: return "symmetric";
    case InitialKind::antisymmetric: return "antisymmetric";
    case InitialKind::bare: return "bare";
  }
  return "symmetric";
}

void ScenarioConfig::validate() const {
  if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
    throw ValidationError(fmt::format("name: '{}' is not a valid file stem", name));
  }
  if (!(geometry.a > 0.0)) throw ValidationError("geometry.a: must be positive");
  if (!(geometry.b > 0.0)) throw ValidationError("geometry.b: must be positive");
  if (!omega_A.absolute && !omega_A.midpoint) throw ValidationError("atoms.omega_A: missing");
  if (omega_A.absolute && !(*omega_A.absolute > 0.0)) {
    throw ValidationError("atoms.omega_A: must be positive");
  }
  if (!(coupling_D > 0.0)) throw ValidationError("atoms.coupling_D: must be positive");

  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DistanceLength>) {
          if (!(d.value >= 0.0)) throw ValidationError("atoms.distance: must be >= 0");
        } else if constexpr (std::is_same_v<T, DistanceWavelengths>) {
          if (!(d.value >= 0.0)) throw ValidationError("atoms.distance_lambda1: must be >= 0");
        } else {
          if (d.n < 0) throw ValidationError("atoms.phase_n: must be >= 0");
          if (2.0 * d.n + d.offset_pi < 0.0) {
            throw ValidationError("atoms.phase_offset_pi: total phase must be >= 0");
          }
        }
      },
      distance);

  for (const auto& mode : modes) {
    if (!mode.couples_to_centered_dipole()) {
      throw ValidationError(fmt::format(
          "modes.select: {} does not couple to centered z dipoles (m and n must be odd)",
          mode.label()));
    }
  }

  if (initial.kind == InitialKind::bare) {
    const double norm = population(initial.bare);
    if (std::abs(norm - 1.0) > 1e-12) {
      throw ValidationError(fmt::format(
          "initial.B1_re: bare amplitudes must satisfy |B1|^2+|B2|^2 = 1 (got {:.17g})", norm));
    }
  }

  if (!(time.t_max > 0.0)) throw ValidationError("time.t_max: must be positive");
  if (time.samples < 2) throw ValidationError("time.samples: must be >= 2");
  if (time.reference_lambda1 && !(*time.reference_lambda1 > 0.0)) {
    throw ValidationError("time.reference_lambda1: must be positive");
  }
  if (solver.step_fraction_tau < 8) throw ValidationError("solver.step_fraction_tau: must be >= 8");
  if (solver.step_fraction_gamma < 8) {
    throw ValidationError("solver.step_fraction_gamma: must be >= 8");
  }
  if (!(cutoff_margin >= 0.0)) throw ValidationError("solver.cutoff_margin: must be >= 0");
  if (!(compare_tolerance > 0.0)) throw ValidationError("compare.tolerance: must be positive");
}

ConfigEntries parse_entries(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(fmt::format("config parse error at line {}: {}", e.line(), e.message()));
  }
  ConfigEntries entries;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      entries[key] = strip_inline_comment(node.data());
      continue;
    }
    for (const auto& [sub, leaf] : node) {
      if (!leaf.empty()) {
        throw ValidationError(fmt::format("{}.{}: nested sections are not supported", key, sub));
      }
      entries[key + "." + sub] = strip_inline_comment(leaf.data());
    }
  }
  return entries;
}

ConfigEntries read_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_entries(text.str());
}

ScenarioConfig config_from_entries(const ConfigEntries& entries) {
  for (const auto& [key, value] : entries) {
    if (!kKnownKeys.contains(key)) throw ValidationError(fmt::format("{}: unknown key", key));
  }

  const int distance_forms = static_cast<int>(entries.contains("atoms.distance")) +
                             static_cast<int>(entries.contains("atoms.distance_lambda1")) +
                             static_cast<int>(entries.contains("atoms.phase_n"));
  std::vector<std::string> missing;
  for (const char* key : {"atoms.omega_A", "atoms.coupling_D", "initial.state"}) {
    if (!entries.contains(key)) missing.emplace_back(key);
  }
  if (distance_forms == 0) missing.emplace_back(kDistanceKeys);
  if (!missing.empty()) {
    std::string list;
    for (const auto& key : missing) list += (list.empty() ? "" : ", ") + key;
    throw ValidationError(fmt::format("missing required keys: {}", list));
  }
  if (distance_forms > 1) {
    throw ValidationError(
        fmt::format("conflicting distance keys: give exactly one of {}", kDistanceKeys));
  }
  if (entries.contains("atoms.phase_offset_pi") && !entries.contains("atoms.phase_n")) {
    throw ValidationError("atoms.phase_offset_pi: only valid together with atoms.phase_n");
  }

  auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  };

  ScenarioConfig config;
  if (auto v = get("name")) config.name = trim(*v);
  if (auto v = get("methods")) {
    const std::string m = lower(trim(*v));
    if (m == "dde") config.methods = Methods::dde;
    else if (m == "series") config.methods = Methods::series;
    else if (m == "both") config.methods = Methods::both;
    else throw ValidationError(fmt::format("methods: expected dde|series|both, got '{}'", *v));
  }
  if (auto v = get("geometry.a")) config.geometry.a = to_double("geometry.a", *v);
  config.geometry.b = config.geometry.a / 2.0;
  if (auto v = get("geometry.b")) config.geometry.b = to_double("geometry.b", *v);

  config.omega_A = OmegaSpec::parse(*get("atoms.omega_A"));
  config.coupling_D = to_double("atoms.coupling_D", *get("atoms.coupling_D"));
  if (auto v = get("atoms.distance")) {
    config.distance = DistanceLength{to_double("atoms.distance", *v)};
  } else if (auto w = get("atoms.distance_lambda1")) {
    config.distance = DistanceWavelengths{to_double("atoms.distance_lambda1", *w)};
  } else {
    DistancePhase phase;
    phase.n = to_long("atoms.phase_n", *get("atoms.phase_n"));
    if (auto off = get("atoms.phase_offset_pi")) {
      phase.offset_pi = to_double("atoms.phase_offset_pi", *off);
    }
    config.distance = phase;
  }

  if (auto v = get("modes.select")) {
    const std::string sel = lower(trim(*v));
    if (sel != "auto") {
      for (const auto& token : split_list(sel)) {
        const auto mode = parse_mode(token);
        if (!mode) throw ValidationError(fmt::format("modes.select: cannot parse mode '{}'", token));
        config.modes.push_back(*mode);
      }
      if (config.modes.empty()) throw ValidationError("modes.select: empty mode list");
    }
  }

  const std::string state = lower(trim(*get("initial.state")));
  if (state == "symmetric") {
    config.initial.kind = InitialKind::symmetric;
  } else if (state == "antisymmetric") {
    config.initial.kind = InitialKind::antisymmetric;
  } else if (state == "bare") {
    config.initial.kind = InitialKind::bare;
    auto component = [&](const char* key) {
      const auto v = get(key);
      return v ? to_double(key, *v) : 0.0;
    };
    config.initial.bare = {{component("initial.B1_re"), component("initial.B1_im")},
                           {component("initial.B2_re"), component("initial.B2_im")}};
  } else {
    throw ValidationError(fmt::format(
        "initial.state: expected symmetric|antisymmetric|bare, got '{}'", *get("initial.state")));
  }
  if (config.initial.kind != InitialKind::bare) {
    for (const char* key : {"initial.B1_re", "initial.B1_im", "initial.B2_re", "initial.B2_im"}) {
      if (entries.contains(key)) {
        throw ValidationError(fmt::format("{}: only valid with initial.state = bare", key));
      }
    }
  }

  if (auto v = get("time.t_max")) config.time.t_max = to_double("time.t_max", *v);
  if (auto v = get("time.unit")) {
    const std::string unit = lower(trim(*v));
    if (unit == "tau1") config.time.unit = TimeUnit::tau1;
    else if (unit == "gamma") config.time.unit = TimeUnit::inverse_gamma;
    else throw ValidationError(fmt::format("time.unit: expected tau1|gamma, got '{}'", *v));
  }
  if (auto v = get("time.samples")) {
    config.time.samples = static_cast<int>(to_long("time.samples", *v));
  }
  if (auto v = get("time.reference_lambda1")) {
    config.time.reference_lambda1 = to_double("time.reference_lambda1", *v);
  }

  if (auto v = get("solver.step_fraction_tau")) {
    config.solver.step_fraction_tau = static_cast<int>(to_long("solver.step_fraction_tau", *v));
  }
  if (auto v = get("solver.step_fraction_gamma")) {
    config.solver.step_fraction_gamma = static_cast<int>(to_long("solver.step_fraction_gamma", *v));
  }
  if (auto v = get("solver.richardson_check")) {
    config.solver.richardson_check = to_bool("solver.richardson_check", *v);
  }
  if (auto v = get("solver.integrator")) {
    const std::string scheme = lower(trim(*v));
    if (scheme == "exponential_rk4") config.solver.integrator = Integrator::exponential_rk4;
    else if (scheme == "classical_rk4") config.solver.integrator = Integrator::classical_rk4;
    else {
      throw ValidationError(fmt::format(
          "solver.integrator: expected exponential_rk4|classical_rk4, got '{}'", *v));
    }
  }
  if (auto v = get("solver.cutoff_margin")) {
    config.cutoff_margin = to_double("solver.cutoff_margin", *v);
  }
  if (auto v = get("compare.tolerance")) {
    config.compare_tolerance = to_double("compare.tolerance", *v);
  }

  config.validate();
  return config;
}

ScenarioConfig parse_config(std::string_view text) { return config_from_entries(parse_entries(text)); }

ScenarioConfig load_config(const std::filesystem::path& path) {
  return config_from_entries(read_entries(path));
}

std::string format_config(const ScenarioConfig& config) {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  line("name", config.name);
  line("methods", to_string(config.methods));

  out += "\n[geometry]\n";
  line("a", config.geometry.a);
  line("b", config.geometry.b);

  out += "\n[atoms]\n";
  line("omega_A", config.omega_A.to_string());
  line("coupling_D", config.coupling_D);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DistanceLength>) {
          line("distance", d.value);
        } else if constexpr (std::is_same_v<T, DistanceWavelengths>) {
          line("distance_lambda1", d.value);
        } else {
          line("phase_n", d.n);
          line("phase_offset_pi", d.offset_pi);
        }
      },
      config.distance);

  out += "\n[modes]\n";
  if (config.modes.empty()) {
    line("select", "auto");
  } else {
    std::string list;
    for (const auto& mode : config.modes) list += (list.empty() ? "" : ",") + mode_token(mode);
    line("select", list);
  }

  out += "\n[initial]\n";
  line("state", to_string(config.initial.kind));
  if (config.initial.kind == InitialKind::bare) {
    line("B1_re", config.initial.bare.B1.real());
    line("B1_im", config.initial.bare.B1.imag());
    line("B2_re", config.initial.bare.B2.real());
    line("B2_im", config.initial.bare.B2.imag());
  }

  out += "\n[time]\n";
  line("t_max", config.time.t_max);
  line("unit", config.time.unit == TimeUnit::tau1 ? "tau1" : "gamma");
  line("samples", config.time.samples);
  if (config.time.reference_lambda1) line("reference_lambda1", *config.time.reference_lambda1);

  out += "\n[solver]\n";
  line("step_fraction_tau", config.solver.step_fraction_tau);
  line("step_fraction_gamma", config.solver.step_fraction_gamma);
  line("richardson_check", config.solver.richardson_check ? "true" : "false");
  line("integrator",
       config.solver.integrator == Integrator::exponential_rk4 ? "exponential_rk4" : "classical_rk4");
  line("cutoff_margin", config.cutoff_margin);

  out += "\n[compare]\n";
  line("tolerance", config.compare_tolerance);
  return out;
}

}  // namespace wgqed
