#include "wgqed/mode_physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace wgqed {

using std::numbers::pi;

void WaveguideGeometry::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument(
        fmt::format("waveguide sides must be positive (a={}, b={})", a, b));
  }
}

int ModeIndex::centered_dipole_factor() const {
  // sin(k pi / 2) for integer k is 0, 1, 0, -1 by k mod 4.
  auto quarter_sine = [](int k) {
    switch (((k % 4) + 4) % 4) {
      case 1: return 1;
      case 3: return -1;
      default: return 0;
    }
  };
  return quarter_sine(m) * quarter_sine(n);
}

std::string ModeIndex::label() const { return fmt::format("TM{}{}", m, n); }

double ModeParams::wavelength() const { return 2.0 * pi / wavenumber; }

double cutoff_frequency(const WaveguideGeometry& geom, ModeIndex mode) {
  geom.validate();
  const double kx = mode.m * pi / geom.a;
  const double ky = mode.n * pi / geom.b;
  return kSpeedOfLight * std::hypot(kx, ky);
}

std::vector<ModeIndex> list_coupled_modes(const WaveguideGeometry& geom, double omega_A) {
  geom.validate();
  std::vector<ModeIndex> modes;
  if (!(omega_A > 0.0)) return modes;

  // Omega_mn >= c m pi / a, so m (and likewise n) is bounded.
  const int m_max = static_cast<int>(omega_A * geom.a / (pi * kSpeedOfLight)) + 1;
  const int n_max = static_cast<int>(omega_A * geom.b / (pi * kSpeedOfLight)) + 1;
  for (int m = 1; m <= m_max; m += 2) {
    for (int n = 1; n <= n_max; n += 2) {
      const ModeIndex mode{m, n};
      if (cutoff_frequency(geom, mode) < omega_A) modes.push_back(mode);
    }
  }
  std::sort(modes.begin(), modes.end(), [&](ModeIndex lhs, ModeIndex rhs) {
    const double cl = cutoff_frequency(geom, lhs);
    const double cr = cutoff_frequency(geom, rhs);
    if (cl != cr) return cl < cr;
    return lhs < rhs;
  });
  return modes;
}

double resonant_wavenumber(double omega_A, double cutoff) {
  if (!(omega_A > cutoff)) {
    throw std::domain_error(fmt::format(
        "mode is evanescent: omega_A={} does not exceed cutoff {}", omega_A, cutoff));
  }
  return std::sqrt((omega_A - cutoff) * (omega_A + cutoff)) / kSpeedOfLight;
}

double group_velocity(double omega_A, double cutoff) {
  return kSpeedOfLight * kSpeedOfLight * resonant_wavenumber(omega_A, cutoff) / omega_A;
}

double decay_rate(const WaveguideGeometry& geom, double omega_A, ModeIndex mode,
                  double coupling_scale) {
  // g = Omega mu s / sqrt(A pi) and gamma = pi g^2 / (v omega_A) collapse to
  // Omega^2 mu^2 s^2 / (A v omega_A).
  const double cutoff = cutoff_frequency(geom, mode);
  const double v = group_velocity(omega_A, cutoff);
  const double s = mode.centered_dipole_factor();
  return cutoff * cutoff * coupling_scale * coupling_scale * s * s / (geom.area() * v * omega_A);
}

double calibrate_coupling(double target_D, const WaveguideGeometry& geom, double omega_A,
                          ModeIndex reference_mode) {
  if (!(target_D >= 0.0) || !std::isfinite(target_D)) {
    throw std::invalid_argument(fmt::format("coupling target must be >= 0, got {}", target_D));
  }
  if (!reference_mode.couples_to_centered_dipole()) {
    throw std::domain_error(
        fmt::format("{} does not couple to a centered z dipole", reference_mode.label()));
  }
  const double cutoff = cutoff_frequency(geom, reference_mode);
  const double k0 = resonant_wavenumber(omega_A, cutoff);
  const double v = group_velocity(omega_A, cutoff);
  // D = gamma lambda / v with lambda = 2 pi / k0.
  const double gamma_ref = target_D * v * k0 / (2.0 * pi);
  return std::sqrt(gamma_ref * geom.area() * v * omega_A) / cutoff;
}

ModeParams mode_params(const WaveguideGeometry& geom, const AtomPairConfig& atoms,
                       ModeIndex mode) {
  if (!mode.couples_to_centered_dipole()) {
    throw std::domain_error(
        fmt::format("{} does not couple to a centered z dipole", mode.label()));
  }
  if (!(atoms.distance >= 0.0)) {
    throw std::invalid_argument(fmt::format("separation must be >= 0, got {}", atoms.distance));
  }
  ModeParams p;
  p.mode = mode;
  p.cutoff = cutoff_frequency(geom, mode);
  p.wavenumber = resonant_wavenumber(atoms.omega_A, p.cutoff);
  p.group_velocity = group_velocity(atoms.omega_A, p.cutoff);
  p.coupling = p.cutoff * atoms.coupling_scale * mode.centered_dipole_factor() /
               std::sqrt(geom.area() * pi);
  p.gamma = pi * p.coupling * p.coupling / (p.group_velocity * atoms.omega_A);
  p.delay = atoms.distance / p.group_velocity;
  p.phase = p.wavenumber * atoms.distance;
  return p;
}

std::vector<ModeIndex> modes_near_cutoff(const WaveguideGeometry& geom, double omega_A,
                                         const std::vector<ModeIndex>& modes, double margin) {
  std::vector<ModeIndex> out;
  for (const auto& mode : modes) {
    const double cutoff = cutoff_frequency(geom, mode);
    if ((omega_A - cutoff) / cutoff < margin) out.push_back(mode);
  }
  return out;
}

double distance_for_phase(double k0, double phase) {
  if (!(k0 > 0.0)) throw std::domain_error("wavenumber must be positive");
  return phase / k0;
}

}  // namespace wgqed
