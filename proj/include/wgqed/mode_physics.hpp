#pragma once

// Guided-mode bookkeeping for two identical emitters on the axis of a
// rectangular hollow waveguide. Units: c = 1, hbar = 1, eps0 = 1; lengths are
// in units of the width a when a = 1 (the default geometry).

#include <compare>
#include <string>
#include <vector>

namespace wgqed {

inline constexpr double kSpeedOfLight = 1.0;
inline constexpr double kDefaultCutoffMargin = 0.05;

struct WaveguideGeometry {
  double a = 1.0;  ///< transverse width
  double b = 0.5;  ///< transverse height

  double area() const { return a * b; }
  /// Throws std::invalid_argument unless both sides are positive and finite.
  void validate() const;
};

/// TM_mn mode label.
struct ModeIndex {
  int m = 1;
  int n = 1;

  auto operator<=>(const ModeIndex&) const = default;

  /// sin(m pi/2) sin(n pi/2): +-1 when both indices are odd, 0 otherwise.
  int centered_dipole_factor() const;
  bool couples_to_centered_dipole() const { return centered_dipole_factor() != 0; }
  std::string label() const;  // "TM31"
};

struct AtomPairConfig {
  double omega_A = 0.0;         ///< transition frequency
  double distance = 0.0;        ///< separation along the guide axis
  double coupling_scale = 0.0;  ///< dipole strength mu (see calibrate_coupling)
};

/// Everything the delay equations need to know about one guided mode.
struct ModeParams {
  ModeIndex mode;
  double cutoff = 0.0;          ///< Omega_mn
  double wavenumber = 0.0;      ///< resonant k_0, where omega(k_0) = omega_A
  double group_velocity = 0.0;  ///< d omega / dk at k_0
  double coupling = 0.0;        ///< g_j, signed
  double gamma = 0.0;           ///< per-mode decay rate pi g^2 / (v omega_A)
  double delay = 0.0;           ///< photon transit time d / v
  double phase = 0.0;           ///< k_0 d, not reduced modulo 2 pi

  double wavelength() const;
};

double cutoff_frequency(const WaveguideGeometry& geom, ModeIndex mode);

/// Odd-odd TM modes with cutoff strictly below omega_A, ascending by cutoff.
/// Empty when omega_A is at or below the lowest cutoff.
std::vector<ModeIndex> list_coupled_modes(const WaveguideGeometry& geom, double omega_A);

/// Throws std::domain_error if the mode is evanescent (omega_A <= cutoff).
double resonant_wavenumber(double omega_A, double cutoff);
double group_velocity(double omega_A, double cutoff);

/// Dipole scale mu for which gamma_ref * lambda_ref / v_ref == target_D,
/// with lambda_ref = 2 pi / k_ref.
double calibrate_coupling(double target_D, const WaveguideGeometry& geom, double omega_A,
                          ModeIndex reference_mode);

/// Decay rate into one mode for a given dipole scale.
double decay_rate(const WaveguideGeometry& geom, double omega_A, ModeIndex mode,
                  double coupling_scale);

ModeParams mode_params(const WaveguideGeometry& geom, const AtomPairConfig& atoms,
                       ModeIndex mode);

/// Modes whose relative distance above cutoff, (omega_A - Omega)/Omega, is
/// below `margin`. The linear dispersion expansion gets poor there.
std::vector<ModeIndex> modes_near_cutoff(const WaveguideGeometry& geom, double omega_A,
                                         const std::vector<ModeIndex>& modes,
                                         double margin = kDefaultCutoffMargin);

/// Separation d giving phase k_0 d = phase for a mode with wavenumber k0.
double distance_for_phase(double k0, double phase);

}  // namespace wgqed
