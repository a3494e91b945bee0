#pragma once

// Method-of-steps integrator for scalar linear delay equations of the form
//
//   dC/dt = -gamma C(t) + sign * sum_j alpha_j C(t - tau_j) Theta(t - tau_j)
//
// with C(t < 0) = 0 and Theta(0) = 0. These are the decoupled equations for
// the symmetric (sign = -1) and antisymmetric (sign = +1) amplitudes.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wgqed/dicke.hpp"
#include "wgqed/mode_physics.hpp"

namespace wgqed {

using Complex = std::complex<double>;

/// Delays below this are treated as instantaneous.
inline constexpr double kZeroDelayThreshold = 1e-12;

struct DelayTerm {
  Complex alpha;
  double tau = 0.0;
};

struct DelayProblem {
  double gamma = 0.0;
  std::vector<DelayTerm> terms;
  int sign = -1;
  Complex initial{1.0, 0.0};

  /// alpha_j = gamma_j exp(i phi_j), tau_j = d / v_j, gamma = sum gamma_j.
  static DelayProblem from_modes(std::span<const ModeParams> modes, DickeBranch branch,
                                 Complex initial);

  /// Throws std::invalid_argument on negative gamma or delays, or sign not +-1.
  void validate() const;

  /// Coefficient of C(t) once zero delays have been folded in.
  Complex local_rate() const;
  /// Delays above kZeroDelayThreshold, ascending and deduplicated.
  std::vector<double> positive_delays() const;
};

enum class Integrator {
  /// Exact propagation of the local linear part, Simpson-weighted delayed
  /// forcing (integrating-factor RK4). Exact before the first delay.
  exponential_rk4,
  /// Plain RK4 on the full right-hand side.
  classical_rk4,
};

struct SolverOptions {
  int step_fraction_tau = 64;
  int step_fraction_gamma = 200;
  double t_max = 1.0;
  bool richardson_check = false;
  Integrator integrator = Integrator::exponential_rk4;
  /// Each grid interval is split into this many equal substeps. Grids for
  /// divisors 1, 2, 4, ... are nested, which is what convergence checks use.
  int step_divisor = 1;

  void validate() const;
};

class Trajectory {
 public:
  const std::vector<double>& times() const { return times_; }
  const std::vector<Complex>& values() const { return values_; }
  const DelayProblem& problem() const { return problem_; }
  double t_max() const { return times_.empty() ? 0.0 : times_.back(); }
  /// Nominal step before breakpoint snapping and subdivision.
  double nominal_step() const { return nominal_step_; }
  std::size_t size() const { return times_.size(); }
  /// Max deviation from a half-step solve, when requested in SolverOptions.
  std::optional<double> richardson_error() const { return richardson_error_; }

 private:
  friend Trajectory solve_dde(const DelayProblem&, const SolverOptions&);
  friend Complex evaluate_history(const Trajectory&, double);
  friend class StepIntegrator;

  DelayProblem problem_;
  double nominal_step_ = 0.0;
  std::vector<double> times_;
  std::vector<Complex> values_;
  // One-sided derivatives; they differ only at delay onsets.
  std::vector<Complex> slope_left_;
  std::vector<Complex> slope_right_;
  std::optional<double> richardson_error_;
};

/// Throws NumericalError on step-size underflow or non-finite values.
Trajectory solve_dde(const DelayProblem& problem, const SolverOptions& options);

/// Cubic-Hermite dense output. Zero for t < 0, exact at grid nodes.
/// Throws std::out_of_range for t beyond the integrated horizon.
Complex evaluate_history(const Trajectory& trajectory, double t);

struct ConvergenceReport {
  double step = 0.0;           ///< nominal step of the coarse solve
  double max_deviation = 0.0;  ///< max |C_h - C_{h/2}| over the coarse nodes
  std::size_t nodes = 0;
};

ConvergenceReport convergence_report(const DelayProblem& problem, const SolverOptions& options);

/// Grid step before snapping: min(tau_min/f_tau, 1/(gamma f_gamma), t_max/1000).
double nominal_step(const DelayProblem& problem, const SolverOptions& options);

}  // namespace wgqed
