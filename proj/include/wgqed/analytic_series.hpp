#pragma once

// Closed forms and lattice series for the Dicke amplitudes with one or two
// guided modes. They solve the same delay equations as dde_engine by Laplace
// inversion, so each one is an independent check on the integrator.
//
// Every series here is a finite sum: a term attached to the lattice instant
// s = sum_j n_j tau_j contributes only for t > s. Term magnitudes are built in
// log space (lgamma for the factorials) and summed with compensation.

#include <complex>
#include <vector>

#include "wgqed/dicke.hpp"

namespace wgqed {

struct SeriesParams {
  std::complex<double> C0{1.0, 0.0};
  double gamma_total = 0.0;
  std::vector<std::complex<double>> alphas;  ///< gamma_j exp(i phi_j)
  std::vector<double> taus;
  DickeBranch branch = DickeBranch::symmetric;

  /// Throws std::invalid_argument unless sizes match and hold 1 or 2 modes.
  void validate() const;
};

struct SeriesValue {
  std::complex<double> value;
  int terms_used = 0;
  double max_term_magnitude = 0.0;
};

/// Coefficient multiplying alpha_1^k alpha_2^(n-k) in the two-delay series.
enum class PairCoefficient {
  binomial,             ///< n! / (k! (n-k)!), the Laplace-inversion result
  inverted_factorial,   ///< k! / (n! (n-k)!); kept only to demonstrate it fails
};

/// One delayed mode: C0 sum_n (-+alpha)^n / n! (t - n tau)^n exp(-gamma (t - n tau)).
/// Requires tau > 0.
SeriesValue single_mode_series(const SeriesParams& params, double t);

/// Single mode with the delay sent to zero: C0 exp(-(gamma -+ ... ) t).
std::complex<double> zero_delay_single_mode(const SeriesParams& params, double t);

/// Two modes, both delays sent to zero.
std::complex<double> zero_delay_two_mode(const SeriesParams& params, double t);

/// Two modes with tau_1 sent to zero and tau_2 > 0.
SeriesValue partial_delay_two_mode(const SeriesParams& params, double t);

/// Two delayed modes: double sum over lattice instants k tau_1 + (n-k) tau_2.
SeriesValue double_series_two_mode(const SeriesParams& params, double t,
                                   PairCoefficient coefficient = PairCoefficient::binomial);

/// Upper bound on the number of terms of double_series_two_mode at time t.
long double_series_term_bound(const SeriesParams& params, double t);

}  // namespace wgqed
