#include "wgqed/analytic_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "wgqed/compensated_sum.hpp"
#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

using Complex = std::complex<double>;

// Accumulates terms of the form
//   exp(log_coefficient) e^{i phase} dt^n / n! exp(-rate dt)
// with the coefficient magnitude and phase carried separately.
class LatticeAccumulator {
 public:
  explicit LatticeAccumulator(Complex rate) : rate_(rate) {}

  void add(double log_coefficient, double phase, int n, double dt) {
    double log_mag = log_coefficient - std::lgamma(n + 1.0) - rate_.real() * dt;
    if (n > 0) log_mag += n * std::log(dt);
    const double magnitude = std::exp(log_mag);
    if (!std::isfinite(magnitude)) {
      throw NumericalError(fmt::format("series term overflow (n={}, dt={})", n, dt));
    }
    sum_.add(std::polar(magnitude, phase - rate_.imag() * dt));
    ++terms_;
    max_term_ = std::max(max_term_, magnitude);
  }

  SeriesValue finish(Complex C0) const { return {C0 * sum_.value(), terms_, max_term_}; }

 private:
  Complex rate_;
  ComplexCompensatedSum sum_;
  int terms_ = 0;
  double max_term_ = 0.0;
};

// log |alpha|^count and count * arg(alpha); false when the factor vanishes.
bool power_factor(Complex alpha, int count, double& log_mag, double& phase) {
  if (count == 0) return true;
  const double mag = std::abs(alpha);
  if (mag == 0.0) return false;
  log_mag += count * std::log(mag);
  phase += count * std::arg(alpha);
  return true;
}

// The symmetric branch carries (-1)^n.
double branch_phase(DickeBranch branch, int n) {
  return branch == DickeBranch::symmetric ? n * std::numbers::pi : 0.0;
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(fmt::format("series time must be >= 0, got {}", t));
  }
}

void require_modes(const SeriesParams& params, std::size_t count, const char* what) {
  params.validate();
  if (params.alphas.size() != count) {
    throw std::invalid_argument(
        fmt::format("{} needs exactly {} mode(s), got {}", what, count, params.alphas.size()));
  }
}

}  // namespace

void SeriesParams::validate() const {
  if (alphas.size() != taus.size()) {
    throw std::invalid_argument("alphas and taus must have equal length");
  }
  if (alphas.empty() || alphas.size() > 2) {
    throw std::invalid_argument(
        fmt::format("series forms exist for 1 or 2 modes, got {}", alphas.size()));
  }
  if (!(gamma_total >= 0.0)) throw std::invalid_argument("gamma_total must be >= 0");
}

SeriesValue single_mode_series(const SeriesParams& params, double t) {
  require_modes(params, 1, "single_mode_series");
  require_time(t);
  const double tau = params.taus[0];
  if (!(tau > 0.0)) {
    throw std::invalid_argument("single_mode_series needs tau > 0; use zero_delay_single_mode");
  }
  LatticeAccumulator acc(params.gamma_total);
  for (int n = 0;; ++n) {
    const double dt = t - n * tau;
    if (n > 0 && !(dt > 0.0)) break;
    double log_mag = 0.0;
    double phase = branch_phase(params.branch, n);
    if (!power_factor(params.alphas[0], n, log_mag, phase)) break;
    acc.add(log_mag, phase, n, dt);
  }
  return acc.finish(params.C0);
}

Complex zero_delay_single_mode(const SeriesParams& params, double t) {
  require_modes(params, 1, "zero_delay_single_mode");
  const double s = branch_sign(params.branch);
  return params.C0 * std::exp(-(params.gamma_total - s * params.alphas[0]) * t);
}

Complex zero_delay_two_mode(const SeriesParams& params, double t) {
  require_modes(params, 2, "zero_delay_two_mode");
  const double s = branch_sign(params.branch);
  const Complex rate = params.gamma_total - s * (params.alphas[0] + params.alphas[1]);
  return params.C0 * std::exp(-rate * t);
}

SeriesValue partial_delay_two_mode(const SeriesParams& params, double t) {
  require_modes(params, 2, "partial_delay_two_mode");
  require_time(t);
  const double tau2 = params.taus[1];
  if (!(tau2 > 0.0)) throw std::invalid_argument("partial_delay_two_mode needs tau_2 > 0");
  const double s = branch_sign(params.branch);
  LatticeAccumulator acc(params.gamma_total - s * params.alphas[0]);
  for (int n = 0;; ++n) {
    const double dt = t - n * tau2;
    if (n > 0 && !(dt > 0.0)) break;
    double log_mag = 0.0;
    double phase = branch_phase(params.branch, n);
    if (!power_factor(params.alphas[1], n, log_mag, phase)) break;
    acc.add(log_mag, phase, n, dt);
  }
  return acc.finish(params.C0);
}

SeriesValue double_series_two_mode(const SeriesParams& params, double t,
                                   PairCoefficient coefficient) {
  require_modes(params, 2, "double_series_two_mode");
  require_time(t);
  const double tau1 = params.taus[0];
  const double tau2 = params.taus[1];
  if (!(tau1 > 0.0) || !(tau2 > 0.0)) {
    throw std::invalid_argument("double_series_two_mode needs both delays > 0");
  }
  const double tau_min = std::min(tau1, tau2);
  LatticeAccumulator acc(params.gamma_total);
  for (int n = 0; n == 0 || n * tau_min < t; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double onset = k * tau1 + (n - k) * tau2;
      const double dt = t - onset;
      if (n > 0 && !(dt > 0.0)) continue;
      double log_mag = 0.0;
      double phase = branch_phase(params.branch, n);
      if (!power_factor(params.alphas[0], k, log_mag, phase)) continue;
      if (!power_factor(params.alphas[1], n - k, log_mag, phase)) continue;
      const double lk = std::lgamma(k + 1.0);
      const double lnk = std::lgamma(n - k + 1.0);
      const double ln = std::lgamma(n + 1.0);
      log_mag += coefficient == PairCoefficient::binomial ? ln - lk - lnk : lk - ln - lnk;
      acc.add(log_mag, phase, n, dt);
    }
  }
  return acc.finish(params.C0);
}

long double_series_term_bound(const SeriesParams& params, double t) {
  const double tau_min = std::min(params.taus.at(0), params.taus.at(1));
  const long m = static_cast<long>(std::floor(t / tau_min));
  return (m + 1) * (m + 2) / 2;
}

}  // namespace wgqed
