#include "wgqed/dde_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

constexpr std::size_t kMaxNodes = 20'000'000;
constexpr std::size_t kMaxMultiplesPerDelay = 100'000;

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Derivative jumps of the solution sit on the lattice sum_j n_j tau_j. A jump
// in the k-th derivative costs O(h^{k+1}) locally, so every lattice point of
// order <= 3 is placed on a node, together with all plain multiples.
std::vector<double> breakpoints(const std::vector<double>& delays, double t_max) {
  std::vector<double> pts;
  for (double tau : delays) {
    for (std::size_t k = 1; k <= kMaxMultiplesPerDelay && k * tau < t_max; ++k) {
      pts.push_back(static_cast<double>(k) * tau);
    }
  }
  const std::size_t count = delays.size();
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i; j < count; ++j) {
      const double two = delays[i] + delays[j];
      if (two < t_max) pts.push_back(two);
      for (std::size_t l = j; l < count; ++l) {
        const double three = two + delays[l];
        if (three < t_max) pts.push_back(three);
      }
    }
  }
  std::sort(pts.begin(), pts.end());

  const double merge_tol = 1e-12 * t_max;
  std::vector<double> out{0.0};
  for (double p : pts) {
    if (p - out.back() > merge_tol && t_max - p > merge_tol) out.push_back(p);
  }
  out.push_back(t_max);
  return out;
}

std::vector<double> build_grid(const std::vector<double>& breaks, double h, int divisor) {
  std::size_t total = 1;
  std::vector<std::size_t> per_gap;
  per_gap.reserve(breaks.size());
  for (std::size_t g = 0; g + 1 < breaks.size(); ++g) {
    const double gap = breaks[g + 1] - breaks[g];
    const double raw = std::ceil(gap / h * (1.0 - 1e-12));
    if (!(raw < static_cast<double>(kMaxNodes))) {
      throw NumericalError(fmt::format(
          "step-size underflow: interval of length {} needs more than {} steps", gap, kMaxNodes));
    }
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(raw)) *
                          static_cast<std::size_t>(divisor);
    per_gap.push_back(n);
    total += n;
    if (total > kMaxNodes) {
      throw NumericalError(fmt::format(
          "step-size underflow: grid would exceed {} nodes (delays too small relative to t_max)",
          kMaxNodes));
    }
  }

  std::vector<double> grid;
  grid.reserve(total);
  grid.push_back(breaks.front());
  for (std::size_t g = 0; g + 1 < breaks.size(); ++g) {
    const double start = breaks[g];
    const double step = (breaks[g + 1] - start) / static_cast<double>(per_gap[g]);
    for (std::size_t i = 1; i < per_gap[g]; ++i) grid.push_back(start + static_cast<double>(i) * step);
    grid.push_back(breaks[g + 1]);
  }
  return grid;
}

Complex hermite(double t0, double t1, Complex y0, Complex m0, Complex y1, Complex m1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y0 + (h10 * h) * m0 + h01 * y1 + (h11 * h) * m1;
}

}  // namespace

DelayProblem DelayProblem::from_modes(std::span<const ModeParams> modes, DickeBranch branch,
                                      Complex initial) {
  DelayProblem problem;
  problem.sign = branch_sign(branch);
  problem.initial = initial;
  for (const auto& mode : modes) {
    problem.gamma += mode.gamma;
    problem.terms.push_back({std::polar(mode.gamma, mode.phase), mode.delay});
  }
  return problem;
}

void DelayProblem::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument(fmt::format("local decay must be >= 0, got {}", gamma));
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument(fmt::format("sign must be +1 or -1, got {}", sign));
  }
  for (const auto& term : terms) {
    if (!(term.tau >= 0.0) || !std::isfinite(term.tau)) {
      throw std::invalid_argument(fmt::format("delay must be >= 0, got {}", term.tau));
    }
    if (!is_finite(term.alpha)) throw std::invalid_argument("delay coefficient is not finite");
  }
  if (!is_finite(initial)) throw std::invalid_argument("initial amplitude is not finite");
}

Complex DelayProblem::local_rate() const {
  Complex folded{0.0, 0.0};
  for (const auto& term : terms) {
    if (term.tau < kZeroDelayThreshold) folded += term.alpha;
  }
  return -gamma + static_cast<double>(sign) * folded;
}

std::vector<double> DelayProblem::positive_delays() const {
  std::vector<double> out;
  for (const auto& term : terms) {
    if (term.tau >= kZeroDelayThreshold) out.push_back(term.tau);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void SolverOptions::validate() const {
  if (step_fraction_tau < 8 || step_fraction_gamma < 8) {
    throw std::invalid_argument(fmt::format(
        "step fractions must be >= 8 (tau: {}, gamma: {})", step_fraction_tau, step_fraction_gamma));
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument(fmt::format("t_max must be positive, got {}", t_max));
  }
  if (step_divisor < 1) {
    throw std::invalid_argument(fmt::format("step divisor must be >= 1, got {}", step_divisor));
  }
}

double nominal_step(const DelayProblem& problem, const SolverOptions& options) {
  double h = options.t_max / 1000.0;
  const auto delays = problem.positive_delays();
  if (!delays.empty()) h = std::min(h, delays.front() / options.step_fraction_tau);
  double rate = problem.gamma;
  double coupling = 0.0;
  for (const auto& term : problem.terms) coupling += std::abs(term.alpha);
  rate = std::max({rate, coupling, std::abs(problem.local_rate())});
  if (rate > 0.0) h = std::min(h, 1.0 / (rate * options.step_fraction_gamma));
  return h;
}

class StepIntegrator {
 public:
  StepIntegrator(Trajectory& tr, Integrator scheme) : tr_(tr), scheme_(scheme) {
    const auto& problem = tr_.problem_;
    lambda_ = problem.local_rate();
    for (const auto& term : problem.terms) {
      if (term.tau >= kZeroDelayThreshold) {
        delayed_.push_back({static_cast<double>(problem.sign) * term.alpha, term.tau});
      }
    }
  }

  void run() {
    const std::size_t count = tr_.times_.size();
    tr_.values_.assign(count, Complex{});
    tr_.slope_left_.assign(count, Complex{});
    tr_.slope_right_.assign(count, Complex{});
    tr_.values_[0] = tr_.problem_.initial;
    tr_.slope_left_[0] = lambda_ * tr_.values_[0];

    for (std::size_t i = 0; i + 1 < count; ++i) {
      const double t0 = tr_.times_[i];
      const double t1 = tr_.times_[i + 1];
      const double h = t1 - t0;
      const Complex y0 = tr_.values_[i];

      // Step integrand: right limit at the start, left limit at the end.
      const Complex n0 = forcing(t0, true, i);
      tr_.slope_right_[i] = lambda_ * y0 + n0;
      const Complex nm = forcing(t0 + 0.5 * h, false, i);
      const Complex n1 = forcing(t1, false, i);

      Complex y1;
      if (scheme_ == Integrator::exponential_rk4) {
        const Complex half = std::exp(lambda_ * (0.5 * h));
        const Complex full = std::exp(lambda_ * h);
        y1 = full * y0 + (h / 6.0) * (full * n0 + 4.0 * half * nm + n1);
      } else {
        const Complex k1 = lambda_ * y0 + n0;
        const Complex k2 = lambda_ * (y0 + (0.5 * h) * k1) + nm;
        const Complex k3 = lambda_ * (y0 + (0.5 * h) * k2) + nm;
        const Complex k4 = lambda_ * (y0 + h * k3) + n1;
        y1 = y0 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      if (!is_finite(y1)) {
        throw NumericalError(fmt::format("non-finite amplitude at t={}", t1));
      }
      tr_.values_[i + 1] = y1;
      tr_.slope_left_[i + 1] = lambda_ * y1 + n1;
    }
    tr_.slope_right_[count - 1] = tr_.slope_left_[count - 1];
  }

 private:
  struct Delayed {
    Complex coefficient;  // sign * alpha
    double tau;
  };

  // Sum of delayed terms at time t. With right_limit the onset Theta(0) is
  // taken from above; otherwise Theta(0) = 0. `known` is the last node whose
  // value and left slope are available.
  Complex forcing(double t, bool right_limit, std::size_t known) const {
    Complex total{0.0, 0.0};
    for (const auto& term : delayed_) {
      const double u = t - term.tau;
      const bool active = right_limit ? u >= 0.0 : u > 0.0;
      if (active) total += term.coefficient * history(u, known);
    }
    return total;
  }

  Complex history(double u, std::size_t known) const {
    const auto& times = tr_.times_;
    if (u >= times[known]) {
      if (u == times[known]) return tr_.values_[known];
      throw std::logic_error("delayed argument beyond integrated history");
    }
    const auto end = times.begin() + static_cast<std::ptrdiff_t>(known) + 1;
    const auto it = std::upper_bound(times.begin(), end, u);
    const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
    if (times[k] == u) return tr_.values_[k];
    return hermite(times[k], times[k + 1], tr_.values_[k], tr_.slope_right_[k],
                   tr_.values_[k + 1], tr_.slope_left_[k + 1], u);
  }

  Trajectory& tr_;
  Integrator scheme_;
  Complex lambda_;
  std::vector<Delayed> delayed_;
};

namespace {

double max_node_deviation(const Trajectory& coarse, const Trajectory& fine) {
  // Nested grids: coarse node i coincides with fine node i * ratio.
  const std::size_t ratio = (fine.size() - 1) / (coarse.size() - 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    worst = std::max(worst, std::abs(coarse.values()[i] - fine.values()[i * ratio]));
  }
  return worst;
}

}  // namespace

Trajectory solve_dde(const DelayProblem& problem, const SolverOptions& options) {
  problem.validate();
  options.validate();

  Trajectory tr;
  tr.problem_ = problem;
  tr.nominal_step_ = nominal_step(problem, options);
  tr.times_ = build_grid(breakpoints(problem.positive_delays(), options.t_max),
                         tr.nominal_step_, options.step_divisor);
  StepIntegrator(tr, options.integrator).run();

  if (options.richardson_check) {
    SolverOptions refined = options;
    refined.richardson_check = false;
    refined.step_divisor = options.step_divisor * 2;
    const Trajectory fine = solve_dde(problem, refined);
    tr.richardson_error_ = max_node_deviation(tr, fine);
  }
  return tr;
}

Complex evaluate_history(const Trajectory& trajectory, double t) {
  if (t < 0.0) return Complex{0.0, 0.0};
  const auto& times = trajectory.times_;
  if (times.empty()) throw std::out_of_range("empty trajectory");
  const double t_max = times.back();
  if (t > t_max) {
    if (t - t_max > 1e-12 * std::max(1.0, t_max)) {
      throw std::out_of_range(fmt::format("t={} beyond integrated horizon {}", t, t_max));
    }
    return trajectory.values_.back();
  }
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
  if (times[k] == t || k + 1 == times.size()) return trajectory.values_[k];
  return hermite(times[k], times[k + 1], trajectory.values_[k], trajectory.slope_right_[k],
                 trajectory.values_[k + 1], trajectory.slope_left_[k + 1], t);
}

ConvergenceReport convergence_report(const DelayProblem& problem, const SolverOptions& options) {
  if (!(options.t_max > 0.0)) return {};
  SolverOptions coarse_options = options;
  coarse_options.richardson_check = false;
  SolverOptions fine_options = coarse_options;
  fine_options.step_divisor = coarse_options.step_divisor * 2;

  const Trajectory coarse = solve_dde(problem, coarse_options);
  const Trajectory fine = solve_dde(problem, fine_options);
  return {coarse.nominal_step() / coarse_options.step_divisor, max_node_deviation(coarse, fine),
          coarse.size()};
}

}  // namespace wgqed
