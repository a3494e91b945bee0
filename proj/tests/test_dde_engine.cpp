#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "support/naive_series.hpp"
#include "wgqed/dde_engine.hpp"
#include "wgqed/errors.hpp"

using namespace wgqed;
using std::numbers::pi;

namespace {

SolverOptions horizon(double t_max) {
  SolverOptions o;
  o.t_max = t_max;
  return o;
}

DelayProblem single_delay(double gamma, double phase, double tau, int sign, Complex c0 = 1.0) {
  DelayProblem p;
  p.gamma = gamma;
  p.terms = {{std::polar(gamma, phase), tau}};
  p.sign = sign;
  p.initial = c0;
  return p;
}

double max_abs_diff(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

}  // namespace

TEST_CASE("pure exponential decay") {
  DelayProblem p;
  p.gamma = 0.03;
  const auto tr = solve_dde(p, horizon(200.0));
  REQUIRE(tr.times().front() == 0.0);
  CHECK(tr.values().front() == Complex(1.0));
  CHECK(tr.times().back() == 200.0);
  for (std::size_t i = 0; i < tr.size(); i += 97) {
    const double exact = std::exp(-0.03 * tr.times()[i]);
    CHECK(std::abs(tr.values()[i] - exact) <= 1e-13 * exact);
  }

  SolverOptions classical = horizon(200.0);
  classical.integrator = Integrator::classical_rk4;
  const auto rk = solve_dde(p, classical);
  const double exact_end = std::exp(-0.03 * 200.0);
  CHECK(std::abs(rk.values().back() - exact_end) < 1e-9 * exact_end);
}

TEST_CASE("folded zero delay at phase pi keeps the symmetric amplitude") {
  // -gamma - alpha with alpha = gamma e^{i pi}: the local rate vanishes.
  const auto p = single_delay(0.7, pi, 0.0, -1);
  CHECK(std::abs(p.local_rate()) < 1e-15);
  CHECK(p.positive_delays().empty());
  const auto tr = solve_dde(p, horizon(50.0));
  for (const auto& v : tr.values()) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);

  // Delays below the threshold are folded too.
  const auto tiny = single_delay(0.7, pi, 1e-13, -1);
  CHECK(tiny.positive_delays().empty());
  CHECK(std::abs(tiny.local_rate()) < 1e-15);
}

TEST_CASE("before the first delay the solution is the bare exponential") {
  for (int sign : {-1, 1}) {
    const double gamma = 0.4;
    const double tau = 6.0;
    const auto p = single_delay(gamma, 1.234, tau, sign, Complex(0.6, -0.8));
    const auto tr = solve_dde(p, horizon(20.0));
    double previous = 2.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double t = tr.times()[i];
      if (t >= tau) break;
      const Complex exact = p.initial * std::exp(-gamma * t);
      CHECK(std::abs(tr.values()[i] - exact) <= 1e-10 * std::abs(exact));
      CHECK(std::abs(tr.values()[i]) < previous);
      previous = std::abs(tr.values()[i]);
    }
    for (double t : {0.1, 1.7, 3.3333, 5.999}) {
      const Complex exact = p.initial * std::exp(-gamma * t);
      CHECK(std::abs(evaluate_history(tr, t) - exact) <= 1e-10 * std::abs(exact));
    }
  }
}

TEST_CASE("delay onsets are grid nodes") {
  DelayProblem p;
  p.gamma = 1.0;
  p.terms = {{std::polar(0.4, 0.3), 0.37}, {std::polar(0.6, 1.1), 0.53}};
  const auto tr = solve_dde(p, horizon(5.0));
  for (double b : {0.37, 0.53, 0.74, 0.37 + 0.53, 1.06, 3 * 0.37, 2 * 0.37 + 0.53}) {
    const auto& times = tr.times();
    CHECK(std::find(times.begin(), times.end(), b) != times.end());
  }
}

TEST_CASE("dense output") {
  DelayProblem p;
  p.gamma = 0.5;
  const auto tr = solve_dde(p, horizon(10.0));
  const double span = 1000.0;
  const auto& times = tr.times();
  CHECK(evaluate_history(tr, times[17]) == tr.values()[17]);
  CHECK(evaluate_history(tr, -0.5) == Complex(0.0));
  CHECK(evaluate_history(tr, -1e-300) == Complex(0.0));
  CHECK(evaluate_history(tr, 10.0) == tr.values().back());
  CHECK_THROWS_AS(evaluate_history(tr, 10.5), std::out_of_range);

  // Midpoint interpolation error on the exponential scales like h^4.
  auto midpoint_error = [&](int fraction) {
    SolverOptions o = horizon(span);
    o.step_fraction_gamma = fraction;
    const auto coarse = solve_dde(p, o);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
      const double t = 0.5 * (coarse.times()[i] + coarse.times()[i + 1]);
      worst = std::max(worst, std::abs(evaluate_history(coarse, t) - std::exp(-0.5 * t)));
    }
    return worst;
  };
  const double e1 = midpoint_error(8);
  const double e2 = midpoint_error(16);
  CHECK(e1 < 1e-6);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("convergence report") {
  SUBCASE("classical scheme on a pure exponential is fourth order") {
    DelayProblem p;
    p.gamma = 1.0;
    SolverOptions o = horizon(5.0);
    o.integrator = Integrator::classical_rk4;
    o.step_fraction_gamma = 8;
    const auto r1 = convergence_report(p, o);
    o.step_divisor = 2;
    const auto r2 = convergence_report(p, o);
    const double ratio = r1.max_deviation / r2.max_deviation;
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
    CHECK(r2.step == doctest::Approx(0.5 * r1.step));
  }
  SUBCASE("exponential scheme is exact without delays") {
    DelayProblem p;
    p.gamma = 1.0;
    CHECK(convergence_report(p, horizon(5.0)).max_deviation < 1e-13);
  }
  SUBCASE("single delayed mode near gamma tau = 1") {
    const auto p = single_delay(1.0, 0.0, 1.0, -1);
    const auto r = convergence_report(p, horizon(10.0));
    CHECK(r.max_deviation < 1e-8);
    CHECK(r.nodes > 1000);
  }
  SUBCASE("zero horizon") {
    const auto r = convergence_report(single_delay(1.0, 0.0, 1.0, -1), horizon(0.0));
    CHECK(r.max_deviation == 0.0);
    CHECK(r.nodes == 0);
  }
}

TEST_CASE("richardson estimate is attached on request") {
  SolverOptions o = horizon(10.0);
  o.richardson_check = true;
  const auto tr = solve_dde(single_delay(1.0, 0.5, 1.0, 1), o);
  REQUIRE(tr.richardson_error().has_value());
  CHECK(*tr.richardson_error() < 1e-8);
  CHECK_FALSE(solve_dde(single_delay(1.0, 0.5, 1.0, 1), horizon(10.0)).richardson_error());
}

TEST_CASE("agreement with an independent lattice sum") {
  SUBCASE("one delay, gamma tau = 1, phase 0, t = 2.5 tau") {
    const auto p = single_delay(1.0, 0.0, 1.0, -1);
    const auto tr = solve_dde(p, horizon(2.5));
    const Complex ref = testing::naive_single(1.0, 1.0, std::polar(1.0, 0.0), 1.0, -1, 2.5);
    CHECK(std::abs(tr.values().back() - ref) < 1e-9);
  }
  SUBCASE("two delays, both branches") {
    const Complex a1 = std::polar(0.3, 0.9);
    const Complex a2 = std::polar(0.7, 2.2);
    for (int sign : {-1, 1}) {
      DelayProblem p;
      p.gamma = 1.0;
      p.terms = {{a1, 0.8}, {a2, 1.3}};
      p.sign = sign;
      const auto tr = solve_dde(p, horizon(8.0));
      for (double t : {0.5, 1.0, 1.9, 2.6, 4.44, 7.9}) {
        const Complex ref = testing::naive_double(1.0, 1.0, a1, 0.8, a2, 1.3, sign, t);
        CHECK(std::abs(evaluate_history(tr, t) - ref) < 1e-9);
      }
    }
  }
}

TEST_CASE("property: linearity, conjugation and the single-excitation bound") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int modes = 1 + static_cast<int>(unit(rng) * 3.0);
    DelayProblem p;
    p.sign = unit(rng) < 0.5 ? -1 : 1;
    p.initial = std::polar(1.0, 2.0 * pi * unit(rng));
    for (int j = 0; j < modes; ++j) {
      const double g = 0.05 + unit(rng);
      p.gamma += g;
      p.terms.push_back({std::polar(g, 4.0 * pi * unit(rng)), 0.2 + 3.0 * unit(rng)});
    }
    const SolverOptions o = horizon(8.0 / p.gamma + 4.0);
    const auto base = solve_dde(p, o);

    DelayProblem doubled = p;
    doubled.initial = 2.0 * p.initial;
    const auto twice = solve_dde(doubled, o);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(std::abs(twice.values()[i] - 2.0 * base.values()[i]) <= 1e-15 * std::abs(base.values()[i]) + 1e-300);
    }

    DelayProblem mirrored = p;
    mirrored.initial = std::conj(p.initial);
    for (auto& term : mirrored.terms) term.alpha = std::conj(term.alpha);
    const auto conj = solve_dde(mirrored, o);
    double worst = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      worst = std::max(worst, std::abs(conj.values()[i] - std::conj(base.values()[i])));
    }
    CHECK(worst < 1e-13);

    double peak = 0.0;
    for (const auto& v : base.values()) peak = std::max(peak, std::abs(v));
    CHECK(peak <= std::abs(p.initial) * (1.0 + 1e-9));

    // Strictly decaying envelope until the first echo arrives.
    const double first = p.positive_delays().front();
    for (std::size_t i = 1; i < base.size() && base.times()[i] < first; ++i) {
      CHECK(std::abs(base.values()[i]) < std::abs(base.values()[i - 1]));
    }
  }
}

TEST_CASE("errors") {
  SUBCASE("invalid problems and options") {
    DelayProblem p;
    p.gamma = -1.0;
    CHECK_THROWS_AS(solve_dde(p, horizon(1.0)), std::invalid_argument);
    p.gamma = 1.0;
    p.terms = {{1.0, -0.5}};
    CHECK_THROWS_AS(solve_dde(p, horizon(1.0)), std::invalid_argument);
    p.terms.clear();
    p.sign = 0;
    CHECK_THROWS_AS(solve_dde(p, horizon(1.0)), std::invalid_argument);
    p.sign = 1;
    SolverOptions o = horizon(1.0);
    o.step_fraction_tau = 4;
    CHECK_THROWS_AS(solve_dde(p, o), std::invalid_argument);
    CHECK_THROWS_AS(solve_dde(p, horizon(-1.0)), std::invalid_argument);
  }
  SUBCASE("unresolvably short delay") {
    const auto p = single_delay(1.0, 0.0, 1e-9, -1);
    CHECK_THROWS_AS(solve_dde(p, horizon(1e3)), NumericalError);
  }
  SUBCASE("overflow") {
    DelayProblem p;
    p.gamma = 0.0;
    p.terms = {{Complex(400.0), 0.01}};
    p.sign = 1;
    CHECK_THROWS_AS(solve_dde(p, horizon(60.0)), NumericalError);
  }
}
