#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "wgqed/mode_physics.hpp"

using namespace wgqed;
using std::numbers::pi;

namespace {

// Reference values computed independently with 30-digit mpmath arithmetic.
constexpr double kOmega11 = 7.0248147310407263931563746432;
constexpr double kOmega31 = 11.3271733991389776925330296252;
constexpr double kOmega51 = 16.9179941964640536386310299813;
constexpr double kMid1131 = 9.17599406508985204284470213421;
constexpr double kK10 = 5.90346043241736267966601760263;
constexpr double kV1 = 0.643359225228482701617380961625;
constexpr double kLambda1 = 1.06432242226560213840692823338;
constexpr double kGamma1Fig2 = 0.0302238876006659999719159492419;
constexpr double kGammaRatioFig4 = 3.77657527512623633494072252281;

const WaveguideGeometry kGeom{1.0, 0.5};

}  // namespace

TEST_CASE("cutoff frequencies of the a = 2b guide") {
  CHECK(cutoff_frequency(kGeom, {1, 1}) == doctest::Approx(kOmega11).epsilon(1e-15));
  CHECK(cutoff_frequency(kGeom, {1, 1}) == doctest::Approx(pi * std::sqrt(5.0)).epsilon(1e-15));
  CHECK(cutoff_frequency(kGeom, {3, 1}) == doctest::Approx(kOmega31).epsilon(1e-15));
  CHECK(cutoff_frequency(kGeom, {5, 1}) == doctest::Approx(kOmega51).epsilon(1e-15));
  CHECK(cutoff_frequency(kGeom, {0, 0}) == 0.0);
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(WaveguideGeometry({0.0, 0.5}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(WaveguideGeometry({1.0, -1.0}).validate(), std::invalid_argument);
  CHECK(WaveguideGeometry{}.b == 0.5);
}

TEST_CASE("dipole parity selects odd-odd modes") {
  CHECK(ModeIndex{1, 1}.centered_dipole_factor() == 1);
  CHECK(ModeIndex{3, 1}.centered_dipole_factor() == -1);
  CHECK(ModeIndex{3, 3}.centered_dipole_factor() == 1);
  CHECK_FALSE(ModeIndex{2, 1}.couples_to_centered_dipole());
  CHECK_FALSE(ModeIndex{1, 0}.couples_to_centered_dipole());
  CHECK(ModeIndex{5, 1}.label() == "TM51");
}

TEST_CASE("coupled mode lists") {
  const auto single = list_coupled_modes(kGeom, 0.5 * (kOmega11 + kOmega31));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == ModeIndex{1, 1});

  const auto two = list_coupled_modes(kGeom, 0.5 * (kOmega31 + kOmega51));
  REQUIRE(two.size() == 2);
  CHECK(two[0] == ModeIndex{1, 1});
  CHECK(two[1] == ModeIndex{3, 1});

  CHECK(list_coupled_modes(kGeom, 0.5 * kOmega11).empty());
  CHECK(list_coupled_modes(kGeom, cutoff_frequency(kGeom, {1, 1})).empty());
  CHECK(list_coupled_modes(kGeom, -1.0).empty());

  const auto many = list_coupled_modes(kGeom, 20.0);
  REQUIRE(many.size() >= 3);
  CHECK(many[0] == ModeIndex{1, 1});
  CHECK(many[1] == ModeIndex{3, 1});
  CHECK(many[2] == ModeIndex{5, 1});
  for (std::size_t i = 1; i < many.size(); ++i) {
    CHECK(cutoff_frequency(kGeom, many[i - 1]) <= cutoff_frequency(kGeom, many[i]));
    CHECK(many[i].couples_to_centered_dipole());
  }
}

TEST_CASE("group velocity") {
  const double omega = 4.0;
  CHECK(group_velocity(std::sqrt(2.0) * omega, omega) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(group_velocity(3.0, 0.0) == 1.0);
  CHECK(group_velocity(omega * (1.0 + 1e-12), omega) < 2e-6);
  CHECK_THROWS_AS(group_velocity(omega, omega), std::domain_error);
  CHECK_THROWS_AS(group_velocity(1.0, 2.0), std::domain_error);
}

TEST_CASE("coupling calibration reproduces gamma_1 lambda_1 / v_1") {
  const double mu = calibrate_coupling(0.05, kGeom, kMid1131, {1, 1});
  const double g1 = decay_rate(kGeom, kMid1131, {1, 1}, mu);
  CHECK(g1 == doctest::Approx(kGamma1Fig2).epsilon(1e-13));

  const auto p = mode_params(kGeom, {kMid1131, 0.0, mu}, {1, 1});
  CHECK(p.wavenumber == doctest::Approx(kK10).epsilon(1e-14));
  CHECK(p.group_velocity == doctest::Approx(kV1).epsilon(1e-14));
  CHECK(p.wavelength() == doctest::Approx(kLambda1).epsilon(1e-14));
  CHECK(p.gamma * p.wavelength() / p.group_velocity == doctest::Approx(0.05).epsilon(1e-13));
  CHECK(p.gamma == doctest::Approx(g1).epsilon(1e-14));

  CHECK(calibrate_coupling(0.0, kGeom, kMid1131, {1, 1}) == 0.0);
  CHECK(decay_rate(kGeom, kMid1131, {1, 1}, calibrate_coupling(1e-300, kGeom, kMid1131, {1, 1})) <
        1e-290);
  CHECK_THROWS_AS(calibrate_coupling(0.05, kGeom, kMid1131, {3, 1}), std::domain_error);
  CHECK_THROWS_AS(calibrate_coupling(0.05, kGeom, kMid1131, {2, 1}), std::domain_error);
}

TEST_CASE("two-mode decay ratio") {
  const double omega = 0.5 * (kOmega31 + kOmega51);
  const double mu = calibrate_coupling(0.0086, kGeom, omega, {1, 1});
  const double ratio = decay_rate(kGeom, omega, {3, 1}, mu) / decay_rate(kGeom, omega, {1, 1}, mu);
  CHECK(ratio == doctest::Approx(kGammaRatioFig4).epsilon(1e-13));
  const double v1 = group_velocity(omega, kOmega11);
  const double v2 = group_velocity(omega, kOmega31);
  CHECK(ratio == doctest::Approx(kOmega31 * kOmega31 / (kOmega11 * kOmega11) * v1 / v2).epsilon(1e-13));
}

TEST_CASE("mode_params edge cases") {
  const double mu = calibrate_coupling(0.05, kGeom, kMid1131, {1, 1});
  const auto at_zero = mode_params(kGeom, {kMid1131, 0.0, mu}, {1, 1});
  CHECK(at_zero.delay == 0.0);
  CHECK(at_zero.phase == 0.0);

  const double d = distance_for_phase(kK10, 4.0 * pi);
  CHECK(d == doctest::Approx(4.0 * pi / kK10).epsilon(1e-15));
  const auto p = mode_params(kGeom, {kMid1131, d, mu}, {1, 1});
  CHECK(p.phase == doctest::Approx(4.0 * pi).epsilon(1e-14));
  CHECK(p.delay == doctest::Approx(d / kV1).epsilon(1e-14));

  CHECK_THROWS_AS(mode_params(kGeom, {kMid1131, 1.0, mu}, {3, 1}), std::domain_error);
  CHECK_THROWS_AS(mode_params(kGeom, {kMid1131, 1.0, mu}, {2, 1}), std::domain_error);
  CHECK_THROWS_AS(mode_params(kGeom, {kMid1131, -1.0, mu}, {1, 1}), std::invalid_argument);
}

TEST_CASE("near-cutoff modes are flagged") {
  const std::vector<ModeIndex> modes{{1, 1}, {3, 1}};
  CHECK(modes_near_cutoff(kGeom, 0.5 * (kOmega31 + kOmega51), modes).empty());
  const auto close = modes_near_cutoff(kGeom, kOmega31 * 1.01, modes);
  REQUIRE(close.size() == 1);
  CHECK(close[0] == ModeIndex{3, 1});
}

TEST_CASE("property: dispersion ordering and positivity over random configurations") {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> aspect(0.3, 1.0);
  std::uniform_real_distribution<double> freq(1.05, 6.0);
  std::uniform_real_distribution<double> sep(0.1, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    const WaveguideGeometry geom{1.0, aspect(rng)};
    const double omega = freq(rng) * cutoff_frequency(geom, {1, 1});
    const auto modes = list_coupled_modes(geom, omega);
    REQUIRE_FALSE(modes.empty());
    const double mu = calibrate_coupling(0.01, geom, omega, modes.front());
    const AtomPairConfig atoms{omega, sep(rng), mu};

    double gamma_sum = 0.0;
    std::vector<ModeParams> params;
    for (const auto& m : modes) {
      params.push_back(mode_params(geom, atoms, m));
      gamma_sum += params.back().gamma;
    }
    double direct = 0.0;
    for (const auto& p : params) {
      CHECK(p.group_velocity > 0.0);
      CHECK(p.group_velocity < kSpeedOfLight);
      CHECK(p.gamma > 0.0);
      CHECK(p.delay >= 0.0);
      CHECK(p.phase >= 0.0);
      // Inverting phi = k0 d recovers the separation.
      CHECK(std::abs(p.phase / p.wavenumber - atoms.distance) <= 1e-12 * atoms.distance);
      direct += p.gamma;
    }
    CHECK(direct == gamma_sum);
    for (std::size_t j = 1; j < params.size(); ++j) {
      if (params[j].cutoff > params[j - 1].cutoff) {
        CHECK(params[j].group_velocity < params[j - 1].group_velocity);
        CHECK(params[j].delay > params[j - 1].delay);
        // Higher cutoff means smaller k0, so the phase decreases with j.
        CHECK(params[j].phase < params[j - 1].phase);
      }
    }

    // Doubling the cross-section halves every cutoff and keeps membership.
    const WaveguideGeometry doubled{2.0 * geom.a, 2.0 * geom.b};
    const auto scaled = list_coupled_modes(doubled, 0.5 * omega);
    CHECK(scaled == modes);
    CHECK(cutoff_frequency(doubled, modes.back()) ==
          doctest::Approx(0.5 * cutoff_frequency(geom, modes.back())).epsilon(1e-15));
  }
}
