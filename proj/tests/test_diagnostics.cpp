#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "adbeam/closed_form.hpp"
#include "adbeam/diagnostics.hpp"

namespace adbeam {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(ModalEnergySpectrum, SingleMode) {
  const BeamParams p{1.0, 1.0, 1.0};
  const SpectralBasis b(8, 16, 1.0);
  ModalCoefficients m{0.0, std::vector<double>(8, 0.0), std::vector<double>(8, 0.0)};
  m.alphas[3] = 0.1;
  const auto r = modal_energy_spectrum(make_state(m, b), p, b, 1);
  const double lam = 3 * kPi;
  EXPECT_NEAR(r.mode_energies[3], 0.5 * 0.01 * lam * lam * lam * lam, 1e-10);
  for (std::size_t n = 0; n < 8; ++n) {
    if (n != 3) {
      EXPECT_EQ(r.mode_energies[n], 0.0);
    }
  }
  EXPECT_DOUBLE_EQ(r.high_mode_fraction, 1.0);
  EXPECT_DOUBLE_EQ(modal_energy_spectrum(make_state(m, b), p, b, 4).high_mode_fraction, 0.0);
}

TEST(ModalEnergySpectrum, ConstantStateHasNoHighModes) {
  const SpectralBasis b(8, 16, 1.0);
  const auto s = initial_state(constant_initial_data(0.3, 0.4, b), b);
  const auto r = modal_energy_spectrum(s, BeamParams{}, b, 1);
  EXPECT_LE(r.high_mode_fraction, 1e-25);
  EXPECT_NEAR(r.adhesion_energy, 0.5 * 0.09, 1e-15);
}

TEST(ModalEnergySpectrum, SplitRange) {
  const SpectralBasis b(8, 16, 1.0);
  const auto s = initial_state(constant_initial_data(0.3, 0.4, b), b);
  EXPECT_THROW(modal_energy_spectrum(s, BeamParams{}, b, 0), PreconditionError);
  EXPECT_THROW(modal_energy_spectrum(s, BeamParams{}, b, 8), PreconditionError);
}

TEST(DefaultDecayBand, Examples) {
  const auto band = default_decay_band(SpectralBasis(65, 130, 1.0));
  EXPECT_EQ(band.first, 2u);
  EXPECT_EQ(band.last, 32u);
  const auto small = default_decay_band(SpectralBasis(3, 6, 1.0));
  EXPECT_EQ(small.first, 1u);
  EXPECT_EQ(small.last, 2u);
}

TEST(SpectralDecayFit, RecoversPowerLaw) {
  const BeamParams p{1.0, 1.0, 1.0};
  const SpectralBasis b(65, 130, 1.0);
  const auto nu = detached_frequencies(p, b);
  ModalCoefficients m{0.0, std::vector<double>(65, 0.0), std::vector<double>(65, 0.0)};
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ph(0.0, 2 * kPi);
  m.alphas[0] = 1.5;
  for (std::size_t n = 1; n < 65; ++n) {
    const double bn = 1e-3 * std::pow(static_cast<double>(n), -3.0);
    const double psi = ph(rng);
    m.alphas[n] = bn * std::cos(psi);
    m.alpha_dots[n] = -bn * nu[n] * std::sin(psi);
  }
  const auto r = spectral_decay_fit(m, p, b, 2.0, ModeBand{2, 64});
  ASSERT_TRUE(r.slope.has_value());
  EXPECT_NEAR(*r.slope, -3.0, 1e-9);
  EXPECT_NEAR(r.amplitudes[5], 1e-3 / 125.0, 1e-15);
  double sum = 0.0;
  for (std::size_t n = 1; n < 65; ++n) sum += 1e-6 * std::pow(static_cast<double>(n), -2.0);
  EXPECT_NEAR(r.cutoff_sum, sum, 1e-12 * sum);
  EXPECT_DOUBLE_EQ(r.cutoff_bound, cutoff_bound(2.0, p));
}

TEST(SpectralDecayFit, NoSlopeForConstantState) {
  const SpectralBasis b(8, 16, 1.0);
  ModalCoefficients m{0.0, std::vector<double>(8, 0.0), std::vector<double>(8, 0.0)};
  m.alphas[0] = 2.0;
  const auto r = spectral_decay_fit(m, BeamParams{}, b, 2.0, ModeBand{2, 7});
  EXPECT_FALSE(r.slope.has_value());
  EXPECT_EQ(r.cutoff_sum, 0.0);
  EXPECT_THROW(spectral_decay_fit(m, BeamParams{}, b, 2.0, ModeBand{0, 3}), PreconditionError);
  EXPECT_THROW(spectral_decay_fit(m, BeamParams{}, b, 2.0, ModeBand{2, 8}), PreconditionError);
}

std::vector<SimState> closed_form_samples(double dt) {
  const BeamParams p{1.0, 1.0, 1.0};
  const SpectralBasis b(4, 8, 1.0);
  return regime_exact_solve(constant_initial_data(0.0, 2.0, b), p, b, 1.0, dt).samples;
}

TEST(C1Indicator, SmallAcrossMatchedTransition) {
  const double t_bar = kPi / 6;
  double prev = 1.0;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const double ind = c1_indicator(closed_form_samples(dt), t_bar, 4 * dt);
    EXPECT_LT(ind, prev);
    prev = ind;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(C1Indicator, DetectsVelocityJump) {
  const SpectralBasis b(2, 4, 1.0);
  std::vector<SimState> snaps;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.05 * k;
    const double u = t < 0.5 ? t : 0.5 + 3 * (t - 0.5);
    ModalCoefficients m{t, {u, 0.0}, {0.0, 0.0}};
    snaps.push_back(make_state(m, b));
  }
  EXPECT_NEAR(c1_indicator(snaps, 0.5, 0.2), 2.0 / 3.0, 1e-12);
  EXPECT_THROW(c1_indicator(snaps, 0.95, 0.2), PreconditionError);
  EXPECT_THROW(c1_indicator(snaps, 0.5, 0.06), PreconditionError);
  EXPECT_THROW(c1_indicator(snaps, 0.5, 0.0), PreconditionError);
}

}  // namespace
}  // namespace adbeam
