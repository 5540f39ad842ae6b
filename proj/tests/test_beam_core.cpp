#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "adbeam/beam_core.hpp"
#include "adbeam/energy.hpp"
#include "adbeam/spectral_basis.hpp"

namespace adbeam {
namespace {

TEST(AdhesionForce, Examples) {
  EXPECT_DOUBLE_EQ(adhesion_force(0.5, AdhesionLaw{2.0}), 2.0);
  EXPECT_EQ(adhesion_force(1.5, AdhesionLaw{2.0}), 0.0);
  EXPECT_EQ(adhesion_force(-1.5, AdhesionLaw{0.3}), 0.0);
  EXPECT_EQ(adhesion_force(0.0, AdhesionLaw{2.0}), 0.0);
}

TEST(AdhesionForce, ThresholdUsesAttachedBranch) {
  const AdhesionLaw law{3.0};
  EXPECT_DOUBLE_EQ(adhesion_force(1.0, law), 9.0);
  EXPECT_DOUBLE_EQ(adhesion_force(-1.0, law), -9.0);
  EXPECT_EQ(adhesion_force(std::nextafter(1.0, 2.0), law), 0.0);
}

TEST(AdhesionPotential, Examples) {
  EXPECT_DOUBLE_EQ(adhesion_potential(2.0, AdhesionLaw{1.0}), 0.5);
  EXPECT_DOUBLE_EQ(adhesion_potential(1.0, AdhesionLaw{1.0}), 0.5);
  EXPECT_DOUBLE_EQ(adhesion_potential(0.5, AdhesionLaw{2.0}), 0.5);
}

TEST(AdhesionPotential, ContinuousAtThreshold) {
  for (double k2 : {0.1, 1.0, 7.0}) {
    const AdhesionLaw law{k2};
    for (double sign : {-1.0, 1.0}) {
      const double at = adhesion_potential(sign, law);
      EXPECT_NEAR(adhesion_potential(sign * (1.0 + 1e-8), law), at, 1e-7 * k2 * k2);
      EXPECT_NEAR(adhesion_potential(sign * (1.0 - 1e-8), law), at, 1e-7 * k2 * k2);
    }
  }
}

TEST(AdhesionForce, IsDerivativeOfPotentialAwayFromThreshold) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  const double h = 1e-6;
  for (int i = 0; i < 500; ++i) {
    const double u = dist(rng);
    if (std::abs(std::abs(u) - 1.0) < 1e-3) continue;
    const AdhesionLaw law{0.5 + std::abs(dist(rng))};
    const double fd = (adhesion_potential(u + h, law) - adhesion_potential(u - h, law)) / (2 * h);
    EXPECT_NEAR(fd, adhesion_force(u, law), 1e-7 * (1.0 + law.kappa2 * law.kappa2));
  }
}

TEST(BeamParams, RejectsNonPositive) {
  EXPECT_NO_THROW((BeamParams{1, 1, 1}.validate()));
  EXPECT_THROW((BeamParams{0, 1, 1}.validate()), ConfigError);
  EXPECT_THROW((BeamParams{1, 0, 1}.validate()), ConfigError);
  EXPECT_THROW((BeamParams{1, 1, -2}.validate()), ConfigError);
  EXPECT_THROW((BeamParams{1, NAN, 1}.validate()), ConfigError);
}

FieldState constant_field(const SpectralBasis& basis, double c, double w) {
  FieldState s;
  s.grid = basis.grid_ptr();
  s.displacement.assign(basis.grid_size(), c);
  s.velocity.assign(basis.grid_size(), w);
  return s;
}

TEST(EnergyOfField, Examples) {
  const SpectralBasis basis(8, 16, 1.0);
  const BeamParams params{1.0, 1.0, 1.0};
  EXPECT_EQ(energy_of_field(constant_field(basis, 0.0, 0.0), params, basis).total, 0.0);
  EXPECT_NEAR(energy_of_field(constant_field(basis, 2.0, 0.0), params, basis).total, 0.5, 1e-14);
  // A0 = 1, u = A0 L^{-1/2}
  EXPECT_NEAR(energy_of_field(constant_field(basis, 1.0, 0.0), params, basis).total, 0.5, 1e-14);
}

TEST(EnergyOfField, ConstantStateParts) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double length = 0.5 + std::abs(dist(rng));
    const BeamParams params{0.5 + std::abs(dist(rng)), 0.5 + std::abs(dist(rng)), length};
    const SpectralBasis basis(6, 12, length);
    const double c = dist(rng);
    const double w = dist(rng);
    const auto e = energy_of_field(constant_field(basis, c, w), params, basis);
    const double kin = 0.5 * length * w * w;
    const double adh = length * adhesion_potential(c, AdhesionLaw::from(params));
    EXPECT_NEAR(e.kinetic, kin, 1e-12 * std::max(kin, 1e-300) + 1e-15);
    EXPECT_NEAR(e.bending, 0.0, 1e-24);
    EXPECT_NEAR(e.adhesion, adh, 1e-12 * adh + 1e-15);
    EXPECT_EQ(e.total, e.kinetic + e.bending + e.adhesion);
  }
}

TEST(EnergyOfField, ComponentsNonNegative) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> dist(0.0, 1.5);
  const SpectralBasis basis(10, 20, 2.0);
  const BeamParams params{1.3, 0.7, 2.0};
  for (int i = 0; i < 100; ++i) {
    FieldState s = constant_field(basis, 0.0, 0.0);
    for (auto& u : s.displacement) u = dist(rng);
    for (auto& v : s.velocity) v = dist(rng);
    const auto e = energy_of_field(s, params, basis);
    EXPECT_GE(e.kinetic, 0.0);
    EXPECT_GE(e.bending, 0.0);
    EXPECT_GE(e.adhesion, 0.0);
    EXPECT_EQ(e.total, e.kinetic + e.bending + e.adhesion);
    for (double m : e.mode_energy) EXPECT_GE(m, 0.0);
  }
}

TEST(EnergyOfField, GridMismatch) {
  const SpectralBasis basis(8, 16, 1.0);
  const SpectralBasis other(8, 12, 1.0);
  EXPECT_THROW(energy_of_field(constant_field(other, 0.1, 0.0), BeamParams{}, basis),
               DimensionError);
}

}  // namespace
}  // namespace adbeam
