#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "adbeam/spectral_basis.hpp"

namespace adbeam {
namespace {

constexpr double kPi = std::numbers::pi;

// Eigenfunction straight from its formula, independent of the basis table.
double eigen_oracle(std::size_t n, double x, double length) {
  if (n == 0) return 1.0 / std::sqrt(length);
  return std::sqrt(2.0 / length) * std::cos(static_cast<double>(n) * kPi * x / length);
}

TEST(BuildBasis, Wavenumbers) {
  const auto b = build_basis(3, 8, kPi);
  ASSERT_EQ(b.lambdas().size(), 3u);
  EXPECT_NEAR(b.lambda(0), 0.0, 0.0);
  EXPECT_NEAR(b.lambda(1), 1.0, 1e-15);
  EXPECT_NEAR(b.lambda(2), 2.0, 1e-15);
  EXPECT_NEAR(build_basis(4, 8, 1.0).lambda(3), 3.0 * kPi, 1e-14);
}

TEST(BuildBasis, ConstantModeAndGrid) {
  const auto b = build_basis(4, 10, 4.0);
  for (std::size_t j = 0; j < b.grid_size(); ++j) {
    EXPECT_DOUBLE_EQ(b.eigenfunction(0, j), 0.5);
    EXPECT_DOUBLE_EQ(b.collocation()[j], (j + 0.5) * 0.4);
  }
  for (std::size_t j = 1; j < b.grid_size(); ++j) {
    EXPECT_GT(b.collocation()[j], b.collocation()[j - 1]);
  }
  EXPECT_GT(b.collocation().front(), 0.0);
  EXPECT_LT(b.collocation().back(), 4.0);
}

TEST(BuildBasis, TableMatchesFormula) {
  const auto b = build_basis(40, 64, 2.5);
  for (std::size_t n = 0; n < b.n_modes(); ++n) {
    for (std::size_t j = 0; j < b.grid_size(); ++j) {
      EXPECT_NEAR(b.eigenfunction(n, j), eigen_oracle(n, b.collocation()[j], 2.5), 1e-13);
    }
  }
}

TEST(BuildBasis, RejectsBadSizes) {
  EXPECT_THROW(build_basis(0, 8, 1.0), ConfigError);
  EXPECT_THROW(build_basis(9, 8, 1.0), ConfigError);
  EXPECT_THROW(build_basis(2, 1, 1.0), ConfigError);
  EXPECT_THROW(build_basis(2, 8, 0.0), ConfigError);
  try {
    build_basis(300, 256, 1.0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("n_modes <= grid_size"), std::string::npos);
  }
}

TEST(Synthesize, Examples) {
  const auto b = build_basis(6, 12, 2.0);
  ModalCoefficients c{0.0, std::vector<double>(6, 0.0), std::vector<double>(6, 0.0)};
  c.alphas[0] = 0.7 * std::sqrt(2.0);
  auto s = synthesize(c, b);
  for (double u : s.displacement) EXPECT_NEAR(u, 0.7, 1e-15);

  c.alphas[0] = 0.0;
  c.alphas[1] = 1.0;
  s = synthesize(c, b);
  for (std::size_t j = 0; j < b.grid_size(); ++j) {
    EXPECT_NEAR(s.displacement[j], std::cos(kPi * b.collocation()[j] / 2.0), 1e-15);
  }

  c.alphas.assign(6, 0.0);
  s = synthesize(c, b);
  for (double u : s.displacement) EXPECT_EQ(u, 0.0);
  for (double v : s.velocity) EXPECT_EQ(v, 0.0);
}

TEST(Analyze, Examples) {
  const auto b = build_basis(6, 12, 2.0);
  FieldState s;
  s.grid = b.grid_ptr();
  s.displacement.assign(12, -1.3);
  s.velocity.assign(12, 0.0);
  auto c = analyze(s, b);
  EXPECT_NEAR(c.alphas[0], -1.3 * std::sqrt(2.0), 1e-14);
  for (std::size_t n = 1; n < 6; ++n) EXPECT_NEAR(c.alphas[n], 0.0, 1e-15);

  for (std::size_t j = 0; j < 12; ++j) s.displacement[j] = std::cos(kPi * b.collocation()[j] / 2.0);
  c = analyze(s, b);
  for (std::size_t n = 0; n < 6; ++n) EXPECT_NEAR(c.alphas[n], n == 1 ? 1.0 : 0.0, 1e-14);
}

TEST(Analyze, MatchesBruteForceProjection) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double length = 1.7;
  const auto b = build_basis(20, 33, length);
  std::vector<double> u(33);
  for (auto& x : u) x = dist(rng);
  const auto c = b.analyze_values(u);
  for (std::size_t n = 0; n < 20; ++n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < 33; ++j) {
      const double x = (j + 0.5) * length / 33.0;
      acc += u[j] * eigen_oracle(n, x, length);
    }
    EXPECT_NEAR(c[n], acc * length / 33.0, 1e-14);
  }
}

TEST(Analyze, GridMismatch) {
  const auto b = build_basis(4, 8, 1.0);
  const auto other = build_basis(4, 8, 2.0);
  FieldState s;
  s.grid = other.grid_ptr();
  s.displacement.assign(8, 0.0);
  s.velocity.assign(8, 0.0);
  EXPECT_THROW(analyze(s, b), DimensionError);
  ModalCoefficients c{0.0, std::vector<double>(3), std::vector<double>(3)};
  EXPECT_THROW(synthesize(c, b), DimensionError);
}

TEST(SpectralBasis, RoundTripProperty) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::uniform_int_distribution<int> msize(2, 96);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = static_cast<std::size_t>(msize(rng));
    std::uniform_int_distribution<std::size_t> nsize(1, m);
    const std::size_t n = nsize(rng);
    const auto b = build_basis(n, m, 0.3 + 3.0 * std::abs(dist(rng)));
    std::vector<double> c(n);
    for (auto& x : c) x = dist(rng);
    const auto back = b.analyze_values(b.synthesize_values(c));
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(back[k], c[k], 1e-12);
  }
}

TEST(SpectralBasis, DiscreteOrthonormalityFullRank) {
  for (std::size_t m : {2u, 7u, 64u, 512u}) {
    const auto b = build_basis(m, m, 1.3);
    double worst = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p; q < m; ++q) {
        double g = 0.0;
        for (std::size_t j = 0; j < m; ++j) g += b.eigenfunction(p, j) * b.eigenfunction(q, j);
        worst = std::max(worst, std::abs(g * b.weight() - (p == q ? 1.0 : 0.0)));
      }
    }
    EXPECT_LE(worst, 1e-10) << "M = " << m;
  }
}

TEST(SpectralBasis, Parseval) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> dist(0.0, 1.0);
  const auto b = build_basis(30, 40, 2.2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(30);
    double sum = 0.0;
    for (auto& x : c) {
      x = dist(rng);
      sum += x * x;
    }
    double quad = 0.0;
    for (double u : b.synthesize_values(c)) quad += u * u;
    EXPECT_NEAR(quad * b.weight(), sum, 1e-10 * sum);
  }
}

TEST(BendingMultiplier, Examples) {
  const auto b = build_basis(3, 6, kPi);
  EXPECT_EQ(bending_multiplier(b, 0), 0.0);
  EXPECT_NEAR(bending_multiplier(b, 1), 1.0, 1e-14);
  EXPECT_NEAR(bending_multiplier(b, 2), 16.0, 1e-13);
  EXPECT_THROW(bending_multiplier(b, 3), PreconditionError);
}

TEST(BendingMultiplier, ComposesToEighthPower) {
  const auto b = build_basis(12, 24, 1.4);
  std::vector<double> c(12, 1.0);
  for (std::size_t n = 0; n < 12; ++n) {
    const double once = bending_multiplier(b, n) * c[n];
    const double twice = bending_multiplier(b, n) * once;
    EXPECT_NEAR(twice, std::pow(b.lambda(n), 8), 1e-12 * std::pow(b.lambda(n), 8));
  }
}

TEST(SecondDerivative, MatchesAnalytic) {
  const double length = 1.5;
  const auto b = build_basis(8, 16, length);
  std::vector<double> c(8, 0.0);
  c[3] = 0.4;
  const auto uxx = b.second_derivative_values(c);
  const double k = 3.0 * kPi / length;
  for (std::size_t j = 0; j < 16; ++j) {
    const double x = b.collocation()[j];
    EXPECT_NEAR(uxx[j], -0.4 * k * k * std::sqrt(2.0 / length) * std::cos(k * x), 1e-12);
  }
}

TEST(CosineSeries, CoefficientsMatchAnalysis) {
  const auto b = build_basis(10, 20, 3.0);
  const std::vector<CosineTerm> terms{{0, 0.9}, {1, 0.3}, {7, -0.2}};
  const auto exact = cosine_series_coefficients(terms, b);
  const auto analyzed = b.analyze_values(cosine_series_values(terms, b));
  for (std::size_t n = 0; n < 10; ++n) EXPECT_NEAR(exact[n], analyzed[n], 1e-14);
  const std::vector<CosineTerm> too_high{{10, 1.0}};
  EXPECT_THROW(cosine_series_coefficients(too_high, b), ConfigError);
}

}  // namespace
}  // namespace adbeam
