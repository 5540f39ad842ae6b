#pragma once

// Neumann cosine eigenbasis of the biharmonic operator on [0, L] and the
// collocation transforms between grid samples and modal coefficients.
//
//   u_0(x) = L^{-1/2},  u_n(x) = sqrt(2/L) cos(n pi x / L),  lambda_n = n pi / L
//
// Samples live on the midpoints x_j = (j + 1/2) L / M. With uniform weight L/M
// the family {u_n, n < M} is exactly orthonormal on that grid (DCT-II
// structure), so analyze(synthesize(a)) == a for n_modes <= M.

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adbeam/beam_core.hpp"
#include "adbeam/errors.hpp"

namespace adbeam {

/// Coefficients alpha_n and their time derivatives.
struct ModalCoefficients {
  double time = 0.0;
  std::vector<double> alphas;
  std::vector<double> alpha_dots;

  std::size_t size() const { return alphas.size(); }
};

class SpectralBasis {
 public:
  SpectralBasis(std::size_t n_modes, std::size_t grid_size, double length)
      : n_modes_(n_modes), grid_size_(grid_size), length_(length) {
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw ConfigError("basis length must be a finite value > 0");
    }
    if (n_modes < 1) {
      throw ConfigError("n_modes must be >= 1");
    }
    if (grid_size < 2) {
      throw ConfigError("grid_size must be >= 2");
    }
    if (n_modes > grid_size) {
      throw ConfigError("n_modes <= grid_size violated (n_modes = " +
                        std::to_string(n_modes) +
                        ", grid_size = " + std::to_string(grid_size) + ")");
    }
    const double pi = std::numbers::pi;
    lambdas_.resize(n_modes_);
    for (std::size_t n = 0; n < n_modes_; ++n) {
      lambdas_[n] = static_cast<double>(n) * pi / length_;
    }
    auto grid = std::make_shared<std::vector<double>>(grid_size_);
    for (std::size_t j = 0; j < grid_size_; ++j) {
      (*grid)[j] = (static_cast<double>(j) + 0.5) * length_ /
                   static_cast<double>(grid_size_);
    }
    collocation_ = std::move(grid);

    // Row j holds u_n(x_j) for n = 0..N. The cosine argument is reduced
    // through the integer phase (n (2j+1)) mod 4M to keep it small.
    table_.resize(grid_size_ * n_modes_);
    const double inv_sqrt_l = 1.0 / std::sqrt(length_);
    const double sqrt_2_l = std::sqrt(2.0 / length_);
    const std::size_t period = 4 * grid_size_;
    for (std::size_t j = 0; j < grid_size_; ++j) {
      double* row = &table_[j * n_modes_];
      row[0] = inv_sqrt_l;
      for (std::size_t n = 1; n < n_modes_; ++n) {
        const std::size_t phase = (n * (2 * j + 1)) % period;
        row[n] = sqrt_2_l * std::cos(pi * static_cast<double>(phase) /
                                     static_cast<double>(2 * grid_size_));
      }
    }
  }

  std::size_t n_modes() const { return n_modes_; }
  std::size_t grid_size() const { return grid_size_; }
  double length() const { return length_; }
  double weight() const { return length_ / static_cast<double>(grid_size_); }

  std::span<const double> lambdas() const { return lambdas_; }
  double lambda(std::size_t n) const { return lambdas_.at(n); }

  const std::vector<double>& collocation() const { return *collocation_; }
  const std::shared_ptr<const std::vector<double>>& grid_ptr() const {
    return collocation_;
  }

  /// u_n(x_j)
  double eigenfunction(std::size_t n, std::size_t j) const {
    return table_[j * n_modes_ + n];
  }

  /// u_n(x) at an arbitrary point.
  double eigenfunction_at(std::size_t n, double x) const {
    if (n == 0) return 1.0 / std::sqrt(length_);
    return std::sqrt(2.0 / length_) *
           std::cos(static_cast<double>(n) * std::numbers::pi * x / length_);
  }

  /// out_j = sum_n multiplier(n) * coeffs_n * u_n(x_j)
  template <typename Multiplier>
  void synthesize_into(std::span<const double> coeffs, std::span<double> out,
                       Multiplier&& multiplier) const {
    check_modal(coeffs.size());
    check_grid(out.size());
    std::vector<double> scaled(n_modes_);
    for (std::size_t n = 0; n < n_modes_; ++n) {
      scaled[n] = multiplier(n) * coeffs[n];
    }
    for (std::size_t j = 0; j < grid_size_; ++j) {
      const double* row = &table_[j * n_modes_];
      double acc = 0.0;
      for (std::size_t n = 0; n < n_modes_; ++n) acc += scaled[n] * row[n];
      out[j] = acc;
    }
  }

  void synthesize_into(std::span<const double> coeffs,
                       std::span<double> out) const {
    synthesize_into(coeffs, out, [](std::size_t) { return 1.0; });
  }

  std::vector<double> synthesize_values(std::span<const double> coeffs) const {
    std::vector<double> out(grid_size_);
    synthesize_into(coeffs, out);
    return out;
  }

  /// coeffs_n = (L/M) sum_j values_j u_n(x_j)
  void analyze_into(std::span<const double> values,
                    std::span<double> coeffs) const {
    check_grid(values.size());
    check_modal(coeffs.size());
    for (std::size_t n = 0; n < n_modes_; ++n) coeffs[n] = 0.0;
    for (std::size_t j = 0; j < grid_size_; ++j) {
      const double* row = &table_[j * n_modes_];
      const double v = values[j];
      for (std::size_t n = 0; n < n_modes_; ++n) coeffs[n] += v * row[n];
    }
    const double w = weight();
    for (std::size_t n = 0; n < n_modes_; ++n) coeffs[n] *= w;
  }

  std::vector<double> analyze_values(std::span<const double> values) const {
    std::vector<double> out(n_modes_);
    analyze_into(values, out);
    return out;
  }

  /// d^2/dx^2 of the synthesized field, evaluated on the grid.
  std::vector<double> second_derivative_values(
      std::span<const double> coeffs) const {
    std::vector<double> out(grid_size_);
    synthesize_into(coeffs, out, [this](std::size_t n) {
      return -lambdas_[n] * lambdas_[n];
    });
    return out;
  }

  bool same_grid(const FieldState& state) const {
    if (state.grid == collocation_) return true;
    if (!state.grid || state.grid->size() != grid_size_) return false;
    for (std::size_t j = 0; j < grid_size_; ++j) {
      if (std::abs((*state.grid)[j] - (*collocation_)[j]) >
          1e-12 * length_) {
        return false;
      }
    }
    return true;
  }

  void check_modal(std::size_t size) const {
    if (size != n_modes_) {
      throw DimensionError("expected " + std::to_string(n_modes_) +
                           " modal coefficients, got " + std::to_string(size));
    }
  }

  void check_grid(std::size_t size) const {
    if (size != grid_size_) {
      throw DimensionError("expected " + std::to_string(grid_size_) +
                           " grid samples, got " + std::to_string(size));
    }
  }

 private:
  std::size_t n_modes_;
  std::size_t grid_size_;
  double length_;
  std::vector<double> lambdas_;
  std::shared_ptr<const std::vector<double>> collocation_;
  std::vector<double> table_;
};

inline SpectralBasis build_basis(std::size_t n_modes, std::size_t grid_size,
                                 double length) {
  return SpectralBasis(n_modes, grid_size, length);
}

inline FieldState synthesize(const ModalCoefficients& coeffs,
                             const SpectralBasis& basis) {
  if (coeffs.alpha_dots.size() != coeffs.alphas.size()) {
    throw DimensionError("alphas and alpha_dots differ in length");
  }
  FieldState state;
  state.time = coeffs.time;
  state.grid = basis.grid_ptr();
  state.displacement = basis.synthesize_values(coeffs.alphas);
  state.velocity = basis.synthesize_values(coeffs.alpha_dots);
  return state;
}

inline ModalCoefficients analyze(const FieldState& state,
                                 const SpectralBasis& basis) {
  if (!basis.same_grid(state)) {
    throw DimensionError("field grid does not match the basis collocation grid");
  }
  if (state.velocity.size() != state.displacement.size()) {
    throw DimensionError("displacement and velocity differ in length");
  }
  ModalCoefficients coeffs;
  coeffs.time = state.time;
  coeffs.alphas = basis.analyze_values(state.displacement);
  coeffs.alpha_dots = basis.analyze_values(state.velocity);
  return coeffs;
}

/// lambda_n^4, the symbol of the fourth derivative on mode n.
inline double bending_multiplier(const SpectralBasis& basis, std::size_t n) {
  if (n >= basis.n_modes()) {
    throw PreconditionError("mode index " + std::to_string(n) +
                            " out of range [0, " +
                            std::to_string(basis.n_modes() - 1) + "]");
  }
  const double l2 = basis.lambda(n) * basis.lambda(n);
  return l2 * l2;
}

// Initial data constructors on a basis grid.

inline InitialData constant_initial_data(double v0, double v1,
                                         const SpectralBasis& basis) {
  return InitialData{std::vector<double>(basis.grid_size(), v0),
                     std::vector<double>(basis.grid_size(), v1)};
}

/// A term c * cos(n pi x / L) of a plain cosine series.
struct CosineTerm {
  std::size_t n = 0;
  double coefficient = 0.0;
  friend bool operator==(const CosineTerm&, const CosineTerm&) = default;
};

inline std::vector<double> cosine_series_values(
    std::span<const CosineTerm> terms, const SpectralBasis& basis) {
  std::vector<double> out(basis.grid_size(), 0.0);
  for (const auto& term : terms) {
    if (term.n >= basis.n_modes()) {
      throw ConfigError("cosine term n = " + std::to_string(term.n) +
                        " exceeds the retained modes (max " +
                        std::to_string(basis.n_modes() - 1) + ")");
    }
    for (std::size_t j = 0; j < basis.grid_size(); ++j) {
      const double x = basis.collocation()[j];
      out[j] += term.coefficient *
                std::cos(static_cast<double>(term.n) * std::numbers::pi * x /
                         basis.length());
    }
  }
  return out;
}

/// Exact modal coefficients of a plain cosine series:
/// cos(n pi x / L) = sqrt(L/2) u_n(x) for n >= 1 and 1 = sqrt(L) u_0(x).
inline std::vector<double> cosine_series_coefficients(
    std::span<const CosineTerm> terms, const SpectralBasis& basis) {
  std::vector<double> out(basis.n_modes(), 0.0);
  for (const auto& term : terms) {
    if (term.n >= basis.n_modes()) {
      throw ConfigError("cosine term n = " + std::to_string(term.n) +
                        " exceeds the retained modes (max " +
                        std::to_string(basis.n_modes() - 1) + ")");
    }
    const double scale = term.n == 0 ? std::sqrt(basis.length())
                                     : std::sqrt(0.5 * basis.length());
    out[term.n] += scale * term.coefficient;
  }
  return out;
}

inline InitialData cosine_series_initial_data(
    std::span<const CosineTerm> displacement,
    std::span<const CosineTerm> velocity, const SpectralBasis& basis) {
  return InitialData{cosine_series_values(displacement, basis),
                     cosine_series_values(velocity, basis)};
}

inline ModalCoefficients analyze(const InitialData& init,
                                 const SpectralBasis& basis) {
  init.validate(basis.grid_size());
  ModalCoefficients coeffs;
  coeffs.alphas = basis.analyze_values(init.displacement);
  coeffs.alpha_dots = basis.analyze_values(init.velocity);
  return coeffs;
}

}  // namespace adbeam
