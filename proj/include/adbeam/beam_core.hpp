#pragma once

// Physical constants, the breakable adhesion law and the field containers
// shared by every solver.

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "adbeam/errors.hpp"

namespace adbeam {

struct BeamParams {
  double kappa1 = 1.0;  ///< flexural stiffness
  double kappa2 = 1.0;  ///< adhesion stiffness
  double length = 1.0;  ///< beam occupies [0, length]

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!std::isfinite(v) || !(v > 0.0)) {
        throw ConfigError(std::string(name) + " must be a finite value > 0");
      }
    };
    positive(kappa1, "kappa1");
    positive(kappa2, "kappa2");
    positive(length, "length");
  }

  friend bool operator==(const BeamParams&, const BeamParams&) = default;
};

enum class BoundaryConvention { ClosedAttached };

/// Piecewise adhesion law: quadratic well for |u| <= 1, flat plateau above.
/// The threshold is fixed at 1.
struct AdhesionLaw {
  static constexpr double threshold = 1.0;
  double kappa2 = 1.0;
  BoundaryConvention convention = BoundaryConvention::ClosedAttached;

  static AdhesionLaw from(const BeamParams& params) {
    return AdhesionLaw{params.kappa2, BoundaryConvention::ClosedAttached};
  }
};

/// Φ'(u). At |u| == 1 the attached branch is selected.
inline double adhesion_force(double u, const AdhesionLaw& law) {
  return std::abs(u) <= AdhesionLaw::threshold ? law.kappa2 * law.kappa2 * u
                                               : 0.0;
}

/// Φ(u), continuous everywhere.
inline double adhesion_potential(double u, const AdhesionLaw& law) {
  const double k2 = law.kappa2 * law.kappa2;
  return std::abs(u) <= AdhesionLaw::threshold ? 0.5 * k2 * u * u : 0.5 * k2;
}

enum class Regime { Attached, Detached, Mixed };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Attached:
      return "attached";
    case Regime::Detached:
      return "detached";
    case Regime::Mixed:
      return "mixed";
  }
  return "?";
}

/// Displacement and velocity sampled at the collocation points at one time.
/// The grid is shared with the basis that produced it.
struct FieldState {
  double time = 0.0;
  std::vector<double> displacement;
  std::vector<double> velocity;
  std::shared_ptr<const std::vector<double>> grid;

  std::size_t size() const { return displacement.size(); }
};

/// Initial displacement v0 and velocity v1 sampled on a collocation grid.
struct InitialData {
  std::vector<double> displacement;
  std::vector<double> velocity;

  void validate(std::size_t grid_size) const {
    if (displacement.size() != velocity.size()) {
      throw DimensionError("initial displacement and velocity differ in length");
    }
    if (displacement.size() != grid_size) {
      throw DimensionError("initial data has " +
                           std::to_string(displacement.size()) +
                           " samples, grid has " + std::to_string(grid_size));
    }
    for (std::size_t j = 0; j < displacement.size(); ++j) {
      if (!std::isfinite(displacement[j]) || !std::isfinite(velocity[j])) {
        throw ConfigError("initial data contains non-finite samples");
      }
    }
  }
};

/// Kinetic, bending and adhesion parts of the beam energy, plus the
/// mechanical energy carried by each cosine mode.
struct EnergyReport {
  double time = 0.0;
  double kinetic = 0.0;
  double bending = 0.0;
  double adhesion = 0.0;
  double total = 0.0;
  std::vector<double> mode_energy;
};

}  // namespace adbeam
