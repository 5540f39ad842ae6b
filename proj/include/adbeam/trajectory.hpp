#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "adbeam/beam_core.hpp"
#include "adbeam/spectral_basis.hpp"

namespace adbeam {

/// Field samples together with the modal coefficients they come from.
/// The modal view is primary: field == synthesize(modal).
struct SimState {
  FieldState field;
  ModalCoefficients modal;
  std::size_t step_index = 0;

  double time() const { return modal.time; }
};

inline SimState make_state(ModalCoefficients modal, const SpectralBasis& basis,
                           std::size_t step_index = 0) {
  SimState s;
  s.field = synthesize(modal, basis);
  s.modal = std::move(modal);
  s.step_index = step_index;
  return s;
}

enum class Direction { Debond, Rebond };

inline const char* to_string(Direction d) {
  return d == Direction::Debond ? "debond" : "rebond";
}

/// Attached if every sample is below 1 - tolerance, detached if every sample
/// is above 1 + tolerance, mixed otherwise.
inline Regime detect_regime(const FieldState& state, double tolerance) {
  if (tolerance < 0.0) throw PreconditionError("tolerance must be >= 0");
  if (state.displacement.empty()) throw DimensionError("empty field");
  double lo = std::abs(state.displacement.front());
  double hi = lo;
  for (double u : state.displacement) {
    const double a = std::abs(u);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (hi < AdhesionLaw::threshold - tolerance) return Regime::Attached;
  if (lo > AdhesionLaw::threshold + tolerance) return Regime::Detached;
  return Regime::Mixed;
}

}  // namespace adbeam
