#pragma once

#include <span>
#include <vector>

#include "adbeam/beam_core.hpp"
#include "adbeam/spectral_basis.hpp"

namespace adbeam {

/// Energy from modal coefficients plus the displacement samples they
/// synthesize to. Kinetic and bending parts are evaluated mode by mode;
/// the adhesion integral uses midpoint quadrature on the grid because Φ(u)
/// is not band-limited.
inline EnergyReport energy_from_modes(const ModalCoefficients& modal,
                                      std::span<const double> displacement,
                                      const BeamParams& params,
                                      const SpectralBasis& basis) {
  basis.check_modal(modal.alphas.size());
  basis.check_modal(modal.alpha_dots.size());
  basis.check_grid(displacement.size());

  EnergyReport report;
  report.time = modal.time;
  report.mode_energy.resize(basis.n_modes());
  const double k1sq = params.kappa1 * params.kappa1;
  for (std::size_t n = 0; n < basis.n_modes(); ++n) {
    const double a = modal.alphas[n];
    const double ad = modal.alpha_dots[n];
    const double kin = 0.5 * ad * ad;
    const double bend = 0.5 * k1sq * bending_multiplier(basis, n) * a * a;
    report.kinetic += kin;
    report.bending += bend;
    report.mode_energy[n] = kin + bend;
  }
  const AdhesionLaw law = AdhesionLaw::from(params);
  double adh = 0.0;
  for (double u : displacement) adh += adhesion_potential(u, law);
  report.adhesion = adh * basis.weight();
  report.total = report.kinetic + report.bending + report.adhesion;
  return report;
}

inline EnergyReport energy_of_field(const FieldState& state,
                                    const BeamParams& params,
                                    const SpectralBasis& basis) {
  const ModalCoefficients modal = analyze(state, basis);
  return energy_from_modes(modal, state.displacement, params, basis);
}

}  // namespace adbeam
