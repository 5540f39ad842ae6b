#pragma once

// Measurements on trajectories: how energy spreads over the cosine modes,
// how fast the detached amplitudes decay, and whether the velocity field
// jumps across a transition.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "adbeam/beam_core.hpp"
#include "adbeam/closed_form.hpp"
#include "adbeam/energy.hpp"
#include "adbeam/errors.hpp"
#include "adbeam/spectral_basis.hpp"
#include "adbeam/time_integrator.hpp"
#include "adbeam/trajectory.hpp"

namespace adbeam {

struct SpectrumReport {
  double time = 0.0;
  std::vector<double> mode_energies;
  double adhesion_energy = 0.0;
  double high_mode_fraction = 0.0;  ///< modes n >= n_split over all modes
};

inline SpectrumReport modal_energy_spectrum(const SimState& state,
                                            const BeamParams& params,
                                            const SpectralBasis& basis,
                                            std::size_t n_split = 1) {
  if (n_split < 1 || n_split >= basis.n_modes()) {
    throw PreconditionError("n_split must lie in [1, " +
                            std::to_string(basis.n_modes() - 1) + "]");
  }
  const EnergyReport e =
      energy_from_modes(state.modal, state.field.displacement, params, basis);
  SpectrumReport r;
  r.time = state.time();
  r.mode_energies = e.mode_energy;
  r.adhesion_energy = e.adhesion;
  double all = 0.0;
  double high = 0.0;
  for (std::size_t n = 0; n < r.mode_energies.size(); ++n) {
    all += r.mode_energies[n];
    if (n >= n_split) high += r.mode_energies[n];
  }
  r.high_mode_fraction = all > 0.0 ? high / all : 0.0;
  return r;
}

struct ModeBand {
  std::size_t first = 2;
  std::size_t last = 2;
};

/// Excludes n = 1 and the top octave of retained modes.
inline ModeBand default_decay_band(const SpectralBasis& basis) {
  const std::size_t top = basis.n_modes() - 1;
  if (top < 4) return ModeBand{1, std::max<std::size_t>(top, 1)};
  return ModeBand{2, top / 2};
}

struct DecayFitReport {
  std::vector<double> amplitudes;  ///< B_n, index 0 unused
  double cutoff_sum = 0.0;         ///< sum_{n>=1} B_n^2 n^4
  double cutoff_bound = 0.0;
  std::optional<double> slope;     ///< log B_n vs log n over the band
  ModeBand band;
};

/// Reads detached amplitudes B_n = sqrt(alpha_n^2 + (alpha_dot_n / nu_n)^2)
/// off a modal state and fits their power-law decay.
inline DecayFitReport spectral_decay_fit(const ModalCoefficients& modal,
                                         const BeamParams& params,
                                         const SpectralBasis& basis, double a0,
                                         ModeBand band) {
  basis.check_modal(modal.alphas.size());
  basis.check_modal(modal.alpha_dots.size());
  const std::size_t top = basis.n_modes() - 1;
  if (band.first < 1 || band.last > top || band.first > band.last) {
    throw PreconditionError("decay band must satisfy 1 <= first <= last <= " +
                            std::to_string(top));
  }
  DecayFitReport r;
  r.band = band;
  r.amplitudes.assign(basis.n_modes(), 0.0);
  const auto nu = detached_frequencies(params, basis);
  for (std::size_t n = 1; n <= top; ++n) {
    const double b = std::hypot(modal.alphas[n], modal.alpha_dots[n] / nu[n]);
    r.amplitudes[n] = b;
    const double n2 = static_cast<double>(n * n);
    r.cutoff_sum += b * b * n2 * n2;
  }
  r.cutoff_bound = cutoff_bound(a0, params);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t n = band.first; n <= band.last; ++n) {
    if (!(r.amplitudes[n] > 0.0)) continue;
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(r.amplitudes[n]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count >= 2) {
    const double c = static_cast<double>(count);
    const double denom = c * sxx - sx * sx;
    if (denom > 0.0) r.slope = (c * sxy - sx * sy) / denom;
  }
  return r;
}

namespace detail {

// Derivative at t of the quadratic through three (time, samples) pairs.
inline std::vector<double> quadratic_derivative(const SimState& a,
                                                const SimState& b,
                                                const SimState& c, double t) {
  const double ta = a.time(), tb = b.time(), tc = c.time();
  const double da = ((t - tb) + (t - tc)) / ((ta - tb) * (ta - tc));
  const double db = ((t - ta) + (t - tc)) / ((tb - ta) * (tb - tc));
  const double dc = ((t - ta) + (t - tb)) / ((tc - ta) * (tc - tb));
  const auto& ua = a.field.displacement;
  const auto& ub = b.field.displacement;
  const auto& uc = c.field.displacement;
  std::vector<double> v(ua.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = da * ua[j] + db * ub[j] + dc * uc[j];
  }
  return v;
}

// Three snapshots spread over [lo, hi]: the endpoints-most and the one
// nearest the middle.
inline std::optional<std::array<std::size_t, 3>> pick_three(
    const std::vector<SimState>& snaps, double lo, double hi) {
  std::vector<std::size_t> inside;
  const double eps = 1e-12 * std::max(1.0, std::abs(hi));
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const double t = snaps[k].time();
    if (t >= lo - eps && t <= hi + eps) inside.push_back(k);
  }
  if (inside.size() < 3) return std::nullopt;
  const std::size_t first = inside.front();
  const std::size_t last = inside.back();
  const double mid = 0.5 * (snaps[first].time() + snaps[last].time());
  std::size_t best = inside[1];
  for (std::size_t i = 1; i + 1 < inside.size(); ++i) {
    if (std::abs(snaps[inside[i]].time() - mid) <
        std::abs(snaps[best].time() - mid)) {
      best = inside[i];
    }
  }
  if (snaps[first].time() == snaps[best].time() ||
      snaps[best].time() == snaps[last].time()) {
    return std::nullopt;
  }
  return std::array<std::size_t, 3>{first, best, last};
}

}  // namespace detail

/// Relative L2 jump between the left and right one-sided velocity
/// reconstructions at event_time. Each side fits a quadratic in time through
/// three snapshots of [event_time - window, event_time] (resp.
/// [event_time, event_time + window]) and differentiates it at event_time.
inline double c1_indicator(const std::vector<SimState>& snapshots,
                           double event_time, double window) {
  if (!(window > 0.0)) throw PreconditionError("window must be > 0");
  if (snapshots.empty() || event_time - window < snapshots.front().time() - 1e-12 ||
      event_time + window > snapshots.back().time() + 1e-12) {
    throw PreconditionError("event_time +- window must lie inside the trajectory");
  }
  const auto left = detail::pick_three(snapshots, event_time - window, event_time);
  const auto right = detail::pick_three(snapshots, event_time, event_time + window);
  if (!left || !right) {
    throw PreconditionError(
        "c1_indicator needs three snapshots on each side of the event within "
        "the window");
  }
  const auto vl = detail::quadratic_derivative(
      snapshots[(*left)[0]], snapshots[(*left)[1]], snapshots[(*left)[2]], event_time);
  const auto vr = detail::quadratic_derivative(
      snapshots[(*right)[0]], snapshots[(*right)[1]], snapshots[(*right)[2]], event_time);
  double diff = 0.0, nl = 0.0, nr = 0.0;
  for (std::size_t j = 0; j < vl.size(); ++j) {
    diff += (vr[j] - vl[j]) * (vr[j] - vl[j]);
    nl += vl[j] * vl[j];
    nr += vr[j] * vr[j];
  }
  const double norm = std::sqrt(std::max(nl, nr));
  return norm > 0.0 ? std::sqrt(diff) / norm : 0.0;
}

inline double c1_indicator(const std::vector<SimState>& snapshots,
                           const CrossingEvent& event, double window) {
  return c1_indicator(snapshots, event.time, window);
}

}  // namespace adbeam
