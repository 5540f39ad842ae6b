#pragma once

// Exact modal solutions in the two uniform regimes, the C1 matching at a
// regime transition, and an event-driven solver stitching them together.
//
// Attached (|u| < 1):  alpha_n = A_n cos(omega_n t + phi_n),
//                      omega_n^2 = kappa1^2 lambda_n^4 + kappa2^2
// Detached (|u| > 1):  alpha_0 = C0 + C1 t,
//                      alpha_n = B_n cos(nu_n t + psi_n), nu_n = kappa1 lambda_n^2

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "adbeam/beam_core.hpp"
#include "adbeam/errors.hpp"
#include "adbeam/spectral_basis.hpp"
#include "adbeam/trajectory.hpp"

namespace adbeam {

/// Maps an angle to (-pi, pi].
inline double wrap_phase(double theta) {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(theta, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

struct AttachedModalForm {
  std::vector<double> amplitudes;
  std::vector<double> phases;
  std::vector<double> frequencies;

  std::size_t size() const { return amplitudes.size(); }
};

/// Index 0 of amplitudes/phases/frequencies is unused (the constant mode is
/// carried by c0 and c1) and kept at zero.
struct DetachedModalForm {
  double c0 = 0.0;
  double c1 = 0.0;
  std::vector<double> amplitudes;
  std::vector<double> phases;
  std::vector<double> frequencies;

  std::size_t size() const { return amplitudes.size(); }
};

inline std::vector<double> attached_frequencies(const BeamParams& params,
                                                const SpectralBasis& basis) {
  std::vector<double> omega(basis.n_modes());
  const double k1sq = params.kappa1 * params.kappa1;
  const double k2sq = params.kappa2 * params.kappa2;
  for (std::size_t n = 0; n < omega.size(); ++n) {
    omega[n] = std::sqrt(k1sq * bending_multiplier(basis, n) + k2sq);
  }
  return omega;
}

inline std::vector<double> detached_frequencies(const BeamParams& params,
                                                const SpectralBasis& basis) {
  std::vector<double> nu(basis.n_modes());
  for (std::size_t n = 0; n < nu.size(); ++n) {
    nu[n] = std::abs(params.kappa1) * basis.lambda(n) * basis.lambda(n);
  }
  return nu;
}

namespace detail {

// Canonical (amplitude >= 0, phase in (-pi, pi]) oscillator through
// alpha(t0) = a, alpha'(t0) = a_dot.
inline void fit_oscillator(double a, double a_dot, double freq, double t0,
                           double& amplitude, double& phase) {
  const double q = a_dot / freq;
  amplitude = std::hypot(a, q);
  phase = amplitude > 0.0 ? wrap_phase(std::atan2(-q, a) - freq * t0) : 0.0;
}

// Modes whose amplitude sits at round-off level relative to the largest are
// zeroed so that exact-arithmetic zeros (e.g. higher modes of constant data)
// stay exact.
inline void drop_roundoff(std::vector<double>& amplitudes,
                          std::vector<double>& phases, double scale) {
  const double floor = 1e-13 * scale;
  for (std::size_t n = 0; n < amplitudes.size(); ++n) {
    if (amplitudes[n] <= floor) {
      amplitudes[n] = 0.0;
      phases[n] = 0.0;
    }
  }
}

}  // namespace detail

/// Attached form through the modal state at time modal.time.
inline AttachedModalForm attached_form_from(const ModalCoefficients& modal,
                                            const BeamParams& params,
                                            const SpectralBasis& basis) {
  basis.check_modal(modal.alphas.size());
  basis.check_modal(modal.alpha_dots.size());
  AttachedModalForm form;
  form.frequencies = attached_frequencies(params, basis);
  form.amplitudes.resize(basis.n_modes());
  form.phases.resize(basis.n_modes());
  double scale = 0.0;
  for (std::size_t n = 0; n < basis.n_modes(); ++n) {
    detail::fit_oscillator(modal.alphas[n], modal.alpha_dots[n],
                           form.frequencies[n], modal.time, form.amplitudes[n],
                           form.phases[n]);
    scale = std::max(scale, form.amplitudes[n]);
  }
  detail::drop_roundoff(form.amplitudes, form.phases, scale);
  return form;
}

/// Detached form through the modal state at time modal.time.
inline DetachedModalForm detached_form_from(const ModalCoefficients& modal,
                                            const BeamParams& params,
                                            const SpectralBasis& basis) {
  basis.check_modal(modal.alphas.size());
  basis.check_modal(modal.alpha_dots.size());
  DetachedModalForm form;
  form.frequencies = detached_frequencies(params, basis);
  form.amplitudes.assign(basis.n_modes(), 0.0);
  form.phases.assign(basis.n_modes(), 0.0);
  form.c1 = modal.alpha_dots[0];
  form.c0 = modal.alphas[0] - form.c1 * modal.time;
  double scale = std::hypot(modal.alphas[0], modal.alpha_dots[0]);
  for (std::size_t n = 1; n < basis.n_modes(); ++n) {
    detail::fit_oscillator(modal.alphas[n], modal.alpha_dots[n],
                           form.frequencies[n], modal.time, form.amplitudes[n],
                           form.phases[n]);
    scale = std::max(scale, form.amplitudes[n]);
  }
  detail::drop_roundoff(form.amplitudes, form.phases, scale);
  return form;
}

inline ModalCoefficients attached_evolve(const AttachedModalForm& form,
                                         double t) {
  ModalCoefficients out;
  out.time = t;
  out.alphas.resize(form.size());
  out.alpha_dots.resize(form.size());
  for (std::size_t n = 0; n < form.size(); ++n) {
    const double arg = form.frequencies[n] * t + form.phases[n];
    out.alphas[n] = form.amplitudes[n] * std::cos(arg);
    out.alpha_dots[n] = -form.amplitudes[n] * form.frequencies[n] * std::sin(arg);
  }
  return out;
}

inline ModalCoefficients detached_evolve(const DetachedModalForm& form,
                                         double t) {
  ModalCoefficients out;
  out.time = t;
  const std::size_t size = std::max<std::size_t>(form.size(), 1);
  out.alphas.assign(size, 0.0);
  out.alpha_dots.assign(size, 0.0);
  out.alphas[0] = form.c0 + form.c1 * t;
  out.alpha_dots[0] = form.c1;
  for (std::size_t n = 1; n < form.size(); ++n) {
    const double arg = form.frequencies[n] * t + form.phases[n];
    out.alphas[n] = form.amplitudes[n] * std::cos(arg);
    out.alpha_dots[n] = -form.amplitudes[n] * form.frequencies[n] * std::sin(arg);
  }
  return out;
}

/// sum_n A_n^2 omega_n^2 / 2
inline double attached_energy(const AttachedModalForm& form) {
  double e = 0.0;
  for (std::size_t n = 0; n < form.size(); ++n) {
    const double aw = form.amplitudes[n] * form.frequencies[n];
    e += 0.5 * aw * aw;
  }
  return e;
}

/// L kappa2^2 / 2 + C1^2 / 2 + sum_{n>=1} B_n^2 nu_n^2 / 2
inline double detached_energy(const DetachedModalForm& form,
                              const BeamParams& params) {
  double e = 0.5 * params.length * params.kappa2 * params.kappa2 +
             0.5 * form.c1 * form.c1;
  for (std::size_t n = 1; n < form.size(); ++n) {
    const double bn = form.amplitudes[n] * form.frequencies[n];
    e += 0.5 * bn * bn;
  }
  return e;
}

enum class ScenarioClass {
  NeverDetaches,
  TransitionsToConstantDetached,
  StationaryEdgeCase
};

inline const char* to_string(ScenarioClass s) {
  switch (s) {
    case ScenarioClass::NeverDetaches:
      return "never_detaches";
    case ScenarioClass::TransitionsToConstantDetached:
      return "transitions_to_constant_detached";
    case ScenarioClass::StationaryEdgeCase:
      return "stationary_edge_case";
  }
  return "?";
}

/// Mode-0 attached form for spatially constant data u = v0, u_t = v1.
inline AttachedModalForm constant_data_form(double v0, double v1,
                                            const BeamParams& params,
                                            std::size_t n_modes = 1) {
  const double sqrt_l = std::sqrt(params.length);
  AttachedModalForm form;
  form.amplitudes.assign(n_modes, 0.0);
  form.phases.assign(n_modes, 0.0);
  form.frequencies.resize(n_modes);
  const double k1sq = params.kappa1 * params.kappa1;
  const double k2sq = params.kappa2 * params.kappa2;
  for (std::size_t n = 0; n < n_modes; ++n) {
    const double lam = static_cast<double>(n) * std::numbers::pi / params.length;
    form.frequencies[n] = std::sqrt(k1sq * lam * lam * lam * lam + k2sq);
  }
  detail::fit_oscillator(v0 * sqrt_l, v1 * sqrt_l, params.kappa2, 0.0,
                         form.amplitudes[0], form.phases[0]);
  return form;
}

/// Which of the three constant-data scenarios applies. Requires |v0| < 1.
inline ScenarioClass classify_scenario(double v0, double v1,
                                       const BeamParams& params) {
  params.validate();
  if (!(std::abs(v0) < 1.0)) {
    throw PreconditionError("classify_scenario requires |v0| < 1");
  }
  // A0 / sqrt(L) = hypot(v0, v1 / kappa2); compare without forming sqrt(L).
  const double ratio = std::hypot(v0, v1 / params.kappa2);
  if (ratio < 1.0) return ScenarioClass::NeverDetaches;
  if (v1 != 0.0) return ScenarioClass::TransitionsToConstantDetached;
  return ScenarioClass::StationaryEdgeCase;
}

struct TransitionRecord {
  double t_bar = 0.0;
  Direction direction = Direction::Debond;
  AttachedModalForm attached;  ///< form on the attached side of t_bar
  DetachedModalForm detached;  ///< form on the detached side of t_bar
  double c1_identity_residual = 0.0;  ///< |C1^2 - kappa2^2 (A0^2 - L)|
};

inline double c1_identity_residual(double c1, double a0,
                                   const BeamParams& params) {
  const double k2sq = params.kappa2 * params.kappa2;
  return std::abs(c1 * c1 - k2sq * (a0 * a0 - params.length));
}

/// First time |alpha_0| reaches sqrt(L) for a mode-0 attached form, and the
/// detached form obtained by matching alpha_0 and its derivative there.
inline TransitionRecord match_transition(const AttachedModalForm& form,
                                         const BeamParams& params) {
  params.validate();
  if (form.size() == 0) throw DimensionError("empty attached form");
  for (std::size_t n = 1; n < form.size(); ++n) {
    if (form.amplitudes[n] != 0.0) {
      throw PreconditionError(
          "match_transition needs constant data (only mode 0 nonzero)");
    }
  }
  const double a0 = std::abs(form.amplitudes[0]);
  const double sqrt_l = std::sqrt(params.length);
  if (a0 < sqrt_l) {
    throw NoCrossingError("A0 = " + std::to_string(a0) + " < sqrt(L) = " +
                          std::to_string(sqrt_l) +
                          ": the threshold is never reached");
  }
  const double omega = form.frequencies[0];
  const double phi = form.amplitudes[0] >= 0.0
                         ? form.phases[0]
                         : form.phases[0] + std::numbers::pi;
  constexpr double pi = std::numbers::pi;

  // |cos(theta)| = sqrt(L)/A0  <=>  theta = +-c (mod pi).
  const double c = std::acos(std::min(1.0, sqrt_l / a0));
  double t_bar = std::numeric_limits<double>::infinity();
  for (double s : {c, -c}) {
    double k = std::ceil((phi - s) / pi);
    double t = (s + k * pi - phi) / omega;
    if (t < 0.0) t += pi / omega;
    // ceil can overshoot by one period when phi - s is an exact multiple.
    if (t - pi / omega >= 0.0) t -= pi / omega;
    t_bar = std::min(t_bar, t);
  }

  const double arg = omega * t_bar + phi;
  const double value = a0 * std::cos(arg);
  const double c1 = -a0 * omega * std::sin(arg);

  TransitionRecord rec;
  rec.t_bar = t_bar;
  rec.direction = Direction::Debond;
  rec.attached = form;
  rec.detached.c1 = c1;
  rec.detached.c0 = value - c1 * t_bar;
  rec.detached.amplitudes.assign(form.size(), 0.0);
  rec.detached.phases.assign(form.size(), 0.0);
  rec.detached.frequencies.assign(form.size(), 0.0);
  for (std::size_t n = 1; n < form.size(); ++n) {
    const double lam = static_cast<double>(n) * pi / params.length;
    rec.detached.frequencies[n] = std::abs(params.kappa1) * lam * lam;
  }
  rec.c1_identity_residual = c1_identity_residual(c1, a0, params);
  return rec;
}

struct CorollaryReport {
  double energy_residual = 0.0;
  bool c1_bound_ok = false;
  double cutoff_sum = 0.0;
  double cutoff_bound = 0.0;
  bool cutoff_ok = false;
};

/// kappa2^2 (a0^2 - L) L^4 / (pi^4 kappa1^2)
inline double cutoff_bound(double a0, const BeamParams& params) {
  const double l2 = params.length * params.length;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return params.kappa2 * params.kappa2 * (a0 * a0 - params.length) * l2 * l2 /
         (pi2 * pi2 * params.kappa1 * params.kappa1);
}

/// Energy balance and the two bounds a dissipative detached continuation of
/// constant data with mode-0 amplitude a0 has to satisfy.
inline CorollaryReport corollary_bounds_check(const DetachedModalForm& candidate,
                                              double a0,
                                              const BeamParams& params) {
  params.validate();
  if (!(a0 >= std::sqrt(params.length))) {
    throw PreconditionError("corollary_bounds_check requires a0 >= sqrt(L)");
  }
  const double k2sq = params.kappa2 * params.kappa2;
  CorollaryReport r;
  r.energy_residual = detached_energy(candidate, params) - 0.5 * a0 * a0 * k2sq;

  // Comparisons carry a few ulps of slack so that a non-positive energy
  // residual always implies both flags despite rounding.
  constexpr double slack = 1e-14;
  const double c1_limit = params.kappa2 * std::sqrt(a0 * a0 - params.length);
  r.c1_bound_ok = std::abs(candidate.c1) <= c1_limit * (1.0 + slack) + slack * std::abs(candidate.c1);

  for (std::size_t n = 1; n < candidate.size(); ++n) {
    const double n2 = static_cast<double>(n * n);
    r.cutoff_sum += candidate.amplitudes[n] * candidate.amplitudes[n] * n2 * n2;
  }
  r.cutoff_bound = cutoff_bound(a0, params);
  r.cutoff_ok = r.cutoff_sum <= r.cutoff_bound * (1.0 + slack) + slack * r.cutoff_sum;
  return r;
}

struct RegimeTrajectory {
  std::vector<SimState> samples;
  std::vector<Regime> regimes;
  std::vector<TransitionRecord> events;
};

namespace detail {

struct Phase {
  double t_begin = 0.0;
  Regime regime = Regime::Attached;
  AttachedModalForm attached;
  DetachedModalForm detached;

  ModalCoefficients at(double t) const {
    return regime == Regime::Attached ? attached_evolve(attached, t)
                                      : detached_evolve(detached, t);
  }

  double fastest_frequency(double fallback) const {
    double w = 0.0;
    if (regime == Regime::Attached) {
      for (std::size_t n = 0; n < attached.size(); ++n) {
        if (attached.amplitudes[n] > 0.0) w = std::max(w, attached.frequencies[n]);
      }
    } else {
      for (std::size_t n = 1; n < detached.size(); ++n) {
        if (detached.amplitudes[n] > 0.0) w = std::max(w, detached.frequencies[n]);
      }
    }
    return w > 0.0 ? w : fallback;
  }
};

struct Extremes {
  double min_abs = 0.0;
  double max_abs = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
};

inline Extremes extremes(const std::vector<double>& u) {
  Extremes e;
  e.min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double a = std::abs(u[j]);
    if (a < e.min_abs) {
      e.min_abs = a;
      e.argmin = j;
    }
    if (a > e.max_abs) {
      e.max_abs = a;
      e.argmax = j;
    }
  }
  return e;
}

}  // namespace detail

/// Evolves initial data with the closed forms, switching form whenever the
/// whole field crosses the threshold. Crossings are located by sampling at
/// min(sample_dt, period_min / 64), bisection to 1e-10 / kappa2 and a final
/// Newton polish on the extremal grid point. The new form matches u and u_t
/// at the crossing. A field that is partly attached and partly detached
/// raises MixedRegimeError.
inline RegimeTrajectory regime_exact_solve(const InitialData& init,
                                           const BeamParams& params,
                                           const SpectralBasis& basis,
                                           double t_final, double sample_dt) {
  params.validate();
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw ConfigError("t_final must be a finite value >= 0");
  }
  if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) {
    throw ConfigError("sample_dt must be a finite value > 0");
  }
  if (std::abs(params.length - basis.length()) > 1e-12 * params.length) {
    throw DimensionError("basis length differs from params.length");
  }
  constexpr double threshold = AdhesionLaw::threshold;
  constexpr double mixed_tolerance = 1e-8;

  ModalCoefficients modal0 = analyze(init, basis);
  modal0.time = 0.0;
  const auto u0 = detail::extremes(basis.synthesize_values(modal0.alphas));

  std::vector<detail::Phase> phases;
  detail::Phase first;
  first.t_begin = 0.0;
  if (u0.max_abs <= threshold) {
    first.regime = Regime::Attached;
    first.attached = attached_form_from(modal0, params, basis);
  } else if (u0.min_abs > threshold) {
    first.regime = Regime::Detached;
    first.detached = detached_form_from(modal0, params, basis);
  } else {
    throw MixedRegimeError(
        "initial data is partly attached and partly detached", 0.0);
  }
  phases.push_back(std::move(first));

  RegimeTrajectory out;
  const double bisect_tol = 1e-10 / params.kappa2;
  const double two_pi = 2.0 * std::numbers::pi;

  auto displacement = [&](const detail::Phase& p, double t) {
    return basis.synthesize_values(p.at(t).alphas);
  };
  // True once the phase's regime has been left.
  auto crossed = [&](const detail::Phase& p, double t) {
    const auto e = detail::extremes(displacement(p, t));
    return p.regime == Regime::Attached ? e.max_abs > threshold
                                        : e.min_abs < threshold;
  };

  double t = 0.0;
  while (t < t_final) {
    const detail::Phase& phase = phases.back();
    const double w = phase.fastest_frequency(params.kappa2);
    const double h = std::min(sample_dt, two_pi / w / 64.0);
    const double t_next = std::min(t + h, t_final);
    if (!crossed(phase, t_next)) {
      t = t_next;
      continue;
    }
    double lo = t;
    double hi = t_next;
    while (hi - lo > bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (crossed(phase, mid) ? hi : lo) = mid;
    }
    // Newton polish of |u_j(t)| = 1 on the extremal grid point.
    const auto e = detail::extremes(displacement(phase, hi));
    const std::size_t j = phase.regime == Regime::Attached ? e.argmax : e.argmin;
    double tc = hi;
    for (int it = 0; it < 4; ++it) {
      const ModalCoefficients m = phase.at(tc);
      double u = 0.0;
      double v = 0.0;
      for (std::size_t n = 0; n < basis.n_modes(); ++n) {
        u += m.alphas[n] * basis.eigenfunction(n, j);
        v += m.alpha_dots[n] * basis.eigenfunction(n, j);
      }
      const double slope = (u >= 0.0 ? v : -v);
      if (slope == 0.0) break;
      const double step = (std::abs(u) - threshold) / slope;
      if (!std::isfinite(step) || std::abs(step) > (hi - lo) + bisect_tol) break;
      tc -= step;
    }

    const ModalCoefficients at_cross = phase.at(tc);
    const auto ex = detail::extremes(basis.synthesize_values(at_cross.alphas));
    if (ex.max_abs - ex.min_abs > 2.0 * mixed_tolerance) {
      throw MixedRegimeError(
          "field is partly attached and partly detached at t = " +
              std::to_string(tc) + " (min |u| = " + std::to_string(ex.min_abs) +
              ", max |u| = " + std::to_string(ex.max_abs) + ")",
          tc);
    }

    detail::Phase next;
    next.t_begin = tc;
    TransitionRecord rec;
    rec.t_bar = tc;
    if (phase.regime == Regime::Attached) {
      next.regime = Regime::Detached;
      next.detached = detached_form_from(at_cross, params, basis);
      rec.direction = Direction::Debond;
      rec.attached = phase.attached;
      rec.detached = next.detached;
    } else {
      next.regime = Regime::Attached;
      next.attached = attached_form_from(at_cross, params, basis);
      rec.direction = Direction::Rebond;
      rec.attached = next.attached;
      rec.detached = phase.detached;
    }
    rec.c1_identity_residual = c1_identity_residual(
        rec.detached.c1, rec.attached.amplitudes[0], params);
    out.events.push_back(std::move(rec));
    phases.push_back(std::move(next));
    t = tc;
    // Step off the crossing so the new phase is not re-triggered at tc.
    if (t_final - t > 0.0) {
      const double w2 = phases.back().fastest_frequency(params.kappa2);
      const double h2 = std::min(sample_dt, two_pi / w2 / 64.0);
      const double probe = std::min(t + h2, t_final);
      if (crossed(phases.back(), probe)) {
        throw MixedRegimeError(
            "solution re-crosses the threshold immediately after t = " +
                std::to_string(tc),
            tc);
      }
      t = probe;
    }
  }

  // Output samples on the uniform grid plus one sample at each crossing.
  std::vector<double> times;
  const auto n_samples = static_cast<std::size_t>(
      std::floor(t_final / sample_dt * (1.0 + 1e-12)));
  for (std::size_t k = 0; k <= n_samples; ++k) {
    times.push_back(static_cast<double>(k) * sample_dt);
  }
  if (times.back() < t_final) times.push_back(t_final);
  for (std::size_t p = 1; p < phases.size(); ++p) {
    times.push_back(phases[p].t_begin);
  }
  std::sort(times.begin(), times.end());

  std::size_t p = 0;
  for (double ts : times) {
    while (p + 1 < phases.size() && phases[p + 1].t_begin <= ts) ++p;
    out.samples.push_back(make_state(phases[p].at(ts), basis));
    out.regimes.push_back(phases[p].regime);
  }
  return out;
}

}  // namespace adbeam
