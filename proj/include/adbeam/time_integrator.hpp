#pragma once

// Strang splitting for u_tt = -kappa1^2 u_xxxx - Φ'(u):
//   half kick   v <- v - dt/2 Φ'(u)          (pointwise on the grid)
//   drift       exact biharmonic flow over dt (mode by mode)
//   half kick   v <- v - dt/2 Φ'(u)
// The drift is exact for every dt, so in a fully detached state (Φ' = 0)
// the scheme reproduces the closed form up to round-off.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "adbeam/beam_core.hpp"
#include "adbeam/energy.hpp"
#include "adbeam/errors.hpp"
#include "adbeam/spectral_basis.hpp"
#include "adbeam/trajectory.hpp"

namespace adbeam {

struct StepperConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  bool crossing_refinement = true;
  std::size_t snapshot_stride = 1;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw ConfigError("dt must be a finite value > 0");
    }
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
      throw ConfigError("t_final must be a finite value > 0");
    }
    if (dt > t_final) throw ConfigError("dt <= t_final violated");
    if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
  }

  friend bool operator==(const StepperConfig&, const StepperConfig&) = default;
};

/// min(1e-3, 0.1 / nu_N) with nu_N the fastest retained bending frequency.
inline double default_dt(const BeamParams& params, const SpectralBasis& basis) {
  const double lam = basis.lambda(basis.n_modes() - 1);
  const double nu_max = params.kappa1 * lam * lam;
  return nu_max > 0.0 ? std::min(1e-3, 0.1 / nu_max) : 1e-3;
}

struct CrossingEvent {
  double time = 0.0;
  Direction direction = Direction::Debond;
  std::vector<std::size_t> grid_indices;
  bool refined = false;
};

struct Trajectory {
  std::vector<SimState> snapshots;
  std::vector<CrossingEvent> events;
  std::vector<EnergyReport> energies;
};

namespace detail {

// alpha_dot -= scale * analyze(Φ'(u)); skipped when the force vanishes.
inline void kick(SimState& s, const AdhesionLaw& law, const SpectralBasis& basis,
                 double scale, std::vector<double>& force,
                 std::vector<double>& coeffs) {
  bool any = false;
  for (std::size_t j = 0; j < force.size(); ++j) {
    force[j] = adhesion_force(s.field.displacement[j], law);
    any = any || force[j] != 0.0;
  }
  if (!any) return;
  basis.analyze_into(force, coeffs);
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    s.modal.alpha_dots[n] -= scale * coeffs[n];
  }
}

}  // namespace detail

/// One symmetric splitting step of length dt.
inline SimState splitting_step(const SimState& state, const BeamParams& params,
                               const SpectralBasis& basis, double dt) {
  basis.check_modal(state.modal.alphas.size());
  basis.check_modal(state.modal.alpha_dots.size());
  basis.check_grid(state.field.displacement.size());

  const AdhesionLaw law = AdhesionLaw::from(params);
  SimState s = state;
  std::vector<double> force(basis.grid_size());
  std::vector<double> coeffs(basis.n_modes());

  detail::kick(s, law, basis, 0.5 * dt, force, coeffs);

  auto& a = s.modal.alphas;
  auto& ad = s.modal.alpha_dots;
  a[0] += dt * ad[0];
  for (std::size_t n = 1; n < basis.n_modes(); ++n) {
    const double nu = params.kappa1 * basis.lambda(n) * basis.lambda(n);
    const double c = std::cos(nu * dt);
    const double sn = std::sin(nu * dt);
    const double an = a[n];
    const double adn = ad[n];
    a[n] = c * an + sn * adn / nu;
    ad[n] = -nu * sn * an + c * adn;
  }
  s.modal.time = state.modal.time + dt;
  s.field.time = s.modal.time;
  basis.synthesize_into(a, s.field.displacement);

  detail::kick(s, law, basis, 0.5 * dt, force, coeffs);
  basis.synthesize_into(ad, s.field.velocity);
  s.field.grid = basis.grid_ptr();
  s.step_index = state.step_index + 1;

  for (std::size_t n = 0; n < basis.n_modes(); ++n) {
    if (!std::isfinite(a[n]) || !std::isfinite(ad[n])) {
      throw BlowUpError("non-finite modal coefficient at step " +
                            std::to_string(s.step_index),
                        s.step_index);
    }
  }
  return s;
}

namespace detail {

inline bool beyond(double u) { return std::abs(u) > AdhesionLaw::threshold; }

// Earliest tau in (0, dt] at which any of the given points has changed side,
// by bisection on the splitting flow from `from`.
inline double refine_crossing(const SimState& from, const BeamParams& params,
                              const SpectralBasis& basis, double dt,
                              const std::vector<std::size_t>& indices) {
  auto flipped = [&](double tau) {
    const SimState s = splitting_step(from, params, basis, tau);
    for (std::size_t j : indices) {
      if (beyond(s.field.displacement[j]) != beyond(from.field.displacement[j])) {
        return true;
      }
    }
    return false;
  };
  double lo = 0.0;
  double hi = dt;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (flipped(mid) ? hi : lo) = mid;
  }
  return from.modal.time + hi;
}

}  // namespace detail

inline SimState initial_state(const InitialData& init,
                              const SpectralBasis& basis) {
  ModalCoefficients modal = analyze(init, basis);
  modal.time = 0.0;
  return make_state(std::move(modal), basis, 0);
}

/// Advances the initial data to cfg.t_final. Snapshots (with energies) are
/// kept every snapshot_stride steps and at the final time. Each step that
/// moves grid points across |u| = 1 produces one event per direction.
inline Trajectory integrate(const SimState& initial, const BeamParams& params,
                            const SpectralBasis& basis,
                            const StepperConfig& cfg) {
  params.validate();
  cfg.validate();
  basis.check_modal(initial.modal.alphas.size());
  basis.check_modal(initial.modal.alpha_dots.size());
  basis.check_grid(initial.field.displacement.size());
  if (std::abs(params.length - basis.length()) > 1e-12 * params.length) {
    throw DimensionError("basis length differs from params.length");
  }

  Trajectory out;
  SimState state = initial;
  auto record = [&](const SimState& s) {
    out.snapshots.push_back(s);
    out.energies.push_back(
        energy_from_modes(s.modal, s.field.displacement, params, basis));
  };
  record(state);

  const auto n_steps = static_cast<std::size_t>(
      std::ceil(cfg.t_final / cfg.dt * (1.0 - 1e-12)));
  std::vector<std::size_t> debond;
  std::vector<std::size_t> rebond;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_now = state.modal.time;
    const double h = std::min(cfg.dt, cfg.t_final - t_now);
    if (!(h > 0.0)) break;
    SimState next = splitting_step(state, params, basis, h);

    debond.clear();
    rebond.clear();
    for (std::size_t j = 0; j < basis.grid_size(); ++j) {
      const bool was = detail::beyond(state.field.displacement[j]);
      const bool now = detail::beyond(next.field.displacement[j]);
      if (!was && now) debond.push_back(j);
      if (was && !now) rebond.push_back(j);
    }
    for (auto* group : {&debond, &rebond}) {
      if (group->empty()) continue;
      CrossingEvent ev;
      ev.direction = group == &debond ? Direction::Debond : Direction::Rebond;
      ev.grid_indices = *group;
      if (cfg.crossing_refinement) {
        ev.time = detail::refine_crossing(state, params, basis, h, *group);
        ev.refined = true;
      } else {
        ev.time = next.modal.time;
      }
      out.events.push_back(std::move(ev));
    }

    state = std::move(next);
    const bool last = k + 1 == n_steps;
    if (state.step_index % cfg.snapshot_stride == 0 || last) record(state);
  }
  return out;
}

inline Trajectory integrate(const InitialData& init, const BeamParams& params,
                            const SpectralBasis& basis,
                            const StepperConfig& cfg) {
  init.validate(basis.grid_size());
  return integrate(initial_state(init, basis), params, basis, cfg);
}

/// Separable test function theta(t) chi(x). chi must satisfy
/// chi'(0) = chi'(L) = 0 and theta must vanish for t >= support_end.
struct TestFunction {
  std::function<double(double)> theta;
  std::function<double(double)> theta_t;
  std::function<double(double)> theta_tt;
  std::function<double(double)> chi;
  std::function<double(double)> chi_x;
  std::function<double(double)> chi_xx;
  double support_end = 1.0;
};

/// Residual of the weak formulation
///   int int (u phi_tt + kappa1^2 u_xx phi_xx + h_u phi) dx dt
///     - int v1 phi(0, x) dx + int v0 phi_t(0, x) dx
/// with trapezoid quadrature over the snapshot times and midpoint quadrature
/// on the grid. h_u is the same selection as adhesion_force.
inline double weak_residual(const std::vector<SimState>& snapshots,
                            const TestFunction& phi, const InitialData& init,
                            const BeamParams& params,
                            const SpectralBasis& basis) {
  if (snapshots.size() < 2) {
    throw PreconditionError("weak_residual needs at least two snapshots");
  }
  init.validate(basis.grid_size());
  if (std::abs(snapshots.front().time()) > 1e-12) {
    throw PreconditionError("trajectory must start at t = 0");
  }
  if (!(phi.support_end > 0.0) ||
      !(phi.support_end < snapshots.back().time())) {
    throw PreconditionError(
        "test function support must lie inside [0, t_final)");
  }
  const double scale = 1.0 + std::abs(phi.chi(0.0)) + std::abs(phi.chi(basis.length()));
  if (std::abs(phi.chi_x(0.0)) > 1e-10 * scale ||
      std::abs(phi.chi_x(basis.length())) > 1e-10 * scale) {
    throw PreconditionError("test function violates the Neumann condition");
  }

  const AdhesionLaw law = AdhesionLaw::from(params);
  const auto& x = basis.collocation();
  const double w = basis.weight();
  const double k1sq = params.kappa1 * params.kappa1;
  std::vector<double> chi(x.size());
  std::vector<double> chi_xx(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    chi[j] = phi.chi(x[j]);
    chi_xx[j] = phi.chi_xx(x[j]);
  }

  auto spatial = [&](const SimState& s) {
    const double t = s.time();
    const double th = phi.theta(t);
    const double th_tt = phi.theta_tt(t);
    const std::vector<double> uxx = basis.second_derivative_values(s.modal.alphas);
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double u = s.field.displacement[j];
      acc += u * th_tt * chi[j] + k1sq * uxx[j] * th * chi_xx[j] +
             adhesion_force(u, law) * th * chi[j];
    }
    return acc * w;
  };

  double integral = 0.0;
  double prev_t = snapshots.front().time();
  double prev_f = spatial(snapshots.front());
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    const double t = snapshots[k].time();
    if (prev_t >= phi.support_end) break;
    const double f = spatial(snapshots[k]);
    integral += 0.5 * (t - prev_t) * (f + prev_f);
    prev_t = t;
    prev_f = f;
  }

  double boundary = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    boundary += -init.velocity[j] * phi.theta(0.0) * chi[j] +
                init.displacement[j] * phi.theta_t(0.0) * chi[j];
  }
  return integral + boundary * w;
}

struct DissipationReport {
  double max_excess = 0.0;
  bool pass = false;
};

/// max_t (E(t) - E(0)) against tolerance * max(E(0), 1).
inline DissipationReport dissipation_check(
    const std::vector<EnergyReport>& energies, double tolerance) {
  if (energies.empty()) throw PreconditionError("empty energy list");
  const double e0 = energies.front().total;
  DissipationReport r;
  r.max_excess = 0.0;
  for (const auto& e : energies) r.max_excess = std::max(r.max_excess, e.total - e0);
  r.pass = r.max_excess <= tolerance * std::max(e0, 1.0);
  return r;
}

}  // namespace adbeam
