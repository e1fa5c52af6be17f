#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "porogrowth/constitutive.hpp"
#include "porogrowth/errors.hpp"
#include "porogrowth/linalg.hpp"
#include "porogrowth/mesh.hpp"
#include "porogrowth/params.hpp"
#include "porogrowth/scenario.hpp"
#include "porogrowth/state.hpp"

namespace porogrowth {

/// Time step value selecting the steady (no mass term) mode.
inline constexpr double steady = std::numeric_limits<double>::infinity();

/// Bernoulli function B(t) = t / (e^t - 1), B(0) = 1.
inline double bernoulli(double t) noexcept {
  if (std::abs(t) < 1.0e-2) {
    const double t2 = t * t;
    return 1.0 - 0.5 * t + t2 / 12.0 - t2 * t2 / 720.0;
  }
  return t / std::expm1(t);
}

struct AdrBoundary {
  enum class Kind { dirichlet, zero_diffusive_flux };
  Kind kind = Kind::zero_diffusive_flux;
  double value = 0.0;

  static AdrBoundary dirichlet(double v) { return {Kind::dirichlet, v}; }
  static AdrBoundary zero_diffusive_flux() { return {Kind::zero_diffusive_flux, 0.0}; }
};

enum class MassTreatment { lumped, consistent };

/// Scalar problem  w_t + (v w - D w_x)_x + sigma w = f  on a uniform mesh.
///
/// D and v are element (edge) values; sigma and f are nodal. At a
/// zero-diffusive-flux end the outward advective flux w v n is retained,
/// with v taken from `boundary_velocity` (x = 0, x = L).
struct AdrProblem {
  std::size_t nodes = 0;
  double spacing = 0.0;
  std::vector<double> diffusion;
  std::vector<double> velocity;
  std::vector<double> reaction;
  std::vector<double> source;
  AdrBoundary left = AdrBoundary::zero_diffusive_flux();
  AdrBoundary right = AdrBoundary::zero_diffusive_flux();
  std::array<double, 2> boundary_velocity{0.0, 0.0};
  MassTreatment mass = MassTreatment::lumped;

  AdrProblem() = default;
  explicit AdrProblem(const Mesh1D& mesh)
      : nodes(mesh.node_count()), spacing(mesh.spacing()),
        diffusion(mesh.element_count(), 0.0), velocity(mesh.element_count(), 0.0),
        reaction(mesh.node_count(), 0.0), source(mesh.node_count(), 0.0) {}

  void validate() const {
    if (nodes < 2 || !(spacing > 0.0)) throw InvalidProblem("ADR problem has no mesh");
    if (diffusion.size() != nodes - 1 || velocity.size() != nodes - 1 ||
        reaction.size() != nodes || source.size() != nodes)
      throw InvalidProblem("ADR coefficient arrays have inconsistent lengths");
    for (std::size_t e = 0; e < diffusion.size(); ++e)
      if (!(diffusion[e] > 0.0) || !std::isfinite(diffusion[e]))
        throw InvalidProblem("diffusion must be positive on every element (element " +
                             std::to_string(e) + ")");
    for (double v : velocity)
      if (!std::isfinite(v)) throw InvalidProblem("advection velocity must be finite");
  }
};

struct TridiagonalSystem {
  std::vector<double> lower, diag, upper, rhs;

  explicit TridiagonalSystem(std::size_t n)
      : lower(n - 1, 0.0), diag(n, 0.0), upper(n - 1, 0.0), rhs(n, 0.0) {}
};

/// Exponentially fitted edge-flux coefficients: J = a w_i - b w_{i+1}.
struct EdgeFlux {
  double a;
  double b;
};

inline EdgeFlux fitted_flux(double diffusion, double velocity, double h) noexcept {
  const double t = velocity * h / diffusion;
  const double g = diffusion / h;
  return {g * bernoulli(-t), g * bernoulli(t)};
}

/// Backward-Euler (or steady, dt = inf) system of one ADR solve.
inline TridiagonalSystem assemble_adr(const AdrProblem& problem, double dt,
                                      std::span<const double> previous) {
  problem.validate();
  const std::size_t n = problem.nodes;
  const double h = problem.spacing;
  const bool transient = std::isfinite(dt);
  if (transient && !(dt > 0.0)) throw InvalidProblem("time step must be positive");
  if (transient && previous.size() != n)
    throw InvalidProblem("previous field length does not match the mesh");
  const double inv_dt = transient ? 1.0 / dt : 0.0;

  TridiagonalSystem sys(n);

  if (problem.mass == MassTreatment::lumped) {
    for (std::size_t i = 0; i < n; ++i) {
      const double m = (i == 0 || i + 1 == n) ? 0.5 * h : h;
      sys.diag[i] += m * (inv_dt + problem.reaction[i]);
      sys.rhs[i] += m * problem.source[i];
      if (transient) sys.rhs[i] += m * inv_dt * previous[i];
    }
  } else {
    for (std::size_t e = 0; e + 1 < n; ++e) {
      const std::size_t i = e, j = e + 1;
      const double sigma = 0.5 * (problem.reaction[i] + problem.reaction[j]);
      const double d = h / 3.0, o = h / 6.0;
      const double k = inv_dt + sigma;
      sys.diag[i] += d * k;
      sys.diag[j] += d * k;
      sys.upper[i] += o * k;
      sys.lower[i] += o * k;
      sys.rhs[i] += d * problem.source[i] + o * problem.source[j];
      sys.rhs[j] += o * problem.source[i] + d * problem.source[j];
      if (transient) {
        sys.rhs[i] += inv_dt * (d * previous[i] + o * previous[j]);
        sys.rhs[j] += inv_dt * (o * previous[i] + d * previous[j]);
      }
    }
  }

  for (std::size_t e = 0; e + 1 < n; ++e) {
    const EdgeFlux f = fitted_flux(problem.diffusion[e], problem.velocity[e], h);
    sys.diag[e] += f.a;
    sys.upper[e] -= f.b;
    sys.lower[e] -= f.a;
    sys.diag[e + 1] += f.b;
  }

  if (problem.left.kind == AdrBoundary::Kind::zero_diffusive_flux)
    sys.diag[0] -= problem.boundary_velocity[0];
  if (problem.right.kind == AdrBoundary::Kind::zero_diffusive_flux)
    sys.diag[n - 1] += problem.boundary_velocity[1];

  if (problem.left.kind == AdrBoundary::Kind::dirichlet) {
    sys.diag[0] = 1.0;
    sys.upper[0] = 0.0;
    sys.rhs[0] = problem.left.value;
  }
  if (problem.right.kind == AdrBoundary::Kind::dirichlet) {
    sys.diag[n - 1] = 1.0;
    sys.lower[n - 2] = 0.0;
    sys.rhs[n - 1] = problem.right.value;
  }
  return sys;
}

/// Residual of the transient system at w = previous, written in flux form so
/// that an exact discrete steady state gives exactly zero.
inline std::vector<double> adr_residual(const AdrProblem& problem,
                                        std::span<const double> previous) {
  const std::size_t n = problem.nodes;
  const double h = problem.spacing;
  std::vector<double> r(n, 0.0);
  if (problem.mass == MassTreatment::lumped) {
    for (std::size_t i = 0; i < n; ++i) {
      const double m = (i == 0 || i + 1 == n) ? 0.5 * h : h;
      r[i] = m * (problem.source[i] - problem.reaction[i] * previous[i]);
    }
  } else {
    for (std::size_t e = 0; e + 1 < n; ++e) {
      const std::size_t i = e, j = e + 1;
      const double sigma = 0.5 * (problem.reaction[i] + problem.reaction[j]);
      const double gi = problem.source[i] - sigma * previous[i];
      const double gj = problem.source[j] - sigma * previous[j];
      r[i] += h / 3.0 * gi + h / 6.0 * gj;
      r[j] += h / 6.0 * gi + h / 3.0 * gj;
    }
  }
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const EdgeFlux f = fitted_flux(problem.diffusion[e], problem.velocity[e], h);
    const double J = f.a * previous[e] - f.b * previous[e + 1];
    r[e] -= J;
    r[e + 1] += J;
  }
  if (problem.left.kind == AdrBoundary::Kind::zero_diffusive_flux)
    r[0] += problem.boundary_velocity[0] * previous[0];
  else
    r[0] = problem.left.value - previous[0];
  if (problem.right.kind == AdrBoundary::Kind::zero_diffusive_flux)
    r[n - 1] -= problem.boundary_velocity[1] * previous[n - 1];
  else
    r[n - 1] = problem.right.value - previous[n - 1];
  return r;
}

/// Transient solves are done for the increment w - previous.
inline std::vector<double> solve_adr(const AdrProblem& problem, double dt,
                                     std::span<const double> previous) {
  TridiagonalSystem sys = assemble_adr(problem, dt, previous);
  if (!std::isfinite(dt)) return solve_tridiagonal(sys.lower, sys.diag, sys.upper, sys.rhs);
  sys.rhs = adr_residual(problem, previous);
  auto w = solve_tridiagonal(sys.lower, sys.diag, sys.upper, sys.rhs);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += previous[i];
  return w;
}

// ---------------------------------------------------------------------------
// Problem builders for the coupled model
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> checked_fluid_fractions(const MixtureState& lagged) {
  std::vector<double> f(lagged.node_count());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = lagged.fluid_fraction(i);
    if (!(f[i] > fraction_floor && f[i] < 1.0))
      throw NonphysicalState("phi_fl = " + std::to_string(f[i]) + " outside (1e-6, 1) at node " +
                             std::to_string(i));
  }
  return f;
}

inline std::vector<double> solid_velocity(std::span<const double> u_new,
                                          std::span<const double> u_prev, double dt) {
  std::vector<double> v(u_new.size(), 0.0);
  if (!std::isfinite(dt)) return v;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (u_new[i] - u_prev[i]) / dt;
  return v;
}

inline void set_edge_velocity(AdrProblem& problem, const std::vector<double>& nodal) {
  for (std::size_t e = 0; e + 1 < problem.nodes; ++e)
    problem.velocity[e] = 0.5 * (nodal[e] + nodal[e + 1]);
  problem.boundary_velocity = {nodal.front(), nodal.back()};
}

} // namespace detail

/// Oxygen transport problem of one fixed-point sweep.
///
/// Fluid velocity v_fl = V / phi_fl + (u_new - u_prev) / dt, with the Darcy
/// flux averaged to the nodes; diffusivity and uptake use the lagged state.
inline AdrProblem build_oxygen_problem(const Mesh1D& mesh, const MixtureState& lagged,
                                       std::span<const double> u_new,
                                       std::span<const double> u_prev,
                                       std::span<const double> darcy_flux, double dt,
                                       const ScenarioConfig& scenario,
                                       const ModelParams& params) {
  const std::size_t n = mesh.node_count();
  const auto fluid = detail::checked_fluid_fractions(lagged);
  AdrProblem problem(mesh);

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = nutrient_diffusivity(fluid[i], params);
  for (std::size_t e = 0; e + 1 < n; ++e)
    problem.diffusion[e] = 2.0 * d[e] * d[e + 1] / (d[e] + d[e + 1]);

  auto v = detail::solid_velocity(u_new, u_prev, dt);
  for (std::size_t i = 0; i < n; ++i) {
    double flux;
    if (i == 0)
      flux = darcy_flux[0];
    else if (i + 1 == n)
      flux = darcy_flux[n - 2];
    else
      flux = 0.5 * (darcy_flux[i - 1] + darcy_flux[i]);
    v[i] += flux / fluid[i];
  }
  detail::set_edge_velocity(problem, v);

  if (!scenario.freeze_kinetics)
    for (std::size_t i = 0; i < n; ++i)
      problem.reaction[i] = -oxygen_sink(lagged.phi[proliferating][i], lagged.phi[synthesizing][i],
                                         lagged.phi[quiescent][i], lagged.c[i], params)
                                 .coefficient;

  problem.left = AdrBoundary::zero_diffusive_flux();
  problem.right = AdrBoundary::dirichlet(scenario.external_concentration(params));
  return problem;
}

/// Transport problem of one population. Reaction is the diagonal of C,
/// source is the row of P phi evaluated on the lagged fractions.
inline AdrProblem build_species_problem(Species species, const Mesh1D& mesh,
                                        const MixtureState& lagged, std::span<const double> c_new,
                                        std::span<const int> hr, std::span<const double> u_new,
                                        std::span<const double> u_prev, double dt,
                                        const ScenarioConfig& scenario,
                                        const ModelParams& params) {
  const std::size_t n = mesh.node_count();
  const auto fluid = detail::checked_fluid_fractions(lagged);
  AdrProblem problem(mesh);
  for (double& d : problem.diffusion) d = params.D_eta;
  detail::set_edge_velocity(problem, detail::solid_velocity(u_new, u_prev, dt));

  if (!scenario.freeze_kinetics) {
    const double k_g = scenario.growth_rate.resolve(params);
    const double c_threshold = scenario.quiescence_threshold(params);
    for (std::size_t i = 0; i < n; ++i) {
      const SpeciesVector phi = lagged.fractions(i);
      const KineticsMatrices k =
          kinetics(phi, fluid[i], c_new[i], hr[i], switch_hc(c_new[i], c_threshold), k_g, params);
      problem.reaction[i] = k.consumption[species];
      problem.source[i] = k.source(species, phi);
    }
  }
  problem.left = AdrBoundary::zero_diffusive_flux();
  problem.right = AdrBoundary::zero_diffusive_flux();
  return problem;
}

} // namespace porogrowth
