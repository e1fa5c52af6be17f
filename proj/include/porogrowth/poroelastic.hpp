#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
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

/// Element coefficients of the linearized poroelastic problem.
///   stiffness  = H_A phi_s
///   permeability = K(phi_fl)
///   prestress  = H_A phi_n g_n + H_B sum_{v,q,ECM} phi g
struct PoroelasticCoefficients {
  std::vector<double> stiffness;
  std::vector<double> permeability;
  std::vector<double> prestress;
};

/// Natural boundary data: T_xx(L) n and V n at the end that carries the
/// flux condition.
struct PoroelasticBoundary {
  PressureBc pressure_bc = PressureBc::wall;
  double traction = 0.0;
  double flux = 0.0;
};

/// Optional distributed loads, used by manufactured-solution checks:
///   d/dx T_xx + momentum(x) = 0,   (u_x - u_prev_x)/dt + V_x = continuity(x).
struct PoroelasticForcing {
  std::function<double(double)> momentum;
  std::function<double(double)> continuity;
};

/// Unknowns are interleaved per node: index 2i is u_i, 2i + 1 is p_i.
struct PoroelasticSystem {
  std::size_t nodes = 0;
  double spacing = 0.0;
  BandedMatrix matrix{1, 0, 0};
  std::vector<double> rhs;
  PoroelasticCoefficients coefficients;
  PoroelasticBoundary boundary;
};

struct PoroelasticSolution {
  std::vector<double> u;
  std::vector<double> p;
  std::vector<double> darcy_flux; // per element
};

inline constexpr std::size_t poro_bandwidth = 3;

/// Midpoint coefficients from averaged nodal fractions and distortions.
inline PoroelasticCoefficients element_coefficients(const Mesh1D& mesh, const MixtureState& lagged,
                                                    const ModelParams& params) {
  const std::size_t ne = mesh.element_count();
  const double ha = params.aggregate_modulus();
  const double hb = params.bulk_growth_modulus();
  PoroelasticCoefficients k{std::vector<double>(ne), std::vector<double>(ne),
                            std::vector<double>(ne)};
  for (std::size_t e = 0; e < ne; ++e) {
    SpeciesVector phi{}, g{};
    for (std::size_t s = 0; s < species_count; ++s) {
      phi[s] = 0.5 * (lagged.phi[s][e] + lagged.phi[s][e + 1]);
      g[s] = 0.5 * (lagged.growth[s][e] + lagged.growth[s][e + 1]);
    }
    const double solid = phi[0] + phi[1] + phi[2] + phi[3];
    const double fluid = 1.0 - solid;
    if (!(fluid > 0.0 && fluid < 1.0))
      throw NonphysicalState("element " + std::to_string(e) + " has phi_fl outside (0, 1)");
    k.stiffness[e] = ha * solid;
    k.permeability[e] = permeability(fluid, params);
    k.prestress[e] = ha * phi[proliferating] * g[proliferating] +
                     hb * (phi[synthesizing] * g[synthesizing] + phi[quiescent] * g[quiescent] +
                           phi[matrix] * g[matrix]);
  }
  return k;
}

namespace detail {

// 3-point Gauss rule on [0, 1].
inline constexpr std::array<double, 3> gauss_points{0.1127016653792583, 0.5, 0.8872983346207417};
inline constexpr std::array<double, 3> gauss_weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

/// (int f N_left, int f N_right) over [x0, x0 + h].
inline std::array<double, 2> load_integrals(const std::function<double(double)>& f, double x0,
                                            double h) {
  std::array<double, 2> out{0.0, 0.0};
  for (std::size_t q = 0; q < 3; ++q) {
    const double s = gauss_points[q];
    const double w = gauss_weights[q] * h * f(x0 + s * h);
    out[0] += w * (1.0 - s);
    out[1] += w * s;
  }
  return out;
}

} // namespace detail

/// Galerkin matrix and load with natural boundary terms, before the
/// essential conditions are imposed. dt = inf drops the storage term.
inline PoroelasticSystem assemble_galerkin(const Mesh1D& mesh,
                                           const PoroelasticCoefficients& coefficients,
                                           std::span<const double> u_prev, double dt,
                                           const PoroelasticBoundary& boundary,
                                           const PoroelasticForcing& forcing = {}) {
  const std::size_t n = mesh.node_count();
  const std::size_t ne = mesh.element_count();
  const double h = mesh.spacing();
  if (coefficients.stiffness.size() != ne || coefficients.permeability.size() != ne ||
      coefficients.prestress.size() != ne)
    throw InvalidProblem("poroelastic coefficients do not match the mesh");
  if (u_prev.size() != n) throw InvalidProblem("previous displacement does not match the mesh");
  if (!(dt > 0.0)) throw InvalidProblem("time step must be positive");
  const double inv_dt = std::isfinite(dt) ? 1.0 / dt : 0.0;

  PoroelasticSystem sys;
  sys.nodes = n;
  sys.spacing = h;
  sys.matrix = BandedMatrix(2 * n, poro_bandwidth, poro_bandwidth);
  sys.rhs.assign(2 * n, 0.0);
  sys.coefficients = coefficients;
  sys.boundary = boundary;
  auto& A = sys.matrix;
  auto& b = sys.rhs;

  for (std::size_t e = 0; e < ne; ++e) {
    const std::size_t i = e, j = e + 1;
    const std::size_t ui = 2 * i, pi = 2 * i + 1, uj = 2 * j, pj = 2 * j + 1;
    const double a = coefficients.stiffness[e] / h;
    const double k = coefficients.permeability[e] / h;
    const double s = coefficients.prestress[e];

    // momentum: int a u' v' - int p v' = int s v' + natural terms
    A.add(ui, ui, a);
    A.add(ui, uj, -a);
    A.add(uj, ui, -a);
    A.add(uj, uj, a);
    A.add(ui, pi, 0.5);
    A.add(ui, pj, 0.5);
    A.add(uj, pi, -0.5);
    A.add(uj, pj, -0.5);
    b[ui] -= s;
    b[uj] += s;

    // continuity: (1/dt) int u' q + int K p' q' = (1/dt) int u_prev' q + natural terms
    A.add(pi, ui, -0.5 * inv_dt);
    A.add(pi, uj, 0.5 * inv_dt);
    A.add(pj, ui, -0.5 * inv_dt);
    A.add(pj, uj, 0.5 * inv_dt);
    A.add(pi, pi, k);
    A.add(pi, pj, -k);
    A.add(pj, pi, -k);
    A.add(pj, pj, k);
    const double old = 0.5 * inv_dt * (u_prev[j] - u_prev[i]);
    b[pi] += old;
    b[pj] += old;

    if (forcing.momentum) {
      const auto f = detail::load_integrals(forcing.momentum, mesh.x(i), h);
      b[ui] += f[0];
      b[uj] += f[1];
    }
    if (forcing.continuity) {
      const auto f = detail::load_integrals(forcing.continuity, mesh.x(i), h);
      b[pi] += f[0];
      b[pj] += f[1];
    }
  }

  b[2 * (n - 1)] += boundary.traction;
  if (boundary.pressure_bc == PressureBc::wall) b[2 * (n - 1) + 1] -= boundary.flux;
  return sys;
}

/// u(0) = 0 always; p = 0 at the wall or at the interface.
inline void apply_essential_conditions(PoroelasticSystem& sys) {
  sys.matrix.set_identity_row(0);
  sys.rhs[0] = 0.0;
  const std::size_t prow =
      sys.boundary.pressure_bc == PressureBc::wall ? 1 : 2 * (sys.nodes - 1) + 1;
  sys.matrix.set_identity_row(prow);
  sys.rhs[prow] = 0.0;
}

inline PoroelasticSystem assemble(const Mesh1D& mesh, const PoroelasticCoefficients& coefficients,
                                  std::span<const double> u_prev, double dt,
                                  const PoroelasticBoundary& boundary,
                                  const PoroelasticForcing& forcing = {}) {
  PoroelasticSystem sys = assemble_galerkin(mesh, coefficients, u_prev, dt, boundary, forcing);
  apply_essential_conditions(sys);
  return sys;
}

inline PoroelasticBoundary boundary_data(const ScenarioConfig& scenario,
                                         const ModelParams& params) {
  return {scenario.pressure_bc, scenario.boundary_stress(params), scenario.boundary_flux(params)};
}

/// System of step 1 of a fixed-point sweep: coefficients from the lagged
/// state, storage term from the displacement of the previous time level.
inline PoroelasticSystem assemble(const Mesh1D& mesh, const MixtureState& lagged,
                                  const MixtureState& previous, double dt,
                                  const ScenarioConfig& scenario, const ModelParams& params) {
  return assemble(mesh, element_coefficients(mesh, lagged, params), previous.u, dt,
                  boundary_data(scenario, params));
}

inline PoroelasticSolution solve(const PoroelasticSystem& sys) {
  const auto x = solve_banded(sys.matrix, sys.rhs);
  PoroelasticSolution out;
  out.u.resize(sys.nodes);
  out.p.resize(sys.nodes);
  for (std::size_t i = 0; i < sys.nodes; ++i) {
    out.u[i] = x[2 * i];
    out.p[i] = x[2 * i + 1];
  }
  out.darcy_flux.resize(sys.nodes - 1);
  for (std::size_t e = 0; e + 1 < sys.nodes; ++e)
    out.darcy_flux[e] = -sys.coefficients.permeability[e] * (out.p[e + 1] - out.p[e]) / sys.spacing;
  return out;
}

} // namespace porogrowth
