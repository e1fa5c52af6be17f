#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "porogrowth/constitutive.hpp"
#include "porogrowth/errors.hpp"
#include "porogrowth/mesh.hpp"
#include "porogrowth/params.hpp"
#include "porogrowth/scenario.hpp"

namespace porogrowth {

/// Nodal mixture state at one time level. Darcy flux lives on elements.
struct MixtureState {
  std::vector<double> u;
  std::vector<double> p;
  std::vector<double> c;
  std::array<std::vector<double>, species_count> phi;
  std::array<std::vector<double>, species_count> growth;
  std::vector<double> darcy_flux;

  MixtureState() = default;
  explicit MixtureState(std::size_t nodes)
      : u(nodes, 0.0), p(nodes, 0.0), c(nodes, 0.0), darcy_flux(nodes > 0 ? nodes - 1 : 0, 0.0) {
    for (auto& f : phi) f.assign(nodes, 0.0);
    for (auto& g : growth) g.assign(nodes, 0.0);
  }

  std::size_t node_count() const noexcept { return u.size(); }

  SpeciesVector fractions(std::size_t i) const noexcept {
    return {phi[0][i], phi[1][i], phi[2][i], phi[3][i]};
  }
  SpeciesVector distortions(std::size_t i) const noexcept {
    return {growth[0][i], growth[1][i], growth[2][i], growth[3][i]};
  }

  double solid_fraction(std::size_t i) const noexcept {
    return phi[0][i] + phi[1][i] + phi[2][i] + phi[3][i];
  }
  /// Unchecked closure 1 - sum(phi).
  double fluid_fraction(std::size_t i) const noexcept { return 1.0 - solid_fraction(i); }

  bool operator==(const MixtureState&) const = default;
};

/// Checked fluid fraction at a node; pure fluid and overfull mixtures are
/// rejected.
inline double phi_fl(const MixtureState& state, std::size_t node) {
  const double f = state.fluid_fraction(node);
  if (!(f > 0.0 && f < 1.0))
    throw ClosureViolation("phi_fl = " + std::to_string(f) + " outside (0, 1) at node " +
                           std::to_string(node));
  return f;
}

inline MixtureState initial_state(const Mesh1D& mesh, const ModelParams& params,
                                  const ScenarioConfig& scenario) {
  const Amplitudes a = amplitudes(scenario.initial_profile);
  if (!(a.proliferating + 3.0 * a.other < 1.0))
    throw InvalidInitialCondition("initial amplitudes leave no fluid fraction");

  const double decay_length = mesh.length() / 5.0;
  MixtureState s(mesh.node_count());
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    const double shape = std::exp(-mesh.x(i) / decay_length);
    s.phi[proliferating][i] = a.proliferating * shape;
    s.phi[synthesizing][i] = a.other * shape;
    s.phi[quiescent][i] = a.other * shape;
    s.phi[matrix][i] = a.other * shape;
    s.c[i] = params.c_0;
    for (std::size_t k = 0; k < species_count; ++k) s.growth[k][i] = scenario.initial_growth[k];
  }
  return s;
}

/// Element strains (u_{e+1} - u_e) / h.
inline std::vector<double> element_strain(const Mesh1D& mesh, const std::vector<double>& u) {
  std::vector<double> eps(mesh.element_count());
  for (std::size_t e = 0; e < eps.size(); ++e) eps[e] = (u[e + 1] - u[e]) / mesh.spacing();
  return eps;
}

/// Nodal strain recovered by averaging the adjacent element strains.
inline std::vector<double> nodal_strain(const Mesh1D& mesh, const std::vector<double>& u) {
  const auto eps = element_strain(mesh, u);
  const std::size_t n = mesh.node_count();
  std::vector<double> out(n);
  out.front() = eps.front();
  out.back() = eps.back();
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = 0.5 * (eps[i - 1] + eps[i]);
  return out;
}

/// Isotropy indicator r at every node.
inline std::vector<double> anisotropy_field(const Mesh1D& mesh, const MixtureState& state) {
  const auto eps = nodal_strain(mesh, state.u);
  std::vector<double> r(mesh.node_count());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = anisotropy_r(state.solid_fraction(i), eps[i], state.growth[proliferating][i],
                        state.phi[proliferating][i]);
  return r;
}

inline std::vector<int> sample_xi_field(const Mesh1D& mesh, const MixtureState& state,
                                        const ModelParams& params) {
  const auto r = anisotropy_field(mesh, state);
  const double r_bar = params.anisotropy_threshold();
  std::vector<int> xi(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) xi[i] = isotropy_xi(r[i], r_bar);
  return xi;
}

/// Throws NonphysicalState when a fraction or the concentration is negative
/// beyond round-off, or when phi_fl leaves (fraction_floor, 1).
inline void check_physical(const MixtureState& state, const char* where) {
  for (std::size_t i = 0; i < state.node_count(); ++i) {
    for (std::size_t k = 0; k < species_count; ++k)
      if (!(state.phi[k][i] >= -positivity_slack))
        throw NonphysicalState(std::string(where) + ": negative phi_" +
                               species_name(static_cast<Species>(k)) + " at node " +
                               std::to_string(i));
    if (!(state.c[i] >= -positivity_slack))
      throw NonphysicalState(std::string(where) + ": negative oxygen at node " +
                             std::to_string(i));
    const double f = state.fluid_fraction(i);
    if (!(f > fraction_floor && f < 1.0))
      throw NonphysicalState(std::string(where) + ": phi_fl = " + std::to_string(f) +
                             " outside (1e-6, 1) at node " + std::to_string(i));
  }
}

} // namespace porogrowth
