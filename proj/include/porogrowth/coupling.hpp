#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "porogrowth/adr.hpp"
#include "porogrowth/anderson.hpp"
#include "porogrowth/constitutive.hpp"
#include "porogrowth/errors.hpp"
#include "porogrowth/mesh.hpp"
#include "porogrowth/params.hpp"
#include "porogrowth/poroelastic.hpp"
#include "porogrowth/scenario.hpp"
#include "porogrowth/state.hpp"

namespace porogrowth {

/// Fields monitored by the fixed-point convergence test, in this order.
inline constexpr std::array<const char*, 7> monitored_fields{"u",     "p",     "c",    "phi_n",
                                                             "phi_v", "phi_q", "phi_ecm"};

struct FixedPointReport {
  std::size_t iterations = 0;
  /// Relative sup-norm change of each monitored field, one entry per sweep.
  std::vector<std::array<double, 7>> residuals;
  bool converged = false;
  double wall_time = 0.0; // seconds

  double final_residual() const noexcept {
    if (residuals.empty()) return 0.0;
    const auto& r = residuals.back();
    return *std::max_element(r.begin(), r.end());
  }
};

class Nonconvergence : public Error {
public:
  Nonconvergence(const std::string& what, FixedPointReport report)
      : Error(what), report_(std::move(report)) {}
  const FixedPointReport& report() const noexcept { return report_; }

private:
  FixedPointReport report_;
};

struct StepResult {
  MixtureState state;
  FixedPointReport report;
  std::vector<int> hr; // H_r at the converged state
};

namespace detail {

inline double relative_change(const std::vector<double>& next, const std::vector<double>& prev) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    diff = std::max(diff, std::abs(next[i] - prev[i]));
    scale = std::max(scale, std::abs(prev[i]));
  }
  return diff / (scale + 1.0e-30);
}

inline std::vector<int> hr_field(const Mesh1D& mesh, const std::vector<double>& u,
                                 const MixtureState& lagged, const ScenarioConfig& scenario,
                                 const ModelParams& params) {
  const auto eps = nodal_strain(mesh, u);
  const double r_bar = params.anisotropy_threshold();
  std::vector<int> hr(eps.size());
  for (std::size_t i = 0; i < hr.size(); ++i) {
    const double r = anisotropy_r(lagged.solid_fraction(i), eps[i],
                                  lagged.growth[proliferating][i], lagged.phi[proliferating][i]);
    hr[i] = switch_hr(r, r_bar, scenario.hr_convention);
  }
  return hr;
}

// The sweep reads c and the four fractions from the lagged state; u and p are
// outputs only. These are packed as the mixing variable.
inline constexpr std::size_t mixed_fields = 5;

inline std::vector<double> pack(const MixtureState& s) {
  const std::size_t n = s.node_count();
  std::vector<double> x;
  x.reserve(mixed_fields * n);
  x.insert(x.end(), s.c.begin(), s.c.end());
  for (const auto& f : s.phi) x.insert(x.end(), f.begin(), f.end());
  return x;
}

inline void unpack(const std::vector<double>& x, MixtureState& s) {
  const std::size_t n = s.node_count();
  auto it = x.begin();
  std::copy(it, it + static_cast<std::ptrdiff_t>(n), s.c.begin());
  for (auto& f : s.phi) {
    it += static_cast<std::ptrdiff_t>(n);
    std::copy(it, it + static_cast<std::ptrdiff_t>(n), f.begin());
  }
}

// Least-squares weights: one over each field's size in the first image.
inline std::vector<double> mixing_weights(const MixtureState& s) {
  const std::size_t n = s.node_count();
  std::vector<double> w;
  w.reserve(mixed_fields * n);
  auto add = [&](const std::vector<double>& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    w.insert(w.end(), n, m > 0.0 ? 1.0 / m : 1.0);
  };
  add(s.c);
  for (const auto& f : s.phi) add(f);
  return w;
}

inline bool physical(const MixtureState& s) {
  try {
    check_physical(s, "");
  } catch (const NonphysicalState&) {
    return false;
  }
  return true;
}

} // namespace detail

/// Advance one time level with the fixed-point map
///   poroelastic solve -> oxygen solve -> four population solves,
/// every coefficient lagged at the previous sweep, until the largest relative
/// change drops below scenario.tol. Growth distortions are held fixed during
/// the iteration and updated once from the converged state.
///
/// With anderson_depth > 0 the lagged (c, phi) fed to the next sweep is an
/// Anderson combination of recent sweeps instead of the last sweep alone.
/// The fixed point and the stopping test are unchanged; the converged state
/// is always a plain sweep output.
inline StepResult fixed_point_step(const Mesh1D& mesh, const MixtureState& current, double dt,
                                   const ScenarioConfig& scenario, const ModelParams& params) {
  const auto start = std::chrono::steady_clock::now();
  check_physical(current, "fixed_point_step input");

  FixedPointReport report;
  MixtureState lagged = current;
  std::vector<int> hr;
  const auto boundary = boundary_data(scenario, params);
  std::optional<AndersonMixer> mixer;

  for (std::size_t m = 0; m < scenario.max_iter; ++m) {
    const auto coefficients = element_coefficients(mesh, lagged, params);
    const auto poro = solve(assemble(mesh, coefficients, current.u, dt, boundary));
    hr = detail::hr_field(mesh, poro.u, lagged, scenario, params);

    const auto oxygen =
        build_oxygen_problem(mesh, lagged, poro.u, current.u, poro.darcy_flux, dt, scenario, params);
    auto c = solve_adr(oxygen, dt, current.c);

    MixtureState next = current;
    next.u = poro.u;
    next.p = poro.p;
    next.darcy_flux = poro.darcy_flux;
    for (Species s : all_species) {
      const auto problem = build_species_problem(s, mesh, lagged, c, hr, poro.u, current.u, dt,
                                                 scenario, params);
      next.phi[s] = solve_adr(problem, dt, current.phi[s]);
    }
    next.c = std::move(c);
    next.growth = current.growth;

    std::array<double, 7> res{detail::relative_change(next.u, lagged.u),
                              detail::relative_change(next.p, lagged.p),
                              detail::relative_change(next.c, lagged.c),
                              detail::relative_change(next.phi[0], lagged.phi[0]),
                              detail::relative_change(next.phi[1], lagged.phi[1]),
                              detail::relative_change(next.phi[2], lagged.phi[2]),
                              detail::relative_change(next.phi[3], lagged.phi[3])};
    report.residuals.push_back(res);
    report.iterations = m + 1;
    check_physical(next, "fixed-point sweep");

    if (report.final_residual() < scenario.tol) {
      lagged = std::move(next);
      report.converged = true;
      break;
    }
    if (scenario.anderson_depth == 0) {
      lagged = std::move(next);
      continue;
    }
    if (!mixer) mixer.emplace(scenario.anderson_depth, detail::mixing_weights(next));
    MixtureState mixed = next;
    detail::unpack(mixer->next(detail::pack(lagged), detail::pack(next)), mixed);
    if (detail::physical(mixed)) {
      lagged = std::move(mixed);
    } else {
      mixer->reset();
      lagged = std::move(next);
    }
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!report.converged)
    throw Nonconvergence("fixed point did not converge in " + std::to_string(scenario.max_iter) +
                             " sweeps (residual " + std::to_string(report.final_residual()) + ")",
                         report);

  if (scenario.growth_model == GrowthModel::volumetric && !scenario.freeze_kinetics) {
    const double k_g = scenario.growth_rate.resolve(params);
    const double threshold = scenario.quiescence_threshold(params);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
      const SpeciesVector phi = lagged.fractions(i);
      const auto k = kinetics(phi, lagged.fluid_fraction(i), lagged.c[i], hr[i],
                              switch_hc(lagged.c[i], threshold), k_g, params);
      for (Species s : all_species) {
        const double rate = phi[s] > fraction_floor ? k.net(s, phi) / phi[s] : 0.0;
        lagged.growth[s][i] =
            growth_distortion_step(lagged.growth[s][i], phi[s], rate, dt, scenario.growth_model);
      }
    }
  }
  return {std::move(lagged), std::move(report), std::move(hr)};
}

// ---------------------------------------------------------------------------
// Time loop
// ---------------------------------------------------------------------------

struct StepDiagnostics {
  std::size_t step = 0;
  double time = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::size_t bisections = 0;
};

/// Mid-domain sample recorded at every time level.
struct MidNodeSample {
  double time = 0.0;
  SpeciesVector phi{};
  double phi_fl = 0.0;
  double c = 0.0;
  double p = 0.0;
  double u = 0.0;
  int xi = 1;
};

struct Trajectory {
  Mesh1D mesh{1.0, 3};
  std::vector<double> times; // snapshot times
  std::vector<MixtureState> snapshots;
  std::vector<std::vector<int>> snapshot_xi;
  std::vector<StepDiagnostics> steps;
  std::vector<MidNodeSample> mid_node; // every time level, starting at t = 0
  std::vector<std::vector<int>> xi;    // every time level, per node
  std::optional<std::string> failure;

  bool ok() const noexcept { return !failure.has_value(); }
};

namespace detail {

struct Advance {
  MixtureState state;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::size_t bisections = 0;
};

inline Advance advance(const Mesh1D& mesh, const MixtureState& state, double dt,
                       const ScenarioConfig& scenario, const ModelParams& params,
                       std::size_t depth) {
  try {
    auto r = fixed_point_step(mesh, state, dt, scenario, params);
    return {std::move(r.state), r.report.iterations, r.report.final_residual(), 0};
  } catch (const Nonconvergence&) {
    if (!scenario.dt_halving || depth >= 4) throw;
  }
  auto first = advance(mesh, state, 0.5 * dt, scenario, params, depth + 1);
  auto second = advance(mesh, first.state, 0.5 * dt, scenario, params, depth + 1);
  return {std::move(second.state), first.iterations + second.iterations, second.residual,
          1 + first.bisections + second.bisections};
}

inline MidNodeSample sample_mid(const Mesh1D& mesh, const MixtureState& s, double t,
                                const std::vector<int>& xi) {
  const std::size_t k = mesh.mid_node();
  return {t, s.fractions(k), s.fluid_fraction(k), s.c[k], s.p[k], s.u[k], xi[k]};
}

} // namespace detail

/// Integrate the scenario over [0, t_end]. A failing step stops the run; the
/// trajectory then holds everything computed so far and a failure message.
inline Trajectory run(const ScenarioConfig& scenario, const ModelParams& params) {
  params.validate();
  scenario.validate();
  Trajectory traj;
  traj.mesh = build_mesh(scenario.length, scenario.nodes);
  const Mesh1D& mesh = traj.mesh;

  MixtureState state = initial_state(mesh, params, scenario);
  const std::size_t steps = scenario.step_count();

  auto record = [&](double t, bool snapshot) {
    auto xi = sample_xi_field(mesh, state, params);
    traj.mid_node.push_back(detail::sample_mid(mesh, state, t, xi));
    if (snapshot) {
      traj.times.push_back(t);
      traj.snapshots.push_back(state);
      traj.snapshot_xi.push_back(xi);
    }
    traj.xi.push_back(std::move(xi));
  };
  record(0.0, true);

  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * scenario.dt;
    try {
      auto adv = detail::advance(mesh, state, scenario.dt, scenario, params, 0);
      state = std::move(adv.state);
      traj.steps.push_back({n, t, adv.iterations, adv.residual, adv.bisections});
    } catch (const Error& e) {
      traj.failure = "step " + std::to_string(n) + " (t = " + std::to_string(t) + " s): " + e.what();
      break;
    }
    record(t, n % scenario.sample_stride == 0 || n == steps);
  }
  return traj;
}

} // namespace porogrowth
