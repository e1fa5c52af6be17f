#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "porogrowth/adr.hpp"
#include "porogrowth/linalg.hpp"
#include "porogrowth/mesh.hpp"
#include "porogrowth/poroelastic.hpp"

namespace porogrowth::verify {

/// One measured quantity against its acceptance threshold.
struct Check {
  std::string label;
  double value = 0.0;
  double threshold = 0.0;
  bool at_least = false; // pass when value >= threshold, otherwise value < threshold

  bool passed() const noexcept { return at_least ? value >= threshold : value < threshold; }
};

struct SuiteReport {
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const noexcept {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
  }
};

// ---------------------------------------------------------------------------
// Reference tools
// ---------------------------------------------------------------------------

/// Dense Gaussian elimination with partial pivoting; row-major n x n.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (a[piv * n + k] == 0.0) throw SingularSystem("dense oracle: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

/// Least-squares slope of log(error) against log(h).
inline double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// L2 norm over [0, L] of (piecewise-linear nodal field - exact), 3-point Gauss.
inline double l2_error(const Mesh1D& mesh, const std::vector<double>& nodal,
                       const std::function<double(double)>& exact) {
  const double h = mesh.spacing();
  double sum = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e)
    for (std::size_t q = 0; q < 3; ++q) {
      const double s = detail::gauss_points[q];
      const double x = mesh.x(e) + s * h;
      const double uh = (1.0 - s) * nodal[e] + s * nodal[e + 1];
      const double d = uh - exact(x);
      sum += detail::gauss_weights[q] * h * d * d;
    }
  return std::sqrt(sum);
}

/// L2 norm of (elementwise-constant field - exact), 3-point Gauss.
inline double l2_error_elementwise(const Mesh1D& mesh, const std::vector<double>& values,
                                   const std::function<double(double)>& exact) {
  const double h = mesh.spacing();
  double sum = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e)
    for (std::size_t q = 0; q < 3; ++q) {
      const double x = mesh.x(e) + detail::gauss_points[q] * h;
      const double d = values[e] - exact(x);
      sum += detail::gauss_weights[q] * h * d * d;
    }
  return std::sqrt(sum);
}

inline const std::vector<std::size_t>& convergence_meshes() {
  static const std::vector<std::size_t> n{33, 65, 129, 257};
  return n;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Banded LU against dense elimination, and Thomas against banded LU.
inline SuiteReport linalg() {
  SuiteReport r{"linalg", {}, 0.0};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(-1.0, 1.0);

  double banded_vs_dense = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 50, kl = 2, ku = 2;
    BandedMatrix A(n, kl, ku);
    std::vector<double> dense(n * n, 0.0), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      double off = 0.0;
      for (std::size_t j = (i >= kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
        if (j == i) continue;
        const double v = U(rng);
        A.set(i, j, v);
        dense[i * n + j] = v;
        off += std::abs(v);
      }
      const double d = (off + 0.5 + std::abs(U(rng))) * (U(rng) < 0 ? -1.0 : 1.0);
      A.set(i, i, d);
      dense[i * n + i] = d;
      b[i] = U(rng);
    }
    const auto x = solve_banded(A, b);
    const auto y = dense_solve(dense, b);
    for (std::size_t i = 0; i < n; ++i)
      banded_vs_dense = std::max(banded_vs_dense, std::abs(x[i] - y[i]));
  }
  r.checks.push_back({"banded vs dense, 50x50 kl=ku=2 (max abs diff)", banded_vs_dense, 1e-10});

  // Row-dominance is not required with pivoting: a nonsymmetric band that
  // forces row interchanges.
  double pivoted = 0.0;
  {
    const std::size_t n = 40, kl = 3, ku = 3;
    BandedMatrix A(n, kl, ku);
    std::vector<double> dense(n * n, 0.0), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = (i >= kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
        const double v = (i == j ? 1e-3 : 1.0) * U(rng) + (j + 1 == i ? 3.0 : 0.0);
        A.set(i, j, v);
        dense[i * n + j] = v;
      }
      b[i] = U(rng);
    }
    const auto x = solve_banded(A, b);
    const auto y = dense_solve(dense, b);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pivoted = std::max(pivoted, std::abs(x[i] - y[i]));
      scale = std::max(scale, std::abs(y[i]));
    }
    pivoted /= scale;
  }
  r.checks.push_back({"banded vs dense with pivoting, 40x40 kl=ku=3 (rel diff)", pivoted, 1e-10});

  double thomas = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 200;
    std::vector<double> lo(n - 1), di(n), up(n - 1), b(n);
    BandedMatrix A(n, 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
      double off = 0.0;
      if (i > 0) off += std::abs(lo[i - 1] = U(rng));
      if (i + 1 < n) off += std::abs(up[i] = U(rng));
      di[i] = off + 0.5 + std::abs(U(rng));
      b[i] = U(rng);
      A.set(i, i, di[i]);
      if (i > 0) A.set(i, i - 1, lo[i - 1]);
      if (i + 1 < n) A.set(i, i + 1, up[i]);
    }
    const auto x = solve_tridiagonal(lo, di, up, b);
    const auto y = solve_banded(A, b);
    for (std::size_t i = 0; i < n; ++i) thomas = std::max(thomas, std::abs(x[i] - y[i]));
  }
  r.checks.push_back({"tridiagonal vs banded, n=200 (max abs diff)", thomas, 1e-10});
  return r;
}

/// Steady Darcy flow with constant permeability: p = -(V_b/K) x, V = V_b.
inline SuiteReport darcy() {
  SuiteReport r{"darcy", {}, 0.0};
  const double L = 0.01, V_b = 5.0e-3;
  const double K = 1.67e-5 * 8.1; // K_ref * Psi(0.9)
  const double stiffness = 7.0e3 * 0.1;
  double p_err = 0.0, v_err = 0.0;
  for (std::size_t n : {11u, 101u, 1001u}) {
    const Mesh1D mesh(L, n);
    const std::size_t ne = mesh.element_count();
    const PoroelasticCoefficients c{std::vector<double>(ne, stiffness),
                                    std::vector<double>(ne, K), std::vector<double>(ne, 0.0)};
    const std::vector<double> u_prev(n, 0.0);
    const auto sol =
        solve(assemble(mesh, c, u_prev, steady, {PressureBc::wall, 0.0, V_b}));
    const double scale = V_b / K * L;
    for (std::size_t i = 0; i < n; ++i)
      p_err = std::max(p_err, std::abs(sol.p[i] + V_b / K * mesh.x(i)) / scale);
    for (double v : sol.darcy_flux) v_err = std::max(v_err, std::abs(v - V_b) / V_b);
  }
  r.checks.push_back({"nodal p vs -(V_b/K)x (max rel error)", p_err, 1e-10});
  r.checks.push_back({"Darcy flux vs V_b (max rel error)", v_err, 1e-10});
  return r;
}

/// Exponential fitting is nodally exact for steady constant-coefficient
/// advection-diffusion.
inline SuiteReport sg_exact() {
  SuiteReport r{"sg-exact", {}, 0.0};
  const double L = 1.0;
  double exact_err = 0.0;
  for (std::size_t n : {11u, 41u}) {
    for (double pe : {-200.0, -20.0, -1.0, 0.0, 0.5, 1.0, 20.0, 200.0}) {
      const Mesh1D mesh(L, n);
      const double D = 1.0e-3, v = pe * D / L;
      AdrProblem p(mesh);
      std::fill(p.diffusion.begin(), p.diffusion.end(), D);
      std::fill(p.velocity.begin(), p.velocity.end(), v);
      p.left = AdrBoundary::dirichlet(0.0);
      p.right = AdrBoundary::dirichlet(1.0);
      const auto w = solve_adr(p, steady, {});
      for (std::size_t i = 0; i < n; ++i) {
        const double x = mesh.x(i);
        double exact;
        if (pe == 0.0)
          exact = x / L;
        else if (pe > 0.0)
          exact = (std::exp(v * (x - L) / D) - std::exp(-v * L / D)) / (1.0 - std::exp(-v * L / D));
        else
          exact = std::expm1(v * x / D) / std::expm1(v * L / D);
        exact_err = std::max(exact_err, std::abs(w[i] - exact));
      }
    }
  }
  r.checks.push_back({"steady advection-diffusion vs exponential profile (max nodal error)",
                      exact_err, 1e-10});

  // Cell Peclet 1e3: bounded and monotone.
  double overshoot = 0.0, nonmonotone = 0.0;
  for (double sign : {1.0, -1.0}) {
    const std::size_t n = 51;
    const Mesh1D mesh(L, n);
    const double D = 1.0e-6, v = sign * 1.0e3 * D / mesh.spacing();
    AdrProblem p(mesh);
    std::fill(p.diffusion.begin(), p.diffusion.end(), D);
    std::fill(p.velocity.begin(), p.velocity.end(), v);
    p.left = AdrBoundary::dirichlet(0.0);
    p.right = AdrBoundary::dirichlet(1.0);
    const auto w = solve_adr(p, steady, {});
    for (std::size_t i = 0; i < n; ++i) {
      overshoot = std::max({overshoot, -w[i], w[i] - 1.0});
      if (i > 0) nonmonotone = std::max(nonmonotone, w[i - 1] - w[i]);
    }
  }
  r.checks.push_back({"cell Peclet 1e3: excursion outside [0, 1]", overshoot, 1e-14});
  r.checks.push_back({"cell Peclet 1e3: largest decrease between neighbours", nonmonotone, 1e-14});
  return r;
}

namespace detail {

/// Backward-Euler run of an ADR problem whose forcing makes the
/// time-discrete manufactured solution exact; returns the final L2 error.
inline double adr_mms_error(std::size_t n, bool with_advection) {
  const double L = 1.0, dt = 1.0e-3;
  const std::size_t steps = 20;
  const double k = std::numbers::pi / L;
  const double D = 0.05, v = with_advection ? 0.3 : 0.0, sigma = with_advection ? 2.0 : 0.0;

  // diffusion:  w = e^-t cos(k x), zero gradient at both ends
  // advection:  w = e^-t (1 + x sin(k x)), Dirichlet at both ends
  auto shape = [&](double x) { return with_advection ? 1.0 + x * std::sin(k * x) : std::cos(k * x); };
  auto shape_x = [&](double x) {
    return with_advection ? std::sin(k * x) + k * x * std::cos(k * x) : -k * std::sin(k * x);
  };
  auto shape_xx = [&](double x) {
    return with_advection ? 2.0 * k * std::cos(k * x) - k * k * x * std::sin(k * x)
                          : -k * k * std::cos(k * x);
  };

  const Mesh1D mesh(L, n);
  AdrProblem p(mesh);
  std::fill(p.diffusion.begin(), p.diffusion.end(), D);
  std::fill(p.velocity.begin(), p.velocity.end(), v);
  std::fill(p.reaction.begin(), p.reaction.end(), sigma);
  p.boundary_velocity = {v, v};

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = shape(mesh.x(i));
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t = s * dt, a = std::exp(-t), a_prev = std::exp(-(t - dt));
    for (std::size_t i = 0; i < n; ++i) {
      const double x = mesh.x(i);
      p.source[i] = (a - a_prev) / dt * shape(x) + a * (v * shape_x(x) - D * shape_xx(x) +
                                                        sigma * shape(x));
    }
    if (with_advection) {
      p.left = AdrBoundary::dirichlet(a * shape(0.0));
      p.right = AdrBoundary::dirichlet(a * shape(L));
    }
    w = solve_adr(p, dt, w);
  }
  const double a = std::exp(-(steps * dt));
  return l2_error(mesh, w, [&](double x) { return a * shape(x); });
}

} // namespace detail

/// Spatial convergence of the transient ADR solver.
inline SuiteReport mms_adr() {
  SuiteReport r{"mms-adr", {}, 0.0};
  for (bool adv : {false, true}) {
    std::vector<double> h, err;
    for (std::size_t n : convergence_meshes()) {
      h.push_back(1.0 / static_cast<double>(n - 1));
      err.push_back(detail::adr_mms_error(n, adv));
    }
    r.checks.push_back({adv ? "advection-diffusion-reaction L2 order"
                            : "transient diffusion L2 order",
                        fitted_order(h, err), 1.9, true});
  }
  return r;
}

/// Manufactured u = sin(pi x / L), p = x (L - x) for one time step of the
/// coupled displacement-pressure system with constant coefficients.
struct PoroMmsErrors {
  double u = 0.0, p = 0.0, flux = 0.0;
};

inline PoroMmsErrors poro_mms_errors(std::size_t n) {
  const double L = 1.0, a = 2.0, K = 0.5, dt = 0.25;
  const double k = std::numbers::pi / L;
  auto u_exact = [&](double x) { return std::sin(k * x); };
  auto p_exact = [&](double x) { return x * (L - x); };
  auto v_exact = [&](double x) { return -K * (L - 2.0 * x); };

  const Mesh1D mesh(L, n);
  const std::size_t ne = mesh.element_count();
  const PoroelasticCoefficients c{std::vector<double>(ne, a), std::vector<double>(ne, K),
                                  std::vector<double>(ne, 0.0)};
  const std::vector<double> u_prev(n, 0.0);
  // -(a u')' + p' = f_u,   (u' - u_prev')/dt - (K p')' = f_p
  PoroelasticForcing forcing{
      [&](double x) { return a * k * k * std::sin(k * x) + (L - 2.0 * x); },
      [&](double x) { return k * std::cos(k * x) / dt + 2.0 * K; }};
  // T_xx(L) = a u'(L) - p(L),  V(L) = -K p'(L)
  const PoroelasticBoundary bc{PressureBc::wall, a * k * std::cos(k * L) - p_exact(L),
                               v_exact(L)};
  const auto sol = solve(assemble(mesh, c, u_prev, dt, bc, forcing));
  return {l2_error(mesh, sol.u, u_exact), l2_error(mesh, sol.p, p_exact),
          l2_error_elementwise(mesh, sol.darcy_flux, v_exact)};
}

inline SuiteReport mms_poro() {
  SuiteReport r{"mms-poro", {}, 0.0};
  std::vector<double> h, eu, ep, ev;
  for (std::size_t n : convergence_meshes()) {
    const auto e = poro_mms_errors(n);
    h.push_back(1.0 / static_cast<double>(n - 1));
    eu.push_back(e.u);
    ep.push_back(e.p);
    ev.push_back(e.flux);
  }
  r.checks.push_back({"displacement L2 order", fitted_order(h, eu), 1.9, true});
  r.checks.push_back({"pressure L2 order", fitted_order(h, ep), 1.9, true});
  r.checks.push_back({"Darcy flux L2 order", fitted_order(h, ev), 1.0, true});
  return r;
}

/// Randomized nonnegativity and steady maximum-principle sweeps.
///
/// Problems are drawn from the class where the lumped fitted scheme is an
/// M-matrix: every column sum is m (1/dt + sigma) except at a
/// zero-diffusive-flux end, where the boundary velocity adds v n. Such ends
/// therefore carry outflow (or no flow); an inflow end with |v| above the
/// storage term can produce negative values and is excluded here.
inline SuiteReport positivity(std::size_t trials = 4000) {
  SuiteReport r{"positivity", {}, 0.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + U(rng) * (std::log(hi) - std::log(lo)));
  };
  auto sign = [&]() { return U(rng) < 0.5 ? -1.0 : 1.0; };

  double worst = 0.0, max_peclet = 0.0, principle = 0.0;
  std::size_t principle_cases = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(U(rng) * 60);
    const Mesh1D mesh(1.0, n);
    const double h = mesh.spacing();
    const bool transient_run = U(rng) < 0.7;
    const bool steady_principle = !transient_run && U(rng) < 0.5;

    AdrProblem p(mesh);
    // Steady problems keep one flow direction: without storage a converging
    // stagnation point at extreme cell Peclet has both fitted fluxes
    // underflow to zero. The max-principle case also needs a divergence-free
    // (constant) velocity.
    const double direction = sign();
    const double common_pe = log_uniform(1e-3, 1e4);
    for (std::size_t e = 0; e + 1 < n; ++e) {
      p.diffusion[e] = log_uniform(1e-6, 1.0);
      const double pe = transient_run ? log_uniform(1e-3, 1e4) * sign()
                                       : log_uniform(1e-3, 1e4) * direction;
      p.velocity[e] = pe * p.diffusion[e] / h;
    }
    if (steady_principle) {
      // The balance a_e - b_e = v cancels terms of size D_e / h, so a wide
      // diffusivity contrast turns round-off into plateau drift.
      const double d0 = log_uniform(1e-6, 1.0);
      for (double& d : p.diffusion) d = d0 * (0.5 + 1.5 * U(rng));
      const double d_min = *std::min_element(p.diffusion.begin(), p.diffusion.end());
      const double v = direction * common_pe * d_min / h;
      std::fill(p.velocity.begin(), p.velocity.end(), v);
    }
    for (std::size_t e = 0; e + 1 < n; ++e)
      max_peclet = std::max(max_peclet, std::abs(p.velocity[e]) * h / p.diffusion[e]);

    if (!steady_principle)
      for (std::size_t i = 0; i < n; ++i) {
        p.reaction[i] = U(rng) < 0.3 ? 0.0 : log_uniform(1e-6, 1e2);
        p.source[i] = U(rng) < 0.3 ? 0.0 : U(rng);
      }
    p.mass = MassTreatment::lumped;

    // Steady problems get Dirichlet data at both ends: a zero-diffusive-flux
    // end carries no inflow value and is ill-posed without storage.
    auto pick = [&]() {
      return (U(rng) < 0.5 || !transient_run) ? AdrBoundary::dirichlet(U(rng))
                                              : AdrBoundary::zero_diffusive_flux();
    };
    p.left = pick();
    p.right = pick();
    if (p.left.kind == AdrBoundary::Kind::zero_diffusive_flux && p.velocity.front() > 0.0)
      p.velocity.front() = -p.velocity.front();
    if (p.right.kind == AdrBoundary::Kind::zero_diffusive_flux && p.velocity.back() < 0.0)
      p.velocity.back() = -p.velocity.back();
    p.boundary_velocity = {p.velocity.front(), p.velocity.back()};

    std::vector<double> prev(n);
    for (double& w : prev) w = U(rng) < 0.2 ? 0.0 : U(rng);
    const double dt = transient_run ? log_uniform(1e-4, 1e4) : steady;
    const auto w = solve_adr(p, dt, prev);
    for (double x : w) worst = std::max(worst, -x);

    if (steady_principle) {
      ++principle_cases;
      const double lo = std::min(p.left.value, p.right.value);
      const double hi = std::max(p.left.value, p.right.value);
      for (double x : w) principle = std::max({principle, lo - x, x - hi});
    }
  }
  r.checks.push_back({"largest negative nodal value", worst, 1e-12});
  r.checks.push_back({"steady max-principle excursion", principle, 1e-12});
  r.checks.push_back({"largest cell Peclet exercised", max_peclet, 1e3, true});
  r.checks.push_back({"steady max-principle cases", static_cast<double>(principle_cases), 100.0,
                      true});
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"linalg",  "darcy",   "sg-exact",
                                              "mms-adr", "mms-poro", "positivity"};
  return names;
}

/// Run one suite by name; throws InvalidParameter for unknown names.
inline SuiteReport run_suite(std::string_view name) {
  const auto start = std::chrono::steady_clock::now();
  SuiteReport r;
  if (name == "linalg")
    r = linalg();
  else if (name == "darcy")
    r = darcy();
  else if (name == "sg-exact")
    r = sg_exact();
  else if (name == "mms-adr")
    r = mms_adr();
  else if (name == "mms-poro")
    r = mms_poro();
  else if (name == "positivity")
    r = positivity();
  else
    throw InvalidParameter("unknown verification suite '" + std::string(name) + "'");
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace porogrowth::verify
