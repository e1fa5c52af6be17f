#include <cmath>
#include <random>
#include <vector>
#include <gtest/gtest.h>

#include "porogrowth/adr.hpp"

using namespace porogrowth;

namespace {

AdrProblem uniform_problem(std::size_t n, double length, double d, double v) {
  AdrProblem pr(build_mesh(length, n));
  for (auto& x : pr.diffusion) x = d;
  for (auto& x : pr.velocity) x = v;
  pr.boundary_velocity = {v, v};
  return pr;
}

// Steady exact solution of (v w - D w')' = 0, w(0) = 0, w(1) = 1.
double exact_profile(double x, double pe) {
  if (pe == 0.0) return x;
  if (pe > 0.0) return std::exp(pe * (x - 1.0)) * (-std::expm1(-pe * x)) / (-std::expm1(-pe));
  return std::expm1(pe * x) / std::expm1(pe);
}

} // namespace

TEST(Bernoulli, Values) {
  EXPECT_EQ(bernoulli(0.0), 1.0);
  EXPECT_NEAR(bernoulli(1.0), 0.5819767068693265, 1e-15);
  for (double t : {1e-9, 1e-3, 0.5, 3.0, 40.0})
    EXPECT_NEAR(bernoulli(-t), bernoulli(t) + t, 1e-13 * (1 + t));
  EXPECT_EQ(bernoulli(800.0), 0.0);
  EXPECT_NEAR(bernoulli(-800.0), 800.0, 1e-10);
}

TEST(Bernoulli, SmoothAcrossSeriesSwitch) {
  const double a = bernoulli(0.0099999), b = bernoulli(0.0100001);
  EXPECT_NEAR(a, b, 1e-6);
  EXPECT_NEAR(bernoulli(0.01), 0.01 / std::expm1(0.01), 1e-15);
}

TEST(Adr, ZeroVelocityIsCentredStencil) {
  auto pr = uniform_problem(6, 1.0, 0.3, 0.0);
  const double h = 0.2;
  const auto sys = assemble_adr(pr, steady, {});
  for (std::size_t i = 1; i + 1 < 6; ++i) {
    EXPECT_NEAR(sys.diag[i], 2 * 0.3 / h, 1e-14);
    EXPECT_NEAR(sys.lower[i - 1], -0.3 / h, 1e-14);
    EXPECT_NEAR(sys.upper[i], -0.3 / h, 1e-14);
  }
}

TEST(Adr, SteadyNodalExactness) {
  for (double pe : {-200.0, -20.0, -1.0, 0.0, 0.5, 1.0, 20.0, 200.0}) {
    auto pr = uniform_problem(21, 1.0, 1.0, pe);
    pr.left = AdrBoundary::dirichlet(0.0);
    pr.right = AdrBoundary::dirichlet(1.0);
    const auto w = solve_adr(pr, steady, {});
    for (std::size_t i = 0; i < 21; ++i)
      EXPECT_NEAR(w[i], exact_profile(i / 20.0, pe), 1e-12) << "Pe " << pe << " node " << i;
  }
}

TEST(Adr, HighCellPecletStaysMonotone) {
  auto pr = uniform_problem(51, 1.0, 1e-3 / 50.0, 1.0); // cell Peclet 1e3
  pr.left = AdrBoundary::dirichlet(1.0);
  pr.right = AdrBoundary::dirichlet(0.0);
  const auto w = solve_adr(pr, steady, {});
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_GE(w[i], -1e-14);
    EXPECT_LE(w[i], 1.0 + 1e-14);
    if (i > 0) {
      EXPECT_LE(w[i], w[i - 1] + 1e-14);
    }
  }
}

TEST(Adr, ConservationWithZeroFluxEnds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::size_t n = 40;
  auto pr = uniform_problem(n, 2.0, 0.0, 0.0);
  for (auto& d : pr.diffusion) d = 0.01 + U(rng);
  for (auto& v : pr.velocity) v = U(rng) - 0.5;
  pr.boundary_velocity = {0.0, 0.0};
  for (auto& f : pr.source) f = U(rng);
  std::vector<double> w(n);
  for (auto& x : w) x = U(rng);
  const double h = pr.spacing, dt = 0.05;
  auto mass = [&](const std::vector<double>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (i == 0 || i + 1 == n ? 0.5 : 1.0) * h * a[i];
    return s;
  };
  const double added = dt * mass(pr.source);
  for (int step = 0; step < 10; ++step) {
    const double before = mass(w);
    w = solve_adr(pr, dt, w);
    EXPECT_NEAR(mass(w), before + added, 1e-12 * (1 + before));
  }
}

TEST(Adr, ConstantFieldIsPreserved) {
  auto pr = uniform_problem(30, 1.0, 0.2, 0.7);
  pr.left = AdrBoundary::dirichlet(2.5);
  pr.right = AdrBoundary::dirichlet(2.5);
  const std::vector<double> prev(30, 2.5);
  const auto w = solve_adr(pr, 0.1, prev);
  for (double x : w) EXPECT_NEAR(x, 2.5, 1e-13);
}

TEST(Adr, MirrorInvariance) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::size_t n = 25;
  auto pr = uniform_problem(n, 1.0, 0.0, 0.0);
  for (auto& d : pr.diffusion) d = 0.05 + U(rng);
  for (auto& v : pr.velocity) v = 4 * (U(rng) - 0.5);
  for (auto& s : pr.reaction) s = U(rng);
  for (auto& f : pr.source) f = U(rng);
  pr.left = AdrBoundary::dirichlet(0.3);
  pr.right = AdrBoundary::zero_diffusive_flux();
  pr.boundary_velocity = {0.0, 0.8};
  std::vector<double> prev(n);
  for (auto& x : prev) x = U(rng);

  AdrProblem m = pr;
  std::reverse(m.diffusion.begin(), m.diffusion.end());
  std::reverse(m.velocity.begin(), m.velocity.end());
  for (auto& v : m.velocity) v = -v;
  std::reverse(m.reaction.begin(), m.reaction.end());
  std::reverse(m.source.begin(), m.source.end());
  std::swap(m.left, m.right);
  m.boundary_velocity = {-pr.boundary_velocity[1], -pr.boundary_velocity[0]};
  std::vector<double> mprev(prev.rbegin(), prev.rend());

  const auto a = solve_adr(pr, 0.2, prev);
  const auto b = solve_adr(m, 0.2, mprev);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[n - 1 - i], 1e-12);
}

TEST(Adr, NonnegativeOnRestrictedClass) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 5 + trial % 60;
    auto pr = uniform_problem(n, 1.0, 0.0, 0.0);
    for (auto& d : pr.diffusion) d = std::pow(10.0, -6 + 6 * U(rng));
    for (auto& v : pr.velocity) v = 2 * (U(rng) - 0.5);
    for (auto& s : pr.reaction) s = U(rng);
    for (auto& f : pr.source) f = U(rng) < 0.5 ? 0.0 : U(rng);
    // Outflow only through the zero-diffusive-flux ends.
    pr.velocity.front() = -std::abs(pr.velocity.front());
    pr.velocity.back() = std::abs(pr.velocity.back());
    pr.boundary_velocity = {pr.velocity.front(), pr.velocity.back()};
    if (trial % 3 == 0) pr.right = AdrBoundary::dirichlet(U(rng));
    std::vector<double> prev(n);
    for (auto& x : prev) x = U(rng) < 0.3 ? 0.0 : U(rng);
    const auto w = solve_adr(pr, std::pow(10.0, -2 + 4 * U(rng)), prev);
    for (double x : w) EXPECT_GE(x, -1e-12);
  }
}

TEST(Adr, RejectsNonpositiveDiffusion) {
  auto pr = uniform_problem(5, 1.0, 1.0, 0.0);
  pr.diffusion[2] = 0.0;
  EXPECT_THROW(solve_adr(pr, steady, {}), InvalidProblem);
  pr.diffusion[2] = -1.0;
  EXPECT_THROW(solve_adr(pr, steady, {}), InvalidProblem);
}

TEST(Adr, RejectsBadStep) {
  auto pr = uniform_problem(5, 1.0, 1.0, 0.0);
  const std::vector<double> prev(5, 0.0);
  EXPECT_THROW(solve_adr(pr, 0.0, prev), InvalidProblem);
  EXPECT_THROW(solve_adr(pr, 1.0, std::vector<double>(4, 0.0)), InvalidProblem);
}

TEST(OxygenProblem, FluidVelocityAndDiffusivity) {
  const ModelParams p;
  ScenarioConfig sc;
  sc.culture = CultureMode::perfused;
  sc.freeze_kinetics = true;
  const auto mesh = build_mesh(sc.length, 11);
  MixtureState s(11);
  for (std::size_t i = 0; i < 11; ++i) {
    s.phi[0][i] = 0.04;
    s.phi[1][i] = 0.02;
    s.phi[2][i] = 0.02;
    s.phi[3][i] = 0.02;
  }
  const std::vector<double> u(11, 0.0), flux(10, p.V_b);
  const auto pr = build_oxygen_problem(mesh, s, u, u, flux, 3600.0, sc, p);
  for (double v : pr.velocity) EXPECT_NEAR(v, 5.5556e-3, 5e-8);
  EXPECT_NEAR(pr.boundary_velocity[1], 5e-3 / 0.9, 1e-15);
  for (double d : pr.diffusion) EXPECT_NEAR(d, 8.7197e-6, 5e-11);
  for (double r : pr.reaction) EXPECT_EQ(r, 0.0);
  EXPECT_EQ(pr.right.kind, AdrBoundary::Kind::dirichlet);
  EXPECT_EQ(pr.right.value, p.c_sat);
  EXPECT_EQ(pr.left.kind, AdrBoundary::Kind::zero_diffusive_flux);
}

TEST(OxygenProblem, UptakeCoefficient) {
  const ModelParams p;
  const ScenarioConfig sc;
  const auto mesh = build_mesh(sc.length, 5);
  MixtureState s(5);
  for (std::size_t i = 0; i < 5; ++i) {
    s.phi[0][i] = 0.005;
    s.phi[1][i] = 0.001;
    s.phi[2][i] = 0.001;
    s.phi[3][i] = 0.001;
    s.c[i] = p.c_sat;
  }
  const std::vector<double> u(5, 0.0), flux(4, 0.0);
  const auto pr = build_oxygen_problem(mesh, s, u, u, flux, 3600.0, sc, p);
  for (double r : pr.reaction) EXPECT_NEAR(r, 2.5417e-5, 5e-9);
  for (double v : pr.velocity) EXPECT_EQ(v, 0.0);
}

TEST(SpeciesProblem, ReactionAndSource) {
  const ModelParams p;
  ScenarioConfig sc;
  sc.growth_rate.kind = GrowthRate::Kind::kg2;
  const auto mesh = build_mesh(sc.length, 4);
  MixtureState s(4);
  for (std::size_t i = 0; i < 4; ++i) {
    s.phi[0][i] = 0.01 * (i + 1);
    s.phi[1][i] = 0.02;
    s.phi[2][i] = 0.03;
    s.phi[3][i] = 0.01;
  }
  const std::vector<double> c(4, p.c_sat), u(4, 0.0);
  const std::vector<int> hr{1, 0, 1, 0};

  const auto ecm = build_species_problem(matrix, mesh, s, c, hr, u, u, 3600.0, sc, p);
  for (double r : ecm.reaction) EXPECT_EQ(r, p.k_deg);
  for (double d : ecm.diffusion) EXPECT_EQ(d, p.D_eta);

  const auto n = build_species_problem(proliferating, mesh, s, c, hr, u, u, 3600.0, sc, p);
  for (std::size_t i = 0; i < 4; ++i) {
    const double fl = 1.0 - (s.phi[0][i] + 0.06);
    const double growth = fl * p.c_sat / (p.K_sat + p.c_sat) * p.k_g2;
    // Row n of P phi: growth of n plus re-entry from q when H_r = 1.
    const double expected = growth * s.phi[0][i] + p.beta * hr[i] * s.phi[2][i];
    EXPECT_NEAR(n.source[i], expected, 1e-20);
    EXPECT_NEAR(n.reaction[i], 1.0 / p.tau_m, 1e-20);
  }
}

TEST(SpeciesProblem, RejectsPureFluid) {
  const ModelParams p;
  const ScenarioConfig sc;
  const auto mesh = build_mesh(sc.length, 3);
  MixtureState s(3);
  const std::vector<double> c(3, p.c_sat), u(3, 0.0);
  const std::vector<int> hr(3, 0);
  EXPECT_THROW(build_species_problem(proliferating, mesh, s, c, hr, u, u, 3600.0, sc, p),
               NonphysicalState);
}
