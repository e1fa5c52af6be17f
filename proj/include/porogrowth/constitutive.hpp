#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "porogrowth/errors.hpp"
#include "porogrowth/params.hpp"
#include "porogrowth/scenario.hpp"

namespace porogrowth {

/// Species ordering shared by every per-population array.
enum Species : std::size_t { proliferating = 0, synthesizing = 1, quiescent = 2, matrix = 3 };
inline constexpr std::size_t species_count = 4;
inline constexpr std::array<Species, 4> all_species{proliferating, synthesizing, quiescent,
                                                    matrix};

inline const char* species_name(Species s) noexcept {
  switch (s) {
  case proliferating: return "n";
  case synthesizing: return "v";
  case quiescent: return "q";
  case matrix: return "ecm";
  }
  return "?";
}

using SpeciesVector = std::array<double, species_count>;

// ---------------------------------------------------------------------------
// Permeability and diffusivity
// ---------------------------------------------------------------------------

/// Psi(phi_fl) = phi_fl^2 / (1 - phi_fl).
inline double permeability_shape(double phi_fl) {
  if (phi_fl < 0.0) throw DomainError("permeability_shape: negative fluid fraction");
  if (!(phi_fl < 1.0)) throw DomainError("permeability_shape: singular at phi_fl >= 1");
  return phi_fl * phi_fl / (1.0 - phi_fl);
}

inline double permeability(double phi_fl, const ModelParams& params) {
  return params.K_ref * permeability_shape(phi_fl);
}

/// Effective oxygen diffusivity of the mixture (Maxwell-type interpolation
/// between K_eq D_c,s at phi_fl = 0 and D_c,fl at phi_fl = 1).
inline double nutrient_diffusivity(double phi_fl, const ModelParams& params) {
  if (phi_fl < 0.0 || phi_fl > 1.0)
    throw DomainError("nutrient_diffusivity: fluid fraction outside [0, 1]");
  const double k = params.diffusivity_ratio();
  const double denom = 3.0 + phi_fl * (k - 1.0);
  if (!(denom > 0.0)) throw DomainError("nutrient_diffusivity: degenerate denominator");
  return params.D_c_fl * (3.0 * k - 2.0 * phi_fl * (k - 1.0)) / denom;
}

// ---------------------------------------------------------------------------
// Stress
// ---------------------------------------------------------------------------

/// Pointwise inputs of the mixture stress.
struct StressInputs {
  double strain = 0.0;   // du/dx
  double pressure = 0.0; // dyne/cm^2
  double phi_s = 0.0;
  SpeciesVector phi{};
  SpeciesVector growth{};
};

/// Uniaxial stress state. Only scalars are kept; the principal directions are
/// the x-axis (sigma_1) and the transverse plane (sigma_2 = sigma_3).
struct StressDecomposition {
  double axial = 0.0;   // T_xx
  double sigma_1 = 0.0;
  double sigma_2 = 0.0;
  double tau_max = 0.0;
  double r = 0.0;
};

/// r = |phi_s u_x - g_n phi_n|.
inline double anisotropy_r(double phi_s, double strain, double g_n, double phi_n) noexcept {
  return std::abs(phi_s * strain - g_n * phi_n);
}

inline StressDecomposition total_stress(const StressInputs& in, const ModelParams& params) {
  const double ha = params.aggregate_modulus();
  const double hb = params.bulk_growth_modulus();
  const double elastic = in.phi_s * in.strain;
  const double n_growth = in.phi[proliferating] * in.growth[proliferating];
  const double other_growth = in.phi[synthesizing] * in.growth[synthesizing] +
                              in.phi[quiescent] * in.growth[quiescent] +
                              in.phi[matrix] * in.growth[matrix];

  StressDecomposition s;
  s.axial = ha * elastic - in.pressure - ha * n_growth - hb * other_growth;
  s.sigma_1 = s.axial;
  s.sigma_2 = params.lambda * elastic - in.pressure - params.lambda * n_growth - hb * other_growth;
  // sigma_1 - sigma_2 = 2 mu (elastic - n_growth); taking it directly avoids
  // cancellation when the pressure dominates.
  s.tau_max = params.mu * (elastic - n_growth);
  s.r = anisotropy_r(in.phi_s, in.strain, in.growth[proliferating], in.phi[proliferating]);
  return s;
}

// ---------------------------------------------------------------------------
// Switches
// ---------------------------------------------------------------------------

/// Binary isotropy indicator: 1 when r <= r_bar (ties count as isotropic).
inline int isotropy_xi(double r, double r_bar) noexcept { return r <= r_bar ? 1 : 0; }

/// H_r: 1 in the regime selected by the convention, 0 otherwise.
inline int switch_hr(double r, double r_bar,
                     HrConvention convention = HrConvention::anisotropic) noexcept {
  const bool anisotropic = r > r_bar;
  return (convention == HrConvention::anisotropic) == anisotropic ? 1 : 0;
}

/// H_c: 1 while oxygen is strictly above the quiescence threshold.
inline int switch_hc(double c, double threshold) noexcept { return c > threshold ? 1 : 0; }

inline int switch_hc(double c, const ModelParams& params,
                     HcThreshold which = HcThreshold::c_thr) noexcept {
  return switch_hc(c, which == HcThreshold::c_thr ? params.c_thr : params.c_apo);
}

// ---------------------------------------------------------------------------
// Population kinetics
// ---------------------------------------------------------------------------

/// Production matrix P (full 4x4) and diagonal of the consumption matrix C,
/// species ordered (n, v, q, ECM).
struct KineticsMatrices {
  std::array<SpeciesVector, species_count> production{};
  SpeciesVector consumption{};

  /// Row `s` of P phi.
  double source(Species s, const SpeciesVector& phi) const noexcept {
    double acc = 0.0;
    for (std::size_t j = 0; j < species_count; ++j) acc += production[s][j] * phi[j];
    return acc;
  }

  /// ((P - C) phi)_s
  double net(Species s, const SpeciesVector& phi) const noexcept {
    return source(s, phi) - consumption[s] * phi[s];
  }
};

/// Small negative round-off tolerated on fractions and concentrations.
inline constexpr double positivity_slack = 1.0e-12;

inline KineticsMatrices kinetics(const SpeciesVector& phi, double phi_fl, double c, int hr, int hc,
                                 double k_g, const ModelParams& params) {
  for (double f : phi)
    if (f < -positivity_slack) throw DomainError("kinetics: negative volume fraction");
  if (!(phi_fl > 0.0 && phi_fl < 1.0)) throw DomainError("kinetics: phi_fl outside (0, 1)");
  if (c < -positivity_slack) throw DomainError("kinetics: negative concentration");

  c = std::max(c, 0.0);
  const double on = hr ? 1.0 : 0.0;
  const double off = 1.0 - on;
  const double starving = hc ? 0.0 : 1.0;
  const double mitosis = 1.0 / params.tau_m;
  const double quiescence = params.k_qui * starving;

  KineticsMatrices m;
  auto& P = m.production;
  P[proliferating][proliferating] = phi_fl * c / (params.K_sat + c) * k_g;
  P[proliferating][quiescent] = params.beta * on;
  P[synthesizing][quiescent] = params.beta * off;
  P[quiescent][proliferating] = mitosis;
  P[quiescent][synthesizing] = params.beta * on;
  P[matrix][synthesizing] = c * params.E * params.k_GAG / params.V_cell *
                            std::max(0.0, 1.0 - phi[matrix] / params.phi_ecm_max);

  m.consumption[proliferating] = mitosis + quiescence;
  m.consumption[synthesizing] = params.beta * on + quiescence + params.k_apo;
  m.consumption[quiescent] = params.beta * on + params.beta * off + quiescence + params.k_apo;
  m.consumption[matrix] = params.k_deg;
  return m;
}

// ---------------------------------------------------------------------------
// Oxygen uptake
// ---------------------------------------------------------------------------

struct OxygenSink {
  double value = 0.0;       // Q_c, g/(cm^3 s), nonpositive
  double coefficient = 0.0; // Q_c / c at fixed uptake, 1/s, nonpositive
};

inline OxygenSink oxygen_sink(double phi_n, double phi_v, double phi_q, double c,
                              const ModelParams& params) noexcept {
  const double demand = params.R_n * phi_n + params.R_v * phi_v + params.R_q * phi_q;
  OxygenSink s;
  s.coefficient = -demand / (c + params.K_half);
  s.value = s.coefficient * c;
  return s;
}

// ---------------------------------------------------------------------------
// Growth distortions
// ---------------------------------------------------------------------------

/// One forward-Euler step of the growth-distortion law. Under the constant
/// model the distortion never changes; under the volumetric surrogate
/// dg/dt = net_rate / 3 while the species is present.
inline double growth_distortion_step(double g, double phi, double net_rate, double dt,
                                     GrowthModel model) {
  if (!(dt > 0.0)) throw DomainError("growth_distortion_step: dt must be positive");
  if (model == GrowthModel::constant) return g;
  if (!(phi > fraction_floor)) return g;
  return g + dt * net_rate / 3.0;
}

} // namespace porogrowth
