#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "porogrowth/errors.hpp"

namespace porogrowth {

/// 1 mPa expressed in dyne/cm^2. All stresses are stored in CGS units.
inline constexpr double millipascal = 1.0e-2;

inline constexpr double seconds_per_day = 86400.0;

/// Model constants in CGS units. Defaults are the tabulated culture values.
///
/// The Lame parameters are published with the unit dyne/cm^3; they are used
/// here as stresses (dyne/cm^2) without rescaling.
struct ModelParams {
  // oxygen (g/cm^3)
  double c_0 = 5.0e-6;
  double c_sat = 6.4e-6;
  double c_thr = 1.6e-6;
  double c_apo = 3.2e-7;
  double K_eq = 0.1;
  double D_c_s = 0.75e-5;  // cm^2/s
  double D_c_fl = 1.0e-5;  // cm^2/s

  // perfusion boundary data
  double V_b = 50.0e-4;             // cm/s
  double T_b = 100.0 * millipascal; // dyne/cm^2
  double mu_fl = 1.002e-2;          // g/(cm s)

  // Michaelis-Menten uptake
  double R_n = 3.9e-8; // g/(cm^3 s)
  double R_v = 3.9e-8;
  double R_q = 1.0e-8;
  double K_half = 3.2e-6; // g/cm^3
  double K_sat = 1.927e-6;

  // population kinetics (1/s)
  double beta = 1.0e-5;
  double k_apo = 3.858e-7;
  double k_qui = 3.858e-7;
  double k_deg = 7.7e-7;
  double k_g0 = 5.8e-6;
  double k_g1 = 1.0e-7;
  double k_g2 = 1.0e-5;
  double E = 20.0;
  double k_GAG = 8.61e-11; // cm^6/(cell s g)
  double D_eta = 1.0e-9;   // cm^2/s, cells and ECM

  // mechanics
  double lambda = 5.1937e3; // dyne/cm^2
  double mu = 1.8248e3;     // dyne/cm^2
  double phi_ecm_max = 0.1;
  double R_cell = 5.0e-4;     // cm
  double V_cell = 5.236e-10;  // cm^3
  double tau_m = 172800.0;    // s
  double K_ref = 1.67e-5;     // cm^3 s/g

  /// Shear stress separating the isotropic and anisotropic regimes.
  double shear_threshold = 10.0 * millipascal;

  double aggregate_modulus() const noexcept { return lambda + 2.0 * mu; }
  double bulk_growth_modulus() const noexcept { return 3.0 * lambda + 2.0 * mu; }
  double anisotropy_threshold() const noexcept { return shear_threshold / mu; }
  double diffusivity_ratio() const noexcept { return K_eq * D_c_s / D_c_fl; }

  void validate() const {
    auto nonneg = [](double v, const char* name) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidParameter(std::string(name) + " must be finite and nonnegative");
    };
    auto pos = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidParameter(std::string(name) + " must be finite and positive");
    };
    nonneg(c_0, "c_0");
    nonneg(c_sat, "c_sat");
    nonneg(c_thr, "c_thr");
    nonneg(c_apo, "c_apo");
    pos(D_c_s, "D_c_s");
    pos(D_c_fl, "D_c_fl");
    nonneg(V_b, "V_b");
    nonneg(T_b, "T_b");
    nonneg(mu_fl, "mu_fl");
    nonneg(R_n, "R_n");
    nonneg(R_v, "R_v");
    nonneg(R_q, "R_q");
    pos(K_half, "K_half");
    pos(K_sat, "K_sat");
    nonneg(beta, "beta");
    nonneg(k_apo, "k_apo");
    nonneg(k_qui, "k_qui");
    nonneg(k_deg, "k_deg");
    nonneg(k_g0, "k_g0");
    nonneg(k_g1, "k_g1");
    nonneg(k_g2, "k_g2");
    nonneg(E, "E");
    nonneg(k_GAG, "k_GAG");
    pos(D_eta, "D_eta");
    pos(mu, "mu");
    pos(R_cell, "R_cell");
    pos(V_cell, "V_cell");
    pos(tau_m, "tau_m");
    pos(K_ref, "K_ref");
    nonneg(shear_threshold, "shear_threshold");
    if (!std::isfinite(lambda) || !(lambda + 2.0 * mu > 0.0))
      throw InvalidParameter("lambda + 2 mu must be positive");
    if (!(K_eq > 0.0 && K_eq <= 1.0)) throw InvalidParameter("K_eq must lie in (0, 1]");
    if (!(phi_ecm_max > 0.0 && phi_ecm_max < 1.0))
      throw InvalidParameter("phi_ecm_max must lie in (0, 1)");
    const double sphere = 4.0 / 3.0 * std::numbers::pi * R_cell * R_cell * R_cell;
    if (std::abs(V_cell - sphere) / V_cell >= 1.0e-3)
      throw InvalidParameter("V_cell is inconsistent with R_cell (expected 4/3 pi R^3)");
  }

  bool operator==(const ModelParams&) const = default;
};

} // namespace porogrowth
