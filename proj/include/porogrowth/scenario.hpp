#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "porogrowth/errors.hpp"
#include "porogrowth/params.hpp"

namespace porogrowth {

enum class CultureMode { static_culture, perfused };
enum class InitialProfile { ic1, ic2 };
enum class NutrientSupply { saturation, threshold };

/// Which regime switches H_r on. The default activates it when r > r_bar.
enum class HrConvention { anisotropic, isotropic };

/// Oxygen level below which quiescence is triggered (H_c = 0).
enum class HcThreshold { c_thr, c_apo };

/// Growth-distortion evolution: constants (G0) or volumetric surrogate (G1).
enum class GrowthModel { constant, volumetric };

/// How V_b is imposed at x = L: V n = V_b literally, or as inflow V n = -V_b.
enum class FluxConvention { literal, inflow };

/// Where the Dirichlet pressure sits. `wall`: p(0) = 0 and V(L) n = V_b.
/// `interface`: V(0) = 0 (impermeable wall) and p(L) = 0.
enum class PressureBc { wall, interface };

struct GrowthRate {
  enum class Kind { kg1, kg2, value };
  Kind kind = Kind::kg1;
  double value = 0.0; // used when kind == value

  double resolve(const ModelParams& params) const noexcept {
    switch (kind) {
    case Kind::kg1: return params.k_g1;
    case Kind::kg2: return params.k_g2;
    case Kind::value: return value;
    }
    return value;
  }

  bool operator==(const GrowthRate&) const = default;
};

/// Volume fraction below which a species is treated as absent.
inline constexpr double fraction_floor = 1.0e-6;

/// Initial amplitudes (A_n, A_eta) at the scaffold wall.
struct Amplitudes {
  double proliferating;
  double other;
};

inline Amplitudes amplitudes(InitialProfile profile) noexcept {
  return profile == InitialProfile::ic1 ? Amplitudes{0.005, 0.001} : Amplitudes{0.05, 0.01};
}

struct ScenarioConfig {
  CultureMode culture = CultureMode::static_culture;
  InitialProfile initial_profile = InitialProfile::ic1;
  GrowthRate growth_rate{};
  NutrientSupply supply = NutrientSupply::saturation;

  double length = 0.01;    // cm
  std::size_t nodes = 101;
  double t_end = 30.0 * seconds_per_day;
  double dt = 3600.0;

  double tol = 1.0e-8;
  std::size_t max_iter = 100;
  bool dt_halving = false;
  /// Anderson history length for the sweep iteration; 0 gives plain sweeps.
  std::size_t anderson_depth = 5;
  std::size_t sample_stride = 24;

  HrConvention hr_convention = HrConvention::anisotropic;
  HcThreshold hc_threshold = HcThreshold::c_thr;
  GrowthModel growth_model = GrowthModel::constant;
  FluxConvention flux_convention = FluxConvention::literal;
  PressureBc pressure_bc = PressureBc::wall;

  /// Initial (and, under G0, permanent) growth distortions for n, v, q, ECM.
  std::array<double, 4> initial_growth{0.0, 0.0, 0.0, 0.0};

  /// Zero every production/consumption term and the oxygen sink.
  bool freeze_kinetics = false;

  double boundary_stress(const ModelParams& params) const noexcept {
    return culture == CultureMode::perfused ? params.T_b : 0.0;
  }

  /// Normal Darcy flux V(L) n imposed at x = L.
  double boundary_flux(const ModelParams& params) const noexcept {
    if (culture != CultureMode::perfused) return 0.0;
    return flux_convention == FluxConvention::literal ? params.V_b : -params.V_b;
  }

  double external_concentration(const ModelParams& params) const noexcept {
    return supply == NutrientSupply::saturation ? params.c_sat : params.c_thr;
  }

  double quiescence_threshold(const ModelParams& params) const noexcept {
    return hc_threshold == HcThreshold::c_thr ? params.c_thr : params.c_apo;
  }

  std::size_t step_count() const noexcept {
    return static_cast<std::size_t>(std::llround(t_end / dt));
  }

  void validate() const {
    if (!(length > 0.0) || !std::isfinite(length))
      throw InvalidParameter("domain length must be positive");
    if (nodes < 3) throw InvalidParameter("at least 3 nodes are required");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
      throw InvalidParameter("t_end must be nonnegative");
    const double steps = std::round(t_end / dt);
    if (std::abs(steps * dt - t_end) > 1.0e-9 * std::max(t_end, dt))
      throw InvalidParameter("t_end must be an integer multiple of dt");
    if (!(tol > 0.0)) throw InvalidParameter("tol must be positive");
    if (max_iter < 1) throw InvalidParameter("max_iter must be at least 1");
    if (sample_stride < 1) throw InvalidParameter("sample_stride must be at least 1");
    if (growth_rate.kind == GrowthRate::Kind::value &&
        (!(growth_rate.value >= 0.0) || !std::isfinite(growth_rate.value)))
      throw InvalidParameter("k_g must be nonnegative");
    const Amplitudes a = amplitudes(initial_profile);
    if (!(a.proliferating + 3.0 * a.other < 1.0))
      throw InvalidInitialCondition("initial amplitudes leave no fluid fraction");
    for (double g : initial_growth)
      if (!std::isfinite(g)) throw InvalidParameter("growth distortions must be finite");
  }

  bool operator==(const ScenarioConfig&) const = default;
};

} // namespace porogrowth
