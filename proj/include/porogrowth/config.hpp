#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "porogrowth/errors.hpp"
#include "porogrowth/params.hpp"
#include "porogrowth/scenario.hpp"

namespace porogrowth {

/// Which output files a run writes.
struct EmitFlags {
  bool timeseries = true;
  bool fields = true; // field_p, field_c, field_u
  bool xi_map = true; // field_xi
  bool diagnostics = true;

  bool operator==(const EmitFlags&) const = default;
};

struct RunConfig {
  ModelParams params;
  ScenarioConfig scenario;
  std::string output_dir; // empty: let the caller decide
  EmitFlags emit;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

struct ConfigKey {
  std::string name;
  std::function<void(RunConfig&, std::string_view)> set; // throws std::invalid_argument
  std::function<std::string(const RunConfig&)> get;
};

inline double parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
  if (!std::isfinite(v)) throw std::invalid_argument("value must be finite");
  return v;
}

inline std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("expected a nonnegative integer, got '" + std::string(text) + "'");
  return v;
}

inline bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(text) + "'");
}

template <class Enum>
struct Choice {
  const char* word;
  Enum value;
};

template <class Enum, std::size_t N>
Enum parse_choice(std::string_view text, const std::array<Choice<Enum>, N>& choices) {
  for (const auto& c : choices)
    if (text == c.word) return c.value;
  std::string allowed;
  for (const auto& c : choices) allowed += (allowed.empty() ? "" : "|") + std::string(c.word);
  throw std::invalid_argument("expected one of " + allowed + ", got '" + std::string(text) + "'");
}

template <class Enum, std::size_t N>
std::string render_choice(Enum v, const std::array<Choice<Enum>, N>& choices) {
  for (const auto& c : choices)
    if (c.value == v) return c.word;
  return "?";
}

inline constexpr std::array<Choice<CultureMode>, 2> culture_words{
    {{"static", CultureMode::static_culture}, {"perfused", CultureMode::perfused}}};
inline constexpr std::array<Choice<InitialProfile>, 2> profile_words{
    {{"ic1", InitialProfile::ic1}, {"ic2", InitialProfile::ic2}}};
inline constexpr std::array<Choice<NutrientSupply>, 2> supply_words{
    {{"csat", NutrientSupply::saturation}, {"cthr", NutrientSupply::threshold}}};
inline constexpr std::array<Choice<HrConvention>, 2> hr_words{
    {{"anisotropic", HrConvention::anisotropic}, {"isotropic", HrConvention::isotropic}}};
inline constexpr std::array<Choice<HcThreshold>, 2> hc_words{
    {{"c_thr", HcThreshold::c_thr}, {"c_apo", HcThreshold::c_apo}}};
inline constexpr std::array<Choice<GrowthModel>, 2> growth_words{
    {{"G0", GrowthModel::constant}, {"G1", GrowthModel::volumetric}}};
inline constexpr std::array<Choice<FluxConvention>, 2> flux_words{
    {{"literal", FluxConvention::literal}, {"inflow", FluxConvention::inflow}}};
inline constexpr std::array<Choice<PressureBc>, 2> pressure_words{
    {{"wall", PressureBc::wall}, {"interface", PressureBc::interface}}};

enum class Range { any, nonnegative, positive, unit_open, unit_half_open };

inline void check_range(double v, Range r) {
  switch (r) {
  case Range::any: return;
  case Range::nonnegative:
    if (!(v >= 0.0)) throw std::invalid_argument("must be nonnegative");
    return;
  case Range::positive:
    if (!(v > 0.0)) throw std::invalid_argument("must be positive");
    return;
  case Range::unit_open:
    if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("must lie in (0, 1)");
    return;
  case Range::unit_half_open:
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("must lie in (0, 1]");
    return;
  }
}

template <class Member>
ConfigKey real_key(std::string name, Member member, Range range) {
  return {std::move(name),
          [member, range](RunConfig& c, std::string_view v) {
            const double x = parse_double(v);
            check_range(x, range);
            member(c) = x;
          },
          [member](const RunConfig& c) { return format_double(member(c)); }};
}

template <class Member>
ConfigKey count_key(std::string name, Member member, std::size_t minimum) {
  return {std::move(name),
          [member, minimum](RunConfig& c, std::string_view v) {
            const std::size_t x = parse_count(v);
            if (x < minimum)
              throw std::invalid_argument("must be at least " + std::to_string(minimum));
            member(c) = x;
          },
          [member](const RunConfig& c) {
            return std::to_string(member(c));
          }};
}

template <class Member>
ConfigKey bool_key(std::string name, Member member) {
  return {std::move(name),
          [member](RunConfig& c, std::string_view v) { member(c) = parse_bool(v); },
          [member](const RunConfig& c) {
            return std::string(member(c) ? "true" : "false");
          }};
}

template <class Member, class Words>
ConfigKey choice_key(std::string name, Member member, const Words& words) {
  return {std::move(name),
          [member, &words](RunConfig& c, std::string_view v) { member(c) = parse_choice(v, words); },
          [member, &words](const RunConfig& c) {
            return render_choice(member(c), words);
          }};
}

#define POROGROWTH_PARAM(field, range)                                                            \
  real_key(#field, [](auto& c) -> auto& { return c.params.field; }, range)

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    using R = Range;
    std::vector<ConfigKey> k{
        POROGROWTH_PARAM(c_0, R::nonnegative),
        POROGROWTH_PARAM(c_sat, R::nonnegative),
        POROGROWTH_PARAM(c_thr, R::nonnegative),
        POROGROWTH_PARAM(c_apo, R::nonnegative),
        POROGROWTH_PARAM(K_eq, R::unit_half_open),
        POROGROWTH_PARAM(D_c_s, R::positive),
        POROGROWTH_PARAM(D_c_fl, R::positive),
        POROGROWTH_PARAM(V_b, R::nonnegative),
        POROGROWTH_PARAM(T_b, R::nonnegative),
        POROGROWTH_PARAM(mu_fl, R::nonnegative),
        POROGROWTH_PARAM(R_n, R::nonnegative),
        POROGROWTH_PARAM(R_v, R::nonnegative),
        POROGROWTH_PARAM(R_q, R::nonnegative),
        POROGROWTH_PARAM(K_half, R::positive),
        POROGROWTH_PARAM(K_sat, R::positive),
        POROGROWTH_PARAM(beta, R::nonnegative),
        POROGROWTH_PARAM(k_apo, R::nonnegative),
        POROGROWTH_PARAM(k_qui, R::nonnegative),
        POROGROWTH_PARAM(k_deg, R::nonnegative),
        POROGROWTH_PARAM(k_g0, R::nonnegative),
        POROGROWTH_PARAM(k_g1, R::nonnegative),
        POROGROWTH_PARAM(k_g2, R::nonnegative),
        POROGROWTH_PARAM(E, R::nonnegative),
        POROGROWTH_PARAM(k_GAG, R::nonnegative),
        POROGROWTH_PARAM(D_eta, R::positive),
        POROGROWTH_PARAM(lambda, R::any),
        POROGROWTH_PARAM(mu, R::positive),
        POROGROWTH_PARAM(phi_ecm_max, R::unit_open),
        POROGROWTH_PARAM(R_cell, R::positive),
        POROGROWTH_PARAM(V_cell, R::positive),
        POROGROWTH_PARAM(tau_m, R::positive),
        POROGROWTH_PARAM(K_ref, R::positive),
        POROGROWTH_PARAM(shear_threshold, R::nonnegative),

        choice_key("culture", [](auto& c) -> auto& { return c.scenario.culture; },
                   culture_words),
        choice_key("ic", [](auto& c) -> auto& { return c.scenario.initial_profile; },
                   profile_words),
        {"k_g",
         [](RunConfig& c, std::string_view v) {
           if (v == "kg1") {
             c.scenario.growth_rate = {GrowthRate::Kind::kg1, 0.0};
           } else if (v == "kg2") {
             c.scenario.growth_rate = {GrowthRate::Kind::kg2, 0.0};
           } else {
             const double x = parse_double(v);
             check_range(x, Range::nonnegative);
             c.scenario.growth_rate = {GrowthRate::Kind::value, x};
           }
         },
         [](const RunConfig& c) -> std::string {
           switch (c.scenario.growth_rate.kind) {
           case GrowthRate::Kind::kg1: return "kg1";
           case GrowthRate::Kind::kg2: return "kg2";
           case GrowthRate::Kind::value: break;
           }
           return format_double(c.scenario.growth_rate.value);
         }},
        choice_key("c_ext", [](auto& c) -> auto& { return c.scenario.supply; },
                   supply_words),
        real_key("length", [](auto& c) -> auto& { return c.scenario.length; }, R::positive),
        count_key("nodes", [](auto& c) -> auto& { return c.scenario.nodes; }, 3),
        real_key("t_end", [](auto& c) -> auto& { return c.scenario.t_end; },
                 R::nonnegative),
        real_key("dt", [](auto& c) -> auto& { return c.scenario.dt; }, R::positive),
        real_key("tol", [](auto& c) -> auto& { return c.scenario.tol; }, R::positive),
        count_key("max_iter", [](auto& c) -> auto& { return c.scenario.max_iter; }, 1),
        bool_key("dt_halving", [](auto& c) -> auto& { return c.scenario.dt_halving; }),
        count_key("anderson_depth",
                  [](auto& c) -> auto& { return c.scenario.anderson_depth; }, 0),
        count_key("sample_stride",
                  [](auto& c) -> auto& { return c.scenario.sample_stride; }, 1),
        choice_key("hr_convention",
                   [](auto& c) -> auto& { return c.scenario.hr_convention; },
                   hr_words),
        choice_key("hc_threshold",
                   [](auto& c) -> auto& { return c.scenario.hc_threshold; }, hc_words),
        choice_key("growth_model",
                   [](auto& c) -> auto& { return c.scenario.growth_model; },
                   growth_words),
        choice_key("flux_convention",
                   [](auto& c) -> auto& { return c.scenario.flux_convention; },
                   flux_words),
        choice_key("pressure_bc", [](auto& c) -> auto& { return c.scenario.pressure_bc; },
                   pressure_words),
        real_key("g_n", [](auto& c) -> auto& { return c.scenario.initial_growth[0]; },
                 R::any),
        real_key("g_v", [](auto& c) -> auto& { return c.scenario.initial_growth[1]; },
                 R::any),
        real_key("g_q", [](auto& c) -> auto& { return c.scenario.initial_growth[2]; },
                 R::any),
        real_key("g_ecm", [](auto& c) -> auto& { return c.scenario.initial_growth[3]; },
                 R::any),
        bool_key("freeze_kinetics",
                 [](auto& c) -> auto& { return c.scenario.freeze_kinetics; }),

        {"output_dir", [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); },
         [](const RunConfig& c) { return c.output_dir; }},
        bool_key("emit_timeseries", [](auto& c) -> auto& { return c.emit.timeseries; }),
        bool_key("emit_fields", [](auto& c) -> auto& { return c.emit.fields; }),
        bool_key("emit_xi", [](auto& c) -> auto& { return c.emit.xi_map; }),
        bool_key("emit_diagnostics", [](auto& c) -> auto& { return c.emit.diagnostics; }),
    };
    return k;
  }();
  return keys;
}

#undef POROGROWTH_PARAM

inline const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

} // namespace detail

/// Parse `key = value` lines. `#` starts a comment; blank lines are ignored.
/// Keys not mentioned keep their defaults, so empty input is a valid config.
///
/// Units: concentrations g/cm^3, rates 1/s, lengths cm, times s, T_b and the
/// Lame parameters dyne/cm^2, V_b cm/s.
inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(line_no, std::string(line), "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "", "missing key before '='");

    const auto* entry = detail::find_key(key);
    if (!entry) throw ConfigError(line_no, key, "unknown key");
    if (auto it = seen.find(key); it != seen.end())
      throw ConfigError(line_no, key, "duplicate key (first set on line " +
                                          std::to_string(it->second) + ")");
    seen.emplace(key, line_no);
    if (value.empty() && key != "output_dir") throw ConfigError(line_no, key, "missing value");
    try {
      entry->set(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, key, e.what());
    }
  }

  // Invariants spanning more than one key.
  auto line_of = [&](const std::string& key) -> std::size_t {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  const auto& p = cfg.params;
  if (!(p.lambda + 2.0 * p.mu > 0.0))
    throw ConfigError(line_of("lambda"), "lambda", "lambda + 2 mu must be positive");
  const double sphere = 4.0 / 3.0 * std::numbers::pi * p.R_cell * p.R_cell * p.R_cell;
  if (std::abs(p.V_cell - sphere) / p.V_cell >= 1.0e-3)
    throw ConfigError(line_of("V_cell"), "V_cell",
                      "inconsistent with R_cell (expected 4/3 pi R_cell^3 within 0.1%)");
  try {
    cfg.scenario.validate();
  } catch (const Error& e) {
    const std::string key = line_of("t_end") ? "t_end" : "dt";
    throw ConfigError(line_of(key), key, e.what());
  }
  return cfg;
}

/// Every key with its current value, in the canonical order.
inline std::string render_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : detail::config_keys()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

/// Names of the form (static|perfused)-(ic1|ic2)-(kg1|kg2)-(csat|cthr).
inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const char* culture : {"static", "perfused"})
    for (const char* ic : {"ic1", "ic2"})
      for (const char* kg : {"kg1", "kg2"})
        for (const char* supply : {"csat", "cthr"})
          names.push_back(std::string(culture) + "-" + ic + "-" + kg + "-" + supply);
  return names;
}

inline RunConfig preset(std::string_view name) {
  std::vector<std::string_view> parts;
  std::string_view rest = name;
  while (true) {
    const auto dash = rest.find('-');
    parts.push_back(rest.substr(0, dash));
    if (dash == std::string_view::npos) break;
    rest = rest.substr(dash + 1);
  }
  const auto fail = [&]() {
    return ConfigError(0, "preset",
                       "unknown preset '" + std::string(name) +
                           "' (expected (static|perfused)-(ic1|ic2)-(kg1|kg2)-(csat|cthr))");
  };
  if (parts.size() != 4) throw fail();

  RunConfig cfg;
  try {
    cfg.scenario.culture = detail::parse_choice(parts[0], detail::culture_words);
    cfg.scenario.initial_profile = detail::parse_choice(parts[1], detail::profile_words);
    cfg.scenario.supply = detail::parse_choice(parts[3], detail::supply_words);
  } catch (const std::invalid_argument&) {
    throw fail();
  }
  if (parts[2] == "kg1")
    cfg.scenario.growth_rate = {GrowthRate::Kind::kg1, 0.0};
  else if (parts[2] == "kg2")
    cfg.scenario.growth_rate = {GrowthRate::Kind::kg2, 0.0};
  else
    throw fail();
  // Medium is pumped in through the free edge and leaves through the wall.
  if (cfg.scenario.culture == CultureMode::perfused)
    cfg.scenario.flux_convention = FluxConvention::inflow;
  return cfg;
}

} // namespace porogrowth
