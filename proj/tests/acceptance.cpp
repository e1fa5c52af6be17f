// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "porogrowth.hpp"

using namespace porogrowth;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Relative l2 residual of the least-squares polynomial fit of given degree.
double fit_residual(const Mesh1D& mesh, const std::vector<double>& y, int degree) {
  const std::size_t n = y.size(), m = static_cast<std::size_t>(degree) + 1;
  // Normal equations on x scaled to [0, 1]; degree <= 2 keeps them well posed.
  std::vector<double> a(m * m, 0.0), b(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = mesh.x(i) / mesh.length();
    std::vector<double> pw(m, 1.0);
    for (std::size_t k = 1; k < m; ++k) pw[k] = pw[k - 1] * s;
    for (std::size_t r = 0; r < m; ++r) {
      b[r] += pw[r] * y[i];
      for (std::size_t c = 0; c < m; ++c) a[r * m + c] += pw[r] * pw[c];
    }
  }
  const auto coef = verify::dense_solve(a, b);
  double res = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = mesh.x(i) / mesh.length();
    double f = 0.0, pw = 1.0;
    for (std::size_t k = 0; k < m; ++k, pw *= s) f += coef[k] * pw;
    res += (y[i] - f) * (y[i] - f);
    norm += y[i] * y[i];
  }
  return norm > 0.0 ? std::sqrt(res / norm) : INFINITY;
}

const MixtureState& snapshot_at(const Trajectory& traj, double t) {
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    if (std::abs(traj.times[k] - t) < 1e-6) return traj.snapshots[k];
  throw std::runtime_error("no snapshot at t = " + std::to_string(t));
}

double lumped_total(const Mesh1D& mesh, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    s += (i == 0 || i + 1 == w.size() ? 0.5 : 1.0) * mesh.spacing() * w[i];
  return s;
}

// ---------------------------------------------------------------------------

void ac1() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string failed;
  for (const auto& name : verify::suite_names()) {
    const auto r = verify::run_suite(name);
    if (!r.passed()) {
      ok = false;
      failed += " " + name;
    }
  }
  const double secs = seconds_since(t0);
  report("AC1", ok && secs < 30.0,
         "verify suites " + std::string(ok ? "all pass" : "failing:" + failed) +
             fmt(", %.2f s (limit 30 s)", secs));
}

struct PresetRun {
  std::string name;
  Trajectory traj;
  double seconds = 0.0;
};

std::vector<PresetRun> run_presets() {
  std::vector<PresetRun> runs;
  for (const auto& name : preset_names()) {
    auto cfg = preset(name);
    cfg.scenario.sample_stride = 1; // keep every step for the per-step checks
    const auto t0 = Clock::now();
    PresetRun r{name, run(cfg.scenario, cfg.params), 0.0};
    r.seconds = seconds_since(t0);
    runs.push_back(std::move(r));
  }
  return runs;
}

void ac2(const std::vector<PresetRun>& runs) {
  bool ok = true;
  double worst_neg = 0.0, slowest = 0.0, min_fl = 1.0, max_fl = 0.0;
  std::string why;
  for (const auto& r : runs) {
    slowest = std::max(slowest, r.seconds);
    if (!r.traj.ok()) {
      ok = false;
      why += " " + r.name + " failed (" + *r.traj.failure + ");";
      continue;
    }
    if (r.traj.snapshots.size() != 721) {
      ok = false;
      why += " " + r.name + " missing steps;";
    }
    for (const auto& s : r.traj.snapshots)
      for (std::size_t i = 0; i < s.node_count(); ++i) {
        worst_neg = std::min(worst_neg, s.c[i]);
        for (const auto& f : s.phi) worst_neg = std::min(worst_neg, f[i]);
        min_fl = std::min(min_fl, s.fluid_fraction(i));
        max_fl = std::max(max_fl, s.fluid_fraction(i));
      }
    if (r.seconds >= 60.0) {
      ok = false;
      why += " " + r.name + " too slow;";
    }
  }
  ok = ok && worst_neg >= -1e-12 && min_fl > 1e-6 && max_fl < 1.0;
  report("AC2", ok,
         "16 presets x 720 steps: min(c, phi) = " + fmt("%.3e", worst_neg) + " (>= -1e-12), phi_fl in [" +
             fmt("%.6f", min_fl) + ", " + fmt("%.6f", max_fl) + "], slowest run " +
             fmt("%.2f s (limit 60 s)", slowest) + why);
}

void ac3() {
  auto cfg = preset("static-ic1-kg1-csat");
  cfg.scenario.freeze_kinetics = true;
  cfg.scenario.sample_stride = 1;
  const auto traj = run(cfg.scenario, cfg.params);
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k)
    for (std::size_t s = 0; s < species_count; ++s) {
      const double before = lumped_total(traj.mesh, traj.snapshots[k - 1].phi[s]);
      const double after = lumped_total(traj.mesh, traj.snapshots[k].phi[s]);
      worst = std::max(worst, std::abs(after - before) / before);
    }
  report("AC3", traj.ok() && traj.snapshots.size() == 721 && worst < 1e-12,
         "frozen-kinetics static run, worst per-step relative change of sum m_i phi = " +
             fmt("%.3e (limit 1e-12)", worst));
}

void ac4(const Trajectory& traj) {
  bool all_iso = traj.ok();
  for (const auto& level : traj.xi)
    for (int x : level) all_iso = all_iso && x == 1;
  double peak = 0.0, t_peak = 0.0, last = 0.0;
  for (const auto& m : traj.mid_node) {
    if (m.phi[proliferating] > peak) {
      peak = m.phi[proliferating];
      t_peak = m.time;
    }
    last = m.phi[proliferating];
  }
  const double peak_day = t_peak / seconds_per_day;
  report("AC4", all_iso && peak_day <= 5.0 && last < 0.1 * peak,
         std::string("static-ic1-kg1-csat (G0): xi = 1 everywhere: ") + (all_iso ? "yes" : "no") +
             fmt("; phi_n(L/2) peaks at day %.3f (<= 5)", peak_day) +
             fmt(", day-30 value / peak = %.4f (< 0.1)", peak > 0 ? last / peak : INFINITY));
}

void ac5() {
  // Under G0 the pressure of the static run is identically zero and the
  // relative fit residual is 0/0; the volumetric growth surrogate is used.
  auto cfg = preset("static-ic1-kg1-csat");
  cfg.scenario.growth_model = GrowthModel::volumetric;
  const auto traj = run(cfg.scenario, cfg.params);
  if (!traj.ok()) {
    report("AC5", false, "static-ic1-kg1-csat (G1) failed: " + *traj.failure);
    return;
  }
  const auto& p = snapshot_at(traj, 20 * seconds_per_day).p;
  const double quad = fit_residual(traj.mesh, p, 2);
  const double lin = fit_residual(traj.mesh, p, 1);
  report("AC5", quad < 1e-2,
         "static-ic1-kg1-csat (G1), day 20: quadratic fit residual " + fmt("%.3e (limit 1e-2)", quad) +
             fmt(", linear fit residual %.3e for contrast", lin));
}

void ac6() {
  auto cfg = preset("perfused-ic1-kg1-csat");
  cfg.scenario.sample_stride = 1;
  const auto traj = run(cfg.scenario, cfg.params);
  if (!traj.ok()) {
    report("AC6", false, "perfused-ic1-kg1-csat failed: " + *traj.failure);
    return;
  }
  const auto& p = snapshot_at(traj, 20 * seconds_per_day).p;
  const double lin = fit_residual(traj.mesh, p, 1);

  bool aniso = true;
  for (std::size_t k = 1; k < traj.xi.size(); ++k)
    for (int x : traj.xi[k]) aniso = aniso && x == 0;

  const double r_bar = cfg.params.anisotropy_threshold();
  const auto r = anisotropy_field(traj.mesh, snapshot_at(traj, cfg.scenario.dt));
  const double r_min = *std::min_element(r.begin(), r.end());

  report("AC6", lin < 1e-2 && aniso && r_min > r_bar,
         "perfused-ic1-kg1-csat, day 20: linear fit residual " + fmt("%.3e (limit 1e-2)", lin) +
             "; xi = 0 at all x for t > 0: " + (aniso ? "yes" : "no") + fmt("; min r(x, dt) = %.4e", r_min) +
             fmt(" > r_bar = %.4e", r_bar));
}

void ac7() {
  const ModelParams prm;
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  double worst_kin = 0.0, worst_stress = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    SpeciesVector phi{0.2 * U(rng), 0.2 * U(rng), 0.2 * U(rng), 0.1 * U(rng)};
    const double fl = 1.0 - (phi[0] + phi[1] + phi[2] + phi[3]);
    const int hr = static_cast<int>(t % 2), hc = static_cast<int>((t / 2) % 2);
    const auto k = kinetics(phi, fl, 1e-5 * U(rng), hr, hc, 1e-5 * U(rng), prm);
    const double quiescence = prm.k_qui * (1 - hc);
    // beta channel: what leaves q through beta arrives in n or v; what
    // leaves v through beta (H_r = 1) arrives in q.
    worst_kin = std::max(worst_kin, rel(k.production[proliferating][quiescent] +
                                            k.production[synthesizing][quiescent],
                                        k.consumption[quiescent] - quiescence - prm.k_apo));
    worst_kin = std::max(worst_kin, rel(k.production[quiescent][synthesizing] + prm.beta,
                                        k.consumption[synthesizing] - quiescence - prm.k_apo +
                                            prm.beta));
    // tau_m channel: mitosis loss of n is the gain of q.
    worst_kin = std::max(worst_kin, rel(k.production[quiescent][proliferating],
                                        k.consumption[proliferating] - quiescence));

    StressInputs in;
    for (std::size_t s = 0; s < species_count; ++s) {
      in.phi[s] = phi[s];
      in.growth[s] = 0.1 * (U(rng) - 0.5);
    }
    in.phi_s = 1.0 - fl;
    in.strain = 0.02 * (U(rng) - 0.5);
    in.pressure = 10.0 * (U(rng) - 0.5);
    const auto st = total_stress(in, prm);
    // T_aniso = 2 mu (phi_s u_x - phi_n g_n) e_x (x) e_x, built entrywise.
    const double a = 2.0 * prm.mu * (in.phi_s * in.strain - in.phi[0] * in.growth[0]);
    double fro2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double e = (i == 0 && j == 0) ? a : 0.0;
        fro2 += e * e;
      }
    if (st.r > 0.0) {
      worst_stress = std::max(worst_stress, rel(st.r * prm.mu, std::abs(st.tau_max)));
      worst_stress = std::max(worst_stress, rel(std::sqrt(fro2), 2.0 * prm.mu * st.r));
    }
  }
  report("AC7", worst_kin < 1e-12 && worst_stress < 1e-12,
         "1e4 random inputs: worst kinetics balance " + fmt("%.2e", worst_kin) +
             fmt(", worst stress identity %.2e (limit 1e-12)", worst_stress));
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), root).generic_string()] = ss.str();
  }
  return files;
}

void ac8() {
  const fs::path base = fs::current_path() / "acceptance-sweeps";
  fs::remove_all(base);
  int status = 0;
  for (const char* leaf : {"a", "b"}) {
    const std::string cmd = std::string("\"") + POROGROWTH_CLI_PATH + "\" sweep --all-presets --out \"" +
                            (base / leaf).string() + "\" > \"" + (base.string() + "-" + leaf + ".log") +
                            "\" 2>&1";
    fs::create_directories(base);
    status |= std::system(cmd.c_str());
  }
  const auto a = read_tree(base / "a");
  const auto b = read_tree(base / "b");
  std::size_t csv = 0;
  for (const auto& [k, v] : a)
    if (k.ends_with(".csv")) ++csv;
  const bool ok = status == 0 && !a.empty() && a == b && csv == 16 * 6;
  report("AC8", ok,
         "two `sweep --all-presets` runs: " + std::to_string(a.size()) + " vs " +
             std::to_string(b.size()) + " files, " + (a == b ? "byte-identical" : "DIFFERENT") +
             (status == 0 ? "" : ", CLI exited nonzero"));
  if (ok) fs::remove_all(base);
}

void ac9(const std::vector<PresetRun>& runs) {
  bool ok = true;
  std::size_t worst_max = 0, worst_median = 0;
  std::string why;
  for (const auto& r : runs) {
    if (!r.traj.ok() || r.traj.steps.size() != 720) {
      ok = false;
      why += " " + r.name + " did not complete;";
      continue;
    }
    std::vector<std::size_t> it;
    for (const auto& d : r.traj.steps) it.push_back(d.iterations);
    std::sort(it.begin(), it.end());
    const std::size_t median = it[it.size() / 2];
    worst_max = std::max(worst_max, it.back());
    worst_median = std::max(worst_median, median);
  }
  ok = ok && worst_max <= 100 && worst_median <= 10;
  report("AC9", ok,
         "fixed-point sweeps per step over 16 presets: max " + std::to_string(worst_max) +
             " (<= 100), largest median " + std::to_string(worst_median) + " (<= 10)" + why);
}

} // namespace

int main() {
  try {
    ac1();
    const auto runs = run_presets();
    ac2(runs);
    ac3();
    const auto g0 = std::find_if(runs.begin(), runs.end(),
                                 [](const PresetRun& r) { return r.name == "static-ic1-kg1-csat"; });
    ac4(g0->traj);
    ac5();
    ac6();
    ac7();
    ac8();
    ac9(runs);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
