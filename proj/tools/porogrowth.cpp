// Command-line driver: simulate one scenario, sweep all presets, or run the
// verification suites.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "porogrowth.hpp"

namespace fs = std::filesystem;
using namespace porogrowth;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

fs::path default_output(const std::string& leaf) {
  if (const char* env = std::getenv("POROGROWTH_OUT"); env && *env) return fs::path(env) / leaf;
  return fs::path("porogrowth-out") / leaf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunSummary {
  std::size_t steps = 0;
  std::size_t max_iters = 0;
  std::size_t median_iters = 0;
  double seconds = 0.0;
  std::optional<std::string> failure;
};

RunSummary simulate_to(const RunConfig& cfg, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = run(cfg.scenario, cfg.params);
  emit_outputs(traj, cfg.emit, out);

  RunSummary s;
  s.steps = traj.steps.size();
  std::vector<std::size_t> iters;
  for (const auto& d : traj.steps) iters.push_back(d.iterations);
  if (!iters.empty()) {
    std::sort(iters.begin(), iters.end());
    s.max_iters = iters.back();
    s.median_iters = iters[iters.size() / 2];
  }
  s.failure = traj.failure;
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

int cmd_simulate(const std::string& preset_name, const std::string& config_path,
                 const std::string& out, std::size_t nodes, double dt, bool print_config) {
  RunConfig cfg;
  std::string leaf;
  try {
    if (!preset_name.empty()) {
      cfg = preset(preset_name);
      leaf = preset_name;
    } else {
      cfg = parse_config(read_file(config_path));
      leaf = fs::path(config_path).stem().string();
    }
    if (nodes > 0) cfg.scenario.nodes = nodes;
    if (dt > 0.0) cfg.scenario.dt = dt;
    // Overrides go through the parser so range checks stay in one place.
    cfg = parse_config(render_config(cfg));
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return exit_config;
  }

  if (print_config) {
    std::cout << render_config(cfg);
    return exit_ok;
  }

  fs::path dir = !out.empty() ? fs::path(out)
                 : !cfg.output_dir.empty() ? fs::path(cfg.output_dir)
                                           : default_output(leaf);
  try {
    const RunSummary s = simulate_to(cfg, dir);
    std::cout << "wrote " << dir.string() << ": " << s.steps << " steps, fixed-point sweeps median "
              << s.median_iters << " max " << s.max_iters << ", " << s.seconds << " s\n";
    if (s.failure) {
      std::cerr << "run stopped at " << *s.failure << "\n";
      return exit_numerical;
    }
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return exit_numerical;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_numerical;
  }
  return exit_ok;
}

int cmd_sweep(const std::string& out, unsigned jobs) {
  const auto names = preset_names();
  const fs::path root = out.empty() ? default_output("sweep") : fs::path(out);
  std::vector<RunSummary> results(names.size());
  std::vector<std::string> errors(names.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < names.size(); k = next++) {
      try {
        results[k] = simulate_to(preset(names[k]), root / names[k]);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(names.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int status = exit_ok;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto& s = results[k];
    std::cout << names[k] << ": ";
    if (!errors[k].empty()) {
      std::cout << "error: " << errors[k] << "\n";
      status = exit_numerical;
    } else if (s.failure) {
      std::cout << "failed at " << *s.failure << "\n";
      status = exit_numerical;
    } else {
      std::cout << s.steps << " steps, sweeps median " << s.median_iters << " max "
                << s.max_iters << ", " << s.seconds << " s\n";
    }
  }
  return status;
}

int cmd_verify(const std::vector<std::string>& suites) {
  std::vector<std::string> names = suites;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) names = verify::suite_names();
  for (const auto& n : names)
    if (std::find(verify::suite_names().begin(), verify::suite_names().end(), n) ==
        verify::suite_names().end()) {
      std::cerr << "unknown suite '" << n << "'\n";
      return exit_config;
    }

  bool ok = true;
  double total = 0.0;
  for (const auto& n : names) {
    const auto r = verify::run_suite(n);
    total += r.seconds;
    ok = ok && r.passed();
    std::printf("%-10s %s  (%.2f s)\n", r.name.c_str(), r.passed() ? "pass" : "FAIL", r.seconds);
    for (const auto& c : r.checks)
      std::printf("    %-64s %.4e  %s %.1e  %s\n", c.label.c_str(), c.value,
                  c.at_least ? ">=" : "< ", c.threshold, c.passed() ? "ok" : "FAIL");
  }
  std::printf("total %.2f s\n", total);
  return ok ? exit_ok : exit_numerical;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poroelastic tissue-growth simulator (1D bioreactor model)"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run one scenario and write CSV outputs");
  std::string preset_name, config_path, sim_out;
  std::size_t nodes = 0;
  double dt = 0.0;
  bool print_config = false;
  auto* opt_preset = sim->add_option("--preset", preset_name,
                                     "(static|perfused)-(ic1|ic2)-(kg1|kg2)-(csat|cthr)");
  auto* opt_config = sim->add_option("--config", config_path, "key = value configuration file");
  opt_preset->excludes(opt_config);
  opt_config->excludes(opt_preset);
  sim->add_option("--out", sim_out, "Output directory");
  sim->add_option("--nodes", nodes, "Override the node count")->check(CLI::Range(3, 1 << 20));
  sim->add_option("--dt", dt, "Override the time step in seconds")
      ->check(CLI::PositiveNumber);
  sim->add_flag("--print-config", print_config, "Print the resolved configuration and exit");

  auto* sweep = app.add_subcommand("sweep", "Run every preset, one directory each");
  bool all_presets = false;
  std::string sweep_out;
  unsigned jobs = 0;
  sweep->add_flag("--all-presets", all_presets, "Run all 16 presets")->required();
  sweep->add_option("--out", sweep_out, "Root output directory");
  sweep->add_option("-j,--jobs", jobs, "Parallel runs (default: hardware threads)");

  auto* ver = app.add_subcommand("verify", "Run verification suites");
  std::vector<std::string> suites;
  ver->add_option("suite", suites, "linalg | darcy | sg-exact | mms-adr | mms-poro | positivity | all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  if (sim->parsed()) {
    if (preset_name.empty() && config_path.empty()) {
      std::cerr << "simulate needs --preset or --config\n";
      return exit_config;
    }
    return cmd_simulate(preset_name, config_path, sim_out, nodes, dt, print_config);
  }
  if (sweep->parsed()) return cmd_sweep(sweep_out, jobs);
  return cmd_verify(suites);
}
