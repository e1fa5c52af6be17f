#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "porogrowth/config.hpp"
#include "porogrowth/coupling.hpp"
#include "porogrowth/errors.hpp"

namespace porogrowth {

namespace detail {

class CsvFile {
public:
  explicit CsvFile(std::filesystem::path path) : path_(std::move(path)), out_(path_) {
    if (!out_) throw IoError("cannot open " + path_.string() + " for writing");
  }

  void line(const std::string& text) { buffer_ += text + "\n"; }

  void close() {
    out_ << buffer_;
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::string buffer_;
};

inline std::string days(double seconds) { return format_double(seconds / seconds_per_day); }

template <class Value>
void write_field(const std::filesystem::path& path, const Trajectory& traj, Value value) {
  CsvFile f(path);
  f.line("t_days,x_cm,value");
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const std::string t = days(traj.times[k]);
    for (std::size_t i = 0; i < traj.mesh.node_count(); ++i)
      f.line(t + "," + format_double(traj.mesh.x(i)) + "," + value(k, i));
  }
  f.close();
}

} // namespace detail

/// Write the CSV files selected by `emit` into `dir` (created if missing).
/// Returns the paths written.
inline std::vector<std::filesystem::path> emit_outputs(const Trajectory& traj, const EmitFlags& emit,
                                                       const std::filesystem::path& dir) {
  if (traj.mid_node.empty()) throw IoError("nothing to write: the trajectory is empty");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  using detail::format_double;
  std::vector<std::filesystem::path> written;

  if (emit.timeseries) {
    const auto path = dir / "timeseries.csv";
    detail::CsvFile f(path);
    f.line("t_days,phi_n,phi_v,phi_q,phi_ecm,phi_fl,c,p,xi");
    for (const auto& m : traj.mid_node)
      f.line(detail::days(m.time) + "," + format_double(m.phi[0]) + "," + format_double(m.phi[1]) +
             "," + format_double(m.phi[2]) + "," + format_double(m.phi[3]) + "," +
             format_double(m.phi_fl) + "," + format_double(m.c) + "," + format_double(m.p) + "," +
             std::to_string(m.xi));
    f.close();
    written.push_back(path);
  }

  if (emit.fields) {
    const auto& s = traj.snapshots;
    detail::write_field(dir / "field_p.csv", traj,
                        [&](std::size_t k, std::size_t i) { return format_double(s[k].p[i]); });
    detail::write_field(dir / "field_c.csv", traj,
                        [&](std::size_t k, std::size_t i) { return format_double(s[k].c[i]); });
    detail::write_field(dir / "field_u.csv", traj,
                        [&](std::size_t k, std::size_t i) { return format_double(s[k].u[i]); });
    written.push_back(dir / "field_p.csv");
    written.push_back(dir / "field_c.csv");
    written.push_back(dir / "field_u.csv");
  }

  if (emit.xi_map) {
    detail::write_field(dir / "field_xi.csv", traj, [&](std::size_t k, std::size_t i) {
      return std::to_string(traj.snapshot_xi[k][i]);
    });
    written.push_back(dir / "field_xi.csv");
  }

  if (emit.diagnostics) {
    const auto path = dir / "diagnostics.csv";
    detail::CsvFile f(path);
    f.line("step,t_days,fp_iters,fp_residual");
    for (const auto& d : traj.steps)
      f.line(std::to_string(d.step) + "," + detail::days(d.time) + "," +
             std::to_string(d.iterations) + "," + format_double(d.residual));
    f.close();
    written.push_back(path);
  }
  return written;
}

} // namespace porogrowth
