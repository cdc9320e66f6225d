#include "coulomb/io.hpp"

#include <cstdio>
#include <fstream>

#include "coulomb/errors.hpp"

namespace coulomb {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path,
                       const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw NumericalError("cannot open output file: " + path);
  for (const std::string& line : header) out << "# " << line << "\n";
  return out;
}

}  // namespace

void write_samples_csv(const std::string& path,
                       const std::vector<Configuration>& samples,
                       const std::vector<std::string>& header) {
  auto out = open_out(path, header);
  std::size_t d = samples.empty() ? 0 : samples.front().dim;
  out << "sample,particle";
  for (std::size_t k = 0; k < d; ++k) out << ",x" << (k + 1);
  out << "\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t i = 0; i < samples[s].positions.size(); ++i) {
      out << s << "," << i;
      for (std::size_t k = 0; k < d; ++k)
        out << "," << fmt(samples[s].positions[i][k]);
      out << "\n";
    }
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          std::size_t dim, const std::vector<std::string>& header) {
  auto out = open_out(path, header);
  out << "step,time,particle";
  for (std::size_t k = 0; k < dim; ++k) out << ",x" << (k + 1);
  out << "\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    for (std::size_t i = 0; i < traj.states[s].size(); ++i) {
      out << s << "," << fmt(traj.times[s]) << "," << i;
      for (std::size_t k = 0; k < dim; ++k)
        out << "," << fmt(traj.states[s][i][k]);
      out << "\n";
    }
  }
}

void write_events_csv(const std::string& path, const Trajectory& traj,
                      const std::vector<std::string>& header) {
  auto out = open_out(path, header);
  out << "time,particle,kind,magnitude\n";
  for (const Event& e : traj.events) {
    out << fmt(e.time) << "," << e.particle << ","
        << (e.kind == EventKind::Reflection ? "reflection" : "dt-halving") << ","
        << fmt(e.magnitude) << "\n";
  }
}

void write_curve_csv(const std::string& path, const std::string& abscissa_name,
                     const std::vector<std::pair<std::string, const Curve*>>& curves,
                     const std::vector<std::string>& header) {
  auto out = open_out(path, header);
  out << abscissa_name;
  for (const auto& [name, curve] : curves) {
    out << "," << name << "," << name << "_stderr";
    (void)curve;
  }
  out << "\n";
  if (curves.empty()) return;
  std::size_t n = curves.front().second->abscissa.size();
  for (std::size_t k = 0; k < n; ++k) {
    out << fmt(curves.front().second->abscissa[k]);
    for (const auto& [name, curve] : curves) {
      (void)name;
      out << "," << fmt(curve->ordinate[k]) << "," << fmt(curve->stderr_[k]);
    }
    out << "\n";
  }
}

void write_scalars(const std::string& path,
                   const std::map<std::string, double>& scalars,
                   const std::vector<std::string>& header) {
  auto out = open_out(path, header);
  for (const auto& [key, value] : scalars) out << key << " = " << fmt(value) << "\n";
}

}  // namespace coulomb
