#pragma once

#include <map>
#include <string>
#include <vector>

#include "coulomb/diagnostics.hpp"
#include "coulomb/dynamics.hpp"
#include "coulomb/model.hpp"

namespace coulomb {

// All writers emit a leading comment block echoing `header` (one line per
// entry, '#'-prefixed) and format numbers with 17 significant digits.

void write_samples_csv(const std::string& path,
                       const std::vector<Configuration>& samples,
                       const std::vector<std::string>& header);

// Columns: step,time,particle,x1,...,xd
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          std::size_t dim, const std::vector<std::string>& header);

// Columns: time,particle,kind,magnitude
void write_events_csv(const std::string& path, const Trajectory& traj,
                      const std::vector<std::string>& header);

void write_curve_csv(const std::string& path, const std::string& abscissa_name,
                     const std::vector<std::pair<std::string, const Curve*>>& curves,
                     const std::vector<std::string>& header);

// Flat `key = value` scalar report.
void write_scalars(const std::string& path,
                   const std::map<std::string, double>& scalars,
                   const std::vector<std::string>& header);

}  // namespace coulomb
