#pragma once

// CSV artifacts. Doubles are written with 17 significant digits so every
// value parses back bit-identically; +inf is written as "inf".

#include <iosfwd>
#include <string>
#include <vector>

#include "sben/liouville.hpp"
#include "sben/stochastic.hpp"

namespace sben {

std::string format_double(double v);
/// Inverse of format_double; throws std::invalid_argument on malformed input.
double parse_double(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

/// Comma-separated, no quoting (the writers never emit commas in fields).
CsvTable read_csv(std::istream& in);
void write_csv(std::ostream& out, const CsvTable& table);

/// Columns t, q0.., p0.., qdot0.., pdot0.., gap. One row per node; the last
/// node has empty velocity and gap fields.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
/// Trajectory columns plus eta0.. and acceptance_rate.
void write_stochastic_csv(std::ostream& out, const StochasticTrajectory& trajectory);

/// Parsed trajectory CSV (stochastic extras when present).
struct TrajectoryTable {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<PhasePoint> velocities;
  std::vector<double> gaps;
  std::vector<Vector> eta;
  std::vector<double> acceptance_rates;
};

TrajectoryTable read_trajectory_csv(std::istream& in);

/// quantity,value rows.
void write_cost_report_csv(std::ostream& out, const CostReport& report);
/// level,resolution,step,mu0,muT,cost,work rows.
void write_levels_csv(std::ostream& out, const std::vector<LevelEstimate>& levels);
void write_work_pump_csv(std::ostream& out, const WorkPumpReport& report);

/// quantity,value table back into a map-like list.
std::vector<std::pair<std::string, std::string>> read_quantity_csv(std::istream& in);

/// Human-readable blocks.
std::string format_cost_report(const CostReport& report);
std::string format_work_pump_report(const WorkPumpReport& report);

}  // namespace sben
