#include "sben/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace sben {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) s += ',';
    s += fields[i];
  }
  return s;
}

std::vector<std::string> trajectory_header(int n) {
  std::vector<std::string> h{"t"};
  for (const char* prefix : {"q", "p", "qdot", "pdot"})
    for (int i = 0; i < n; ++i) h.push_back(fmt::format("{}{}", prefix, i));
  h.push_back("gap");
  return h;
}

void append_vector(std::vector<std::string>& row, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(format_double(v[i]));
}

void append_blank(std::vector<std::string>& row, std::size_t count) { row.insert(row.end(), count, ""); }

int trajectory_dimension(const Trajectory& tr) {
  if (tr.states.empty()) throw std::invalid_argument("trajectory has no states");
  return tr.states.front().dimension();
}

std::vector<std::string> trajectory_row(const Trajectory& tr, std::size_t k, int n) {
  std::vector<std::string> row{format_double(tr.times[k])};
  append_vector(row, tr.states[k].q);
  append_vector(row, tr.states[k].p);
  if (k < tr.velocities.size()) {
    append_vector(row, tr.velocities[k].q);
    append_vector(row, tr.velocities[k].p);
    row.push_back(format_double(tr.residual_gaps[k]));
  } else {
    append_blank(row, 2 * static_cast<std::size_t>(n) + 1);
  }
  return row;
}

double optional_number(const std::string& s) {
  return s.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(s);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

double parse_double(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::out_of_range("no column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      t.header = split(line);
      first = false;
      continue;
    }
    auto row = split(line);
    if (row.size() != t.header.size())
      throw std::invalid_argument(fmt::format("csv row has {} fields, header has {}", row.size(), t.header.size()));
    t.rows.push_back(std::move(row));
  }
  if (first) throw std::invalid_argument("csv is empty");
  return t;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  out << join_row(table.header) << '\n';
  for (const auto& row : table.rows) out << join_row(row) << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  const int n = trajectory_dimension(tr);
  CsvTable t;
  t.header = trajectory_header(n);
  for (std::size_t k = 0; k < tr.states.size(); ++k) t.rows.push_back(trajectory_row(tr, k, n));
  write_csv(out, t);
}

void write_stochastic_csv(std::ostream& out, const StochasticTrajectory& st) {
  const Trajectory& tr = st.trajectory;
  const int n = trajectory_dimension(tr);
  CsvTable t;
  t.header = trajectory_header(n);
  for (int i = 0; i < n; ++i) t.header.push_back(fmt::format("eta{}", i));
  t.header.push_back("acceptance_rate");
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    auto row = trajectory_row(tr, k, n);
    if (k < st.eta.size()) {
      append_vector(row, st.eta[k]);
      row.push_back(format_double(st.acceptance_rates[k]));
    } else {
      append_blank(row, static_cast<std::size_t>(n) + 1);
    }
    t.rows.push_back(std::move(row));
  }
  write_csv(out, t);
}

TrajectoryTable read_trajectory_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  int n = 0;
  while (std::find(t.header.begin(), t.header.end(), fmt::format("q{}", n)) != t.header.end()) ++n;
  if (n == 0) throw std::invalid_argument("trajectory csv: no q columns");
  const bool stochastic = std::find(t.header.begin(), t.header.end(), "acceptance_rate") != t.header.end();
  TrajectoryTable out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    auto vec = [&](const char* prefix) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = optional_number(row[t.column(fmt::format("{}{}", prefix, i))]);
      return v;
    };
    out.times.push_back(parse_double(row[t.column("t")]));
    out.states.push_back(PhasePoint{vec("q"), vec("p")});
    const std::string& gap = row[t.column("gap")];
    if (gap.empty()) continue;
    out.velocities.push_back(PhasePoint{vec("qdot"), vec("pdot")});
    out.gaps.push_back(parse_double(gap));
    if (stochastic) {
      out.eta.push_back(vec("eta"));
      out.acceptance_rates.push_back(parse_double(row[t.column("acceptance_rate")]));
    }
  }
  return out;
}

void write_cost_report_csv(std::ostream& out, const CostReport& r) {
  CsvTable t;
  t.header = {"quantity", "value"};
  auto add = [&](const char* name, std::string value) { t.rows.push_back({name, std::move(value)}); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  add("flow", r.flow_tag);
  add("alpha", format_double(r.alpha));
  add("beta", format_double(r.beta));
  add("mu0", format_double(r.mu0));
  add("muT", format_double(r.muT));
  add("cost", format_double(r.cost));
  add("lhs", format_double(r.lhs));
  add("rhs", format_double(r.rhs));
  add("slack", format_double(r.slack));
  add("err_mu0", format_double(r.err_mu0));
  add("err_muT", format_double(r.err_muT));
  add("err_cost", format_double(r.err_cost));
  add("tol_total", format_double(r.tol_total));
  add("inequality_holds", flag(r.inequality_holds));
  add("equality_tight", flag(r.equality_tight));
  add("informative", flag(r.informative));
  add("max_gap", format_double(r.max_gap));
  add("max_energy_identity_residual", format_double(r.max_energy_identity_residual));
  add("max_integrand_identity_residual", format_double(r.max_integrand_identity_residual));
  add("infinite_node", r.infinite_node ? std::to_string(*r.infinite_node) : "");
  add("verdict", std::string(to_string(r.verdict())));
  write_csv(out, t);
}

void write_levels_csv(std::ostream& out, const std::vector<LevelEstimate>& levels) {
  CsvTable t;
  t.header = {"level", "resolution", "step", "mu0", "muT", "cost", "work"};
  for (const auto& l : levels)
    t.rows.push_back({std::to_string(l.level), std::to_string(l.resolution), format_double(l.step),
                      format_double(l.mu0), format_double(l.muT), format_double(l.cost), format_double(l.work)});
  write_csv(out, t);
}

void write_work_pump_csv(std::ostream& out, const WorkPumpReport& r) {
  CsvTable t;
  t.header = {"quantity", "value"};
  auto add = [&](const char* name, std::string value) { t.rows.push_back({name, std::move(value)}); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  add("mu0", format_double(r.mu0));
  add("muT", format_double(r.muT));
  add("lhs", format_double(r.lhs));
  add("rhs", format_double(r.rhs));
  add("tol_total", format_double(r.tol_total));
  add("corollary_holds", flag(r.corollary_holds));
  add("rhs_positive", flag(r.rhs_positive));
  add("measure_increases", flag(r.measure_increases));
  add("hypothesis_d_min", format_double(r.hypothesis_d.min_value));
  add("hypothesis_d_violated", flag(r.hypothesis_d.violated));
  add("verdict", std::string(to_string(r.verdict())));
  write_csv(out, t);
}

std::vector<std::pair<std::string, std::string>> read_quantity_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  if (t.header.size() != 2 || t.header[0] != "quantity" || t.header[1] != "value")
    throw std::invalid_argument("expected a quantity,value table");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& row : t.rows) out.emplace_back(row[0], row[1]);
  return out;
}

std::string format_cost_report(const CostReport& r) {
  std::ostringstream s;
  s << fmt::format("Dissipation cost report ({} flow)\n", r.flow_tag);
  s << fmt::format("  alpha = {:.6g}, beta = {:.6g}\n", r.alpha, r.beta);
  s << fmt::format("  mu_0(B)          = {:.10f}  (+/- {:.3e})\n", r.mu0, r.err_mu0);
  s << fmt::format("  mu_T(B)          = {:.10f}  (+/- {:.3e})\n", r.muT, r.err_muT);
  s << fmt::format("  C(Psi)(B)        = {:.10f}  (+/- {:.3e})\n", r.cost, r.err_cost);
  s << fmt::format("  mu_T - mu_0      = {:.10f}\n", r.lhs);
  s << fmt::format("  beta * C         = {:.10f}\n", r.rhs);
  s << fmt::format("  slack            = {:.3e}\n", r.slack);
  s << fmt::format("  tol_total        = {:.3e}\n", r.tol_total);
  s << fmt::format("  max gap          = {:.3e}\n", r.max_gap);
  s << fmt::format("  identity resid.  = {:.3e}\n", r.max_energy_identity_residual);
  s << fmt::format("  inequality_holds = {}\n", r.inequality_holds);
  s << fmt::format("  equality_tight   = {}\n", r.equality_tight);
  if (r.informative) s << "  (nonsmooth dissipation: verdicts are informative)\n";
  if (r.infinite_node) s << fmt::format("  infinite integrand at node {}\n", *r.infinite_node);
  s << fmt::format("  verdict          = {}\n", to_string(r.verdict()));
  return s.str();
}

std::string format_work_pump_report(const WorkPumpReport& r) {
  std::ostringstream s;
  s << "Work pump report\n";
  s << fmt::format("  mu_0(B)           = {:.10f}\n", r.mu0);
  s << fmt::format("  mu_T(B)           = {:.10f}\n", r.muT);
  s << fmt::format("  mu_T - mu_0       = {:.10f}\n", r.lhs);
  s << fmt::format("  work bound        = {:.10f}\n", r.rhs);
  s << fmt::format("  tol_total         = {:.3e}\n", r.tol_total);
  s << fmt::format("  corollary_holds   = {}\n", r.corollary_holds);
  if (r.rhs_positive) s << fmt::format("  measure_increases = {}\n", r.measure_increases);
  s << fmt::format("  sign condition    : min sampled {:.3e} over {} pairs\n", r.hypothesis_d.min_value,
                   r.hypothesis_d.finite_pairs);
  s << fmt::format("  verdict           = {}\n", to_string(r.verdict()));
  return s.str();
}

}  // namespace sben
