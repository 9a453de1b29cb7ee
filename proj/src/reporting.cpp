#include "adot/reporting.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "adot/kernels.hpp"

namespace adot {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "iter,utility,primal_residual";
  for (int x : trace.compromised) out << ",xi_norm_" << x;
  out << "\n";
  for (const TraceRecord& r : trace.records) {
    out << r.iter << ',' << num(r.utility) << ',' << num(r.primal_residual);
    for (double v : r.xi_norms) out << ',' << num(v);
    out << "\n";
  }
}

void write_plan(const Scenario& s, std::span<const double> pi,
                const std::filesystem::path& path) {
  if (static_cast<int>(pi.size()) != s.edge_count())
    throw std::invalid_argument("write_plan: pi size mismatch");
  std::ofstream out = open_out(path);
  out << "x,y,pi\n";
  for (int e = 0; e < s.edge_count(); ++e)
    out << s.edges[e].x << ',' << s.edges[e].y << ',' << num(pi[e]) << "\n";
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace file");

  Trace t;
  std::stringstream hdr(line);
  std::string col;
  int ncol = 0;
  while (std::getline(hdr, col, ',')) {
    if (col.rfind("xi_norm_", 0) == 0)
      t.compromised.push_back(std::stoi(col.substr(8)));
    ++ncol;
  }
  if (ncol < 3) throw std::runtime_error("trace header too short");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    TraceRecord r;
    std::string cell;
    std::getline(row, cell, ',');
    r.iter = std::stoi(cell);
    std::getline(row, cell, ',');
    r.utility = std::stod(cell);
    std::getline(row, cell, ',');
    r.primal_residual = std::stod(cell);
    while (std::getline(row, cell, ',')) r.xi_norms.push_back(std::stod(cell));
    if (static_cast<int>(r.xi_norms.size()) != static_cast<int>(t.compromised.size()))
      throw std::runtime_error("trace row width mismatch");
    t.records.push_back(std::move(r));
  }
  return t;
}

RunSummary summarize(const std::string& label, const Scenario& s,
                     const SolveResult& r, double seconds) {
  RunSummary sum;
  sum.label = label;
  sum.attack = !s.adversary.compromised.empty();
  sum.iterations = r.iterations;
  sum.converged = r.termination == Termination::Converged;
  sum.utility = r.utility;
  sum.primal_residual =
      r.trace.records.empty() ? 0.0 : r.trace.records.back().primal_residual;
  if (!r.trace.records.empty()) {
    const TraceRecord& last = r.trace.records.back();
    for (std::size_t i = 0; i < r.trace.compromised.size(); ++i)
      sum.xi_norms.emplace_back(r.trace.compromised[i], last.xi_norms[i]);
  }
  sum.seconds = seconds;
  return sum;
}

void print_summary(std::ostream& os, const RunSummary& sum) {
  os << sum.label << ": " << (sum.converged ? "converged" : "max iterations")
     << " after " << sum.iterations << " iterations\n"
     << "  utility          " << num(sum.utility) << "\n"
     << "  primal residual  " << num(sum.primal_residual) << "\n"
     << "  attack           " << (sum.attack ? "on" : "off") << "\n";
  for (const auto& [x, norm] : sum.xi_norms)
    os << "  |xi_" << x << "|_2         " << num(norm) << "\n";
  if (sum.seconds > 0.0) os << "  wall time        " << sum.seconds << " s\n";
}

RunComparison compare_runs(const Scenario& s, std::span<const double> pi_a,
                           std::span<const double> xi_a, double utility_a,
                           std::span<const double> pi_b,
                           std::span<const double> xi_b, double utility_b) {
  const std::size_t m = static_cast<std::size_t>(s.edge_count());
  if (pi_a.size() != m || pi_b.size() != m || xi_a.size() != m || xi_b.size() != m)
    throw std::invalid_argument("compare_runs: runs use different edge layouts");
  RunComparison cmp;
  cmp.utility_a = utility_a;
  cmp.utility_b = utility_b;
  cmp.delta_utility = utility_a - utility_b;
  cmp.relative_gap =
      std::fabs(cmp.delta_utility) / std::max(1.0, std::fabs(utility_b));
  cmp.max_plan_gap = kernels::max_abs_diff(pi_a.data(), pi_b.data(), m);
  cmp.max_xi_gap = kernels::max_abs_diff(xi_a.data(), xi_b.data(), m);
  return cmp;
}

void print_comparison(std::ostream& os, const RunComparison& cmp) {
  os << "utility A        " << num(cmp.utility_a) << "\n"
     << "utility B        " << num(cmp.utility_b) << "\n"
     << "delta utility    " << num(cmp.delta_utility) << "\n"
     << "relative gap     " << num(cmp.relative_gap) << "\n"
     << "max plan gap     " << num(cmp.max_plan_gap) << "\n"
     << "max xi gap       " << num(cmp.max_xi_gap) << "\n";
}

}  // namespace adot
