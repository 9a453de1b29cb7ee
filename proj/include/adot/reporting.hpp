#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adot/game_engine.hpp"
#include "adot/network.hpp"

// CSV emitters and run comparison.  Numbers are written with 17 significant
// digits so a written trace re-parses to the same doubles.

namespace adot {

// Columns: iter,utility,primal_residual, then one xi_norm_<x> column per
// compromised node (in trace.compromised order).
void write_trace(const Trace& trace, const std::filesystem::path& path);

// Columns: x,y,pi over the scenario's edge order.
void write_plan(const Scenario& s, std::span<const double> pi,
                const std::filesystem::path& path);

// Re-reads a trace CSV written by write_trace; used to check round-tripping.
Trace read_trace(const std::filesystem::path& path);

struct RunSummary {
  std::string label;
  bool attack = false;
  int iterations = 0;
  bool converged = false;
  double utility = 0.0;
  double primal_residual = 0.0;
  std::vector<std::pair<int, double>> xi_norms;  // compromised node -> l2
  double seconds = 0.0;
};

RunSummary summarize(const std::string& label, const Scenario& s,
                     const SolveResult& r, double seconds);
void print_summary(std::ostream& os, const RunSummary& sum);

struct RunComparison {
  double utility_a = 0.0;
  double utility_b = 0.0;
  double delta_utility = 0.0;     // utility_a - utility_b
  double relative_gap = 0.0;      // |delta| / max(1, |utility_b|)
  double max_plan_gap = 0.0;      // max |pi_a - pi_b|
  double max_xi_gap = 0.0;        // max |xi_a - xi_b|
};

// Both runs must be over the same scenario (same edge layout); throws
// std::invalid_argument otherwise.
RunComparison compare_runs(const Scenario& s, std::span<const double> pi_a,
                           std::span<const double> xi_a, double utility_a,
                           std::span<const double> pi_b,
                           std::span<const double> xi_b, double utility_b);
void print_comparison(std::ostream& os, const RunComparison& cmp);

}  // namespace adot
