#pragma once

#include <span>
#include <string>
#include <vector>

#include "adot/network.hpp"

// Centralized reference solvers used to verify the distributed iteration:
// a dense bounded-variable primal simplex (Bland's rule, two phases), the
// planner's one-shot LP for a fixed deception, a cutting-plane computation
// of the saddle value with a duality-gap certificate, and an exhaustive grid
// check of the minimax identity for tiny instances.

namespace adot {

// Ranged-row LP:  maximize c.x  s.t.  row_lo <= A x <= row_hi,  l <= x <= u.
// Columns are stored dense; row_lo = row_hi encodes an equality, infinities
// open a side.  Small problems only: everything is dense O(rows * cols).
struct LpProblem {
  int rows = 0;
  std::vector<std::vector<double>> cols;  // each of length rows
  std::vector<double> c, l, u;            // per column
  std::vector<double> row_lo, row_hi;
};

struct LpResult {
  bool feasible = true;
  std::vector<double> x;
  std::vector<double> y;  // one dual per row (marginal value of its rhs)
  double objective = 0.0;
  int pivots = 0;
  std::string message;
};

// Throws std::runtime_error on an unbounded problem or a pivot breakdown;
// infeasible problems come back with feasible = false.
LpResult solve_bounded_lp(const LpProblem& p);

struct PlannerLpSolution {
  std::vector<double> pi;
  double objective = 0.0;
  std::vector<double> dual_target;  // per target row
  std::vector<double> dual_source;  // per source row
  int pivots = 0;
};

// Best transport plan against a fixed deception (xi_full per edge, may be
// empty for no attack).  Throws std::runtime_error when the throughput
// intervals admit no plan.
PlannerLpSolution solve_planner_lp(const Scenario& s,
                                   std::span<const double> xi_full);

struct OracleResult {
  std::vector<double> pi;
  std::vector<double> xi;        // exact best response to pi
  double utility = 0.0;          // U(pi, xi), a guaranteed value for the plan
  double upper_bound = 0.0;      // master value; utility <= saddle <= this
  double gap = 0.0;              // upper_bound - utility at termination
  int sweeps = 0;
  bool converged = false;
};

// Saddle value by cutting planes: the master LP maximizes the worst payoff
// over the deceptions seen so far; the attacker's exact best response either
// certifies the gap or supplies a new cut.  Plain best-response alternation
// is not used because it can cycle between two plans; the gap certificate
// makes termination checkable.  gap_tol is relative to 1 + |upper_bound|.
OracleResult centralized_best_response(const Scenario& s,
                                       double gap_tol = 1e-7,
                                       int max_sweeps = 500);

struct GridSaddle {
  double maxmin = 0.0;   // best worst-case over the plan grid
  double minmax = 0.0;   // best worst-case over the deception grid
  double bound = 0.0;    // discretization slack: |maxmin - minmax| <= bound
};

// Exhaustive check on a discretized instance; requires at most 3 edges and
// at most 2 edges on compromised rows, steps >= 2.  Both orders of play land
// within `bound` of the continuous saddle value.
GridSaddle grid_saddle_search(const Scenario& s, int steps);

}  // namespace adot
