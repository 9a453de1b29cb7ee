#pragma once

#include <span>
#include <vector>

// Node-local solvers used inside every consensus iteration:
//  - Euclidean projection onto { v >= 0, L <= sum(v) <= U } (one target or
//    source feasible set), via monotone bisection on the shift parameter.
//  - The attacker's per-node best response: minimize xi . pi + c_a * |xi|_1
//    over the ball-and-box set { |xi|_2^2 <= kappa, xi >= -delta }, via a
//    one-dimensional multiplier bisection after a sign reduction (a
//    minimizer never needs positive coordinates).
// Each has a small brute-force counterpart used as an independent test
// oracle; those are exhaustive/grid searches, not fit for production sizes.

namespace adot {

struct ProjectionSet {
  double lower_sum = 0.0;
  double upper_sum = 0.0;
};

// Projection of v onto the set above.  Requires 0 <= lower_sum <= upper_sum
// and finite input; throws std::invalid_argument otherwise.
void project_box_sum_interval(std::span<const double> v, const ProjectionSet& set,
                              std::span<double> out);
std::vector<double> project_box_sum_interval(std::span<const double> v,
                                             const ProjectionSet& set);

// Exhaustive active-set enumeration (every subset of coordinates clamped to
// zero, with the remainder shifted uniformly to hit the sum bound).  O(2^n).
std::vector<double> brute_force_projection(std::span<const double> v,
                                           const ProjectionSet& set);

struct AttackerNode {
  std::vector<double> delta_row;  // deltas on the node's incident edges
  double kappa = 0.0;             // squared-l2 budget
  double c_a = 0.0;
};

// Exact per-node best response given consensus flows pi_row on the same
// incident edges.  kappa = 0 short-circuits to zero.
std::vector<double> solve_attacker_node(std::span<const double> pi_row,
                                        const AttackerNode& node);

// Proximal variant: minimizes xi . pi + c_a * |xi|_1 + (mu/2) * |xi - z|^2
// over the same set.  mu = 0 reduces to the exact best response.  Unlike the
// raw best response, whose direction is arbitrarily sensitive to pi near
// pi = c_a, this map has gain 1/mu and its fixed points (over z) are exactly
// the best responses, so damped iteration can settle on equilibria that sit
// inside a flat face of the objective.  Requires z in the feasible set.
std::vector<double> solve_attacker_node_prox(std::span<const double> pi_row,
                                             const AttackerNode& node,
                                             std::span<const double> z_row,
                                             double mu);

// Grid search over the same feasible set with the given step; test oracle.
std::vector<double> brute_force_attacker_node(std::span<const double> pi_row,
                                              const AttackerNode& node,
                                              double grid_step);

// xi . pi + c_a * |xi|_1, the attacker's node-local objective.
double attacker_objective(std::span<const double> xi,
                          std::span<const double> pi_row, double c_a);

}  // namespace adot
