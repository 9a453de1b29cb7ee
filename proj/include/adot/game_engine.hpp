#pragma once

#include <span>
#include <vector>

#include "adot/network.hpp"

// Distributed consensus iteration with an interleaved attacker.  Each round:
// every compromised target refreshes its deception against the current
// consensus flows; each target and each source solves its proximal local
// problem (a shifted projection onto its own throughput set); the consensus
// flow is the average of the two proposals and the scaled disagreement
// accumulates into the dual variable.  All per-edge vectors use the
// scenario's edge-array layout.

namespace adot {

struct IterateState {
  std::vector<double> pi;      // consensus flows
  std::vector<double> pi_t;    // target-side proposals
  std::vector<double> pi_s;    // source-side proposals
  std::vector<double> alpha;   // consensus duals
  std::vector<double> xi;      // attacker deviations (zero off compromised rows)
  std::vector<double> pi_prev; // flows at the attacker's previous move
  int k = 0;                   // completed iterations
};

IterateState make_initial_state(const Scenario& s);

struct TraceRecord {
  int iter = 0;
  double utility = 0.0;
  double primal_residual = 0.0;        // max |pi_t - pi_s|
  std::vector<double> xi_norms;        // l2 per compromised node
};

struct Trace {
  std::vector<int> compromised;        // column labels for xi_norms
  std::vector<TraceRecord> records;    // one per iteration, plus iter 0
  int snapshot_stride = 0;
  std::vector<std::pair<int, std::vector<double>>> plan_snapshots;
};

enum class Termination { Converged, MaxIters };

struct SolveResult {
  std::vector<double> pi;
  std::vector<double> xi;
  double utility = 0.0;
  Termination termination = Termination::MaxIters;
  int iterations = 0;
  Trace trace;
};

// Node-local updates, exposed so tests can drive iterations by hand.  The
// returned vectors are over the node's incident edges in target_edges /
// source_edges order.
std::vector<double> target_update(int x, const IterateState& st, const Scenario& s);
std::vector<double> source_update(int y, const IterateState& st, const Scenario& s);
// Damped best response for compromised target x: exact best response at
// attacker_damping 0, frozen at 1, and in between a proximal step from the
// previous deviation (weight eta * w / (1 - w)) whose fixed points are exact
// best responses.  The node responds to the extrapolated flows
// 2 pi - pi_prev rather than pi itself: alternating play against the bilinear
// coupling conserves its rotational energy and orbits the saddle, while
// reacting one step ahead of the observed motion turns that orbit into a
// contraction without moving any fixed point (there pi_prev == pi).  An empty
// pi_prev means no previous move and disables the extrapolation.
std::vector<double> attacker_row_update(int x, const IterateState& st, const Scenario& s);

void consensus_update(IterateState& st);              // pi = (pi_t + pi_s) / 2
void dual_update(IterateState& st, double eta);       // alpha += eta/2 (pi_t - pi_s)

// sum (delta + xi) pi over target side + sum gamma pi over source side
// + c_a |xi|_1; xi contributes only on compromised rows.
double social_utility(std::span<const double> pi, std::span<const double> xi,
                      const Scenario& s);

// Runs the full loop.  Converged means the consensus residual and the
// attacker movement dropped below their tolerances at the same iteration.
// snapshot_stride > 0 stores the consensus plan every that-many iterations.
SolveResult run(const Scenario& s, int snapshot_stride = 0);

// Reference variant that keeps separate target- and source-side duals and
// forms the consensus from their difference plus the proposal average.  From
// equal starts the two dual vectors stay equal, which is what justifies the
// single dual vector used by run(); tests step both paths and compare.
struct TwoDualState {
  std::vector<double> pi, pi_t, pi_s, alpha_t, alpha_s, xi;
  std::vector<double> pi_prev;  // flows at the attacker's previous move
  int k = 0;
};
TwoDualState make_initial_two_dual_state(const Scenario& s);
void run_two_dual_step(TwoDualState& st, const Scenario& s);

}  // namespace adot
