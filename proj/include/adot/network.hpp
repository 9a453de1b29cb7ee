#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

// Problem data for the resilient transport game: a bipartite network of
// receiving targets x in X and sending sources y in Y, per-edge utility
// weights, per-node throughput intervals, and the adversary's budget model.
// A Scenario is immutable once built; solvers never mutate it.

namespace adot {

struct Edge {
  int x = 0;  // target id, 1-based
  int y = 0;  // source id, 1-based
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct AdversaryConfig {
  std::vector<int> compromised;  // sorted target ids; empty = no attack
  double c_a = 0.0;              // attacker's per-unit manipulation cost
  std::vector<double> kappa;     // squared-l2 budget per target (index x-1)
  friend bool operator==(const AdversaryConfig&, const AdversaryConfig&) = default;
};

struct SolveOptions {
  double eta = 1.0;
  int max_iters = 10000;
  double tol_primal = 1e-6;
  double tol_xi = 1e-6;
  int attacker_period = 1;       // attacker acts when iter % period == 0
  // Weight of the proximal pull toward the previous deception (0 = pure
  // best response, 1 = frozen).  The undamped interleaving orbits instead
  // of settling on instances where the saddle splits a node's budget across
  // edges; 0.8 settles every shipped case and still tracks the centralized
  // answer to ~1e-8.
  double attacker_damping = 0.8;
  std::uint64_t rng_seed = 0;
  friend bool operator==(const SolveOptions&, const SolveOptions&) = default;
};

struct Scenario {
  int num_targets = 0;
  int num_sources = 0;
  std::vector<Edge> edges;  // layout order for all per-edge arrays
  std::vector<double> delta;
  std::vector<double> gamma;
  std::vector<double> p_lower, p_upper;  // per target
  std::vector<double> q_lower, q_upper;  // per source
  AdversaryConfig adversary;
  SolveOptions options;

  // Built by finalize(): edge ids incident to each node, in edge-array order.
  std::vector<std::vector<int>> target_edges;  // index x-1
  std::vector<std::vector<int>> source_edges;  // index y-1

  int edge_count() const { return static_cast<int>(edges.size()); }
  bool is_compromised(int x) const;
  double kappa_of(int x) const;
  // Rebuilds the incidence lists; called by the loaders and generators.
  void finalize();

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic stream for scenario generation (splitmix64).  Draw order is
// part of the generator contract: delta per edge, gamma per edge, p_upper per
// target, q_upper per source; edges enumerated source-major.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform(double lo, double hi);  // in [lo, hi)

 private:
  std::uint64_t state_;
};

// Parses the JSON scenario document.  Missing "options" keys take the
// defaults above; missing "edges" means complete bipartite (source-major);
// delta/gamma accept either dense per-source rows or [x, y, value] triples;
// kappa accepts a scalar broadcast or a {"<target>": value} map.  Throws
// ScenarioError on malformed input or validation failures.
Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::filesystem::path& path);

// Serializes a Scenario back to the same JSON schema.  Numeric fields
// round-trip bit-exactly through load_scenario.
std::string emit_scenario(const Scenario& s);

// Returns human-readable violations (empty = valid): bound ordering, isolated
// nodes, duplicate edges, negative weights, adversary config, aggregate
// throughput infeasibility, option ranges.
std::vector<std::string> validate(const Scenario& s);

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct RandomSpec {
  int num_targets = 0;
  int num_sources = 0;
  ValueRange delta_range, gamma_range, p_upper_range, q_upper_range;
  std::vector<int> compromised;
  double c_a = 0.0;
  double kappa = 0.0;  // shared budget for every compromised node
};

Scenario generate_random_scenario(const RandomSpec& spec, std::uint64_t seed);

// The two benchmark instances.  case1 is fully pinned (5 targets, 2 sources,
// complete bipartite, nodes 2 and 5 compromised, c_a = 0.5, kappa = 15).
// case2 draws a 30x3 network from the documented ranges; nodes 8, 15, 25
// compromised, c_a = 0.5, kappa = 40.
Scenario case1_preset();
RandomSpec case2_spec();
Scenario case2_preset(std::uint64_t seed);
// name is "case1" or "case2"; seed only affects case2.
Scenario make_preset(const std::string& name, std::uint64_t seed);

// Copy with the adversary removed; used by the CLI's --attack off mode.
Scenario without_adversary(const Scenario& s);

}  // namespace adot
