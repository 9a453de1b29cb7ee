#include "adot/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace adot {

using nlohmann::json;

bool Scenario::is_compromised(int x) const {
  return std::binary_search(adversary.compromised.begin(),
                            adversary.compromised.end(), x);
}

double Scenario::kappa_of(int x) const {
  if (x < 1 || x > static_cast<int>(adversary.kappa.size())) return 0.0;
  return adversary.kappa[x - 1];
}

void Scenario::finalize() {
  target_edges.assign(num_targets, {});
  source_edges.assign(num_sources, {});
  for (int e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges[e];
    if (ed.x >= 1 && ed.x <= num_targets) target_edges[ed.x - 1].push_back(e);
    if (ed.y >= 1 && ed.y <= num_sources) source_edges[ed.y - 1].push_back(e);
  }
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform(double lo, double hi) {
  double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ScenarioError(msg); }

double require_number(const json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + ": expected a number");
  return j.get<double>();
}

std::vector<double> read_vector(const json& j, const char* key, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(std::string(key) + ": expected an array of length " + std::to_string(n));
  std::vector<double> out;
  out.reserve(n);
  for (const auto& v : j) out.push_back(require_number(v, key));
  return out;
}

int edge_index_of(const Scenario& s, int x, int y) {
  for (int e = 0; e < s.edge_count(); ++e)
    if (s.edges[e].x == x && s.edges[e].y == y) return e;
  return -1;
}

// delta/gamma: either |Y| dense rows of |X| values, or [x, y, value] triples.
std::vector<double> read_edge_values(const json& j, const char* key,
                                     const Scenario& s) {
  if (!j.is_array() || j.empty()) fail(std::string(key) + ": expected a non-empty array");
  std::vector<double> out(s.edge_count(), 0.0);
  std::vector<bool> seen(s.edge_count(), false);
  // Dense form: exactly |Y| rows, each |X| wide.  A shape that matches both
  // interpretations is read as dense.
  bool dense = static_cast<int>(j.size()) == s.num_sources;
  if (dense)
    for (const auto& row : j)
      if (!row.is_array() || static_cast<int>(row.size()) != s.num_targets)
        dense = false;
  if (dense) {
    for (int y = 1; y <= s.num_sources; ++y)
      for (int x = 1; x <= s.num_targets; ++x) {
        int e = edge_index_of(s, x, y);
        double v = require_number(j[y - 1][x - 1], key);
        if (e < 0) {
          if (v != 0.0)
            fail(std::string(key) + ": nonzero value for absent edge (" +
                 std::to_string(x) + "," + std::to_string(y) + ")");
          continue;
        }
        out[e] = v;
        seen[e] = true;
      }
  } else {
    for (const auto& t : j) {
      if (!t.is_array() || t.size() != 3)
        fail(std::string(key) + ": expected [x, y, value] triples");
      int x = t[0].get<int>();
      int y = t[1].get<int>();
      int e = edge_index_of(s, x, y);
      if (e < 0)
        fail(std::string(key) + ": value for unknown edge (" +
             std::to_string(x) + "," + std::to_string(y) + ")");
      if (seen[e])
        fail(std::string(key) + ": duplicate value for edge (" +
             std::to_string(x) + "," + std::to_string(y) + ")");
      out[e] = require_number(t[2], key);
      seen[e] = true;
    }
  }
  for (int e = 0; e < s.edge_count(); ++e)
    if (!seen[e])
      fail(std::string(key) + ": missing value for edge (" +
           std::to_string(s.edges[e].x) + "," + std::to_string(s.edges[e].y) + ")");
  return out;
}

void read_options(const json& j, SolveOptions& o) {
  if (!j.is_object()) fail("options: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "eta") o.eta = require_number(*it, "options.eta");
    else if (k == "max_iters") o.max_iters = it->get<int>();
    else if (k == "tol_primal") o.tol_primal = require_number(*it, "options.tol_primal");
    else if (k == "tol_xi") o.tol_xi = require_number(*it, "options.tol_xi");
    else if (k == "attacker_period") o.attacker_period = it->get<int>();
    else if (k == "attacker_damping") o.attacker_damping = require_number(*it, "options.attacker_damping");
    else if (k == "seed") o.rng_seed = it->get<std::uint64_t>();
    else fail("options: unknown key '" + k + "'");
  }
}

}  // namespace

Scenario load_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("scenario parse error: ") + e.what());
  }
  if (!j.is_object()) fail("scenario: expected a JSON object");

  Scenario s;
  if (!j.contains("targets") || !j.contains("sources"))
    fail("scenario: 'targets' and 'sources' are required");
  s.num_targets = j["targets"].get<int>();
  s.num_sources = j["sources"].get<int>();
  if (s.num_targets < 1 || s.num_sources < 1)
    fail("scenario: node counts must be positive");

  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2) fail("edges: expected [x, y] pairs");
      s.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
  } else {
    for (int y = 1; y <= s.num_sources; ++y)
      for (int x = 1; x <= s.num_targets; ++x) s.edges.push_back({x, y});
  }
  s.finalize();

  if (!j.contains("delta") || !j.contains("gamma"))
    fail("scenario: 'delta' and 'gamma' are required");
  s.delta = read_edge_values(j["delta"], "delta", s);
  s.gamma = read_edge_values(j["gamma"], "gamma", s);

  if (!j.contains("p_upper") || !j.contains("q_upper"))
    fail("scenario: 'p_upper' and 'q_upper' are required");
  s.p_upper = read_vector(j["p_upper"], "p_upper", s.num_targets);
  s.q_upper = read_vector(j["q_upper"], "q_upper", s.num_sources);
  s.p_lower = j.contains("p_lower")
                  ? read_vector(j["p_lower"], "p_lower", s.num_targets)
                  : std::vector<double>(s.num_targets, 0.0);
  s.q_lower = j.contains("q_lower")
                  ? read_vector(j["q_lower"], "q_lower", s.num_sources)
                  : std::vector<double>(s.num_sources, 0.0);

  s.adversary.kappa.assign(s.num_targets, 0.0);
  if (j.contains("adversary")) {
    const json& a = j["adversary"];
    if (!a.is_object()) fail("adversary: expected an object");
    if (a.contains("compromised"))
      for (const auto& v : a["compromised"])
        s.adversary.compromised.push_back(v.get<int>());
    std::sort(s.adversary.compromised.begin(), s.adversary.compromised.end());
    if (a.contains("c_a")) s.adversary.c_a = require_number(a["c_a"], "adversary.c_a");
    if (a.contains("kappa")) {
      const json& k = a["kappa"];
      if (k.is_number()) {
        std::fill(s.adversary.kappa.begin(), s.adversary.kappa.end(),
                  k.get<double>());
      } else if (k.is_object()) {
        for (auto it = k.begin(); it != k.end(); ++it) {
          int x = std::stoi(it.key());
          if (x < 1 || x > s.num_targets)
            fail("adversary.kappa: target " + it.key() + " out of range");
          s.adversary.kappa[x - 1] = require_number(*it, "adversary.kappa");
        }
      } else {
        fail("adversary.kappa: expected a number or a {target: value} map");
      }
    }
  }

  if (j.contains("options")) read_options(j["options"], s.options);

  auto violations = validate(s);
  if (!violations.empty()) {
    std::string msg = "scenario validation failed:";
    for (const auto& v : violations) msg += "\n  - " + v;
    fail(msg);
  }
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string emit_scenario(const Scenario& s) {
  json j;
  j["targets"] = s.num_targets;
  j["sources"] = s.num_sources;
  json edges = json::array();
  for (const Edge& e : s.edges) edges.push_back({e.x, e.y});
  j["edges"] = edges;
  json delta = json::array(), gamma = json::array();
  for (int e = 0; e < s.edge_count(); ++e) {
    delta.push_back({s.edges[e].x, s.edges[e].y, s.delta[e]});
    gamma.push_back({s.edges[e].x, s.edges[e].y, s.gamma[e]});
  }
  j["delta"] = delta;
  j["gamma"] = gamma;
  j["p_lower"] = s.p_lower;
  j["p_upper"] = s.p_upper;
  j["q_lower"] = s.q_lower;
  j["q_upper"] = s.q_upper;
  json adv;
  adv["compromised"] = s.adversary.compromised;
  adv["c_a"] = s.adversary.c_a;
  json kap = json::object();
  for (int x : s.adversary.compromised)
    kap[std::to_string(x)] = s.adversary.kappa[x - 1];
  adv["kappa"] = kap;
  j["adversary"] = adv;
  json opt;
  opt["eta"] = s.options.eta;
  opt["max_iters"] = s.options.max_iters;
  opt["tol_primal"] = s.options.tol_primal;
  opt["tol_xi"] = s.options.tol_xi;
  opt["attacker_period"] = s.options.attacker_period;
  opt["attacker_damping"] = s.options.attacker_damping;
  opt["seed"] = s.options.rng_seed;
  j["options"] = opt;
  return j.dump(2) + "\n";
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> out;
  auto bad = [&](const std::string& m) { out.push_back(m); };

  if (s.num_targets < 1) bad("no targets");
  if (s.num_sources < 1) bad("no sources");
  if (s.edges.empty()) bad("no edges");
  if (static_cast<int>(s.delta.size()) != s.edge_count()) bad("delta size mismatch");
  if (static_cast<int>(s.gamma.size()) != s.edge_count()) bad("gamma size mismatch");
  if (static_cast<int>(s.p_lower.size()) != s.num_targets ||
      static_cast<int>(s.p_upper.size()) != s.num_targets)
    bad("target bound size mismatch");
  if (static_cast<int>(s.q_lower.size()) != s.num_sources ||
      static_cast<int>(s.q_upper.size()) != s.num_sources)
    bad("source bound size mismatch");
  if (!out.empty()) return out;  // later checks assume consistent sizes

  std::set<std::pair<int, int>> seen;
  for (const Edge& e : s.edges) {
    if (e.x < 1 || e.x > s.num_targets || e.y < 1 || e.y > s.num_sources) {
      bad("edge (" + std::to_string(e.x) + "," + std::to_string(e.y) +
          ") references a missing node");
      continue;
    }
    if (!seen.insert({e.x, e.y}).second)
      bad("duplicate edge (" + std::to_string(e.x) + "," + std::to_string(e.y) + ")");
  }

  for (int e = 0; e < s.edge_count(); ++e) {
    if (!std::isfinite(s.delta[e]) || s.delta[e] < 0.0)
      bad("delta must be finite and nonnegative on edge " + std::to_string(e + 1));
    if (!std::isfinite(s.gamma[e]) || s.gamma[e] < 0.0)
      bad("gamma must be finite and nonnegative on edge " + std::to_string(e + 1));
  }

  for (int x = 1; x <= s.num_targets; ++x) {
    if (s.target_edges[x - 1].empty())
      bad("target " + std::to_string(x) + " has no incident edge");
    double lo = s.p_lower[x - 1], hi = s.p_upper[x - 1];
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || lo > hi)
      bad("target " + std::to_string(x) + ": need 0 <= p_lower <= p_upper");
  }
  for (int y = 1; y <= s.num_sources; ++y) {
    if (s.source_edges[y - 1].empty())
      bad("source " + std::to_string(y) + " has no incident edge");
    double lo = s.q_lower[y - 1], hi = s.q_upper[y - 1];
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || lo > hi)
      bad("source " + std::to_string(y) + ": need 0 <= q_lower <= q_upper");
  }

  for (size_t i = 0; i < s.adversary.compromised.size(); ++i) {
    int x = s.adversary.compromised[i];
    if (x < 1 || x > s.num_targets)
      bad("compromised node " + std::to_string(x) + " is not a target");
    if (i > 0 && s.adversary.compromised[i - 1] == x)
      bad("compromised node " + std::to_string(x) + " listed twice");
  }
  if (!std::isfinite(s.adversary.c_a) || s.adversary.c_a < 0.0)
    bad("adversary.c_a must be finite and nonnegative");
  for (int x = 1; x <= static_cast<int>(s.adversary.kappa.size()); ++x)
    if (!std::isfinite(s.adversary.kappa[x - 1]) || s.adversary.kappa[x - 1] < 0.0)
      bad("adversary.kappa for target " + std::to_string(x) +
          " must be finite and nonnegative");

  // Aggregate throughput check: total forced outflow must fit under total
  // receive capacity and vice versa, otherwise no feasible plan exists.
  double sum_pl = 0, sum_pu = 0, sum_ql = 0, sum_qu = 0;
  for (double v : s.p_lower) sum_pl += v;
  for (double v : s.p_upper) sum_pu += v;
  for (double v : s.q_lower) sum_ql += v;
  for (double v : s.q_upper) sum_qu += v;
  if (sum_pl > sum_qu)
    bad("aggregate infeasibility: sum(p_lower) > sum(q_upper)");
  if (sum_ql > sum_pu)
    bad("aggregate infeasibility: sum(q_lower) > sum(p_upper)");

  const SolveOptions& o = s.options;
  if (!(o.eta > 0.0)) bad("options.eta must be positive");
  if (o.max_iters < 1) bad("options.max_iters must be at least 1");
  if (!(o.tol_primal > 0.0)) bad("options.tol_primal must be positive");
  if (!(o.tol_xi > 0.0)) bad("options.tol_xi must be positive");
  if (o.attacker_period < 1) bad("options.attacker_period must be at least 1");
  if (o.attacker_damping < 0.0 || o.attacker_damping > 1.0)
    bad("options.attacker_damping must lie in [0, 1]");
  return out;
}

Scenario generate_random_scenario(const RandomSpec& spec, std::uint64_t seed) {
  Scenario s;
  s.num_targets = spec.num_targets;
  s.num_sources = spec.num_sources;
  for (int y = 1; y <= s.num_sources; ++y)
    for (int x = 1; x <= s.num_targets; ++x) s.edges.push_back({x, y});
  s.finalize();

  SplitMix64 rng(seed);
  s.delta.resize(s.edge_count());
  s.gamma.resize(s.edge_count());
  for (int e = 0; e < s.edge_count(); ++e)
    s.delta[e] = rng.uniform(spec.delta_range.lo, spec.delta_range.hi);
  for (int e = 0; e < s.edge_count(); ++e)
    s.gamma[e] = rng.uniform(spec.gamma_range.lo, spec.gamma_range.hi);
  s.p_lower.assign(s.num_targets, 0.0);
  s.q_lower.assign(s.num_sources, 0.0);
  s.p_upper.resize(s.num_targets);
  for (int x = 0; x < s.num_targets; ++x)
    s.p_upper[x] = rng.uniform(spec.p_upper_range.lo, spec.p_upper_range.hi);
  s.q_upper.resize(s.num_sources);
  for (int y = 0; y < s.num_sources; ++y)
    s.q_upper[y] = rng.uniform(spec.q_upper_range.lo, spec.q_upper_range.hi);

  s.adversary.compromised = spec.compromised;
  std::sort(s.adversary.compromised.begin(), s.adversary.compromised.end());
  s.adversary.c_a = spec.c_a;
  s.adversary.kappa.assign(s.num_targets, 0.0);
  for (int x : s.adversary.compromised)
    if (x >= 1 && x <= s.num_targets) s.adversary.kappa[x - 1] = spec.kappa;
  s.options.rng_seed = seed;
  return s;
}

Scenario case1_preset() {
  Scenario s;
  s.num_targets = 5;
  s.num_sources = 2;
  for (int y = 1; y <= 2; ++y)
    for (int x = 1; x <= 5; ++x) s.edges.push_back({x, y});
  s.finalize();
  // Per-source rows over targets 1..5.
  s.delta = {4, 12, 4, 12, 8, /* y=2 */ 8, 8, 16, 4, 4};
  s.gamma = {6, 4.5, 12, 6, 9, /* y=2 */ 3, 6, 7.5, 9, 12};
  s.p_lower.assign(5, 0.0);
  s.p_upper = {2, 3, 4, 3, 2};
  s.q_lower.assign(2, 0.0);
  s.q_upper = {5, 5.5};
  s.adversary.compromised = {2, 5};
  s.adversary.c_a = 0.5;
  s.adversary.kappa = {0, 15, 0, 0, 15};
  return s;
}

RandomSpec case2_spec() {
  RandomSpec spec;
  spec.num_targets = 30;
  spec.num_sources = 3;
  spec.delta_range = {6, 11};
  spec.gamma_range = {7, 12};
  spec.p_upper_range = {5, 10};
  spec.q_upper_range = {67, 75};
  spec.compromised = {8, 15, 25};
  spec.c_a = 0.5;
  spec.kappa = 40.0;
  return spec;
}

Scenario case2_preset(std::uint64_t seed) {
  return generate_random_scenario(case2_spec(), seed);
}

Scenario make_preset(const std::string& name, std::uint64_t seed) {
  if (name == "case1") return case1_preset();
  if (name == "case2") return case2_preset(seed);
  fail("unknown preset '" + name + "' (expected case1 or case2)");
}

Scenario without_adversary(const Scenario& s) {
  Scenario t = s;
  t.adversary.compromised.clear();
  std::fill(t.adversary.kappa.begin(), t.adversary.kappa.end(), 0.0);
  return t;
}

}  // namespace adot
