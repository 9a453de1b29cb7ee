#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "adot/game_engine.hpp"
#include "adot/kernels.hpp"
#include "adot/network.hpp"
#include "adot/oracle.hpp"
#include "adot/subsolvers.hpp"
#include "doctest.h"

using namespace adot;

namespace {

Scenario tiny(int targets, int sources, std::vector<double> delta,
              std::vector<double> gamma, std::vector<double> p_upper,
              std::vector<double> q_upper) {
  Scenario s;
  s.num_targets = targets;
  s.num_sources = sources;
  for (int y = 1; y <= sources; ++y)
    for (int x = 1; x <= targets; ++x) s.edges.push_back({x, y});
  s.finalize();
  s.delta = std::move(delta);
  s.gamma = std::move(gamma);
  s.p_lower.assign(targets, 0.0);
  s.p_upper = std::move(p_upper);
  s.q_lower.assign(sources, 0.0);
  s.q_upper = std::move(q_upper);
  s.adversary.kappa.assign(targets, 0.0);
  return s;
}

Scenario random_instance(SplitMix64& rng, bool with_lowers) {
  int T = 2 + static_cast<int>(rng.next() % 3);
  int S = 1 + static_cast<int>(rng.next() % 3);
  Scenario s;
  s.num_targets = T;
  s.num_sources = S;
  for (int y = 1; y <= S; ++y)
    for (int x = 1; x <= T; ++x) s.edges.push_back({x, y});
  s.finalize();
  s.delta.resize(s.edge_count());
  s.gamma.resize(s.edge_count());
  for (auto& d : s.delta) d = rng.uniform(0, 10);
  for (auto& g : s.gamma) g = rng.uniform(0, 10);
  s.p_upper.resize(T);
  s.q_upper.resize(S);
  for (auto& p : s.p_upper) p = rng.uniform(0.5, 4);
  for (auto& q : s.q_upper) q = rng.uniform(0.5, 4);
  s.p_lower.assign(T, 0.0);
  s.q_lower.assign(S, 0.0);
  if (with_lowers) {
    double sum_pu = 0, sum_qu = 0;
    for (double v : s.p_upper) sum_pu += v;
    for (double v : s.q_upper) sum_qu += v;
    for (int x = 0; x < T; ++x) s.p_lower[x] = rng.uniform(0, 0.3 * s.p_upper[x]);
    for (int y = 0; y < S; ++y) s.q_lower[y] = rng.uniform(0, 0.3 * s.q_upper[y]);
    double sum_pl = 0, sum_ql = 0;
    for (double v : s.p_lower) sum_pl += v;
    for (double v : s.q_lower) sum_ql += v;
    if (sum_pl > 0.9 * sum_qu)
      for (auto& v : s.p_lower) v *= 0.9 * sum_qu / sum_pl;
    if (sum_ql > 0.9 * sum_pu)
      for (auto& v : s.q_lower) v *= 0.9 * sum_pu / sum_ql;
  }
  s.adversary.kappa.assign(T, 0.0);
  REQUIRE(validate(s).empty());
  return s;
}

// Brute-force LP check for up to 4 edges: enumerate intersections of active
// constraint hyperplanes (basic solutions), keep the feasible ones, maximize.
double vertex_enumeration_optimum(const Scenario& s,
                                  const std::vector<double>& w) {
  const int n = s.edge_count();
  REQUIRE(n <= 4);
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (int e = 0; e < n; ++e) {
    std::vector<double> a(n, 0.0);
    a[e] = 1.0;
    planes.push_back({a, 0.0});
  }
  auto add_group = [&](const std::vector<int>& ids, double lo, double hi) {
    std::vector<double> a(n, 0.0);
    for (int e : ids) a[e] = 1.0;
    planes.push_back({a, lo});
    planes.push_back({a, hi});
  };
  for (int x = 1; x <= s.num_targets; ++x)
    add_group(s.target_edges[x - 1], s.p_lower[x - 1], s.p_upper[x - 1]);
  for (int y = 1; y <= s.num_sources; ++y)
    add_group(s.source_edges[y - 1], s.q_lower[y - 1], s.q_upper[y - 1]);

  auto feasible = [&](const std::vector<double>& pi) {
    for (int e = 0; e < n; ++e)
      if (pi[e] < -1e-7) return false;
    for (int x = 1; x <= s.num_targets; ++x) {
      double r = 0;
      for (int e : s.target_edges[x - 1]) r += pi[e];
      if (r < s.p_lower[x - 1] - 1e-7 || r > s.p_upper[x - 1] + 1e-7) return false;
    }
    for (int y = 1; y <= s.num_sources; ++y) {
      double r = 0;
      for (int e : s.source_edges[y - 1]) r += pi[e];
      if (r < s.q_lower[y - 1] - 1e-7 || r > s.q_upper[y - 1] + 1e-7) return false;
    }
    return true;
  };

  const int P = static_cast<int>(planes.size());
  std::vector<int> pick(n);
  double best = -1e300;
  bool found = false;
  // All n-subsets of planes.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    // Solve the n x n system by Gaussian elimination.
    std::vector<std::vector<double>> M(n, std::vector<double>(n + 1));
    for (int r = 0; r < n; ++r) {
      for (int cc = 0; cc < n; ++cc) M[r][cc] = planes[idx[r]].a[cc];
      M[r][n] = planes[idx[r]].b;
    }
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r)
        if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
      if (std::fabs(M[piv][col]) < 1e-9) {
        singular = true;
        break;
      }
      std::swap(M[piv], M[col]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        double f = M[r][col] / M[col][col];
        for (int cc = col; cc <= n; ++cc) M[r][cc] -= f * M[col][cc];
      }
    }
    if (!singular) {
      std::vector<double> pi(n);
      for (int r = 0; r < n; ++r) pi[r] = M[r][n] / M[r][r];
      if (feasible(pi)) {
        double obj = 0;
        for (int e = 0; e < n; ++e) obj += w[e] * pi[e];
        if (!found || obj > best) best = obj;
        found = true;
      }
    }
    int d = n - 1;
    while (d >= 0 && idx[d] == P - n + d) --d;
    if (d < 0) break;
    ++idx[d];
    for (int r = d + 1; r < n; ++r) idx[r] = idx[r - 1] + 1;
  }
  REQUIRE(found);
  return best;
}

void check_planner_certificate(const Scenario& s, const PlannerLpSolution& sol,
                               const std::vector<double>& w) {
  const double tol = 1e-8;
  // Primal feasibility.
  for (double v : sol.pi) REQUIRE(v >= -1e-9);
  for (int x = 1; x <= s.num_targets; ++x) {
    double r = 0;
    for (int e : s.target_edges[x - 1]) r += sol.pi[e];
    REQUIRE(r >= s.p_lower[x - 1] - 1e-8);
    REQUIRE(r <= s.p_upper[x - 1] + 1e-8);
    // Dual sign pattern from where the row sits.
    if (r < s.p_upper[x - 1] - 1e-7 && r > s.p_lower[x - 1] + 1e-7)
      REQUIRE(std::fabs(sol.dual_target[x - 1]) <= tol);
    if (r < s.p_upper[x - 1] - 1e-7) REQUIRE(sol.dual_target[x - 1] <= tol);
    if (r > s.p_lower[x - 1] + 1e-7) REQUIRE(sol.dual_target[x - 1] >= -tol);
  }
  for (int y = 1; y <= s.num_sources; ++y) {
    double r = 0;
    for (int e : s.source_edges[y - 1]) r += sol.pi[e];
    REQUIRE(r >= s.q_lower[y - 1] - 1e-8);
    REQUIRE(r <= s.q_upper[y - 1] + 1e-8);
    if (r < s.q_upper[y - 1] - 1e-7 && r > s.q_lower[y - 1] + 1e-7)
      REQUIRE(std::fabs(sol.dual_source[y - 1]) <= tol);
    if (r < s.q_upper[y - 1] - 1e-7) REQUIRE(sol.dual_source[y - 1] <= tol);
    if (r > s.q_lower[y - 1] + 1e-7) REQUIRE(sol.dual_source[y - 1] >= -tol);
  }
  // Reduced costs: never profitable to raise a flow, and zero on support.
  for (int e = 0; e < s.edge_count(); ++e) {
    double rc = w[e] - sol.dual_target[s.edges[e].x - 1] -
                sol.dual_source[s.edges[e].y - 1];
    REQUIRE(rc <= tol);
    if (sol.pi[e] > 1e-7) REQUIRE(std::fabs(rc) <= tol);
  }
}

}  // namespace

TEST_CASE("planner LP: single edge") {
  Scenario s = tiny(1, 1, {4}, {6}, {2}, {5});
  PlannerLpSolution sol = solve_planner_lp(s, {});
  CHECK(sol.objective == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(sol.pi[0] == doctest::Approx(2.0).epsilon(1e-12));
  // The receive cap binds; its shadow price is the full edge weight.
  CHECK(sol.dual_target[0] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(sol.dual_source[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("planner LP: pinned benchmark optimum") {
  // Hand-solved: optimum 205.25 with the unique plan below, certified by the
  // dual prices (16.5, 15.5) for the sources.
  Scenario s = case1_preset();
  PlannerLpSolution sol = solve_planner_lp(s, {});
  CHECK(sol.objective == doctest::Approx(205.25).epsilon(1e-10));

  auto pi_of = [&](int x, int y) {
    for (int e = 0; e < s.edge_count(); ++e)
      if (s.edges[e].x == x && s.edges[e].y == y) return sol.pi[e];
    REQUIRE(false);
    return 0.0;
  };
  CHECK(pi_of(2, 1) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(pi_of(3, 2) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(pi_of(4, 1) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(pi_of(5, 1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pi_of(5, 2) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(pi_of(1, 1) == doctest::Approx(0.0).epsilon(1e-9));

  std::vector<double> w(s.edge_count());
  for (int e = 0; e < s.edge_count(); ++e) w[e] = s.delta[e] + s.gamma[e];
  check_planner_certificate(s, sol, w);
}

TEST_CASE("planner LP: deception shifts the plan") {
  Scenario s = case1_preset();
  std::vector<double> xi(s.edge_count(), 0.0);
  // Suppress the reported gain on edge (3,2), the undeceived plan's backbone.
  xi[7] = -10.0;
  PlannerLpSolution sol = solve_planner_lp(s, xi);
  CHECK(sol.objective < 205.25);
  std::vector<double> w(s.edge_count());
  for (int e = 0; e < s.edge_count(); ++e) w[e] = s.delta[e] + s.gamma[e] + xi[e];
  check_planner_certificate(s, sol, w);
}

TEST_CASE("planner LP: matches vertex enumeration on small instances") {
  SplitMix64 rng(4242);
  for (int t = 0; t < 40; ++t) {
    int T = 1 + static_cast<int>(rng.next() % 2);
    int S = T == 1 ? 1 + static_cast<int>(rng.next() % 3)
                   : 1 + static_cast<int>(rng.next() % 2);
    Scenario s;
    s.num_targets = T;
    s.num_sources = S;
    for (int y = 1; y <= S; ++y)
      for (int x = 1; x <= T; ++x) s.edges.push_back({x, y});
    s.finalize();
    REQUIRE(s.edge_count() <= 4);
    s.delta.resize(s.edge_count());
    s.gamma.resize(s.edge_count());
    for (auto& d : s.delta) d = rng.uniform(0, 10);
    for (auto& g : s.gamma) g = rng.uniform(0, 10);
    s.p_upper.resize(T);
    s.q_upper.resize(S);
    for (auto& p : s.p_upper) p = rng.uniform(0.5, 3);
    for (auto& q : s.q_upper) q = rng.uniform(0.5, 3);
    s.p_lower.assign(T, 0.0);
    s.q_lower.assign(S, 0.0);
    if (t % 2 == 0) {
      // Exercise nonzero floors on half the draws.
      for (int x = 0; x < T; ++x) s.p_lower[x] = rng.uniform(0, 0.2 * s.p_upper[x]);
    }
    s.adversary.kappa.assign(T, 0.0);
    if (!validate(s).empty()) continue;  // rare aggregate infeasibility

    std::vector<double> w(s.edge_count());
    for (int e = 0; e < s.edge_count(); ++e) w[e] = s.delta[e] + s.gamma[e];
    PlannerLpSolution sol = solve_planner_lp(s, {});
    double ref = vertex_enumeration_optimum(s, w);
    REQUIRE(sol.objective == doctest::Approx(ref).epsilon(1e-9));
    check_planner_certificate(s, sol, w);
  }
}

TEST_CASE("planner LP: certificates on random instances with floors") {
  SplitMix64 rng(31337);
  for (int t = 0; t < 30; ++t) {
    Scenario s = random_instance(rng, t % 2 == 1);
    std::vector<double> w(s.edge_count());
    for (int e = 0; e < s.edge_count(); ++e) w[e] = s.delta[e] + s.gamma[e];
    PlannerLpSolution sol = solve_planner_lp(s, {});
    check_planner_certificate(s, sol, w);
  }
}

TEST_CASE("planner LP: deterministic pivoting") {
  Scenario s = case1_preset();
  PlannerLpSolution a = solve_planner_lp(s, {});
  PlannerLpSolution b = solve_planner_lp(s, {});
  CHECK(a.pi == b.pi);
  CHECK(a.pivots == b.pivots);
  CHECK(a.objective == b.objective);
}

TEST_CASE("planner LP: infeasible intervals are reported") {
  Scenario s = tiny(1, 1, {4}, {6}, {2}, {5});
  s.p_lower = {3};  // forced intake above what p_upper... the source can send
  s.p_upper = {3};
  s.q_upper = {1};
  CHECK_THROWS_AS(solve_planner_lp(s, {}), std::runtime_error);
}

TEST_CASE("bounded LP solver: bound flips and ranged rows") {
  // maximize x0 - x1 with 1 <= x0 + x1 <= 2, x0 in [0, 1.5], x1 in [0, 3].
  LpProblem p;
  p.rows = 1;
  p.cols = {{1.0}, {1.0}};
  p.c = {1.0, -1.0};
  p.l = {0.0, 0.0};
  p.u = {1.5, 3.0};
  p.row_lo = {1.0};
  p.row_hi = {2.0};
  LpResult r = solve_bounded_lp(p);
  REQUIRE(r.feasible);
  CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.objective == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("centralized solve: no adversary reduces to one LP sweep") {
  Scenario s = without_adversary(case1_preset());
  OracleResult r = centralized_best_response(s);
  CHECK(r.converged);
  CHECK(r.sweeps == 1);
  CHECK(r.gap <= 1e-9);
  CHECK(r.utility == doctest::Approx(205.25).epsilon(1e-10));
  CHECK(kernels::l1_norm(r.xi.data(), r.xi.size()) == 0.0);
}

TEST_CASE("centralized solve: benchmark equilibrium") {
  Scenario s = case1_preset();
  OracleResult r = centralized_best_response(s);
  REQUIRE(r.converged);
  CHECK(r.gap <= 1e-7 * (1 + std::fabs(r.upper_bound)));
  // Accounting for the adversary costs utility.
  CHECK(r.utility < 205.25 - 1e-6);

  // The plan is feasible.
  for (double v : r.pi) REQUIRE(v >= -1e-9);
  for (int x = 1; x <= s.num_targets; ++x) {
    double rs = 0;
    for (int e : s.target_edges[x - 1]) rs += r.pi[e];
    REQUIRE(rs <= s.p_upper[x - 1] + 1e-8);
  }
  for (int y = 1; y <= s.num_sources; ++y) {
    double cs = 0;
    for (int e : s.source_edges[y - 1]) cs += r.pi[e];
    REQUIRE(cs <= s.q_upper[y - 1] + 1e-8);
  }
  // The reported deception is the exact best response to the plan.
  for (int x : s.adversary.compromised) {
    const auto& ids = s.target_edges[x - 1];
    std::vector<double> prow, drow, xrow;
    for (int e : ids) {
      prow.push_back(r.pi[e]);
      drow.push_back(s.delta[e]);
      xrow.push_back(r.xi[e]);
    }
    auto br = solve_attacker_node(prow, {drow, s.kappa_of(x), s.adversary.c_a});
    REQUIRE(kernels::max_abs_diff(br.data(), xrow.data(), br.size()) <= 1e-12);
  }

  // Determinism.
  OracleResult r2 = centralized_best_response(s);
  CHECK(r.utility == r2.utility);
  CHECK(r.pi == r2.pi);
  CHECK(r.sweeps == r2.sweeps);
}

TEST_CASE("centralized solve: sampled saddle inequalities") {
  Scenario s = case1_preset();
  OracleResult r = centralized_best_response(s);
  REQUIRE(r.converged);
  const double slack = 1e-4 * (1 + std::fabs(r.utility));
  SplitMix64 rng(17);

  // Plan deviations: random vertices of the transport polytope (optima of
  // random objectives) plus mixtures; none should beat the plan against xi*.
  std::vector<double> w(s.edge_count());
  std::vector<double> prev;
  for (int t = 0; t < 200; ++t) {
    for (auto& v : w) v = rng.uniform(-5, 5);
    // Objective override: pick shift so the effective weight is exactly w.
    std::vector<double> shift(s.edge_count());
    for (int e = 0; e < s.edge_count(); ++e)
      shift[e] = w[e] - s.delta[e] - s.gamma[e];
    std::vector<double> dev = solve_planner_lp(s, shift).pi;
    if (!prev.empty()) {
      double lam = rng.uniform(0, 1);
      for (std::size_t e = 0; e < dev.size(); ++e)
        dev[e] = lam * dev[e] + (1 - lam) * prev[e];
    }
    prev = dev;
    REQUIRE(social_utility(dev, r.xi, s) <= r.utility + slack);
  }

  // Deception deviations: random feasible points of each node ball-box.
  for (int t = 0; t < 200; ++t) {
    std::vector<double> xi(s.edge_count(), 0.0);
    for (int x : s.adversary.compromised) {
      const auto& ids = s.target_edges[x - 1];
      double n2 = 0;
      std::vector<double> row(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        row[i] = rng.uniform(-s.delta[ids[i]], std::sqrt(s.kappa_of(x)));
        n2 += row[i] * row[i];
      }
      if (n2 > s.kappa_of(x)) {
        double f = std::sqrt(s.kappa_of(x) / n2);
        for (auto& v : row) v *= f;
      }
      for (std::size_t i = 0; i < ids.size(); ++i) xi[ids[i]] = row[i];
    }
    REQUIRE(social_utility(r.pi, xi, s) >= r.utility - slack);
  }
}

TEST_CASE("centralized solve: agrees with the distributed run on random games") {
  for (std::uint64_t seed = 2; seed <= 4; ++seed) {
    RandomSpec spec;
    spec.num_targets = 3;
    spec.num_sources = 2;
    spec.delta_range = {1, 9};
    spec.gamma_range = {1, 9};
    spec.p_upper_range = {1, 4};
    spec.q_upper_range = {1, 4};
    spec.compromised = {2};
    spec.c_a = 0.3;
    spec.kappa = 4.0;
    Scenario s = generate_random_scenario(spec, seed);
    SolveResult dist = run(s);
    OracleResult cent = centralized_best_response(s);
    REQUIRE(dist.termination == Termination::Converged);
    REQUIRE(cent.converged);
    CHECK(std::fabs(dist.utility - cent.utility) <=
          1e-3 * (1 + std::fabs(cent.utility)));
  }
}

TEST_CASE("grid saddle: no adversary collapses to the LP optimum") {
  Scenario s = tiny(1, 1, {4}, {6}, {2}, {5});
  GridSaddle g = grid_saddle_search(s, 21);
  CHECK(g.maxmin == doctest::Approx(g.minmax).epsilon(1e-12));
  CHECK(std::fabs(g.maxmin - 20.0) <= g.bound + 1e-9);
}

TEST_CASE("grid saddle: single deceived edge has a closed-form value") {
  // Saddle value 20 - 1.5*sqrt(15): the planner still ships the cap of 2,
  // the attacker spends the whole budget.
  Scenario s = tiny(1, 1, {4}, {6}, {2}, {5});
  s.adversary.compromised = {1};
  s.adversary.c_a = 0.5;
  s.adversary.kappa = {15};
  const double star = 20.0 - 1.5 * std::sqrt(15.0);

  GridSaddle g21 = grid_saddle_search(s, 21);
  CHECK(std::fabs(g21.maxmin - g21.minmax) <= g21.bound);
  CHECK(std::fabs(g21.maxmin - star) <= g21.bound + 1e-9);
  CHECK(std::fabs(g21.minmax - star) <= g21.bound + 1e-9);

  GridSaddle g41 = grid_saddle_search(s, 41);
  CHECK(g41.bound < g21.bound);
  CHECK(std::fabs(g41.maxmin - star) <= g41.bound + 1e-9);
}

TEST_CASE("grid saddle: two edges with one deceived") {
  Scenario s = tiny(2, 1, {3, 2}, {1, 1}, {1.5, 1}, {2});
  s.adversary.compromised = {2};
  s.adversary.c_a = 0.3;
  s.adversary.kappa = {0, 1};
  GridSaddle a = grid_saddle_search(s, 21);
  CHECK(std::fabs(a.maxmin - a.minmax) <= a.bound);
  GridSaddle b = grid_saddle_search(s, 41);
  CHECK(std::fabs(b.maxmin - b.minmax) <= b.bound);
  CHECK(b.bound < a.bound);
}

TEST_CASE("grid saddle: preconditions enforced") {
  Scenario s4 = tiny(2, 2, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1}, {1, 1});
  CHECK_THROWS_AS(grid_saddle_search(s4, 11), std::invalid_argument);

  Scenario s1 = tiny(1, 1, {1}, {1}, {1}, {1});
  CHECK_THROWS_AS(grid_saddle_search(s1, 1), std::invalid_argument);

  Scenario s3 = tiny(3, 1, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {2});
  s3.adversary.compromised = {1, 2, 3};
  s3.adversary.kappa = {1, 1, 1};
  CHECK_THROWS_AS(grid_saddle_search(s3, 11), std::invalid_argument);
}
