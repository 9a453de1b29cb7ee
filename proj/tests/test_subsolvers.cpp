#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "adot/kernels.hpp"
#include "adot/network.hpp"
#include "adot/subsolvers.hpp"
#include "doctest.h"

using namespace adot;

namespace {

double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double sum(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("projection: frozen examples") {
  // Over the cap: uniform shift down.
  auto a = project_box_sum_interval(std::vector<double>{2, 2}, {0, 3});
  CHECK(a[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(a[1] == doctest::Approx(1.5).epsilon(1e-12));

  // All negative, zero is feasible.
  auto b = project_box_sum_interval(std::vector<double>{-1, -2}, {0, 3});
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 0.0);

  // Below the floor: uniform shift up.
  auto c = project_box_sum_interval(std::vector<double>{3, 1, 0.5}, {6, 10});
  CHECK(c[0] == doctest::Approx(3.5).epsilon(1e-10));
  CHECK(c[1] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(c[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sum(c) == doctest::Approx(6.0).epsilon(1e-10));

  // Already feasible: returned unchanged, exactly.
  std::vector<double> v{0.5, 1.25, 0.0};
  auto d = project_box_sum_interval(v, {1, 3});
  CHECK(d == v);
}

TEST_CASE("projection: input validation") {
  std::vector<double> v{1, 2};
  CHECK_THROWS_AS(project_box_sum_interval(v, {-1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(project_box_sum_interval(v, {4, 3}), std::invalid_argument);
  std::vector<double> bad{1, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(project_box_sum_interval(bad, {0, 3}), std::invalid_argument);
  std::vector<double> out(1);
  CHECK_THROWS_AS(project_box_sum_interval(v, {0, 3}, out), std::invalid_argument);
}

TEST_CASE("projection matches exhaustive active-set search") {
  SplitMix64 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    int n = 1 + static_cast<int>(rng.next() % 5);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-10, 10);
    double b1 = rng.uniform(0, 10), b2 = rng.uniform(0, 10);
    ProjectionSet set{std::min(b1, b2), std::max(b1, b2)};
    auto fast = project_box_sum_interval(v, set);
    auto slow = brute_force_projection(v, set);
    REQUIRE(kernels::max_abs_diff(fast.data(), slow.data(), n) <= 1e-8);
  }
}

TEST_CASE("projection properties: feasibility, idempotence, contraction") {
  SplitMix64 rng(77);
  for (int t = 0; t < 400; ++t) {
    int n = 1 + static_cast<int>(rng.next() % 6);
    std::vector<double> v(n), w(n);
    for (auto& x : v) x = rng.uniform(-8, 8);
    for (auto& x : w) x = rng.uniform(-8, 8);
    double b1 = rng.uniform(0, 6), b2 = rng.uniform(0, 6);
    ProjectionSet set{std::min(b1, b2), std::max(b1, b2)};

    auto pv = project_box_sum_interval(v, set);
    for (double x : pv) REQUIRE(x >= -1e-12);
    REQUIRE(sum(pv) >= set.lower_sum - 1e-9);
    REQUIRE(sum(pv) <= set.upper_sum + 1e-9);

    auto ppv = project_box_sum_interval(pv, set);
    REQUIRE(kernels::max_abs_diff(pv.data(), ppv.data(), n) <= 1e-12);

    auto pw = project_box_sum_interval(w, set);
    REQUIRE(l2(pv, pw) <= l2(v, w) + 1e-9);
  }
}

TEST_CASE("attacker node: frozen single-edge example") {
  // Reduced cost 2 - 0.5 > 0, box corner norm 16 > budget 15, so the budget
  // binds and the deviation is the full -sqrt(15).
  auto xi = solve_attacker_node(std::vector<double>{2}, {{4}, 15, 0.5});
  REQUIRE(xi.size() == 1);
  CHECK(xi[0] == doctest::Approx(-std::sqrt(15.0)).epsilon(1e-9));
}

TEST_CASE("attacker node: degenerate cases") {
  // Zero budget pins the deviation.
  CHECK(solve_attacker_node(std::vector<double>{3, 1}, {{2, 2}, 0, 0.5}) ==
        std::vector<double>{0, 0});
  // Manipulation cost at least the flow: no profitable deviation.
  CHECK(solve_attacker_node(std::vector<double>{1, 2}, {{5, 5}, 9, 3.0}) ==
        std::vector<double>{0, 0});
  // Tie pi == c_a resolves to zero on that edge.
  auto xi = solve_attacker_node(std::vector<double>{0.5, 2}, {{3, 3}, 100, 0.5});
  CHECK(xi[0] == 0.0);
  CHECK(xi[1] == doctest::Approx(-3.0));  // box corner inside the ball
  // Zero flows: nothing to gain.
  CHECK(solve_attacker_node(std::vector<double>{0, 0}, {{1, 1}, 4, 0.0}) ==
        std::vector<double>{0, 0});
}

TEST_CASE("attacker node: input validation") {
  std::vector<double> pi{1, 2};
  CHECK_THROWS_AS(solve_attacker_node(pi, {{1}, 4, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(solve_attacker_node(pi, {{1, 1}, -1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(solve_attacker_node(pi, {{1, -1}, 4, 0.5}), std::invalid_argument);
}

TEST_CASE("attacker node: feasibility and sampled optimality") {
  SplitMix64 rng(555);
  for (int t = 0; t < 200; ++t) {
    int n = 1 + static_cast<int>(rng.next() % 4);
    AttackerNode node;
    node.delta_row.resize(n);
    for (auto& d : node.delta_row) d = rng.uniform(0, 6);
    node.kappa = rng.uniform(0, 20);
    node.c_a = rng.uniform(0, 2);
    std::vector<double> pi(n);
    for (auto& p : pi) p = rng.uniform(0, 4);

    auto xi = solve_attacker_node(pi, node);
    double n2 = kernels::sum_squares(xi.data(), n);
    REQUIRE(n2 <= node.kappa + 1e-9);
    for (int i = 0; i < n; ++i) REQUIRE(xi[i] >= -node.delta_row[i] - 1e-12);

    double best = attacker_objective(xi, pi, node.c_a);
    // Random feasible alternatives never do better.
    for (int probe = 0; probe < 50; ++probe) {
      std::vector<double> alt(n);
      double a2 = 0;
      for (int i = 0; i < n; ++i) {
        alt[i] = rng.uniform(-node.delta_row[i], std::sqrt(node.kappa));
        a2 += alt[i] * alt[i];
      }
      if (a2 > node.kappa) {
        double scale = std::sqrt(node.kappa / a2);
        for (auto& x : alt) x *= scale;  // shrinking keeps the box bound too
      }
      REQUIRE(best <= attacker_objective(alt, pi, node.c_a) + 1e-8);
    }
  }
}

TEST_CASE("attacker node: larger budget never hurts") {
  SplitMix64 rng(808);
  for (int t = 0; t < 200; ++t) {
    int n = 1 + static_cast<int>(rng.next() % 3);
    AttackerNode node;
    node.delta_row.resize(n);
    for (auto& d : node.delta_row) d = rng.uniform(0, 6);
    node.c_a = rng.uniform(0, 2);
    std::vector<double> pi(n);
    for (auto& p : pi) p = rng.uniform(0, 4);
    double k1 = rng.uniform(0, 10), k2 = k1 + rng.uniform(0, 10);

    node.kappa = k1;
    double u1 = attacker_objective(solve_attacker_node(pi, node), pi, node.c_a);
    node.kappa = k2;
    double u2 = attacker_objective(solve_attacker_node(pi, node), pi, node.c_a);
    REQUIRE(u2 <= u1 + 1e-9);
  }
}

TEST_CASE("attacker best response matches grid search within resolution") {
  SplitMix64 rng(909);
  for (int t = 0; t < 80; ++t) {
    int n = 1 + static_cast<int>(rng.next() % 2);
    double scale = n == 1 ? 5.0 : 0.6;
    AttackerNode node;
    node.delta_row.resize(n);
    for (auto& d : node.delta_row) d = rng.uniform(0, scale);
    node.kappa = rng.uniform(0, scale * scale / 2);
    node.c_a = rng.uniform(0, 1);
    std::vector<double> pi(n);
    for (auto& p : pi) p = rng.uniform(0, 3);

    const double step = 0.005;
    auto exact = solve_attacker_node(pi, node);
    auto grid = brute_force_attacker_node(pi, node, step);
    double ue = attacker_objective(exact, pi, node.c_a);
    double ug = attacker_objective(grid, pi, node.c_a);
    double bound = 0.0;
    for (int i = 0; i < n; ++i) bound += (pi[i] + node.c_a) * step;
    REQUIRE(ue <= ug + 1e-9);          // the exact solve is at least as good
    REQUIRE(ug <= ue + bound + 1e-9);  // and the grid gets within resolution
  }
}

TEST_CASE("brute-force helpers reject oversized problems") {
  std::vector<double> big(21, 1.0);
  CHECK_THROWS_AS(brute_force_projection(big, {0, 5}), std::invalid_argument);
  std::vector<double> pi{1, 1, 1, 1};
  AttackerNode node{{5, 5, 5, 5}, 25, 0.5};
  CHECK_THROWS_AS(brute_force_attacker_node(pi, node, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_attacker_node(pi, node, 0.0), std::invalid_argument);
}
