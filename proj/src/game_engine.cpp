#include "adot/game_engine.hpp"

#include <cmath>
#include <stdexcept>

#include "adot/kernels.hpp"
#include "adot/subsolvers.hpp"

namespace adot {

namespace {

std::vector<double> gather(const std::vector<double>& full,
                           const std::vector<int>& ids) {
  std::vector<double> row(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) row[i] = full[ids[i]];
  return row;
}

void scatter(std::vector<double>& full, const std::vector<int>& ids,
             const std::vector<double>& row) {
  for (std::size_t i = 0; i < ids.size(); ++i) full[ids[i]] = row[i];
}

// Extrapolated flows the attacker reacts to; prev empty means no history.
std::vector<double> reflected(const std::vector<double>& pi,
                              const std::vector<double>& prev) {
  if (prev.size() != pi.size()) return pi;
  std::vector<double> hat(pi.size());
  for (std::size_t e = 0; e < pi.size(); ++e) hat[e] = 2.0 * pi[e] - prev[e];
  return hat;
}

}  // namespace

IterateState make_initial_state(const Scenario& s) {
  IterateState st;
  const std::size_t m = s.edges.size();
  st.pi.assign(m, 0.0);
  st.pi_t.assign(m, 0.0);
  st.pi_s.assign(m, 0.0);
  st.alpha.assign(m, 0.0);
  st.xi.assign(m, 0.0);
  st.pi_prev.assign(m, 0.0);
  return st;
}

std::vector<double> target_update(int x, const IterateState& st, const Scenario& s) {
  const std::vector<int>& ids = s.target_edges[x - 1];
  const double eta = s.options.eta;
  std::vector<double> v(ids.size());
  // xi is identically zero on benign rows, so delta + xi covers both the
  // benign and the compromised local objective.
  for (std::size_t i = 0; i < ids.size(); ++i) {
    int e = ids[i];
    v[i] = st.pi[e] + (s.delta[e] + st.xi[e] - st.alpha[e]) / eta;
  }
  return project_box_sum_interval(v, {s.p_lower[x - 1], s.p_upper[x - 1]});
}

std::vector<double> source_update(int y, const IterateState& st, const Scenario& s) {
  const std::vector<int>& ids = s.source_edges[y - 1];
  const double eta = s.options.eta;
  std::vector<double> v(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    int e = ids[i];
    v[i] = st.pi[e] + (s.gamma[e] + st.alpha[e]) / eta;
  }
  return project_box_sum_interval(v, {s.q_lower[y - 1], s.q_upper[y - 1]});
}

namespace {

// Damped node step shared by run() and the two-dual reference path.  The
// damping weight w maps to a proximal term mu = eta * w / (1 - w): w = 0 is
// the raw best response, w = 1 keeps the previous deviation, and in between
// the implicit step limits how far the deviation moves per iteration while
// keeping exact best responses as its fixed points.  An explicit convex
// blend of old point and best response does not terminate on instances
// whose equilibrium lies inside a flat face of the attacker objective
// (consensus flow equal to c_a on compromised edges).
std::vector<double> attacker_node_step(int x, const std::vector<double>& pi,
                                       const std::vector<double>& xi,
                                       const Scenario& s) {
  const std::vector<int>& ids = s.target_edges[x - 1];
  AttackerNode node{gather(s.delta, ids), s.kappa_of(x), s.adversary.c_a};
  std::vector<double> prev = gather(xi, ids);
  const double w = s.options.attacker_damping;
  if (w >= 1.0) return prev;
  if (w <= 0.0) return solve_attacker_node(gather(pi, ids), node);
  const double mu = s.options.eta * w / (1.0 - w);
  return solve_attacker_node_prox(gather(pi, ids), node, prev, mu);
}

}  // namespace

std::vector<double> attacker_row_update(int x, const IterateState& st, const Scenario& s) {
  return attacker_node_step(x, reflected(st.pi, st.pi_prev), st.xi, s);
}

void consensus_update(IterateState& st) {
  kernels::average(st.pi_t.data(), st.pi_s.data(), st.pi.data(), st.pi.size());
}

void dual_update(IterateState& st, double eta) {
  kernels::add_scaled_diff(st.alpha.data(), st.pi_t.data(), st.pi_s.data(),
                           eta * 0.5, st.alpha.size());
}

double social_utility(std::span<const double> pi, std::span<const double> xi,
                      const Scenario& s) {
  const std::size_t m = s.edges.size();
  if (pi.size() != m || xi.size() != m)
    throw std::invalid_argument("social_utility: size mismatch");
  double u = kernels::dot(pi.data(), s.delta.data(), m) +
             kernels::dot(pi.data(), s.gamma.data(), m) +
             kernels::dot(pi.data(), xi.data(), m);
  return u + s.adversary.c_a * kernels::l1_norm(xi.data(), m);
}

namespace {

std::vector<double> xi_node_norms(const IterateState& st, const Scenario& s) {
  std::vector<double> norms;
  norms.reserve(s.adversary.compromised.size());
  for (int x : s.adversary.compromised) {
    std::vector<double> row = gather(st.xi, s.target_edges[x - 1]);
    norms.push_back(std::sqrt(kernels::sum_squares(row.data(), row.size())));
  }
  return norms;
}

}  // namespace

SolveResult run(const Scenario& s, int snapshot_stride) {
  const SolveOptions& o = s.options;
  IterateState st = make_initial_state(s);

  SolveResult res;
  res.trace.compromised = s.adversary.compromised;
  res.trace.snapshot_stride = snapshot_stride;
  res.trace.records.push_back(
      {0, social_utility(st.pi, st.xi, s), 0.0, xi_node_norms(st, s)});

  std::vector<double> xi_prev(st.xi.size(), 0.0);
  double last_xi_change = 0.0;
  Termination term = Termination::MaxIters;

  for (int k = 0; k < o.max_iters; ++k) {
    if (k % o.attacker_period == 0 && !s.adversary.compromised.empty()) {
      xi_prev = st.xi;
      for (int x : s.adversary.compromised)
        scatter(st.xi, s.target_edges[x - 1], attacker_row_update(x, st, s));
      st.pi_prev = st.pi;
      last_xi_change =
          kernels::max_abs_diff(st.xi.data(), xi_prev.data(), st.xi.size());
    }
    for (int x = 1; x <= s.num_targets; ++x)
      scatter(st.pi_t, s.target_edges[x - 1], target_update(x, st, s));
    for (int y = 1; y <= s.num_sources; ++y)
      scatter(st.pi_s, s.source_edges[y - 1], source_update(y, st, s));
    consensus_update(st);
    dual_update(st, o.eta);
    st.k = k + 1;

    double residual =
        kernels::max_abs_diff(st.pi_t.data(), st.pi_s.data(), st.pi_t.size());
    res.trace.records.push_back({st.k, social_utility(st.pi, st.xi, s),
                                 residual, xi_node_norms(st, s)});
    if (snapshot_stride > 0 && st.k % snapshot_stride == 0)
      res.trace.plan_snapshots.emplace_back(st.k, st.pi);

    if (residual <= o.tol_primal && last_xi_change <= o.tol_xi) {
      term = Termination::Converged;
      break;
    }
  }

  res.pi = st.pi;
  res.xi = st.xi;
  res.utility = social_utility(st.pi, st.xi, s);
  res.termination = term;
  res.iterations = st.k;
  return res;
}

TwoDualState make_initial_two_dual_state(const Scenario& s) {
  TwoDualState st;
  const std::size_t m = s.edges.size();
  st.pi.assign(m, 0.0);
  st.pi_t.assign(m, 0.0);
  st.pi_s.assign(m, 0.0);
  st.alpha_t.assign(m, 0.0);
  st.alpha_s.assign(m, 0.0);
  st.xi.assign(m, 0.0);
  st.pi_prev.assign(m, 0.0);
  return st;
}

void run_two_dual_step(TwoDualState& st, const Scenario& s) {
  const double eta = s.options.eta;
  const std::size_t m = s.edges.size();

  // Attacker reacts to the same extrapolated flows as run() with
  // attacker_period = 1.
  {
    std::vector<double> hat = reflected(st.pi, st.pi_prev);
    for (int x : s.adversary.compromised)
      scatter(st.xi, s.target_edges[x - 1], attacker_node_step(x, hat, st.xi, s));
    st.pi_prev = st.pi;
  }

  for (int x = 1; x <= s.num_targets; ++x) {
    const std::vector<int>& ids = s.target_edges[x - 1];
    std::vector<double> v(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      int e = ids[i];
      v[i] = st.pi[e] + (s.delta[e] + st.xi[e] - st.alpha_t[e]) / eta;
    }
    scatter(st.pi_t, ids,
            project_box_sum_interval(v, {s.p_lower[x - 1], s.p_upper[x - 1]}));
  }
  for (int y = 1; y <= s.num_sources; ++y) {
    const std::vector<int>& ids = s.source_edges[y - 1];
    std::vector<double> v(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      int e = ids[i];
      v[i] = st.pi[e] + (s.gamma[e] + st.alpha_s[e]) / eta;
    }
    scatter(st.pi_s, ids,
            project_box_sum_interval(v, {s.q_lower[y - 1], s.q_upper[y - 1]}));
  }

  // Consensus from the stationarity of the quadratic coupling: the dual gap
  // term vanishes once alpha_t == alpha_s, collapsing to the plain average.
  for (std::size_t e = 0; e < m; ++e)
    st.pi[e] = (st.alpha_t[e] - st.alpha_s[e]) / (2.0 * eta) +
               0.5 * (st.pi_t[e] + st.pi_s[e]);
  for (std::size_t e = 0; e < m; ++e) {
    st.alpha_t[e] += eta * (st.pi_t[e] - st.pi[e]);
    st.alpha_s[e] += eta * (st.pi[e] - st.pi_s[e]);
  }
  st.k += 1;
}

}  // namespace adot
