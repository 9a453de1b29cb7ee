#include "adot/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adot/game_engine.hpp"
#include "adot/kernels.hpp"
#include "adot/subsolvers.hpp"

namespace adot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedTol = 1e-9;
constexpr double kPivotTol = 1e-10;

enum class VState : unsigned char { Basic, Lower, Upper };

// Equality-form bounded simplex with a dense basis inverse.  Columns
// [0, n_struct) are the caller's, then one slack per row, then one
// artificial per row.  Artificials are fixed to zero after phase 1.
struct Simplex {
  int m = 0;
  int n_struct = 0;
  int n = 0;  // structural + slacks + artificials
  std::vector<std::vector<double>> A;  // dense columns, length m
  std::vector<double> c, l, u, b;
  std::vector<VState> state;
  std::vector<double> x;
  std::vector<int> basis;    // column basic in each row
  std::vector<double> binv;  // m x m, row-major
  std::vector<double> slack_sign;  // +1: row_hi slack, -1: row_lo slack
  int pivots = 0;

  int slack_of(int row) const { return n_struct + row; }
  int art_of(int row) const { return n_struct + m + row; }
  bool is_artificial(int j) const { return j >= n_struct + m; }

  double dot_col(const std::vector<double>& y, int j) const {
    const std::vector<double>& a = A[j];
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += y[i] * a[i];
    return s;
  }

  void duals(const std::vector<double>& cost, std::vector<double>& y) const {
    y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      const double* row = binv.data() + static_cast<std::size_t>(i) * m;
      for (int k = 0; k < m; ++k) y[k] += cb * row[k];
    }
  }

  void ftran(int j, std::vector<double>& w) const {
    w.assign(m, 0.0);
    const std::vector<double>& a = A[j];
    for (int k = 0; k < m; ++k) {
      double ak = a[k];
      if (ak == 0.0) continue;
      for (int i = 0; i < m; ++i)
        w[i] += binv[static_cast<std::size_t>(i) * m + k] * ak;
    }
  }

  void recompute_basics() {
    std::vector<double> r = b;
    for (int j = 0; j < n; ++j) {
      if (state[j] == VState::Basic || x[j] == 0.0) continue;
      const std::vector<double>& a = A[j];
      for (int i = 0; i < m; ++i) r[i] -= a[i] * x[j];
    }
    for (int i = 0; i < m; ++i) {
      double v = 0.0;
      const double* row = binv.data() + static_cast<std::size_t>(i) * m;
      for (int k = 0; k < m; ++k) v += row[k] * r[k];
      x[basis[i]] = v;
    }
  }

  // Rebuild binv from the basis columns by Gauss-Jordan with partial
  // pivoting; used as a fallback when incremental updates have drifted.
  void refactorize() {
    std::vector<double> M(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
      const std::vector<double>& a = A[basis[i]];
      for (int r = 0; r < m; ++r) M[static_cast<std::size_t>(r) * m + i] = a[r];
    }
    std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) inv[static_cast<std::size_t>(i) * m + i] = 1.0;
    for (int col = 0; col < m; ++col) {
      int piv = col;
      double best = std::fabs(M[static_cast<std::size_t>(col) * m + col]);
      for (int r = col + 1; r < m; ++r) {
        double v = std::fabs(M[static_cast<std::size_t>(r) * m + col]);
        if (v > best) { best = v; piv = r; }
      }
      if (best < 1e-13) throw std::runtime_error("simplex: singular basis");
      if (piv != col) {
        for (int k = 0; k < m; ++k) {
          std::swap(M[static_cast<std::size_t>(piv) * m + k],
                    M[static_cast<std::size_t>(col) * m + k]);
          std::swap(inv[static_cast<std::size_t>(piv) * m + k],
                    inv[static_cast<std::size_t>(col) * m + k]);
        }
      }
      double d = M[static_cast<std::size_t>(col) * m + col];
      for (int k = 0; k < m; ++k) {
        M[static_cast<std::size_t>(col) * m + k] /= d;
        inv[static_cast<std::size_t>(col) * m + k] /= d;
      }
      for (int r = 0; r < m; ++r) {
        if (r == col) continue;
        double f = M[static_cast<std::size_t>(r) * m + col];
        if (f == 0.0) continue;
        for (int k = 0; k < m; ++k) {
          M[static_cast<std::size_t>(r) * m + k] -=
              f * M[static_cast<std::size_t>(col) * m + k];
          inv[static_cast<std::size_t>(r) * m + k] -=
              f * inv[static_cast<std::size_t>(col) * m + k];
        }
      }
    }
    binv = std::move(inv);
  }

  void update_binv(int row, const std::vector<double>& w) {
    double piv = w[row];
    double* prow = binv.data() + static_cast<std::size_t>(row) * m;
    for (int k = 0; k < m; ++k) prow[k] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == row || w[i] == 0.0) continue;
      double f = w[i];
      double* irow = binv.data() + static_cast<std::size_t>(i) * m;
      for (int k = 0; k < m; ++k) irow[k] -= f * prow[k];
    }
  }

  // One simplex phase under the given costs.  Bland's rule on both the
  // entering and the leaving choice keeps the iteration finite.
  void phase(const std::vector<double>& cost, bool allow_artificial) {
    std::vector<double> y, w;
    const long cap = 2000L * (m + n) + 1000;
    for (long it = 0; it < cap; ++it) {
      duals(cost, y);
      int enter = -1;
      double dir = 0.0;
      for (int j = 0; j < n; ++j) {
        if (state[j] == VState::Basic || l[j] == u[j]) continue;
        if (!allow_artificial && is_artificial(j)) continue;
        double d = cost[j] - dot_col(y, j);
        if (state[j] == VState::Lower && d > kReducedTol) { enter = j; dir = 1.0; break; }
        if (state[j] == VState::Upper && d < -kReducedTol) { enter = j; dir = -1.0; break; }
      }
      if (enter < 0) return;  // optimal for this phase

      ftran(enter, w);
      double limit = u[enter] - l[enter];  // bound flip distance
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m; ++i) {
        double wi = dir * w[i];
        int bj = basis[i];
        double step = kInf;
        bool to_upper = false;
        if (wi > kPivotTol) {
          step = (x[bj] - l[bj]) / wi;
        } else if (wi < -kPivotTol && u[bj] < kInf) {
          step = (u[bj] - x[bj]) / (-wi);
          to_upper = true;
        } else {
          continue;
        }
        if (step < 0.0) step = 0.0;
        if (step < limit - 1e-12 ||
            (step < limit + 1e-12 && leave_row >= 0 && bj < basis[leave_row])) {
          limit = step;
          leave_row = i;
          leave_to_upper = to_upper;
        } else if (leave_row < 0 && step <= limit) {
          limit = step;
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }
      if (limit == kInf) throw std::runtime_error("simplex: unbounded problem");

      x[enter] += dir * limit;
      for (int i = 0; i < m; ++i) x[basis[i]] -= dir * limit * w[i];

      if (leave_row < 0) {
        state[enter] = state[enter] == VState::Lower ? VState::Upper : VState::Lower;
        x[enter] = state[enter] == VState::Lower ? l[enter] : u[enter];
      } else {
        int lv = basis[leave_row];
        state[lv] = leave_to_upper ? VState::Upper : VState::Lower;
        x[lv] = leave_to_upper ? u[lv] : l[lv];
        basis[leave_row] = enter;
        state[enter] = VState::Basic;
        update_binv(leave_row, w);
      }
      ++pivots;
      if (pivots % 64 == 0) recompute_basics();
    }
    throw std::runtime_error("simplex: iteration cap exceeded");
  }
};

}  // namespace

LpResult solve_bounded_lp(const LpProblem& p) {
  const int m = p.rows;
  const int ns = static_cast<int>(p.cols.size());
  if (static_cast<int>(p.c.size()) != ns || static_cast<int>(p.l.size()) != ns ||
      static_cast<int>(p.u.size()) != ns ||
      static_cast<int>(p.row_lo.size()) != m ||
      static_cast<int>(p.row_hi.size()) != m)
    throw std::invalid_argument("solve_bounded_lp: inconsistent sizes");

  Simplex s;
  s.m = m;
  s.n_struct = ns;
  s.n = ns + 2 * m;
  s.A.assign(s.n, std::vector<double>(m, 0.0));
  s.c.assign(s.n, 0.0);
  s.l.assign(s.n, 0.0);
  s.u.assign(s.n, kInf);
  s.b.assign(m, 0.0);
  s.slack_sign.assign(m, 1.0);

  for (int j = 0; j < ns; ++j) {
    if (static_cast<int>(p.cols[j].size()) != m)
      throw std::invalid_argument("solve_bounded_lp: bad column length");
    s.A[j] = p.cols[j];
    s.c[j] = p.c[j];
    s.l[j] = p.l[j];
    s.u[j] = p.u[j];
    if (!(s.l[j] < kInf) || s.l[j] == -kInf)
      throw std::invalid_argument("solve_bounded_lp: columns need a finite lower bound");
  }

  // Normalize each ranged row to an equality with one slack column.
  for (int i = 0; i < m; ++i) {
    double lo = p.row_lo[i], hi = p.row_hi[i];
    int sj = s.slack_of(i);
    if (hi < kInf) {
      s.A[sj][i] = 1.0;
      s.b[i] = hi;
      s.l[sj] = 0.0;
      s.u[sj] = lo == -kInf ? kInf : hi - lo;
      s.slack_sign[i] = 1.0;
    } else if (lo > -kInf) {
      s.A[sj][i] = -1.0;
      s.b[i] = lo;
      s.l[sj] = 0.0;
      s.u[sj] = kInf;
      s.slack_sign[i] = -1.0;
    } else {
      throw std::invalid_argument("solve_bounded_lp: free row");
    }
  }

  // Start: structurals at their lower bound, slacks absorbing what they can,
  // artificials carrying the leftover so the initial basis is diagonal.
  s.state.assign(s.n, VState::Lower);
  s.x.assign(s.n, 0.0);
  for (int j = 0; j < ns; ++j) s.x[j] = s.l[j];
  std::vector<double> resid = s.b;
  for (int j = 0; j < ns; ++j) {
    if (s.x[j] == 0.0) continue;
    for (int i = 0; i < m; ++i) resid[i] -= s.A[j][i] * s.x[j];
  }
  s.basis.assign(m, -1);
  s.binv.assign(static_cast<std::size_t>(m) * m, 0.0);
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i) {
    int sj = s.slack_of(i);
    int aj = s.art_of(i);
    double sign = s.slack_sign[i];
    double want = resid[i] * sign;  // slack value that would close the row
    double sv = std::clamp(want, s.l[sj], s.u[sj] == kInf ? std::max(want, 0.0) : s.u[sj]);
    double left = resid[i] - sign * sv;
    if (std::fabs(left) <= 1e-12) {
      // Slack alone closes the row; it becomes the basic variable.
      s.basis[i] = sj;
      s.x[sj] = sv;
      s.state[sj] = VState::Basic;
      s.A[aj][i] = 1.0;
      s.l[aj] = s.u[aj] = 0.0;
      s.binv[static_cast<std::size_t>(i) * m + i] = sign;
    } else {
      s.x[sj] = sv;
      s.state[sj] = sv == s.u[sj] ? VState::Upper : VState::Lower;
      double asign = left >= 0.0 ? 1.0 : -1.0;
      s.A[aj][i] = asign;
      s.basis[i] = aj;
      s.x[aj] = std::fabs(left);
      s.state[aj] = VState::Basic;
      s.binv[static_cast<std::size_t>(i) * m + i] = asign;
      need_phase1 = true;
    }
  }

  LpResult out;
  if (need_phase1) {
    std::vector<double> cost1(s.n, 0.0);
    for (int i = 0; i < m; ++i)
      if (s.basis[i] == s.art_of(i)) cost1[s.art_of(i)] = -1.0;
    s.phase(cost1, true);
    s.recompute_basics();
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) infeas += std::fabs(s.x[s.art_of(i)]);
    if (infeas > 1e-7) {
      out.feasible = false;
      out.pivots = s.pivots;
      out.message = "no feasible point (phase-1 residual " + std::to_string(infeas) + ")";
      return out;
    }
    for (int i = 0; i < m; ++i) {
      int aj = s.art_of(i);
      s.l[aj] = s.u[aj] = 0.0;
      if (s.state[aj] != VState::Basic) {
        s.state[aj] = VState::Lower;
        s.x[aj] = 0.0;
      }
    }
  }

  s.phase(s.c, false);
  s.recompute_basics();

  // Guard against drift of the incrementally updated inverse.
  double scale = 1.0, resid_norm = 0.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, std::fabs(s.b[i]));
  {
    std::vector<double> r = s.b;
    for (int j = 0; j < s.n; ++j) {
      if (s.x[j] == 0.0) continue;
      for (int i = 0; i < m; ++i) r[i] -= s.A[j][i] * s.x[j];
    }
    for (int i = 0; i < m; ++i) resid_norm = std::max(resid_norm, std::fabs(r[i]));
  }
  if (resid_norm > 1e-8 * scale) {
    s.refactorize();
    s.recompute_basics();
    s.phase(s.c, false);
    s.recompute_basics();
  }

  out.x.assign(s.x.begin(), s.x.begin() + ns);
  std::vector<double> y;
  s.duals(s.c, y);
  out.y = y;
  out.objective = 0.0;
  for (int j = 0; j < ns; ++j) out.objective += p.c[j] * out.x[j];
  out.pivots = s.pivots;
  return out;
}

PlannerLpSolution solve_planner_lp(const Scenario& s,
                                   std::span<const double> xi_full) {
  const int m = s.edge_count();
  const int T = s.num_targets, S = s.num_sources;
  if (!xi_full.empty() && static_cast<int>(xi_full.size()) != m)
    throw std::invalid_argument("solve_planner_lp: xi size mismatch");

  LpProblem p;
  p.rows = T + S;
  p.cols.assign(m, std::vector<double>(p.rows, 0.0));
  p.c.assign(m, 0.0);
  p.l.assign(m, 0.0);
  p.u.assign(m, kInf);
  for (int e = 0; e < m; ++e) {
    p.cols[e][s.edges[e].x - 1] = 1.0;
    p.cols[e][T + s.edges[e].y - 1] = 1.0;
    p.c[e] = s.delta[e] + s.gamma[e] + (xi_full.empty() ? 0.0 : xi_full[e]);
  }
  p.row_lo.resize(p.rows);
  p.row_hi.resize(p.rows);
  for (int x = 0; x < T; ++x) {
    p.row_lo[x] = s.p_lower[x];
    p.row_hi[x] = s.p_upper[x];
  }
  for (int y = 0; y < S; ++y) {
    p.row_lo[T + y] = s.q_lower[y];
    p.row_hi[T + y] = s.q_upper[y];
  }

  LpResult r = solve_bounded_lp(p);
  if (!r.feasible)
    throw std::runtime_error("solve_planner_lp: " + r.message);

  PlannerLpSolution sol;
  sol.pi = r.x;
  sol.objective = r.objective;
  sol.dual_target.assign(r.y.begin(), r.y.begin() + T);
  sol.dual_source.assign(r.y.begin() + T, r.y.end());
  sol.pivots = r.pivots;
  return sol;
}

namespace {

std::vector<double> best_response_all(const Scenario& s,
                                      const std::vector<double>& pi) {
  std::vector<double> xi(pi.size(), 0.0);
  for (int x : s.adversary.compromised) {
    const std::vector<int>& ids = s.target_edges[x - 1];
    std::vector<double> prow(ids.size()), drow(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      prow[i] = pi[ids[i]];
      drow[i] = s.delta[ids[i]];
    }
    std::vector<double> row =
        solve_attacker_node(prow, {drow, s.kappa_of(x), s.adversary.c_a});
    for (std::size_t i = 0; i < ids.size(); ++i) xi[ids[i]] = row[i];
  }
  return xi;
}

}  // namespace

OracleResult centralized_best_response(const Scenario& s, double gap_tol,
                                       int max_sweeps) {
  const int m = s.edge_count();
  const int T = s.num_targets, S = s.num_sources;

  double ub0 = 0.0;
  for (int e = 0; e < m; ++e)
    ub0 += (s.delta[e] + s.gamma[e]) *
           std::min(s.p_upper[s.edges[e].x - 1], s.q_upper[s.edges[e].y - 1]);
  double cost_cap = 0.0;
  for (int x : s.adversary.compromised)
    cost_cap += s.adversary.c_a *
                std::sqrt(s.kappa_of(x) * s.target_edges[x - 1].size());
  const double t_hi = ub0 + cost_cap + 1.0;

  std::vector<std::vector<double>> cuts;
  cuts.emplace_back(m, 0.0);  // the planner moves first: start undeceived

  OracleResult res;
  double best_lb = -kInf;

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    // Master: maximize t subject to the transport polytope and one epigraph
    // row per deception seen so far.
    const int rows = T + S + static_cast<int>(cuts.size());
    LpProblem p;
    p.rows = rows;
    p.cols.assign(m + 1, std::vector<double>(rows, 0.0));
    p.c.assign(m + 1, 0.0);
    p.l.assign(m + 1, 0.0);
    p.u.assign(m + 1, kInf);
    p.c[m] = 1.0;
    p.u[m] = t_hi;
    for (int e = 0; e < m; ++e) {
      p.cols[e][s.edges[e].x - 1] = 1.0;
      p.cols[e][T + s.edges[e].y - 1] = 1.0;
    }
    p.row_lo.assign(rows, 0.0);
    p.row_hi.assign(rows, 0.0);
    for (int x = 0; x < T; ++x) {
      p.row_lo[x] = s.p_lower[x];
      p.row_hi[x] = s.p_upper[x];
    }
    for (int y = 0; y < S; ++y) {
      p.row_lo[T + y] = s.q_lower[y];
      p.row_hi[T + y] = s.q_upper[y];
    }
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      int r = T + S + static_cast<int>(i);
      const std::vector<double>& xi = cuts[i];
      for (int e = 0; e < m; ++e)
        p.cols[e][r] = -(s.delta[e] + s.gamma[e] + xi[e]);
      p.cols[m][r] = 1.0;
      p.row_lo[r] = -kInf;
      p.row_hi[r] = s.adversary.c_a * kernels::l1_norm(xi.data(), m);
    }

    LpResult master = solve_bounded_lp(p);
    if (!master.feasible)
      throw std::runtime_error("centralized_best_response: " + master.message);
    std::vector<double> pi(master.x.begin(), master.x.begin() + m);
    const double ub = master.objective;

    std::vector<double> xi = best_response_all(s, pi);
    const double lb = social_utility(pi, xi, s);
    if (lb > best_lb) {
      best_lb = lb;
      res.pi = pi;
      res.xi = xi;
    }
    res.sweeps = sweep;
    res.upper_bound = ub;
    res.gap = ub - best_lb;
    if (res.gap <= gap_tol * (1.0 + std::fabs(ub))) {
      res.converged = true;
      break;
    }
    // A repeated deception cannot tighten the master; with exact arithmetic
    // the gap would already have closed, so stop rather than loop.
    bool dup = false;
    for (const auto& old : cuts)
      if (kernels::max_abs_diff(old.data(), xi.data(), m) < 1e-12) dup = true;
    if (dup) break;
    cuts.push_back(std::move(xi));
  }

  res.utility = best_lb;
  return res;
}

GridSaddle grid_saddle_search(const Scenario& s, int steps) {
  const int m = s.edge_count();
  if (m > 3) throw std::invalid_argument("grid_saddle_search: more than 3 edges");
  if (steps < 2) throw std::invalid_argument("grid_saddle_search: steps must be >= 2");
  std::vector<int> adv_edges;
  for (int e = 0; e < m; ++e)
    if (s.is_compromised(s.edges[e].x)) adv_edges.push_back(e);
  const int na = static_cast<int>(adv_edges.size());
  if (na > 2)
    throw std::invalid_argument("grid_saddle_search: more than 2 deceived edges");
  if (std::pow(static_cast<double>(steps), m + na) > 2e8)
    throw std::invalid_argument("grid_saddle_search: grid too large");

  std::vector<double> caps(m);
  for (int e = 0; e < m; ++e)
    caps[e] = std::min(s.p_upper[s.edges[e].x - 1], s.q_upper[s.edges[e].y - 1]);

  // Feasible plan grid points, each with its undeceived payoff and the flows
  // on deceived edges.
  struct PiPoint {
    double base;
    std::array<double, 2> adv_pi;
  };
  std::vector<PiPoint> pis;
  std::vector<int> idx(m, 0);
  std::vector<double> pi(m);
  std::vector<double> rowsum(s.num_targets), colsum(s.num_sources);
  while (true) {
    for (int e = 0; e < m; ++e) pi[e] = caps[e] * idx[e] / (steps - 1);
    std::fill(rowsum.begin(), rowsum.end(), 0.0);
    std::fill(colsum.begin(), colsum.end(), 0.0);
    for (int e = 0; e < m; ++e) {
      rowsum[s.edges[e].x - 1] += pi[e];
      colsum[s.edges[e].y - 1] += pi[e];
    }
    bool ok = true;
    for (int x = 0; x < s.num_targets && ok; ++x)
      ok = rowsum[x] >= s.p_lower[x] - 1e-9 && rowsum[x] <= s.p_upper[x] + 1e-9;
    for (int y = 0; y < s.num_sources && ok; ++y)
      ok = colsum[y] >= s.q_lower[y] - 1e-9 && colsum[y] <= s.q_upper[y] + 1e-9;
    if (ok) {
      PiPoint pt{0.0, {0.0, 0.0}};
      for (int e = 0; e < m; ++e) pt.base += (s.delta[e] + s.gamma[e]) * pi[e];
      for (int a = 0; a < na; ++a) pt.adv_pi[a] = pi[adv_edges[a]];
      pis.push_back(pt);
    }
    int d = 0;
    while (d < m && ++idx[d] == steps) idx[d++] = 0;
    if (d == m) break;
  }
  if (pis.empty())
    throw std::runtime_error("grid_saddle_search: no feasible plan on the grid");

  // Deception grid points (within each node's budget ball), with their costs.
  struct XiPoint {
    std::array<double, 2> xi;
    double cost;
  };
  std::vector<XiPoint> xis;
  std::vector<int> xidx(na, 0);
  while (true) {
    XiPoint pt{{0.0, 0.0}, 0.0};
    for (int a = 0; a < na; ++a) {
      double d = s.delta[adv_edges[a]];
      pt.xi[a] = -d + d * xidx[a] / (steps - 1);
    }
    bool ok = true;
    for (int x : s.adversary.compromised) {
      double n2 = 0.0;
      for (int a = 0; a < na; ++a)
        if (s.edges[adv_edges[a]].x == x) n2 += pt.xi[a] * pt.xi[a];
      if (n2 > s.kappa_of(x) + 1e-12) ok = false;
    }
    if (ok) {
      for (int a = 0; a < na; ++a) pt.cost += s.adversary.c_a * std::fabs(pt.xi[a]);
      xis.push_back(pt);
    }
    int d = 0;
    while (d < na && ++xidx[d] == steps) xidx[d++] = 0;
    if (d == na || na == 0) break;
  }
  if (xis.empty()) xis.push_back({{0.0, 0.0}, 0.0});

  GridSaddle out;
  std::vector<double> max_for_xi(xis.size(),
                                 -std::numeric_limits<double>::infinity());
  double maxmin = -std::numeric_limits<double>::infinity();
  for (const PiPoint& pp : pis) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < xis.size(); ++k) {
      double u = pp.base + pp.adv_pi[0] * xis[k].xi[0] +
                 pp.adv_pi[1] * xis[k].xi[1] + xis[k].cost;
      worst = std::min(worst, u);
      max_for_xi[k] = std::max(max_for_xi[k], u);
    }
    maxmin = std::max(maxmin, worst);
  }
  out.maxmin = maxmin;
  out.minmax = *std::min_element(max_for_xi.begin(), max_for_xi.end());

  double bound = 0.0;
  for (int e = 0; e < m; ++e)
    bound += (s.delta[e] + s.gamma[e]) * caps[e] / (steps - 1);
  for (int a = 0; a < na; ++a)
    bound += (caps[adv_edges[a]] + s.adversary.c_a) * s.delta[adv_edges[a]] /
             (steps - 1);
  out.bound = bound;
  return out;
}

}  // namespace adot
