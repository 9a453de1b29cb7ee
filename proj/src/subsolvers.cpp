#include "adot/subsolvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adot/kernels.hpp"

namespace adot {

namespace {

constexpr double kBisectTol = 1e-12;
constexpr int kBisectCap = 200;

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

void project_box_sum_interval(std::span<const double> v, const ProjectionSet& set,
                              std::span<double> out) {
  if (out.size() != v.size()) throw std::invalid_argument("projection: size mismatch");
  if (v.empty()) {
    if (set.lower_sum > 0.0) throw std::invalid_argument("projection: empty input with positive lower_sum");
    return;
  }
  check_finite(v, "projection input");
  if (!std::isfinite(set.lower_sum) || !std::isfinite(set.upper_sum) ||
      set.lower_sum < 0.0 || set.lower_sum > set.upper_sum)
    throw std::invalid_argument("projection: need 0 <= lower_sum <= upper_sum, finite");

  const std::size_t n = v.size();
  const double L = set.lower_sum, U = set.upper_sum;
  const double s0 = kernels::sum_clamped_shift(v.data(), 0.0, n);

  // Once bisection has located the right active set, the optimal shift is
  // linear in the target sum; solving for it exactly removes the bisection
  // tolerance from the result.  Falls back on membership flips (ties).
  auto polish = [&](double tau, double target) {
    std::size_t active = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (v[i] - tau > 0.0) {
        ++active;
        acc += v[i];
      }
    if (active == 0) return tau;
    double exact = (acc - target) / static_cast<double>(active);
    for (std::size_t i = 0; i < n; ++i)
      if ((v[i] - tau > 0.0) != (v[i] - exact > 0.0)) return tau;
    return exact;
  };

  double tau = 0.0;
  if (s0 > U) {
    // Shift down: sum(max(v - tau, 0)) is decreasing in tau, zero at max(v).
    double lo = 0.0, hi = *std::max_element(v.begin(), v.end());
    for (int it = 0; it < kBisectCap && hi - lo > kBisectTol * std::max(1.0, hi); ++it) {
      double mid = 0.5 * (lo + hi);
      if (kernels::sum_clamped_shift(v.data(), mid, n) > U) lo = mid;
      else hi = mid;
    }
    tau = polish(0.5 * (lo + hi), U);
  } else if (s0 < L) {
    // Shift up (negative tau).  At tau_lo every coordinate exceeds zero by at
    // least L + 1 in the largest entry, so the sum is safely above L.
    double hi = 0.0;
    double lo = std::min(0.0, *std::min_element(v.begin(), v.end())) - L - 1.0;
    for (int it = 0; it < kBisectCap && hi - lo > kBisectTol * std::max(1.0, std::fabs(lo)); ++it) {
      double mid = 0.5 * (lo + hi);
      if (kernels::sum_clamped_shift(v.data(), mid, n) < L) hi = mid;
      else lo = mid;
    }
    tau = polish(0.5 * (lo + hi), L);
  }
  kernels::clamped_shift(v.data(), tau, out.data(), n);
}

std::vector<double> project_box_sum_interval(std::span<const double> v,
                                             const ProjectionSet& set) {
  std::vector<double> out(v.size());
  project_box_sum_interval(v, set, out);
  return out;
}

std::vector<double> brute_force_projection(std::span<const double> v,
                                           const ProjectionSet& set) {
  const int n = static_cast<int>(v.size());
  if (n > 20) throw std::invalid_argument("brute_force_projection: too many coordinates");
  check_finite(v, "projection input");
  const double L = set.lower_sum, U = set.upper_sum;
  const double feas_tol = 1e-10;

  std::vector<double> best;
  double best_dist = std::numeric_limits<double>::infinity();
  std::vector<double> cand(n);

  auto consider = [&](const std::vector<double>& x) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (x[i] < -feas_tol) return;
      sum += x[i];
    }
    if (sum < L - feas_tol || sum > U + feas_tol) return;
    double d = 0.0;
    for (int i = 0; i < n; ++i) d += (x[i] - v[i]) * (x[i] - v[i]);
    if (d < best_dist) {
      best_dist = d;
      best = x;
    }
  };

  // KKT patterns: a subset of coordinates clamped to zero, the rest either
  // untouched (sum constraint slack) or shifted uniformly onto a sum bound.
  for (int mask = 0; mask < (1 << n); ++mask) {
    int free_count = 0;
    double free_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) {
        cand[i] = 0.0;
      } else {
        ++free_count;
        free_sum += v[i];
      }
    }
    if (free_count == 0) {
      consider(cand);
      continue;
    }
    for (int bound = 0; bound < 3; ++bound) {  // slack, sum = L, sum = U
      double shift = 0.0;
      if (bound == 1) shift = (L - free_sum) / free_count;
      if (bound == 2) shift = (U - free_sum) / free_count;
      for (int i = 0; i < n; ++i)
        if (!(mask & (1 << i))) cand[i] = v[i] + shift;
      consider(cand);
    }
  }
  if (best.empty() && n > 0 && !(L <= feas_tol))
    throw std::runtime_error("brute_force_projection: no feasible candidate");
  if (best.empty()) best.assign(n, 0.0);
  return best;
}

std::vector<double> solve_attacker_node(std::span<const double> pi_row,
                                        const AttackerNode& node) {
  const std::size_t n = pi_row.size();
  if (node.delta_row.size() != n)
    throw std::invalid_argument("attacker node: delta/pi size mismatch");
  check_finite(pi_row, "attacker pi");
  check_finite(node.delta_row, "attacker delta");
  if (!std::isfinite(node.kappa) || node.kappa < 0.0 || node.c_a < 0.0)
    throw std::invalid_argument("attacker node: bad kappa or c_a");
  for (double d : node.delta_row)
    if (d < 0.0) throw std::invalid_argument("attacker node: negative delta");

  std::vector<double> xi(n, 0.0);
  if (n == 0 || node.kappa == 0.0) return xi;

  // Sign reduction: raising a report only adds cost, so xi <= 0 and the
  // objective becomes sum_y c[y] * xi[y] with c[y] = pi[y] - c_a.  Only
  // positive reduced costs attract a nonzero (negative) deviation.
  std::vector<double> c(n);
  double box_norm2 = 0.0, c_norm2 = 0.0;
  bool any_positive = false;
  for (std::size_t y = 0; y < n; ++y) {
    c[y] = pi_row[y] - node.c_a;
    if (c[y] > 0.0) {
      any_positive = true;
      box_norm2 += node.delta_row[y] * node.delta_row[y];
      c_norm2 += c[y] * c[y];
    }
  }
  if (!any_positive) return xi;

  auto fill = [&](double lambda) {
    for (std::size_t y = 0; y < n; ++y) {
      if (c[y] > 0.0)
        xi[y] = std::max(-c[y] / (2.0 * lambda), -node.delta_row[y]);
      else
        xi[y] = 0.0;
    }
  };

  // Box corner inside the ball: the budget constraint is slack.
  if (box_norm2 <= node.kappa) {
    for (std::size_t y = 0; y < n; ++y) xi[y] = c[y] > 0.0 ? -node.delta_row[y] : 0.0;
    return xi;
  }

  // Otherwise the budget binds; bisect the ball multiplier.  At lambda_hi the
  // unclipped magnitudes already have squared norm kappa, so clipping keeps
  // the constraint satisfied; near zero the iterate approaches the box corner
  // whose norm exceeds the budget.
  double hi = std::sqrt(c_norm2 / node.kappa) * 0.5;
  double lo = 0.0;
  auto norm2_at = [&](double lambda) {
    fill(lambda);
    return kernels::sum_squares(xi.data(), n);
  };
  for (int it = 0; it < kBisectCap && hi - lo > kBisectTol * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == 0.0) break;
    if (norm2_at(mid) > node.kappa) lo = mid;
    else hi = mid;
  }
  fill(hi);  // the hi end always satisfies the budget
  return xi;
}

std::vector<double> solve_attacker_node_prox(std::span<const double> pi_row,
                                             const AttackerNode& node,
                                             std::span<const double> z_row,
                                             double mu) {
  const std::size_t n = pi_row.size();
  if (node.delta_row.size() != n || z_row.size() != n)
    throw std::invalid_argument("attacker node: row size mismatch");
  if (!std::isfinite(mu) || mu < 0.0)
    throw std::invalid_argument("attacker node: bad prox weight");
  if (mu == 0.0) return solve_attacker_node(pi_row, node);
  check_finite(pi_row, "attacker pi");
  check_finite(z_row, "attacker z");
  if (!std::isfinite(node.kappa) || node.kappa < 0.0 || node.c_a < 0.0)
    throw std::invalid_argument("attacker node: bad kappa or c_a");

  std::vector<double> xi(n, 0.0);
  if (n == 0 || node.kappa == 0.0) return xi;

  // Per-coordinate stationarity with ball multiplier lambda:
  //   xi_y = clip( soft(mu z_y - pi_y, c_a) / (mu + 2 lambda), [-delta_y, 0] )
  // soft() never goes positive here because z <= 0 and pi >= 0.
  std::vector<double> s(n);
  double s_norm2 = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    double t = mu * z_row[y] - pi_row[y];
    s[y] = std::min(t + node.c_a, 0.0);
    s_norm2 += s[y] * s[y];
  }
  auto fill = [&](double lambda) {
    double norm2 = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      xi[y] = std::max(s[y] / (mu + 2.0 * lambda), -node.delta_row[y]);
      norm2 += xi[y] * xi[y];
    }
    return norm2;
  };
  if (fill(0.0) <= node.kappa) return xi;
  // Unclipped magnitudes hit the ball exactly at lambda_hi, so the clipped
  // point is inside it; bisect down from there.
  double hi = 0.5 * (std::sqrt(s_norm2 / node.kappa) - mu);
  double lo = 0.0;
  for (int it = 0; it < kBisectCap && hi - lo > kBisectTol * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (fill(mid) > node.kappa) lo = mid;
    else hi = mid;
  }
  fill(hi);
  return xi;
}

std::vector<double> brute_force_attacker_node(std::span<const double> pi_row,
                                              const AttackerNode& node,
                                              double grid_step) {
  const std::size_t n = pi_row.size();
  if (node.delta_row.size() != n)
    throw std::invalid_argument("attacker node: delta/pi size mismatch");
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");

  // Axis grids span the full feasible range [-delta_y, sqrt(kappa)] so the
  // search does not presuppose the sign reduction used by the exact solver.
  // Zero is always a grid point (ties resolve toward no deviation).
  const double pos_cap = std::sqrt(std::max(node.kappa, 0.0));
  std::vector<std::vector<double>> axis(n);
  double total = 1.0;
  for (std::size_t y = 0; y < n; ++y) {
    const double d = node.delta_row[y];
    int m_neg = d > 0.0 ? std::max(1, static_cast<int>(std::ceil(d / grid_step))) : 0;
    int m_pos = pos_cap > 0.0 ? std::max(1, static_cast<int>(std::ceil(pos_cap / grid_step))) : 0;
    for (int i = 0; i <= m_neg; ++i) axis[y].push_back(-d + d * i / std::max(m_neg, 1));
    for (int i = 1; i <= m_pos; ++i) axis[y].push_back(pos_cap * i / m_pos);
    axis[y][m_neg] = 0.0;
    total *= static_cast<double>(axis[y].size());
    if (total > 2e7) throw std::invalid_argument("brute_force_attacker_node: grid too large");
  }

  std::vector<std::size_t> idx(n, 0);
  std::vector<double> xi(n), best(n, 0.0);
  double best_obj = std::numeric_limits<double>::infinity();
  while (true) {
    double norm2 = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      xi[y] = axis[y][idx[y]];
      norm2 += xi[y] * xi[y];
    }
    if (norm2 <= node.kappa + 1e-12) {
      double obj = attacker_objective(xi, pi_row, node.c_a);
      if (obj < best_obj) {
        best_obj = obj;
        best = xi;
      }
    }
    std::size_t d = 0;
    while (d < n && ++idx[d] == axis[d].size()) idx[d++] = 0;
    if (d == n) break;
  }
  return best;
}

double attacker_objective(std::span<const double> xi,
                          std::span<const double> pi_row, double c_a) {
  if (xi.size() != pi_row.size())
    throw std::invalid_argument("attacker objective: size mismatch");
  return kernels::dot(xi.data(), pi_row.data(), xi.size()) +
         c_a * kernels::l1_norm(xi.data(), xi.size());
}

}  // namespace adot
