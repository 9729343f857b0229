#include "cxorder/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <utility>

namespace cxorder {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kDegeneracyThreshold = 30;

class NetworkSimplex {
 public:
  NetworkSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                 const std::vector<double>& cost)
      : m_(supply.size()),
        n_(demand.size()),
        cost_(cost),
        flow_(m_ * n_, 0.0),
        basic_(m_ * n_, false),
        u_(m_),
        v_(n_),
        adj_(m_ + n_) {
    double cmax = 0.0;
    for (double c : cost_) cmax = std::max(cmax, std::abs(c));
    tol_ = 1e-12 * std::max(1.0, cmax);
    north_west_corner(supply, demand);
  }

  void run() {
    const std::size_t cap = 50 * (m_ + n_) * (m_ + n_) + 10 * m_ * n_ + 1000;
    bool bland = false;
    std::size_t degenerate_run = 0;
    for (;;) {
      rebuild_tree();
      compute_potentials();
      const std::size_t enter = price(bland);
      if (enter == kNone) return;
      const double theta = pivot(enter, bland);
      if (++pivots_ > cap) throw Error(ErrorKind::SolverFailure, "network simplex pivot cap exceeded");
      if (theta == 0.0) {
        if (++degenerate_run > kDegeneracyThreshold) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  const std::vector<double>& flow() const { return flow_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }
  std::size_t pivots() const { return pivots_; }

 private:
  // Staircase start: every step finishes a row or a column, giving exactly
  // m + n - 1 basic cells that form a spanning tree (degenerate cells kept).
  void north_west_corner(const std::vector<double>& supply, const std::vector<double>& demand) {
    std::vector<double> r = supply;
    std::vector<double> d = demand;
    std::size_t i = 0, j = 0;
    while (i < m_ && j < n_) {
      const double x = std::min(r[i], d[j]);
      const std::size_t cell = i * n_ + j;
      flow_[cell] = x;
      basic_[cell] = true;
      cells_.push_back(cell);
      r[i] -= x;
      d[j] -= x;
      if (i + 1 == m_) {
        ++j;
      } else if (j + 1 == n_) {
        ++i;
      } else if (r[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void rebuild_tree() {
    for (auto& a : adj_) a.clear();
    for (std::size_t cell : cells_) {
      const std::size_t i = cell / n_, j = cell % n_;
      adj_[i].push_back({m_ + j, cell});
      adj_[m_ + j].push_back({i, cell});
    }
  }

  void compute_potentials() {
    std::vector<bool> seen(m_ + n_, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    u_[0] = 0.0;
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      for (auto [b, cell] : adj_[a]) {
        if (seen[b]) continue;
        seen[b] = true;
        const std::size_t i = cell / n_, j = cell % n_;
        if (b >= m_)
          v_[j] = cost_[cell] - u_[i];
        else
          u_[i] = cost_[cell] - v_[j];
        queue.push_back(b);
      }
    }
  }

  std::size_t price(bool bland) const {
    std::size_t best = kNone;
    double best_r = -tol_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t cell = i * n_ + j;
        if (basic_[cell]) continue;
        const double r = cost_[cell] - u_[i] - v_[j];
        if (r >= -tol_) continue;
        if (bland) return cell;
        if (r < best_r) {
          best_r = r;
          best = cell;
        }
      }
    }
    return best;
  }

  // Tree path from column node of `enter` back to its row node, as cells.
  std::vector<std::size_t> cycle_path(std::size_t enter) const {
    const std::size_t p = enter / n_, q = enter % n_;
    const std::size_t from = m_ + q;
    std::vector<std::size_t> parent(m_ + n_, kNone), via(m_ + n_, kNone);
    std::deque<std::size_t> queue{from};
    parent[from] = from;
    while (!queue.empty() && parent[p] == kNone) {
      const std::size_t a = queue.front();
      queue.pop_front();
      for (auto [b, cell] : adj_[a]) {
        if (parent[b] != kNone) continue;
        parent[b] = a;
        via[b] = cell;
        queue.push_back(b);
      }
    }
    if (parent[p] == kNone) throw Error(ErrorKind::SolverFailure, "basis is not a spanning tree");
    std::vector<std::size_t> path;
    for (std::size_t node = p; node != from; node = parent[node]) path.push_back(via[node]);
    std::reverse(path.begin(), path.end());
    return path;
  }

  double pivot(std::size_t enter, bool bland) {
    const std::vector<std::size_t> path = cycle_path(enter);
    // Cells at even positions of the path lose mass, odd positions gain it.
    std::size_t leave_pos = kNone;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const double f = flow_[path[k]];
      if (f < theta || (f == theta && bland && path[k] < path[leave_pos])) {
        theta = f;
        leave_pos = k;
      }
    }
    const std::size_t leave = path[leave_pos];
    if (theta > 0.0) {
      flow_[enter] += theta;
      for (std::size_t k = 0; k < path.size(); ++k) {
        if (k % 2 == 0)
          flow_[path[k]] = (k == leave_pos) ? 0.0 : std::max(0.0, flow_[path[k]] - theta);
        else
          flow_[path[k]] += theta;
      }
    }
    flow_[leave] = 0.0;
    basic_[leave] = false;
    basic_[enter] = true;
    std::replace(cells_.begin(), cells_.end(), leave, enter);
    return theta;
  }

  std::size_t m_, n_;
  const std::vector<double>& cost_;
  std::vector<double> flow_;
  std::vector<bool> basic_;
  std::vector<std::size_t> cells_;
  std::vector<double> u_, v_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj_;
  double tol_ = 0.0;
  std::size_t pivots_ = 0;
};

}  // namespace

TransportResult solve_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const std::vector<double>& cost) {
  if (cost.size() != mu.size() * nu.size())
    throw Error(ErrorKind::DimensionMismatch, "cost matrix does not match the marginals");
  NetworkSimplex solver(mu.weights(), nu.weights(), cost);
  solver.run();

  TransportResult result{0.0, Coupling(mu, nu, solver.flow()), TransportDual{solver.u(), solver.v()},
                         solver.pivots()};
  double total = 0.0;
  for (std::size_t c = 0; c < cost.size(); ++c) total += solver.flow()[c] * cost[c];
  result.cost = std::max(0.0, total);
  return result;
}

TransportResult solve_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_dimension(mu, nu);
  std::vector<double> cost(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j)
      cost[i * nu.size() + j] = squared_distance(mu.point(i), nu.point(j));
  return solve_transport(mu, nu, cost);
}

double coupling_cost(const Coupling& plan) {
  double total = 0.0;
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t j = 0; j < plan.cols(); ++j)
      if (plan(i, j) != 0.0)
        total += plan(i, j) * squared_distance(plan.left().point(i), plan.right().point(j));
  return total;
}

CouplingReport validate_coupling(const Coupling& plan, double tol) {
  CouplingReport report;
  report.min_entry = std::numeric_limits<double>::infinity();
  std::vector<double> col(plan.cols(), 0.0);
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < plan.cols(); ++j) {
      row += plan(i, j);
      col[j] += plan(i, j);
      report.min_entry = std::min(report.min_entry, plan(i, j));
    }
    report.max_row_error = std::max(report.max_row_error, std::abs(row - plan.left().weight(i)));
  }
  for (std::size_t j = 0; j < plan.cols(); ++j)
    report.max_col_error = std::max(report.max_col_error, std::abs(col[j] - plan.right().weight(j)));
  report.passed = report.max_row_error <= tol && report.max_col_error <= tol &&
                  report.min_entry >= -kNegativeMassTolerance;
  return report;
}

}  // namespace cxorder
