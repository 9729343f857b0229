#include "cxorder/order.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cxorder/lp.hpp"

namespace cxorder {

MartingaleLpResult solve_martingale_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_dimension(mu, nu);
  const std::size_t m = mu.size(), n = nu.size(), d = mu.dimension();
  auto var = [n](std::size_t i, std::size_t j) { return i * n + j; };

  lp::LinearProgram program(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<lp::Term> terms;
    for (std::size_t j = 0; j < n; ++j) terms.push_back({var(i, j), 1.0});
    program.add_constraint(std::move(terms), lp::Sense::Equal, mu.weight(i));
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<lp::Term> terms;
    for (std::size_t i = 0; i < m; ++i) terms.push_back({var(i, j), 1.0});
    program.add_constraint(std::move(terms), lp::Sense::Equal, nu.weight(j));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<lp::Term> terms;
      for (std::size_t j = 0; j < n; ++j) {
        const double c = nu.point(j)[k] - mu.point(i)[k];
        if (c != 0.0) terms.push_back({var(i, j), c});
      }
      program.add_constraint(std::move(terms), lp::Sense::Equal, 0.0);
    }
  }

  const lp::Solution sol = lp::solve(program);
  if (sol.status != lp::Status::Optimal)
    return MartingaleInfeasible{sol.farkas, sol.infeasibility};

  Coupling plan(mu, nu, sol.x);
  plan.clamp_negative();
  const MartingaleReport report = validate_martingale(plan);
  if (!report.passed)
    return MartingaleInfeasible{{},
                                std::max(report.max_barycenter_error,
                                         std::max(report.marginals.max_row_error,
                                                  report.marginals.max_col_error))};
  return MartingaleCertificate{std::move(plan)};
}

WitnessFunction solve_witness_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_dimension(mu, nu);
  const std::size_t m = mu.size(), n = nu.size(), d = mu.dimension();
  // Layout: v_0..v_{m-1}, g_{0,0}..g_{m-1,d-1}, w_0..w_{n-1}
  auto v_var = [](std::size_t i) { return i; };
  auto g_var = [m, d](std::size_t i, std::size_t k) { return m + i * d + k; };
  auto w_var = [m, d](std::size_t j) { return m + m * d + j; };

  lp::LinearProgram program(m + m * d + n);
  for (std::size_t i = 0; i < m; ++i) {
    program.set_free(v_var(i));
    program.set_objective(v_var(i), mu.weight(i));
    for (std::size_t k = 0; k < d; ++k) program.set_bounds(g_var(i, k), -1.0, 1.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    program.set_free(w_var(j));
    program.set_objective(w_var(j), -nu.weight(j));
  }

  auto piece_terms = [&](std::size_t i, const Vector& z) {
    std::vector<lp::Term> terms{{v_var(i), 1.0}};
    for (std::size_t k = 0; k < d; ++k) {
      const double c = z[k] - mu.point(i)[k];
      if (c != 0.0) terms.push_back({g_var(i, k), c});
    }
    return terms;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t l = 0; l < m; ++l) {
      if (i == l) continue;
      auto terms = piece_terms(i, mu.point(l));
      terms.push_back({v_var(l), -1.0});
      program.add_constraint(std::move(terms), lp::Sense::LessEqual, 0.0);
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto terms = piece_terms(i, nu.point(j));
      terms.push_back({w_var(j), -1.0});
      program.add_constraint(std::move(terms), lp::Sense::LessEqual, 0.0);
    }
  }
  std::vector<lp::Term> anchor;
  for (std::size_t i = 0; i < m; ++i) anchor.push_back({v_var(i), mu.weight(i)});
  program.add_constraint(std::move(anchor), lp::Sense::Equal, 0.0);

  const lp::Solution sol = lp::solve(program);
  if (sol.status != lp::Status::Optimal)
    throw Error(ErrorKind::SolverFailure, "witness LP did not reach an optimum");

  WitnessFunction w;
  w.anchors = mu.points();
  w.values.resize(m);
  w.slopes.assign(m, Vector(d, 0.0));
  double offset = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    w.values[i] = sol.x[v_var(i)];
    offset += mu.weight(i) * w.values[i];
    for (std::size_t k = 0; k < d; ++k) w.slopes[i][k] = std::clamp(sol.x[g_var(i, k)], -1.0, 1.0);
  }
  for (double& v : w.values) v -= offset;
  w.gap = std::max(0.0, witness_gap(w, mu, nu));
  return w;
}

WitnessEvaluation evaluate_witness(const WitnessFunction& w, std::span<const double> z) {
  if (w.anchors.empty()) throw Error(ErrorKind::InvalidArgument, "witness has no pieces");
  if (z.size() != w.anchors.front().size())
    throw Error(ErrorKind::DimensionMismatch, "evaluation point has dimension " +
                                                  std::to_string(z.size()));
  WitnessEvaluation best{-lp::kInfinity, 0};
  for (std::size_t i = 0; i < w.anchors.size(); ++i) {
    double value = w.values[i];
    for (std::size_t k = 0; k < z.size(); ++k) value += w.slopes[i][k] * (z[k] - w.anchors[i][k]);
    if (value > best.value) best = {value, i};
  }
  return best;
}

std::vector<Vector> subgradient_select(const WitnessFunction& w) {
  std::vector<Vector> out;
  out.reserve(w.anchors.size());
  for (const Vector& x : w.anchors) out.push_back(w.slopes[evaluate_witness(w, x).active_index]);
  return out;
}

double witness_gap(const WitnessFunction& w, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  double gap = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) gap += mu.weight(i) * evaluate_witness(w, mu.point(i)).value;
  for (std::size_t j = 0; j < nu.size(); ++j) gap -= nu.weight(j) * evaluate_witness(w, nu.point(j)).value;
  return gap;
}

OrderVerdict check(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double tol) {
  require_same_dimension(mu, nu);
  WitnessFunction witness = solve_witness_lp(mu, nu);
  MartingaleLpResult martingale = solve_martingale_lp(mu, nu);
  const bool feasible = std::holds_alternative<MartingaleCertificate>(martingale);
  if (witness.gap <= tol) {
    if (!feasible)
      throw Error(ErrorKind::NumericalInconsistency,
                  "witness gap " + std::to_string(witness.gap) +
                      " is within tolerance but the martingale LP is infeasible");
    return OrderVerdict(std::get<MartingaleCertificate>(std::move(martingale)), witness.gap);
  }
  if (feasible)
    throw Error(ErrorKind::NumericalInconsistency,
                "witness gap " + std::to_string(witness.gap) +
                    " exceeds tolerance but a martingale coupling was found");
  return OrderVerdict(std::move(witness));
}

MartingaleReport validate_martingale(const Coupling& plan, double tol) {
  MartingaleReport report;
  report.marginals = validate_coupling(plan, kMarginalTolerance);
  const std::size_t d = plan.left().dimension();
  for (std::size_t i = 0; i < plan.rows(); ++i) {
    const Vector& x = plan.left().point(i);
    double err = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < plan.cols(); ++j) s += plan(i, j) * (plan.right().point(j)[k] - x[k]);
      err = std::max(err, std::abs(s));
    }
    report.max_barycenter_error = std::max(report.max_barycenter_error, err / (1.0 + max_abs(x)));
  }
  report.passed = report.marginals.passed && report.max_barycenter_error <= tol;
  return report;
}

WitnessReport validate_witness(const WitnessFunction& w, const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, double tol) {
  WitnessReport report;
  const std::size_t m = w.anchors.size();
  for (std::size_t i = 0; i < m; ++i) {
    report.max_slope = std::max(report.max_slope, max_abs(w.slopes[i]));
    for (std::size_t k = 0; k < m; ++k) {
      double piece = w.values[i];
      for (std::size_t c = 0; c < w.anchors[i].size(); ++c)
        piece += w.slopes[i][c] * (w.anchors[k][c] - w.anchors[i][c]);
      report.max_consistency_violation = std::max(report.max_consistency_violation, piece - w.values[k]);
    }
  }
  for (std::size_t i = 0; i < m && i < mu.size(); ++i) report.anchor_sum += mu.weight(i) * w.values[i];
  report.recomputed_gap = witness_gap(w, mu, nu);
  report.passed = m == mu.size() && report.max_consistency_violation <= tol &&
                  report.max_slope <= 1.0 + 1e-12 && std::abs(report.anchor_sum) <= tol &&
                  std::abs(report.recomputed_gap - w.gap) <= tol;
  return report;
}

}  // namespace cxorder
