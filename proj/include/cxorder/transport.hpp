#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cxorder/coupling.hpp"
#include "cxorder/measure.hpp"

namespace cxorder {

struct TransportDual {
  std::vector<double> left;   // one potential per atom of mu
  std::vector<double> right;  // one potential per atom of nu
};

/// Squared 2-Wasserstein cost together with a basic optimal plan.
struct TransportResult {
  double cost = 0.0;
  Coupling plan;
  std::optional<TransportDual> dual;
  std::size_t pivots = 0;
};

/// Exact quadratic-cost transport between two finitely supported measures.
///
/// Network simplex on the bipartite transportation graph, started from the
/// north-west-corner tree. Pricing picks the most negative reduced cost;
/// after a run of degenerate pivots the solver falls back to Bland's rule
/// until a pivot moves mass again. The returned plan is a basic solution
/// (at most m + n - 1 nonzero cells) and the dual holds the tree potentials,
/// which certify optimality through complementary slackness. Which element
/// of the optimal set is returned depends only on the input order.
///
/// Throws DimensionMismatch on differing dimensions and SolverFailure when
/// the pivot cap is exceeded.
TransportResult solve_w2(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Same algorithm on an explicit cost matrix (row-major, m x n).
TransportResult solve_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const std::vector<double>& cost);

// Integral of |x - y|^2 against the plan.
double coupling_cost(const Coupling& plan);

struct CouplingReport {
  double max_row_error = 0.0;
  double max_col_error = 0.0;
  double min_entry = 0.0;
  bool passed = false;
};

CouplingReport validate_coupling(const Coupling& plan, double tol = kMarginalTolerance);

}  // namespace cxorder
