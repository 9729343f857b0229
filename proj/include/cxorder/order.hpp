#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "cxorder/coupling.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/transport.hpp"

namespace cxorder {

inline constexpr double kBarycenterTolerance = 1e-9;
inline constexpr double kDefaultOrderTolerance = 1e-8;

// Coupling of (mu, nu) whose rows have barycenter equal to the row atom.
struct MartingaleCertificate {
  Coupling plan;
};

// The martingale LP has no solution. `farkas` holds one multiplier per LP row
// (m row-sum rows, then n column-sum rows, then m*d barycenter rows, atom-major)
// with y.A <= 0 on every column and y.b > 0. It is empty when the LP reached
// a basis that was feasible to solver tolerance but failed certificate
// validation.
struct MartingaleInfeasible {
  std::vector<double> farkas;
  double residual = 0.0;
};

using MartingaleLpResult = std::variant<MartingaleCertificate, MartingaleInfeasible>;

/// Max-affine convex function f(z) = max_i values[i] + slopes[i].(z - anchors[i]),
/// anchored at the atoms of mu. `gap` is the integral of f against mu minus the
/// integral against nu.
struct WitnessFunction {
  std::vector<Vector> anchors;
  std::vector<double> values;
  std::vector<Vector> slopes;
  double gap = 0.0;
};

struct WitnessEvaluation {
  double value = 0.0;
  std::size_t active_index = 0;
};

class OrderVerdict {
 public:
  explicit OrderVerdict(MartingaleCertificate cert, double gap) : certificate_(std::move(cert)), gap_(gap) {}
  explicit OrderVerdict(WitnessFunction witness) : certificate_(std::move(witness)) {
    gap_ = std::get<WitnessFunction>(certificate_).gap;
  }

  bool ordered() const noexcept { return std::holds_alternative<MartingaleCertificate>(certificate_); }
  const MartingaleCertificate& martingale() const { return std::get<MartingaleCertificate>(certificate_); }
  const WitnessFunction& witness() const { return std::get<WitnessFunction>(certificate_); }
  // Optimal value of the normalized witness LP.
  double gap() const noexcept { return gap_; }

 private:
  std::variant<MartingaleCertificate, WitnessFunction> certificate_;
  double gap_ = 0.0;
};

/// Feasibility LP for a martingale coupling of (mu, nu):
///   pi >= 0, row sums = mu, column sums = nu, sum_j pi_ij (y_j - x_i) = 0.
/// Returns a basic feasible coupling that passes validate_martingale, or the
/// phase-one Farkas ray.
MartingaleLpResult solve_martingale_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Normalized separation LP over max-affine functions anchored at supp(mu):
///   maximize  sum_i mu_i v_i - sum_j nu_j w_j
///   s.t.      v_k >= v_i + g_i.(x_k - x_i),  w_j >= v_i + g_i.(y_j - x_i),
///             |g_i|_inf <= 1,  sum_i mu_i v_i = 0.
/// f = 0 is feasible, so the returned gap is >= 0; a positive gap certifies
/// that mu is not dominated by nu in convex order.
WitnessFunction solve_witness_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Value of the witness at z and the lowest index of an affine piece
/// attaining it.
WitnessEvaluation evaluate_witness(const WitnessFunction& w, std::span<const double> z);

/// Subgradient of the witness at each anchor: the slope of the active piece
/// chosen by evaluate_witness.
std::vector<Vector> subgradient_select(const WitnessFunction& w);

/// Decides mu <=_c nu with a certificate either way.
///
/// Both LPs are solved. They form a Farkas alternative, so a witness gap at
/// most `tol` must come with a feasible martingale LP and a larger gap with
/// an infeasible one. Any other combination raises NumericalInconsistency.
OrderVerdict check(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   double tol = kDefaultOrderTolerance);

struct MartingaleReport {
  CouplingReport marginals;
  // max_i |sum_j pi_ij (y_j - x_i)|_inf / (1 + |x_i|_inf)
  double max_barycenter_error = 0.0;
  bool passed = false;
};

MartingaleReport validate_martingale(const Coupling& plan, double tol = kBarycenterTolerance);

struct WitnessReport {
  // max over i,k of v_i + g_i.(x_k - x_i) - v_k
  double max_consistency_violation = 0.0;
  double max_slope = 0.0;
  double anchor_sum = 0.0;
  // gap recomputed from scratch through evaluate_witness
  double recomputed_gap = 0.0;
  bool passed = false;
};

WitnessReport validate_witness(const WitnessFunction& w, const DiscreteMeasure& mu,
                               const DiscreteMeasure& nu, double tol = 1e-9);

// Integral of the witness against mu minus its integral against nu.
double witness_gap(const WitnessFunction& w, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace cxorder
