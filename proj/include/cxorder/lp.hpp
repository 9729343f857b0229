#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace cxorder::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

struct Term {
  std::size_t var;
  double coeff;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense;
  double rhs;
};

// maximize c.x subject to the constraints and per-variable bounds.
// Variables default to [0, +inf).
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t num_vars)
      : objective_(num_vars, 0.0), lower_(num_vars, 0.0), upper_(num_vars, kInfinity) {}

  std::size_t num_vars() const noexcept { return objective_.size(); }
  std::size_t num_constraints() const noexcept { return constraints_.size(); }

  void set_objective(std::size_t var, double coeff) { objective_.at(var) = coeff; }
  void set_bounds(std::size_t var, double lower, double upper) {
    lower_.at(var) = lower;
    upper_.at(var) = upper;
  }
  void set_free(std::size_t var) { set_bounds(var, -kInfinity, kInfinity); }
  std::size_t add_constraint(std::vector<Term> terms, Sense sense, double rhs) {
    constraints_.push_back({std::move(terms), sense, rhs});
    return constraints_.size() - 1;
  }

  const std::vector<double>& objective() const noexcept { return objective_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Constraint> constraints_;
};

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-10;
  double pivot_tol = 1e-11;
  // Consecutive degenerate pivots tolerated before the right-hand side is
  // perturbed; a second such run switches to Bland's rule.
  std::size_t degeneracy_threshold = 50;
  // 0 selects a cap proportional to the tableau size.
  std::size_t max_iterations = 0;
};

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  // Shadow prices of the user constraints at an optimum.
  std::vector<double> duals;
  // At infeasibility, one multiplier per user constraint with
  //   y.A_j <= 0 for every column of a [0, inf) variable,
  //   y_r <= 0 on <= rows, y_r >= 0 on >= rows, and y.b > 0.
  // Only meaningful when every variable keeps the default bounds.
  std::vector<double> farkas;
  // Phase-one residual: total artificial mass left at the end of phase one.
  double infeasibility = 0.0;
  std::size_t iterations = 0;
};

Solution solve(const LinearProgram& program, const Options& options = {});

}  // namespace cxorder::lp
