// Dense two-phase primal simplex.
//
// The user program is rewritten as  A x = b, x >= 0, b >= 0  by shifting or
// splitting variables, turning finite bounds into rows, adding slack and
// surplus columns, flipping rows with negative right-hand side and adding one
// artificial per row that has no unit slack. Pricing is Dantzig's rule. A run
// of degenerate pivots perturbs the right-hand side by tiny deterministic
// amounts; the true right-hand side is carried in a second column and restored
// at the end of the phase, followed by dual simplex pivots if any basic value
// went negative. Bland's rule is a last resort if stalling persists. The
// final basic solution, duals and Farkas ray are recomputed from the original
// data with an LU factorisation of the basis rather than read off the
// tableau, which keeps their accuracy independent of the pivot count.
#include "cxorder/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "cxorder/error.hpp"

namespace cxorder::lp {
namespace {

struct ColumnRef {
  std::size_t col;
  double sign;
};

struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;            // structural + slack + artificial
  std::size_t structural = 0;
  Eigen::MatrixXd a;               // rows x cols, after flips
  Eigen::VectorXd b;               // >= 0
  std::vector<double> flip;        // +1 or -1 per row
  std::vector<bool> artificial;    // per column
  std::vector<std::size_t> start;  // initial basis per row
  std::vector<std::vector<ColumnRef>> var_cols;
  std::vector<double> shift;
  Eigen::VectorXd cost;            // minimisation cost over all columns
};

StandardForm standardize(const LinearProgram& program) {
  StandardForm sf;
  const std::size_t nv = program.num_vars();
  sf.var_cols.resize(nv);
  sf.shift.assign(nv, 0.0);

  struct BoundRow {
    std::size_t col;
    double ub;
  };
  std::vector<BoundRow> bound_rows;
  std::vector<double> col_cost;

  auto add_col = [&](std::size_t v, double sign, double ub) {
    const std::size_t c = col_cost.size();
    sf.var_cols[v].push_back({c, sign});
    col_cost.push_back(-program.objective()[v] * sign);
    if (std::isfinite(ub)) bound_rows.push_back({c, ub});
  };

  for (std::size_t v = 0; v < nv; ++v) {
    const double lo = program.lower()[v];
    const double hi = program.upper()[v];
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
      throw Error(ErrorKind::InvalidArgument, "invalid bounds on variable " + std::to_string(v));
    if (lo <= 0.0 && 0.0 <= hi) {
      if (hi > 0.0) add_col(v, 1.0, hi);
      if (lo < 0.0) add_col(v, -1.0, -lo);
    } else if (lo > 0.0) {
      sf.shift[v] = lo;
      add_col(v, 1.0, hi - lo);
    } else {
      sf.shift[v] = hi;
      add_col(v, -1.0, hi - lo);
    }
  }
  sf.structural = col_cost.size();

  const auto& cons = program.constraints();
  const std::size_t nr = cons.size() + bound_rows.size();
  sf.rows = nr;

  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nr),
                                                static_cast<Eigen::Index>(sf.structural));
  std::vector<double> rhs(nr);
  std::vector<Sense> sense(nr);
  for (std::size_t r = 0; r < cons.size(); ++r) {
    rhs[r] = cons[r].rhs;
    sense[r] = cons[r].sense;
    for (const Term& t : cons[r].terms) {
      if (t.var >= nv) throw Error(ErrorKind::InvalidArgument, "constraint references unknown variable");
      rhs[r] -= t.coeff * sf.shift[t.var];
      for (const ColumnRef& ref : sf.var_cols[t.var])
        dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(ref.col)) += t.coeff * ref.sign;
    }
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    const std::size_t r = cons.size() + k;
    dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(bound_rows[k].col)) = 1.0;
    rhs[r] = bound_rows[k].ub;
    sense[r] = Sense::LessEqual;
  }

  // Slack / surplus columns, then artificials where no slack can start basic.
  sf.flip.assign(nr, 1.0);
  std::vector<std::pair<std::size_t, double>> slack(nr, {0, 0.0});
  std::size_t next = sf.structural;
  for (std::size_t r = 0; r < nr; ++r) {
    if (rhs[r] < 0.0) sf.flip[r] = -1.0;
    if (sense[r] != Sense::Equal) {
      const double s = (sense[r] == Sense::LessEqual ? 1.0 : -1.0) * sf.flip[r];
      slack[r] = {next++, s};
    }
  }
  std::vector<std::size_t> art_col(nr, SIZE_MAX);
  for (std::size_t r = 0; r < nr; ++r)
    if (slack[r].second != 1.0) art_col[r] = next++;

  sf.cols = next;
  sf.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(sf.cols));
  sf.b.resize(static_cast<Eigen::Index>(nr));
  sf.artificial.assign(sf.cols, false);
  sf.start.assign(nr, 0);
  sf.cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sf.cols));
  for (std::size_t c = 0; c < sf.structural; ++c) sf.cost(static_cast<Eigen::Index>(c)) = col_cost[c];

  for (std::size_t r = 0; r < nr; ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    sf.a.row(ri).head(static_cast<Eigen::Index>(sf.structural)) = sf.flip[r] * dense.row(ri);
    sf.b(ri) = sf.flip[r] * rhs[r];
    if (slack[r].second != 0.0) sf.a(ri, static_cast<Eigen::Index>(slack[r].first)) = slack[r].second;
    if (art_col[r] != SIZE_MAX) {
      sf.a(ri, static_cast<Eigen::Index>(art_col[r])) = 1.0;
      sf.artificial[art_col[r]] = true;
      sf.start[r] = art_col[r];
    } else {
      sf.start[r] = slack[r].first;
    }
  }
  return sf;
}

class Tableau {
 public:
  Tableau(const StandardForm& sf, const Options& opt)
      : rows_(sf.rows),
        cols_(sf.cols),
        width_(sf.cols + 2),
        t_(sf.rows * (sf.cols + 2)),
        d_(sf.cols, 0.0),
        basis_(sf.start),
        active_(sf.rows, true),
        artificial_(sf.artificial),
        opt_(opt) {
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c)
        at(r, c) = sf.a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      at(r, cols_) = sf.b(static_cast<Eigen::Index>(r));
      at(r, cols_ + 1) = sf.b(static_cast<Eigen::Index>(r));
    }
    cap_ = opt.max_iterations != 0 ? opt.max_iterations : 200 * (rows_ + cols_) + 1000;
  }

  const std::vector<std::size_t>& basis() const { return basis_; }
  const std::vector<bool>& active() const { return active_; }
  std::size_t iterations() const { return iterations_; }

  double objective(const Eigen::VectorXd& cost) const {
    double z = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
      if (active_[r]) z += cost(static_cast<Eigen::Index>(basis_[r])) * at(r, cols_);
    return z;
  }

  // Minimises cost over the current basis. Artificial columns never enter.
  Status run(const Eigen::VectorXd& cost) {
    for (std::size_t c = 0; c < cols_; ++c) {
      double v = cost(static_cast<Eigen::Index>(c));
      for (std::size_t r = 0; r < rows_; ++r)
        if (active_[r]) v -= cost(static_cast<Eigen::Index>(basis_[r])) * at(r, c);
      d_[c] = v;
    }
    bool bland = false;
    bool perturbed = false;
    std::size_t degenerate_run = 0;
    for (;;) {
      const std::size_t enter = choose_entering(bland);
      if (enter == SIZE_MAX) break;
      const std::size_t leave = choose_leaving(enter, bland);
      if (leave == SIZE_MAX) return Status::Unbounded;
      const double step = at(leave, cols_) / at(leave, enter);
      pivot(leave, enter);
      count_iteration();
      if (step > 1e-12) {
        degenerate_run = 0;
      } else if (++degenerate_run > opt_.degeneracy_threshold) {
        degenerate_run = 0;
        if (perturbed) {
          bland = true;
        } else {
          perturb();
          perturbed = true;
        }
      }
    }
    if (perturbed) restore_rhs();
    return Status::Optimal;
  }

  // Pivots basic artificials out after a feasible phase one. Rows where no
  // structural or slack column can replace the artificial are redundant and
  // are deactivated.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!active_[r] || !artificial_[basis_[r]]) continue;
      std::size_t best = SIZE_MAX;
      double best_abs = 1e-9;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (artificial_[c]) continue;
        if (std::abs(at(r, c)) > best_abs) {
          best_abs = std::abs(at(r, c));
          best = c;
        }
      }
      at(r, cols_) = 0.0;
      at(r, cols_ + 1) = 0.0;
      if (best == SIZE_MAX)
        active_[r] = false;
      else
        pivot(r, best);
    }
  }

 private:
  double& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }

  void count_iteration() {
    if (++iterations_ > cap_) throw Error(ErrorKind::SolverFailure, "simplex iteration cap exceeded");
  }

  // Relative shifts in [1e-7, 2e-7) from a fixed hash of the row index, so the
  // perturbed problem is the same on every run.
  void perturb() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!active_[r]) continue;
      const std::uint64_t h = (static_cast<std::uint64_t>(r) + 1) * 0x9E3779B97F4A7C15ULL;
      const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
      at(r, cols_) += 1e-7 * (1.0 + u) * (1.0 + std::abs(at(r, cols_)));
    }
  }

  // Puts the true right-hand side back and repairs primal feasibility with
  // dual simplex pivots, which keep the reduced costs optimal.
  void restore_rhs() {
    for (std::size_t r = 0; r < rows_; ++r) at(r, cols_) = at(r, cols_ + 1);
    for (;;) {
      std::size_t leave = SIZE_MAX;
      double worst = -opt_.feasibility_tol;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (active_[r] && at(r, cols_) < worst) {
          worst = at(r, cols_);
          leave = r;
        }
      }
      if (leave == SIZE_MAX) break;
      std::size_t enter = SIZE_MAX;
      double best_ratio = lp::kInfinity;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (artificial_[c] || at(leave, c) >= -opt_.pivot_tol) continue;
        const double ratio = std::max(d_[c], 0.0) / -at(leave, c);
        if (ratio < best_ratio) {
          best_ratio = ratio;
          enter = c;
        }
      }
      if (enter == SIZE_MAX)
        throw Error(ErrorKind::SolverFailure, "no dual simplex pivot after removing the perturbation");
      pivot(leave, enter);
      count_iteration();
    }
    for (std::size_t r = 0; r < rows_; ++r)
      if (active_[r] && at(r, cols_) < 0.0) at(r, cols_) = 0.0;
  }

  std::size_t choose_entering(bool bland) const {
    std::size_t best = SIZE_MAX;
    double best_d = -opt_.optimality_tol;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (artificial_[c] || d_[c] >= -opt_.optimality_tol) continue;
      if (bland) return c;
      if (d_[c] < best_d) {
        best_d = d_[c];
        best = c;
      }
    }
    return best;
  }

  std::size_t choose_leaving(std::size_t enter, bool bland) const {
    double min_ratio = lp::kInfinity;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!active_[r] || at(r, enter) <= opt_.pivot_tol) continue;
      min_ratio = std::min(min_ratio, std::max(at(r, cols_), 0.0) / at(r, enter));
    }
    if (!std::isfinite(min_ratio)) return SIZE_MAX;
    const double tie = min_ratio + 1e-12 * (1.0 + min_ratio);
    std::size_t best = SIZE_MAX;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!active_[r] || at(r, enter) <= opt_.pivot_tol) continue;
      if (std::max(at(r, cols_), 0.0) / at(r, enter) > tie) continue;
      if (best == SIZE_MAX) {
        best = r;
      } else if (bland ? basis_[r] < basis_[best] : at(r, enter) > at(best, enter)) {
        best = r;
      }
    }
    return best;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_ + 1; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    const double* prow = &t_[pr * width_];
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      double* row = &t_[r * width_];
      for (std::size_t c = 0; c <= cols_ + 1; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
      if (row[cols_] < 0.0 && row[cols_] > -opt_.feasibility_tol) row[cols_] = 0.0;
    }
    const double f = d_[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c < cols_; ++c) d_[c] -= f * prow[c];
      d_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::size_t width_;
  std::vector<double> t_;
  std::vector<double> d_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  std::vector<bool> artificial_;
  Options opt_;
  std::size_t iterations_ = 0;
  std::size_t cap_ = 0;
};

struct BasisSystem {
  std::vector<std::size_t> rows;  // active row indices
  std::vector<std::size_t> cols;  // basis column for each active row
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

BasisSystem factor_basis(const StandardForm& sf, const Tableau& tab) {
  BasisSystem bs;
  for (std::size_t r = 0; r < sf.rows; ++r) {
    if (!tab.active()[r]) continue;
    bs.rows.push_back(r);
    bs.cols.push_back(tab.basis()[r]);
  }
  const auto n = static_cast<Eigen::Index>(bs.rows.size());
  Eigen::MatrixXd basis(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      basis(i, k) = sf.a(static_cast<Eigen::Index>(bs.rows[static_cast<std::size_t>(i)]),
                         static_cast<Eigen::Index>(bs.cols[static_cast<std::size_t>(k)]));
  if (n > 0) bs.lu.compute(basis);
  return bs;
}

// Row multipliers y with B^T y = cost_B, expanded to all standard-form rows.
Eigen::VectorXd basis_duals(const StandardForm& sf, const BasisSystem& bs,
                            const Eigen::VectorXd& cost) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sf.rows));
  const auto n = static_cast<Eigen::Index>(bs.rows.size());
  if (n == 0) return y;
  Eigen::VectorXd cb(n);
  for (Eigen::Index k = 0; k < n; ++k) cb(k) = cost(static_cast<Eigen::Index>(bs.cols[static_cast<std::size_t>(k)]));
  const Eigen::VectorXd yb = bs.lu.transpose().solve(cb);
  for (Eigen::Index k = 0; k < n; ++k) y(static_cast<Eigen::Index>(bs.rows[static_cast<std::size_t>(k)])) = yb(k);
  return y;
}

}  // namespace

Solution solve(const LinearProgram& program, const Options& options) {
  const StandardForm sf = standardize(program);
  Tableau tab(sf, options);
  Solution sol;

  const bool has_artificial =
      std::any_of(sf.artificial.begin(), sf.artificial.end(), [](bool a) { return a; });
  if (has_artificial) {
    Eigen::VectorXd phase_one = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sf.cols));
    for (std::size_t c = 0; c < sf.cols; ++c)
      if (sf.artificial[c]) phase_one(static_cast<Eigen::Index>(c)) = 1.0;
    tab.run(phase_one);
    sol.infeasibility = tab.objective(phase_one);
    if (sol.infeasibility > options.feasibility_tol) {
      sol.status = Status::Infeasible;
      sol.iterations = tab.iterations();
      const BasisSystem bs = factor_basis(sf, tab);
      const Eigen::VectorXd y = basis_duals(sf, bs, phase_one);
      // The phase-one dual satisfies y.A_j <= 0 on real columns and y.b > 0;
      // undo the row flips so the ray refers to the user's orientation.
      sol.farkas.resize(program.num_constraints());
      for (std::size_t r = 0; r < program.num_constraints(); ++r)
        sol.farkas[r] = sf.flip[r] * y(static_cast<Eigen::Index>(r));
      return sol;
    }
    tab.drive_out_artificials();
  }

  if (tab.run(sf.cost) == Status::Unbounded) {
    sol.status = Status::Unbounded;
    sol.iterations = tab.iterations();
    return sol;
  }
  sol.status = Status::Optimal;
  sol.iterations = tab.iterations();

  const BasisSystem bs = factor_basis(sf, tab);
  Eigen::VectorXd xs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sf.cols));
  if (!bs.rows.empty()) {
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(bs.rows.size()));
    for (std::size_t k = 0; k < bs.rows.size(); ++k)
      rhs(static_cast<Eigen::Index>(k)) = sf.b(static_cast<Eigen::Index>(bs.rows[k]));
    const Eigen::VectorXd xb = bs.lu.solve(rhs);
    for (std::size_t k = 0; k < bs.cols.size(); ++k)
      xs(static_cast<Eigen::Index>(bs.cols[k])) = std::max(0.0, xb(static_cast<Eigen::Index>(k)));
  }

  sol.x.assign(program.num_vars(), 0.0);
  for (std::size_t v = 0; v < program.num_vars(); ++v) {
    double x = sf.shift[v];
    for (const ColumnRef& ref : sf.var_cols[v]) x += ref.sign * xs(static_cast<Eigen::Index>(ref.col));
    sol.x[v] = x;
  }
  sol.objective = 0.0;
  for (std::size_t v = 0; v < program.num_vars(); ++v)
    sol.objective += program.objective()[v] * sol.x[v];

  const Eigen::VectorXd y = basis_duals(sf, bs, sf.cost);
  sol.duals.resize(program.num_constraints());
  for (std::size_t r = 0; r < program.num_constraints(); ++r)
    sol.duals[r] = -sf.flip[r] * y(static_cast<Eigen::Index>(r));
  return sol;
}

}  // namespace cxorder::lp
