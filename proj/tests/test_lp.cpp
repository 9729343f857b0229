#include <doctest.h>

#include "cxorder/lp.hpp"
#include "oracles.hpp"

using namespace cxorder::lp;

TEST_CASE("textbook maximisation with shadow prices") {
  LinearProgram p(2);
  p.set_objective(0, 3.0);
  p.set_objective(1, 2.0);
  p.add_constraint({{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 4.0);
  p.add_constraint({{0, 1.0}, {1, 3.0}}, Sense::LessEqual, 7.0);
  p.add_constraint({{0, 1.0}}, Sense::LessEqual, 3.0);
  const Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(11.0));
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
  CHECK(s.duals[0] == doctest::Approx(2.0));
  CHECK(s.duals[1] == doctest::Approx(0.0));
  CHECK(s.duals[2] == doctest::Approx(1.0));
}

TEST_CASE("infeasible system yields a Farkas ray") {
  LinearProgram p(1);
  p.add_constraint({{0, 1.0}}, Sense::GreaterEqual, 2.0);
  p.add_constraint({{0, 1.0}}, Sense::LessEqual, 1.0);
  const Solution s = solve(p);
  REQUIRE(s.status == Status::Infeasible);
  REQUIRE(s.farkas.size() == 2);
  CHECK(s.farkas[0] >= 0.0);
  CHECK(s.farkas[1] <= 0.0);
  CHECK(s.farkas[0] + s.farkas[1] <= 1e-12);              // y.A_j <= 0
  CHECK(2.0 * s.farkas[0] + 1.0 * s.farkas[1] > 0.0);     // y.b > 0
}

TEST_CASE("unbounded program is reported") {
  LinearProgram p(2);
  p.set_objective(0, 1.0);
  p.add_constraint({{0, 1.0}, {1, -1.0}}, Sense::LessEqual, 1.0);
  CHECK(solve(p).status == Status::Unbounded);
}

TEST_CASE("free variables and general bounds") {
  // max -t  s.t.  t >= x - 2, t >= 2 - x, x free
  LinearProgram p(2);
  p.set_free(0);
  p.set_free(1);
  p.set_objective(1, -1.0);
  p.add_constraint({{1, 1.0}, {0, -1.0}}, Sense::GreaterEqual, -2.0);
  p.add_constraint({{1, 1.0}, {0, 1.0}}, Sense::GreaterEqual, 2.0);
  Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(0.0));
  CHECK(s.x[0] == doctest::Approx(2.0));

  LinearProgram q(2);
  q.set_objective(0, 1.0);
  q.set_objective(1, 1.0);
  q.set_bounds(0, -1.0, 2.0);
  q.set_bounds(1, 1.0, 3.0);
  q.add_constraint({{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 4.0);
  s = solve(q);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(4.0));

  LinearProgram neg(1);
  neg.set_bounds(0, -5.0, -2.0);
  neg.set_objective(0, -1.0);
  s = solve(neg);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.x[0] == doctest::Approx(-5.0));
  CHECK(s.objective == doctest::Approx(5.0));
}

TEST_CASE("equality rows with a redundant constraint") {
  // x + y = 1, 2x + 2y = 2, maximise x
  LinearProgram p(2);
  p.set_objective(0, 1.0);
  p.add_constraint({{0, 1.0}, {1, 1.0}}, Sense::Equal, 1.0);
  p.add_constraint({{0, 2.0}, {1, 2.0}}, Sense::Equal, 2.0);
  const Solution s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("Beale's cycling example terminates at the optimum") {
  LinearProgram p(4);
  const double c[4] = {0.75, -150.0, 0.02, -6.0};
  for (std::size_t k = 0; k < 4; ++k) p.set_objective(k, c[k]);
  p.add_constraint({{0, 0.25}, {1, -60.0}, {2, -0.04}, {3, 9.0}}, Sense::LessEqual, 0.0);
  p.add_constraint({{0, 0.5}, {1, -90.0}, {2, -0.02}, {3, 3.0}}, Sense::LessEqual, 0.0);
  p.add_constraint({{2, 1.0}}, Sense::LessEqual, 1.0);
  Options opt;
  opt.degeneracy_threshold = 2;
  const Solution s = solve(p, opt);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(0.05));
}

TEST_CASE("property: strong duality on random bounded programs") {
  oracles::Lcg rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(6), m = 1 + rng.below(6);
    LinearProgram p(n);
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    std::vector<double> b(m), c(n);
    for (std::size_t j = 0; j < n; ++j) p.set_objective(j, c[j] = rng.uniform(-1.0, 2.0));
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < n; ++j) terms.push_back({j, a[i][j] = rng.uniform(0.1, 2.0)});
      p.add_constraint(std::move(terms), Sense::LessEqual, b[i] = rng.uniform(0.5, 3.0));
    }
    const Solution s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += a[i][j] * s.x[j];
      CHECK(lhs <= b[i] + 1e-9);
      CHECK(s.duals[i] >= -1e-10);
      dual_obj += b[i] * s.duals[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(s.x[j] >= 0.0);
      double reduced = -c[j];
      for (std::size_t i = 0; i < m; ++i) reduced += a[i][j] * s.duals[i];
      CHECK(reduced >= -1e-9);
    }
    CHECK(dual_obj == doctest::Approx(s.objective).epsilon(1e-10));
  }
}

TEST_CASE("property: Farkas rays certify random infeasible equality systems") {
  oracles::Lcg rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(5), m = 2 + rng.below(4);
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    std::vector<double> b(m);
    // Column sums of A are positive and b sums to a negative number: the
    // all-ones multiplier already separates, so the system is infeasible.
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = rng.uniform(-0.5, 1.5);
      b[i] = rng.uniform(-2.0, 0.5);
    }
    double bsum = 0.0;
    for (double x : b) bsum += x;
    for (std::size_t j = 0; j < n; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < m; ++i) col += a[i][j];
      if (col <= 0.0) a[0][j] += 1.0 - col;
    }
    if (bsum >= 0.0) continue;
    LinearProgram q(n);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < n; ++j) terms.push_back({j, a[i][j]});
      q.add_constraint(std::move(terms), Sense::Equal, b[i]);
    }
    const Solution s = solve(q);
    REQUIRE(s.status == Status::Infeasible);
    double yb = 0.0;
    for (std::size_t i = 0; i < m; ++i) yb += s.farkas[i] * b[i];
    CHECK(yb > 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double ya = 0.0;
      for (std::size_t i = 0; i < m; ++i) ya += s.farkas[i] * a[i][j];
      CHECK(ya <= 1e-9);
    }
  }
}
