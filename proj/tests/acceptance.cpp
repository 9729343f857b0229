// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cxorder/genlab.hpp"
#include "cxorder/order.hpp"
#include "cxorder/theorem.hpp"
#include "cxorder/transport.hpp"
#include "golden.hpp"
#include "oracles.hpp"

using namespace cxorder;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kOtRelTol = 1e-9;
constexpr double kWitnessGapFloor = 1e-6;
constexpr double kSlackTol = 1e-7;
constexpr double kIdentityRelTol = 1e-9;
constexpr double kBrenierRelTol = 1e-9;
constexpr double kBandFraction = 0.01;
constexpr double kFixtureTol = 1e-12;
constexpr std::size_t kRhoPerPair = 50;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> body;
};

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared between criteria 2 through 5.
struct Corpus {
  std::vector<genlab::OrderedPair> ordered;
  std::vector<genlab::MeasurePair> unordered;
  std::vector<MartingaleCertificate> certificates;
  std::vector<WitnessFunction> witnesses;
};

genlab::GenConfig corpus_config(std::uint64_t k) {
  // d in 1..3, mu atoms in 1..4, children in 1..3, so nu has at most 12 atoms.
  const double scales[3] = {1.0, 2.0, 0.5};
  return {.seed = 0xC0FFEE + k,
          .dimension = 1 + k % 3,
          .atoms = 1 + (k / 3) % 4,
          .coordinate_scale = scales[(k / 36) % 3],
          .spread_children = 1 + (k / 12) % 3};
}

Outcome ot_exactness() {
  oracles::Lcg rng(1);
  int ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(6), d = 1 + rng.below(3);
    std::vector<Vector> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(oracles::random_point(rng, d, 2.0));
      ys.push_back(oracles::random_point(rng, d, 2.0));
    }
    const double cost = solve_w2(uniform_measure(xs), uniform_measure(ys)).cost;
    const double brute = oracles::min_permutation_cost(xs, ys);
    worst = std::max(worst, std::abs(cost - brute) / std::max(1.0, std::abs(brute)));
    ok += rel_close(cost, brute, kOtRelTol) ? 1 : 0;
  }
  return {ok == 100, fmt("%d/100 match brute force, max rel err %.2e", ok, worst)};
}

Outcome farkas_consistency(Corpus& c) {
  int ordered_ok = 0, unordered_ok = 0, inconsistencies = 0, other_errors = 0;
  double min_gap = INFINITY;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const genlab::GenConfig cfg = corpus_config(k);
    c.ordered.push_back(genlab::gen_ordered_pair(cfg));
    c.unordered.push_back(genlab::gen_unordered_pair(cfg));
  }
  for (const auto& p : c.ordered) {
    try {
      const OrderVerdict v = check(p.mu, p.nu);
      if (v.ordered() && validate_martingale(v.martingale().plan).passed) {
        ++ordered_ok;
        c.certificates.push_back(v.martingale());
        continue;
      }
    } catch (const Error& e) {
      (e.kind() == ErrorKind::NumericalInconsistency ? inconsistencies : other_errors)++;
    }
    c.certificates.push_back({p.spread});
  }
  for (const auto& p : c.unordered) {
    try {
      const OrderVerdict v = check(p.mu, p.nu);
      if (!v.ordered()) {
        min_gap = std::min(min_gap, v.gap());
        c.witnesses.push_back(v.witness());
        if (v.gap() > kWitnessGapFloor && validate_witness(v.witness(), p.mu, p.nu).passed) ++unordered_ok;
        continue;
      }
    } catch (const Error& e) {
      (e.kind() == ErrorKind::NumericalInconsistency ? inconsistencies : other_errors)++;
    }
    c.witnesses.push_back({});
  }
  return {ordered_ok == 200 && unordered_ok == 200 && inconsistencies == 0 && other_errors == 0,
          fmt("ordered %d/200 certified, unordered %d/200 witnessed (min gap %.3g), %d inconsistencies, "
              "%d other errors",
              ordered_ok, unordered_ok, min_gap, inconsistencies, other_errors)};
}

Outcome forward_direction(const Corpus& c) {
  std::size_t reports = 0, slack_ok = 0, glue_ok = 0;
  double min_slack = INFINITY, worst_cross = 0.0, worst_pyth = 0.0, worst_moment = 0.0;
  for (std::size_t k = 0; k < c.ordered.size(); ++k) {
    const auto& p = c.ordered[k];
    for (std::size_t t = 0; t < kRhoPerPair; ++t) {
      const genlab::GenConfig rc{.seed = 0xBEEF00 + k * kRhoPerPair + t,
                                 .dimension = p.mu.dimension(),
                                 .atoms = 1 + t % 8,
                                 .coordinate_scale = 2.0};
      const DiscreteMeasure rho = genlab::gen_rho(rc);
      ++reports;
      try {
        const GlueReport g = glue_and_verify(p.mu, p.nu, rho, c.certificates[k]);
        const double scale = 1.0 + g.e_x2 + g.e_y2 + g.e_z2;
        const bool a = std::abs(g.cross_term) <= kIdentityRelTol * scale;
        const bool b = rel_close(g.e_yz, g.e_xy + g.e_xz, kIdentityRelTol);
        const bool m = rel_close(g.e_xy, g.e_y2 - g.e_x2, kIdentityRelTol);
        const bool f = g.gap.w2_nu_rho <= g.e_yz + kIdentityRelTol;
        glue_ok += (a && b && m && f) ? 1 : 0;
        slack_ok += g.gap.slack >= -kSlackTol ? 1 : 0;
        min_slack = std::min(min_slack, g.gap.slack);
        worst_cross = std::max(worst_cross, std::abs(g.cross_term) / scale);
        worst_pyth = std::max(worst_pyth, std::abs(g.e_yz - g.e_xy - g.e_xz) / std::max(1.0, g.e_yz));
        worst_moment = std::max(worst_moment, std::abs(g.e_xy - (g.e_y2 - g.e_x2)) / std::max(1.0, g.e_xy));
      } catch (const Error&) {
      }
    }
  }
  return {reports == 10000 && slack_ok == reports && glue_ok == reports,
          fmt("%zu reports, slack ok %zu (min %.3g), gluing (a)-(d) ok %zu; worst cross %.1e, "
              "pythagoras %.1e, moment %.1e",
              reports, slack_ok, min_slack, glue_ok, worst_cross, worst_pyth, worst_moment)};
}

Outcome reverse_direction(const Corpus& c) {
  int ok = 0;
  double worst_margin = -INFINITY;
  for (std::size_t k = 0; k < c.unordered.size(); ++k) {
    const WitnessFunction& w = c.witnesses[k];
    if (w.anchors.empty()) continue;
    try {
      const AdversarialResult a = adversarial_rho(c.unordered[k].mu, c.unordered[k].nu, w);
      // slack + 2 gap must stay at or below the tolerance.
      worst_margin = std::max(worst_margin, a.report.slack + 2.0 * w.gap);
      ok += a.report.slack <= -2.0 * w.gap + kSlackTol ? 1 : 0;
    } catch (const Error&) {
    }
  }
  return {ok == 200, fmt("%d/200 reach slack <= -2 gap + 1e-7, worst slack + 2 gap = %.3g", ok, worst_margin)};
}

Outcome brenier_equality(const Corpus& c) {
  int ok = 0, total = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < c.unordered.size(); ++k) {
    const WitnessFunction& w = c.witnesses[k];
    if (w.anchors.empty()) continue;
    ++total;
    const DiscreteMeasure& mu = c.unordered[k].mu;
    try {
      // Plan cost sum_i mu_i |x_i - g_i|^2 recomputed here from the selection.
      const std::vector<Vector> grad = subgradient_select(w);
      double plan_cost = 0.0;
      for (std::size_t i = 0; i < mu.size(); ++i) plan_cost += mu.weight(i) * squared_distance(mu.point(i), grad[i]);
      const double w2 = solve_w2(mu, pushforward(mu, grad)).cost;
      const BrenierReport b = brenier_check(mu, w);
      const double err = std::abs(plan_cost - w2) / std::max(1.0, w2);
      worst = std::max(worst, err);
      ok += (err <= kBrenierRelTol && b.passed && rel_close(b.plan_cost, plan_cost, 1e-12)) ? 1 : 0;
    } catch (const Error&) {
    }
  }
  return {total == 200 && ok == total, fmt("%d/%d witnesses, max rel err %.2e", ok, total, worst)};
}

DiscreteMeasure recenter(const DiscreteMeasure& nu, double target) {
  const double shift = target - mean(nu)[0];
  std::vector<Vector> pts = nu.points();
  for (Vector& p : pts) p[0] += shift;
  return build_measure(pts, nu.weights());
}

Outcome oracle_agreement() {
  oracles::Lcg rng(6);
  int band = 0, disagree = 0, ordered = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    DiscreteMeasure mu = dirac({0.0}), nu = dirac({0.0});
    const genlab::GenConfig cfg{.seed = 0x1D0000 + k,
                                .dimension = 1,
                                .atoms = 1 + rng.below(4),
                                .coordinate_scale = 1.0,
                                .spread_children = 1 + rng.below(3)};
    switch (k % 4) {
      case 0: {
        const auto p = genlab::gen_ordered_pair(cfg);
        mu = p.mu, nu = p.nu;
        break;
      }
      case 1: {
        const auto p = genlab::gen_unordered_pair(cfg);
        mu = p.mu, nu = p.nu;
        break;
      }
      case 2:
        mu = oracles::random_measure(rng, 1, 1 + rng.below(5), 2.0);
        nu = oracles::random_measure(rng, 1, 1 + rng.below(5), 2.0);
        break;
      default:
        // Equal means, so only the potential comparison decides.
        mu = oracles::random_measure(rng, 1, 1 + rng.below(5), 2.0);
        nu = recenter(oracles::random_measure(rng, 1, 1 + rng.below(5), 2.0), mean(mu)[0]);
        break;
    }
    try {
      const bool verdict = check(mu, nu).ordered();
      ordered += verdict ? 1 : 0;
      disagree += verdict != genlab::convex_order_1d_oracle(mu, nu) ? 1 : 0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NumericalInconsistency) throw;
      ++band;
    }
  }
  int grid_disagree = 0, grid_errors = 0, grid_total = 0;
  const auto grid = oracles::quarter_grid_measures();
  for (const auto& a : grid) {
    for (const auto& b : grid) {
      ++grid_total;
      try {
        grid_disagree += check(a, b).ordered() != genlab::convex_order_1d_oracle(a, b) ? 1 : 0;
      } catch (const Error&) {
        ++grid_errors;
      }
    }
  }
  const bool pass = disagree == 0 && band <= kBandFraction * 500 && grid_disagree == 0 && grid_errors == 0;
  return {pass, fmt("random: %d disagreements, %d band (%d ordered of 500); grid: %d/%d disagreements, %d errors",
                    disagree, band, ordered, grid_disagree, grid_total, grid_errors)};
}

Outcome hand_fixtures() {
  const DiscreteMeasure sym = build_measure({{-1.0}, {1.0}}, {0.5, 0.5});
  const DiscreteMeasure origin = dirac({0.0});
  std::vector<std::string> failed;
  auto expect = [&](const char* what, double got, double want) {
    if (!(std::abs(got - want) <= kFixtureTol)) failed.push_back(fmt("%s=%.17g (want %g)", what, got, want));
  };

  const GapReport contraction = inequality_gap(sym, origin, sym);
  expect("contraction slack", contraction.slack, -2.0);

  const OrderVerdict spread = check(origin, sym);
  if (!spread.ordered()) {
    failed.push_back("spread not ordered");
  } else {
    const GlueReport g = glue_and_verify(origin, sym, dirac({2.0}), spread.martingale());
    expect("E|Y-Z|^2", g.e_yz, 5.0);
    expect("E|X-Y|^2", g.e_xy, 1.0);
    expect("E|X-Z|^2", g.e_xz, 4.0);
    expect("W2^2(nu,rho)", g.gap.w2_nu_rho, 5.0);
  }

  const OrderVerdict shift = check(origin, dirac({1.0}));
  if (shift.ordered()) {
    failed.push_back("shift ordered");
  } else {
    expect("shift gap", shift.gap(), 1.0);
    const AdversarialResult a = adversarial_rho(origin, dirac({1.0}), shift.witness());
    expect("shift slack", a.report.slack, -2.0);
  }
  std::string detail = "contraction slack -2, gluing 5 = 1 + 4, shift slack -2";
  if (!failed.empty()) {
    detail = "mismatch:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

Outcome cli_golden() {
  const fs::path tests = CXORDER_TEST_DIR;
  const fs::path scratch = fs::temp_directory_path() / "cxorder_acceptance";
  fs::create_directories(scratch);
  const auto cases = golden::load_cases(tests / "golden" / "cases.txt");
  int ok = 0;
  std::string bad;
  for (const auto& c : cases) {
    const golden::Outcome first = golden::run_case(c, tests / "fixtures", scratch);
    const golden::Outcome second = golden::run_case(c, tests / "fixtures", scratch);
    const auto want_out = golden::slurp(tests / "golden" / (c.name + ".out"));
    const auto want_file = c.writes_file ? golden::slurp(tests / "golden" / (c.name + ".file")) : std::nullopt;
    const bool same = first.out == second.out && first.file == second.file && first.exit_code == second.exit_code;
    const bool golden_ok = want_out && first.out == *want_out && first.file == want_file;
    if (same && golden_ok && first.exit_code == c.exit_code)
      ++ok;
    else
      bad += " " + c.name;
  }
  return {ok == static_cast<int>(cases.size()) && !cases.empty(),
          fmt("%d/%zu cases byte-identical over two runs with expected exit codes%s", ok, cases.size(),
              bad.empty() ? "" : (" ; failing:" + bad).c_str())};
}

}  // namespace

int main() {
  Corpus corpus;
  const std::vector<Criterion> criteria{
      {1, "OT exactness", 5, ot_exactness},
      {2, "Farkas-pair consistency", 30, [&] { return farkas_consistency(corpus); }},
      {3, "forward direction", 300, [&] { return forward_direction(corpus); }},
      {4, "reverse direction", 60, [&] { return reverse_direction(corpus); }},
      {5, "Brenier equality", 60, [&] { return brenier_equality(corpus); }},
      {6, "1-D oracle agreement", 60, oracle_agreement},
      {7, "hand-computed fixtures", 5, hand_fixtures},
      {8, "CLI golden files", 60, cli_golden},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= c.budget_seconds;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
