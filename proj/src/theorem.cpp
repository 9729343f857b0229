#include "cxorder/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cxorder/genlab.hpp"
#include "cxorder/transport.hpp"

namespace cxorder {

double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

GapReport inequality_gap(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const DiscreteMeasure& rho) {
  require_same_dimension(mu, nu);
  require_same_dimension(mu, rho);
  GapReport r;
  r.w2_nu_rho = solve_w2(nu, rho).cost;
  r.w2_mu_rho = solve_w2(mu, rho).cost;
  r.moment_diff = second_moment(nu) - second_moment(mu);
  r.slack = r.moment_diff - (r.w2_nu_rho - r.w2_mu_rho);
  return r;
}

Gluing conditional_product(const Coupling& xy, const Coupling& xz) {
  if (xy.left() != xz.left())
    throw Error(ErrorKind::InvalidArgument, "couplings to glue must share their first marginal");
  Gluing g;
  const DiscreteMeasure& mu = xy.left();
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < xy.cols(); ++j) {
      if (xy(i, j) <= 0.0) continue;
      for (std::size_t k = 0; k < xz.cols(); ++k) {
        if (xz(i, k) <= 0.0) continue;
        g.triples.push_back({i, j, k, xy(i, j) * xz(i, k) / mu.weight(i)});
      }
    }
  return g;
}

GlueReport glue_and_verify(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const DiscreteMeasure& rho, const MartingaleCertificate& pim) {
  require_same_dimension(mu, nu);
  require_same_dimension(mu, rho);
  if (pim.plan.left() != mu || pim.plan.right() != nu)
    throw Error(ErrorKind::InvalidCertificate, "certificate does not couple the given measures");
  const MartingaleReport mart = validate_martingale(pim.plan);
  if (!mart.passed)
    throw Error(ErrorKind::InvalidCertificate,
                "barycenter error " + std::to_string(mart.max_barycenter_error) + " exceeds tolerance");

  const TransportResult optimal = solve_w2(mu, rho);
  GlueReport r;
  r.gluing = conditional_product(pim.plan, optimal.plan);

  std::vector<double> xy(mu.size() * nu.size(), 0.0), xz(mu.size() * rho.size(), 0.0);
  for (const GluingEntry& t : r.gluing.triples) {
    const Vector& x = mu.point(t.i);
    const Vector& y = nu.point(t.j);
    const Vector& z = rho.point(t.k);
    r.e_x2 += t.mass * squared_norm(x);
    r.e_y2 += t.mass * squared_norm(y);
    r.e_z2 += t.mass * squared_norm(z);
    r.e_xy += t.mass * squared_distance(x, y);
    r.e_xz += t.mass * squared_distance(x, z);
    r.e_yz += t.mass * squared_distance(y, z);
    double cross = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) cross += (y[a] - x[a]) * (x[a] - z[a]);
    r.cross_term += t.mass * cross;
    xy[t.i * nu.size() + t.j] += t.mass;
    xz[t.i * rho.size() + t.k] += t.mass;
  }
  for (std::size_t c = 0; c < xy.size(); ++c)
    r.xy_marginal_error = std::max(r.xy_marginal_error, std::abs(xy[c] - pim.plan.mass()[c]));
  for (std::size_t c = 0; c < xz.size(); ++c)
    r.xz_marginal_error = std::max(r.xz_marginal_error, std::abs(xz[c] - optimal.plan.mass()[c]));

  r.scale = 1.0 + r.e_x2 + r.e_y2 + r.e_z2;
  r.gap.w2_mu_rho = optimal.cost;
  r.gap.w2_nu_rho = solve_w2(nu, rho).cost;
  r.gap.moment_diff = second_moment(nu) - second_moment(mu);
  r.gap.slack = r.gap.moment_diff - (r.gap.w2_nu_rho - r.gap.w2_mu_rho);

  r.cross_term_ok = std::abs(r.cross_term) <= kIdentityTolerance * r.scale;
  r.pythagoras_ok = std::abs(r.e_yz - (r.e_xy + r.e_xz)) <= kIdentityTolerance * r.scale;
  r.moment_identity_ok = std::abs(r.e_xy - (r.e_y2 - r.e_x2)) <= kIdentityTolerance * r.scale;
  r.feasibility_ok = r.gap.w2_nu_rho <= r.e_yz + kIdentityTolerance;
  r.slack_ok = r.gap.slack >= -kSlackTolerance;
  return r;
}

AdversarialResult adversarial_rho(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  const WitnessFunction& w) {
  if (!(w.gap > 0.0)) throw Error(ErrorKind::InvalidWitness, "witness gap must be positive");
  if (w.anchors.size() != mu.size())
    throw Error(ErrorKind::InvalidWitness, "witness is not anchored at the atoms of mu");
  DiscreteMeasure rho = pushforward(mu, subgradient_select(w));
  GapReport report = inequality_gap(mu, nu, rho);
  const bool ok = report.slack <= -2.0 * w.gap + kSlackTolerance;
  return {std::move(rho), report, ok};
}

BrenierReport brenier_check(const DiscreteMeasure& mu, const WitnessFunction& w) {
  if (w.anchors.size() != mu.size())
    throw Error(ErrorKind::InvalidWitness, "witness is not anchored at the atoms of mu");
  const std::vector<Vector> images = subgradient_select(w);
  DiscreteMeasure rho = pushforward(mu, images);

  std::map<Vector, std::size_t> index;
  for (std::size_t k = 0; k < rho.size(); ++k) index.emplace(rho.point(k), k);
  Coupling plan(mu, rho);
  for (std::size_t i = 0; i < mu.size(); ++i) plan(i, index.at(images[i])) += mu.weight(i);

  const double plan_cost = coupling_cost(plan);
  const double w2 = solve_w2(mu, rho).cost;
  const double rel = relative_difference(plan_cost, w2);
  return {std::move(rho), plan_cost, w2, rel, rel <= kIdentityTolerance};
}

namespace {

genlab::GenConfig rho_config(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             std::uint64_t seed, std::size_t trial) {
  genlab::Stream pick(seed, 0x100 + trial);
  genlab::GenConfig cfg;
  cfg.seed = (static_cast<std::uint64_t>(pick.below(1u << 30)) << 32) ^ seed ^ trial;
  cfg.dimension = mu.dimension();
  cfg.atoms = 1 + pick.below(8);
  cfg.coordinate_scale = std::max({1.0, coordinate_bound(mu), coordinate_bound(nu)});
  cfg.spread_children = 1;
  return cfg;
}

}  // namespace

EquivalenceReport run_equivalence(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  std::size_t n_rho, std::uint64_t seed) {
  if (n_rho == 0) throw Error(ErrorKind::InvalidArgument, "n_rho must be at least 1");
  require_same_dimension(mu, nu);
  const OrderVerdict verdict = check(mu, nu);
  EquivalenceReport report;
  report.ordered = verdict.ordered();
  report.witness_gap = verdict.gap();
  if (verdict.ordered()) {
    report.passed = true;
    for (std::size_t t = 0; t < n_rho; ++t) {
      DiscreteMeasure rho = genlab::gen_rho(rho_config(mu, nu, seed, t));
      GlueReport glue = glue_and_verify(mu, nu, rho, verdict.martingale());
      const bool ok = glue.passed();
      report.passed = report.passed && ok;
      report.trials.push_back({t, std::move(rho), std::move(glue), ok});
    }
  } else {
    report.adversarial = adversarial_rho(mu, nu, verdict.witness());
    report.brenier = brenier_check(mu, verdict.witness());
    report.passed = report.adversarial->margin_ok && report.adversarial->report.slack < 0.0 &&
                    report.brenier->passed;
  }
  return report;
}

EquivalenceReport equivalence_report(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                     std::size_t n_rho, std::uint64_t seed) {
  EquivalenceReport report = run_equivalence(mu, nu, n_rho, seed);
  if (!report.passed)
    throw Error(ErrorKind::NumericalInconsistency,
                report.ordered ? "a sampled reference measure failed the forward checks"
                               : "the adversarial reference measure did not violate the inequality");
  return report;
}

}  // namespace cxorder
