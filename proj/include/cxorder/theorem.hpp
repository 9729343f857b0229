#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cxorder/coupling.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/order.hpp"

namespace cxorder {

// Tolerances used when asserting the identities behind the characterisation.
inline constexpr double kIdentityTolerance = 1e-9;
inline constexpr double kSlackTolerance = 1e-7;

// |a - b| relative to max(1, |a|, |b|).
double relative_difference(double a, double b);

/// Both sides of the W2 inequality for one reference measure rho:
///   W2^2(nu, rho) - W2^2(mu, rho) <= M2(nu) - M2(mu).
/// The inequality holds for rho exactly when slack >= 0.
struct GapReport {
  double w2_nu_rho = 0.0;
  double w2_mu_rho = 0.0;
  double moment_diff = 0.0;
  double slack = 0.0;
};

GapReport inequality_gap(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const DiscreteMeasure& rho);

struct GluingEntry {
  std::size_t i;  // atom of mu (X)
  std::size_t j;  // atom of nu (Y)
  std::size_t k;  // atom of rho (Z)
  double mass;
};

// Joint law of (X, Y, Z) with Y and Z conditionally independent given X.
struct Gluing {
  std::vector<GluingEntry> triples;
};

// mass(i, j, k) = xy(i, j) * xz(i, k) / mu_i, where mu is the shared left marginal.
Gluing conditional_product(const Coupling& xy, const Coupling& xz);

struct GlueReport {
  Gluing gluing;
  double e_x2 = 0.0, e_y2 = 0.0, e_z2 = 0.0;
  double e_xy = 0.0;  // E|X - Y|^2
  double e_xz = 0.0;  // E|X - Z|^2
  double e_yz = 0.0;  // E|Y - Z|^2
  double cross_term = 0.0;  // E[(Y - X).(X - Z)]
  double scale = 1.0;       // 1 + E|X|^2 + E|Y|^2 + E|Z|^2
  double xy_marginal_error = 0.0;
  double xz_marginal_error = 0.0;
  GapReport gap;

  bool cross_term_ok = false;
  bool pythagoras_ok = false;
  bool moment_identity_ok = false;
  bool feasibility_ok = false;
  bool slack_ok = false;

  bool passed() const {
    return cross_term_ok && pythagoras_ok && moment_identity_ok && feasibility_ok && slack_ok;
  }
};

/// Glues the martingale coupling with an optimal plan of (mu, rho) and checks
/// the chain  W2^2(nu,rho) <= E|Y-Z|^2 = E|X-Y|^2 + E|X-Z|^2
///                           = W2^2(mu,rho) + M2(nu) - M2(mu).
/// Throws InvalidCertificate when pim is not a martingale coupling of (mu, nu).
GlueReport glue_and_verify(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const DiscreteMeasure& rho, const MartingaleCertificate& pim);

struct AdversarialResult {
  DiscreteMeasure rho;
  GapReport report;
  // slack <= -2 * gap + kSlackTolerance
  bool margin_ok = false;
};

/// rho = (grad f)#mu for the witness f. Throws InvalidWitness if gap <= 0.
AdversarialResult adversarial_rho(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  const WitnessFunction& w);

struct BrenierReport {
  DiscreteMeasure rho;
  double plan_cost = 0.0;  // cost of (id, grad f)#mu
  double w2 = 0.0;         // solved W2^2(mu, rho)
  double relative_error = 0.0;
  bool passed = false;
};

// Checks that the subgradient map of the witness is an optimal transport map.
BrenierReport brenier_check(const DiscreteMeasure& mu, const WitnessFunction& w);

struct RhoTrial {
  std::size_t index = 0;
  DiscreteMeasure rho;
  GlueReport glue;
  bool passed = false;
};

struct EquivalenceReport {
  bool ordered = false;
  double witness_gap = 0.0;
  std::vector<RhoTrial> trials;
  std::optional<AdversarialResult> adversarial;
  std::optional<BrenierReport> brenier;
  bool passed = false;
};

/// Runs the order decision and then the matching direction of the
/// characterisation: for an ordered pair, n_rho sampled reference measures
/// must all satisfy the inequality and pass the gluing checks; otherwise the
/// adversarial rho must violate it by at least twice the witness gap.
/// Throws NumericalInconsistency when any of these assertions fails.
EquivalenceReport equivalence_report(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                     std::size_t n_rho, std::uint64_t seed);

// Same as equivalence_report but returns failing reports instead of throwing.
EquivalenceReport run_equivalence(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  std::size_t n_rho, std::uint64_t seed);

}  // namespace cxorder
