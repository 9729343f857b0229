#include "cxorder/cli.hpp"

#include <CLI11.hpp>
#include <ostream>

#include "cxorder/genlab.hpp"
#include "cxorder/io.hpp"
#include "cxorder/order.hpp"
#include "cxorder/theorem.hpp"
#include "cxorder/transport.hpp"

namespace cxorder::cli {
namespace {

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NumericalInconsistency:
    case ErrorKind::SolverFailure:
    case ErrorKind::InvalidCertificate:
    case ErrorKind::InvalidWitness:
      return kInconsistency;
    default:
      return kInputError;
  }
}

int cmd_w2(const std::string& a, const std::string& b, const std::string& plan_path, std::ostream& out) {
  const DiscreteMeasure mu = io::read_measure(a);
  const DiscreteMeasure nu = io::read_measure(b);
  const TransportResult result = solve_w2(mu, nu);
  out << io::format_number(result.cost) << "\n";
  if (!plan_path.empty()) io::write_text(plan_path, io::plan_to_json(result.plan));
  return kSuccess;
}

int cmd_check(const std::string& a, const std::string& b, double tol, const std::string& cert_path,
              std::ostream& out) {
  const DiscreteMeasure mu = io::read_measure(a);
  const DiscreteMeasure nu = io::read_measure(b);
  const OrderVerdict verdict = check(mu, nu, tol);
  out << "verdict: " << (verdict.ordered() ? "ordered" : "not ordered") << "\n";
  out << "gap: " << io::format_number(verdict.gap()) << "\n";
  if (!cert_path.empty())
    io::write_text(cert_path, verdict.ordered() ? io::plan_to_json(verdict.martingale().plan)
                                                : io::witness_to_json(verdict.witness()));
  return verdict.ordered() ? kSuccess : kViolation;
}

int cmd_gap(const std::string& a, const std::string& b, const std::string& r, std::ostream& out) {
  const GapReport report =
      inequality_gap(io::read_measure(a), io::read_measure(b), io::read_measure(r));
  out << io::gap_report_to_json(report);
  return report.slack >= -kSlackTolerance ? kSuccess : kViolation;
}

int cmd_adversarial(const std::string& a, const std::string& b, const std::string& rho_path,
                    std::ostream& out, std::ostream& err) {
  const DiscreteMeasure mu = io::read_measure(a);
  const DiscreteMeasure nu = io::read_measure(b);
  const OrderVerdict verdict = check(mu, nu);
  io::FlatRecord rec;
  rec.add("ordered", verdict.ordered());
  rec.add("witness_gap", verdict.gap());
  if (verdict.ordered()) {
    out << rec.to_json();
    return kSuccess;
  }
  const AdversarialResult adv = adversarial_rho(mu, nu, verdict.witness());
  rec.add("w2_nu_rho", adv.report.w2_nu_rho);
  rec.add("w2_mu_rho", adv.report.w2_mu_rho);
  rec.add("moment_diff", adv.report.moment_diff);
  rec.add("slack", adv.report.slack);
  rec.add("violation_margin_ok", adv.margin_ok);
  out << rec.to_json();
  if (!rho_path.empty()) io::write_text(rho_path, io::measure_to_json(adv.rho));
  if (!adv.margin_ok) {
    err << "error: adversarial measure does not reach the violation margin\n";
    return kInconsistency;
  }
  return kViolation;
}

int cmd_verify(const std::string& a, const std::string& b, std::size_t n_rho, std::uint64_t seed,
               std::ostream& out, std::ostream& err) {
  const EquivalenceReport report = run_equivalence(io::read_measure(a), io::read_measure(b), n_rho, seed);
  out << io::equivalence_record(report).to_json();
  if (!report.passed) {
    err << "error: NumericalInconsistency: equivalence checks failed\n";
    return kInconsistency;
  }
  return report.ordered ? kSuccess : kViolation;
}

int cmd_gen(const std::string& mode, std::size_t dim, std::size_t atoms, std::uint64_t seed,
            const std::string& prefix, std::ostream& out) {
  genlab::GenConfig cfg;
  cfg.seed = seed;
  cfg.dimension = dim;
  cfg.atoms = atoms;
  auto emit = [&](const std::string& suffix, const DiscreteMeasure& m) {
    const std::string path = prefix + suffix;
    io::write_text(path, io::measure_to_json(m));
    out << path << "\n";
  };
  if (mode == "ordered") {
    const genlab::OrderedPair p = genlab::gen_ordered_pair(cfg);
    emit("_mu.json", p.mu);
    emit("_nu.json", p.nu);
  } else if (mode == "unordered") {
    const genlab::MeasurePair p = genlab::gen_unordered_pair(cfg);
    emit("_mu.json", p.mu);
    emit("_nu.json", p.nu);
  } else {
    emit("_rho.json", genlab::gen_rho(cfg));
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex order decisions with certificates and W2 characterisation checks", "cxorder"};
  app.require_subcommand(1);

  std::string a, b, r, plan_path, cert_path, rho_path, mode, prefix;
  double tol = kDefaultOrderTolerance;
  std::size_t n_rho = 50, dim = 1, atoms = 1;
  std::uint64_t seed = 0;

  auto* w2 = app.add_subcommand("w2", "Squared W2 distance between two measures");
  w2->add_option("A", a, "first measure")->required();
  w2->add_option("B", b, "second measure")->required();
  w2->add_option("--plan", plan_path, "write the optimal plan as sparse triples");

  auto* chk = app.add_subcommand("check", "Decide A <=_c B with a certificate");
  chk->add_option("A", a)->required();
  chk->add_option("B", b)->required();
  chk->add_option("--tol", tol, "witness gap tolerance")->check(CLI::NonNegativeNumber);
  chk->add_option("--cert", cert_path, "write the certificate");

  auto* gap = app.add_subcommand("gap", "Evaluate the W2 inequality for reference measure R");
  gap->add_option("A", a)->required();
  gap->add_option("B", b)->required();
  gap->add_option("R", r)->required();

  auto* adv = app.add_subcommand("adversarial", "Build the violating reference measure for an unordered pair");
  adv->add_option("A", a)->required();
  adv->add_option("B", b)->required();
  adv->add_option("--rho", rho_path, "write the adversarial measure");

  auto* ver = app.add_subcommand("verify", "Run both directions of the characterisation");
  ver->add_option("A", a)->required();
  ver->add_option("B", b)->required();
  ver->add_option("--n-rho", n_rho, "number of sampled reference measures")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "sampling seed");

  auto* gen = app.add_subcommand("gen", "Generate random instances");
  gen->add_option("--mode", mode)->required()->check(CLI::IsMember({"ordered", "unordered", "rho"}));
  gen->add_option("--dim", dim)->required()->check(CLI::PositiveNumber);
  gen->add_option("--atoms", atoms)->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed)->required();
  gen->add_option("--out", prefix, "output path prefix")->required();

  std::vector<const char*> argv{"cxorder"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (w2->parsed()) return cmd_w2(a, b, plan_path, out);
    if (chk->parsed()) return cmd_check(a, b, tol, cert_path, out);
    if (gap->parsed()) return cmd_gap(a, b, r, out);
    if (adv->parsed()) return cmd_adversarial(a, b, rho_path, out, err);
    if (ver->parsed()) return cmd_verify(a, b, n_rho, seed, out, err);
    if (gen->parsed()) return cmd_gen(mode, dim, atoms, seed, prefix, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace cxorder::cli
