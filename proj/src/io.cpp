#include "cxorder/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace cxorder::io {

using nlohmann::json;

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", x);
  return buf;
}

DiscreteMeasure parse_measure(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  try {
    if (!doc.is_object()) throw Error(ErrorKind::Parse, "measure must be a JSON object");
    if (!doc.contains("dimension") || !doc.contains("points"))
      throw Error(ErrorKind::Parse, "measure needs \"dimension\" and \"points\"");
    const auto& dim_field = doc.at("dimension");
    if (!dim_field.is_number_integer() || dim_field.get<std::int64_t>() < 1)
      throw Error(ErrorKind::Parse, "\"dimension\" must be a positive integer");
    const auto dim = dim_field.get<std::size_t>();

    std::vector<Vector> points;
    for (const auto& p : doc.at("points")) {
      if (!p.is_array()) throw Error(ErrorKind::Parse, "each point must be an array");
      Vector v;
      for (const auto& c : p) {
        if (!c.is_number()) throw Error(ErrorKind::Parse, "coordinates must be numbers");
        v.push_back(c.get<double>());
      }
      if (v.size() != dim)
        throw Error(ErrorKind::DimensionMismatch, "point of length " + std::to_string(v.size()) +
                                                      " in a measure of dimension " + std::to_string(dim));
      points.push_back(std::move(v));
    }
    if (!doc.contains("weights")) return uniform_measure(points);
    std::vector<double> weights;
    for (const auto& w : doc.at("weights")) {
      if (!w.is_number()) throw Error(ErrorKind::Parse, "weights must be numbers");
      weights.push_back(w.get<double>());
    }
    return build_measure(points, weights);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

DiscreteMeasure read_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_measure(ss.str());
}

std::string measure_to_json(const DiscreteMeasure& mu) {
  json doc;
  doc["dimension"] = mu.dimension();
  doc["points"] = mu.points();
  doc["weights"] = mu.weights();
  return doc.dump() + "\n";
}

namespace {

std::string number_list(const std::vector<double>& xs) {
  std::string s = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) s += ", ";
    s += format_number(xs[k]);
  }
  return s + "]";
}

std::string vector_list(const std::vector<Vector>& vs) {
  std::string s = "[";
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (k) s += ", ";
    s += number_list(vs[k]);
  }
  return s + "]";
}

}  // namespace

std::string plan_to_json(const Coupling& plan) {
  std::string s = "{\"triples\": [";
  bool first = true;
  for (const SparseEntry& e : sparse_entries(plan)) {
    if (!first) s += ", ";
    first = false;
    s += "[" + std::to_string(e.i) + ", " + std::to_string(e.j) + ", " + format_number(e.mass) + "]";
  }
  return s + "]}\n";
}

std::string witness_to_json(const WitnessFunction& w) {
  return "{\"anchors\": " + vector_list(w.anchors) + ", \"values\": " + number_list(w.values) +
         ", \"slopes\": " + vector_list(w.slopes) + ", \"gap\": " + format_number(w.gap) + "}\n";
}

std::string gap_report_to_json(const GapReport& r) {
  return "{\"w2_nu_rho\": " + format_number(r.w2_nu_rho) + ", \"w2_mu_rho\": " + format_number(r.w2_mu_rho) +
         ", \"moment_diff\": " + format_number(r.moment_diff) + ", \"slack\": " + format_number(r.slack) +
         "}\n";
}

std::string FlatRecord::to_json() const {
  std::string s = "{\n";
  for (std::size_t k = 0; k < fields_.size(); ++k) {
    s += "  " + json(fields_[k].first).dump() + ": ";
    const Value& v = fields_[k].second;
    if (const auto* d = std::get_if<double>(&v))
      s += format_number(*d);
    else if (const auto* b = std::get_if<bool>(&v))
      s += *b ? "true" : "false";
    else if (const auto* i = std::get_if<std::int64_t>(&v))
      s += std::to_string(*i);
    else
      s += json(std::get<std::string>(v)).dump();
    s += k + 1 < fields_.size() ? ",\n" : "\n";
  }
  return s + "}\n";
}

FlatRecord equivalence_record(const EquivalenceReport& report) {
  FlatRecord rec;
  rec.add("ordered", report.ordered);
  rec.add("witness_gap", report.witness_gap);
  if (report.ordered) {
    rec.add("n_rho", static_cast<std::int64_t>(report.trials.size()));
    double min_slack = 0.0, max_cross = 0.0, max_pythagoras = 0.0, max_moment = 0.0;
    bool first = true;
    for (const RhoTrial& t : report.trials) {
      const GlueReport& g = t.glue;
      min_slack = first ? g.gap.slack : std::min(min_slack, g.gap.slack);
      first = false;
      max_cross = std::max(max_cross, std::abs(g.cross_term) / g.scale);
      max_pythagoras = std::max(max_pythagoras, std::abs(g.e_yz - g.e_xy - g.e_xz) / g.scale);
      max_moment = std::max(max_moment, std::abs(g.e_xy - (g.e_y2 - g.e_x2)) / g.scale);
    }
    rec.add("min_slack", min_slack);
    rec.add("max_cross_term_scaled", max_cross);
    rec.add("max_pythagoras_error_scaled", max_pythagoras);
    rec.add("max_moment_identity_error_scaled", max_moment);
    for (const RhoTrial& t : report.trials) {
      const std::string p = "trial_" + std::to_string(t.index) + "_";
      rec.add(p + "slack", t.glue.gap.slack);
      rec.add(p + "cross_term", t.glue.cross_term);
      rec.add(p + "e_yz", t.glue.e_yz);
      rec.add(p + "e_xy_plus_e_xz", t.glue.e_xy + t.glue.e_xz);
      rec.add(p + "passed", t.passed);
    }
  } else {
    const AdversarialResult& a = *report.adversarial;
    rec.add("adversarial_w2_nu_rho", a.report.w2_nu_rho);
    rec.add("adversarial_w2_mu_rho", a.report.w2_mu_rho);
    rec.add("adversarial_moment_diff", a.report.moment_diff);
    rec.add("adversarial_slack", a.report.slack);
    rec.add("violation_margin_ok", a.margin_ok);
    rec.add("brenier_plan_cost", report.brenier->plan_cost);
    rec.add("brenier_w2", report.brenier->w2);
    rec.add("brenier_passed", report.brenier->passed);
  }
  rec.add("passed", report.passed);
  return rec;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Parse, "failed writing " + path.string());
}

}  // namespace cxorder::io
