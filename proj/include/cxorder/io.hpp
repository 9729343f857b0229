#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cxorder/coupling.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/order.hpp"
#include "cxorder/theorem.hpp"

namespace cxorder::io {

// 12 significant digits, trailing zeros kept: 25 -> "25.0000000000".
std::string format_number(double x);

// {"dimension": d, "points": [[...], ...], "weights": [...]}; weights default
// to uniform. Throws Error(Parse) on malformed input.
DiscreteMeasure parse_measure(const std::string& text);
DiscreteMeasure read_measure(const std::filesystem::path& path);

// Shortest round-trip representation of every coordinate and weight, so the
// file parses back to an identical measure.
std::string measure_to_json(const DiscreteMeasure& mu);

// {"triples": [[i, j, mass], ...]}
std::string plan_to_json(const Coupling& plan);
// {"anchors": [...], "values": [...], "slopes": [...], "gap": g}
std::string witness_to_json(const WitnessFunction& w);
// {"w2_nu_rho": ., "w2_mu_rho": ., "moment_diff": ., "slack": .}
std::string gap_report_to_json(const GapReport& r);

// Ordered flat JSON object of named numbers, flags and labels.
class FlatRecord {
 public:
  using Value = std::variant<double, bool, std::int64_t, std::string>;

  void add(std::string key, Value value) { fields_.emplace_back(std::move(key), std::move(value)); }
  std::string to_json() const;

 private:
  std::vector<std::pair<std::string, Value>> fields_;
};

FlatRecord equivalence_record(const EquivalenceReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cxorder::io
