#include "cxorder/coupling.hpp"

#include <utility>

namespace cxorder {

Coupling::Coupling(DiscreteMeasure left, DiscreteMeasure right)
    : left_(std::move(left)), right_(std::move(right)), mass_(left_.size() * right_.size(), 0.0) {}

Coupling::Coupling(DiscreteMeasure left, DiscreteMeasure right, std::vector<double> mass)
    : left_(std::move(left)), right_(std::move(right)), mass_(std::move(mass)) {
  if (mass_.size() != left_.size() * right_.size())
    throw Error(ErrorKind::DimensionMismatch, "coupling matrix has the wrong number of entries");
}

Coupling Coupling::product(const DiscreteMeasure& left, const DiscreteMeasure& right) {
  Coupling c(left, right);
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j) c(i, j) = left.weight(i) * right.weight(j);
  return c;
}

void Coupling::clamp_negative() {
  for (double& m : mass_)
    if (m < 0.0 && m >= -kNegativeMassTolerance) m = 0.0;
}

std::size_t Coupling::nonzeros() const {
  std::size_t n = 0;
  for (double m : mass_) n += (m != 0.0);
  return n;
}

std::vector<SparseEntry> sparse_entries(const Coupling& plan) {
  std::vector<SparseEntry> out;
  for (std::size_t i = 0; i < plan.rows(); ++i)
    for (std::size_t j = 0; j < plan.cols(); ++j)
      if (plan(i, j) != 0.0) out.push_back({i, j, plan(i, j)});
  return out;
}

}  // namespace cxorder
