#pragma once

#include <cstddef>
#include <vector>

#include "cxorder/measure.hpp"

namespace cxorder {

inline constexpr double kMarginalTolerance = 1e-9;
inline constexpr double kNegativeMassTolerance = 1e-12;

// Joint law on supp(left) x supp(right), stored densely row-major.
class Coupling {
 public:
  Coupling(DiscreteMeasure left, DiscreteMeasure right);
  Coupling(DiscreteMeasure left, DiscreteMeasure right, std::vector<double> mass);

  static Coupling product(const DiscreteMeasure& left, const DiscreteMeasure& right);

  const DiscreteMeasure& left() const noexcept { return left_; }
  const DiscreteMeasure& right() const noexcept { return right_; }
  std::size_t rows() const noexcept { return left_.size(); }
  std::size_t cols() const noexcept { return right_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return mass_[i * cols() + j]; }
  double& operator()(std::size_t i, std::size_t j) { return mass_[i * cols() + j]; }
  const std::vector<double>& mass() const noexcept { return mass_; }

  // Sets entries in [-kNegativeMassTolerance, 0) to zero.
  void clamp_negative();

  std::size_t nonzeros() const;

 private:
  DiscreteMeasure left_;
  DiscreteMeasure right_;
  std::vector<double> mass_;
};

struct SparseEntry {
  std::size_t i;
  std::size_t j;
  double mass;
};

// Nonzero cells in row-major order.
std::vector<SparseEntry> sparse_entries(const Coupling& plan);

}  // namespace cxorder
