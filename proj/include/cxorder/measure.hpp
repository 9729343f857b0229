#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cxorder/error.hpp"

namespace cxorder {

// A point of R^d. The dimension is the length.
using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double max_abs(std::span<const double> a);

inline constexpr double kWeightSumTolerance = 1e-12;

struct BuildOptions {
  bool normalize = false;
  // Points closer than this in the max-norm are merged. 0 means exact match.
  double merge_tol = 0.0;
};

/// Finitely supported probability measure on R^d.
///
/// Atoms are pairwise distinct, carry strictly positive mass and the masses
/// sum to one within kWeightSumTolerance. Instances are immutable; the only
/// way to obtain one is build_measure (or pushforward), which enforces this.
class DiscreteMeasure {
 public:
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return weights_.size(); }

  const std::vector<Vector>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Vector& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  // Same atoms with the same masses, in the same order.
  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  friend DiscreteMeasure build_measure(const std::vector<Vector>&, const std::vector<double>&,
                                       const BuildOptions&);
  DiscreteMeasure() = default;

  std::size_t dimension_ = 0;
  std::vector<Vector> points_;
  std::vector<double> weights_;
};

DiscreteMeasure build_measure(const std::vector<Vector>& points, const std::vector<double>& weights,
                              const BuildOptions& opts = {});

// Uniform weights over the given points.
DiscreteMeasure uniform_measure(const std::vector<Vector>& points);

DiscreteMeasure dirac(const Vector& point);

double second_moment(const DiscreteMeasure& mu);
Vector mean(const DiscreteMeasure& mu);

// Image of mu under the map atom i -> images[i]; coincident images merge.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const std::vector<Vector>& images);

// True when both measures hold the same weighted atoms, irrespective of order.
bool same_atoms(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol = 0.0);

// Largest absolute coordinate over all atoms.
double coordinate_bound(const DiscreteMeasure& mu);

void require_same_dimension(const DiscreteMeasure& a, const DiscreteMeasure& b);

}  // namespace cxorder
