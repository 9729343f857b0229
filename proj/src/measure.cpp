#include "cxorder/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace cxorder {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

namespace {

bool within(const Vector& a, const Vector& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > tol) return false;
  return true;
}

}  // namespace

DiscreteMeasure build_measure(const std::vector<Vector>& points, const std::vector<double>& weights,
                              const BuildOptions& opts) {
  if (points.empty()) throw Error(ErrorKind::Empty, "measure has no atoms");
  if (points.size() != weights.size())
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(points.size()) + " points but " + std::to_string(weights.size()) +
                    " weights");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw Error(ErrorKind::DimensionMismatch, "points must have dimension >= 1");
  if (!(opts.merge_tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "merge_tol must be >= 0");

  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim)
      throw Error(ErrorKind::DimensionMismatch, "point " + std::to_string(i) + " has length " +
                                                    std::to_string(points[i].size()) +
                                                    ", expected " + std::to_string(dim));
    for (double c : points[i])
      if (!std::isfinite(c))
        throw Error(ErrorKind::NonFinite, "point " + std::to_string(i) + " is not finite");
    if (!std::isfinite(weights[i]))
      throw Error(ErrorKind::NonFinite, "weight " + std::to_string(i) + " is not finite");
    if (weights[i] < 0.0)
      throw Error(ErrorKind::NegativeWeight, "weight " + std::to_string(i) + " is negative");
    total += weights[i];
  }
  if (!(total > 0.0)) throw Error(ErrorKind::Empty, "all mass removed");
  if (!opts.normalize && std::abs(total - 1.0) > kWeightSumTolerance)
    throw Error(ErrorKind::NotNormalized, "weights sum to " + std::to_string(total));
  DiscreteMeasure out;
  out.dimension_ = dim;
  if (opts.merge_tol == 0.0) {
    std::map<Vector, std::size_t> index;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (weights[i] == 0.0) continue;
      auto [it, inserted] = index.try_emplace(points[i], out.points_.size());
      if (inserted) {
        out.points_.push_back(points[i]);
        out.weights_.push_back(weights[i]);
      } else {
        out.weights_[it->second] += weights[i];
      }
    }
  } else {
    // Greedy: each point joins the first kept atom within tolerance.
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (weights[i] == 0.0) continue;
      std::size_t k = 0;
      while (k < out.points_.size() && !within(out.points_[k], points[i], opts.merge_tol)) ++k;
      if (k == out.points_.size()) {
        out.points_.push_back(points[i]);
        out.weights_.push_back(weights[i]);
      } else {
        out.weights_[k] += weights[i];
      }
    }
  }
  if (out.points_.empty()) throw Error(ErrorKind::Empty, "all mass removed");
  // Dividing after the merge keeps a fully merged measure at weight exactly 1.
  if (opts.normalize)
    for (double& w : out.weights_) w /= total;
  return out;
}

DiscreteMeasure uniform_measure(const std::vector<Vector>& points) {
  if (points.empty()) throw Error(ErrorKind::Empty, "measure has no atoms");
  return build_measure(points, std::vector<double>(points.size(), 1.0), {.normalize = true});
}

DiscreteMeasure dirac(const Vector& point) { return build_measure({point}, {1.0}); }

double second_moment(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weight(i) * squared_norm(mu.point(i));
  return s;
}

Vector mean(const DiscreteMeasure& mu) {
  Vector m(mu.dimension(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += mu.weight(i) * mu.point(i)[k];
  return m;
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const std::vector<Vector>& images) {
  if (images.size() != mu.size())
    throw Error(ErrorKind::DimensionMismatch, "pushforward needs one image per atom");
  // Weights are already normalized; build_measure re-checks the sum.
  return build_measure(images, mu.weights());
}

bool same_atoms(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
  if (a.dimension() != b.dimension() || a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (used[j] || !within(a.point(i), b.point(j), tol)) continue;
      if (std::abs(a.weight(i) - b.weight(j)) > tol) continue;
      used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

double coordinate_bound(const DiscreteMeasure& mu) {
  double m = 0.0;
  for (const auto& p : mu.points()) m = std::max(m, max_abs(p));
  return m;
}

void require_same_dimension(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dimension() != b.dimension())
    throw Error(ErrorKind::DimensionMismatch, "dimensions " + std::to_string(a.dimension()) +
                                                  " and " + std::to_string(b.dimension()) +
                                                  " differ");
}

}  // namespace cxorder
