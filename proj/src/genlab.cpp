#include "cxorder/genlab.hpp"

#include <cmath>
#include <map>
#include <string>

namespace cxorder::genlab {
namespace {

enum StreamId : std::uint64_t { kMuStream = 1, kChildStream = 2, kShiftStream = 3, kRhoStream = 4 };

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vector random_point(Stream& s, std::size_t dim, double scale) {
  Vector p(dim);
  for (double& c : p) c = scale == 0.0 ? 0.0 : s.uniform(-scale, scale);
  return p;
}

// Positive weights in [0.5, 1.5), normalised by build_measure.
DiscreteMeasure random_measure(Stream& s, const GenConfig& cfg) {
  std::vector<Vector> points;
  std::vector<double> weights;
  for (std::size_t i = 0; i < cfg.atoms; ++i) {
    points.push_back(random_point(s, cfg.dimension, cfg.coordinate_scale));
    weights.push_back(s.uniform(0.5, 1.5));
  }
  return build_measure(points, weights, {.normalize = true});
}

}  // namespace

void validate(const GenConfig& cfg) {
  if (cfg.dimension == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  if (cfg.atoms == 0) throw Error(ErrorKind::InvalidArgument, "atoms must be positive");
  if (cfg.spread_children == 0) throw Error(ErrorKind::InvalidArgument, "spread_children must be positive");
  if (!(cfg.coordinate_scale >= 0.0) || !std::isfinite(cfg.coordinate_scale))
    throw Error(ErrorKind::InvalidArgument, "coordinate_scale must be finite and non-negative");
  if (cfg.atoms * cfg.spread_children > kMaxGeneratedAtoms)
    throw Error(ErrorKind::InvalidArgument,
                "atoms * spread_children exceeds " + std::to_string(kMaxGeneratedAtoms));
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(splitmix64(seed ^ splitmix64(stream_id))) {}

double Stream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Stream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Stream::below(std::size_t n) {
  // Rejection keeps the draw unbiased and platform independent.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

OrderedPair gen_ordered_pair(const GenConfig& cfg) {
  validate(cfg);
  Stream mu_stream(cfg.seed, kMuStream);
  DiscreteMeasure mu = random_measure(mu_stream, cfg);

  Stream child_stream(cfg.seed, kChildStream);
  const std::size_t c = cfg.spread_children;
  const std::size_t d = cfg.dimension;
  const double half = 0.5 * cfg.coordinate_scale;

  std::vector<Vector> children;
  std::vector<double> child_weights;
  std::vector<std::size_t> parent;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::vector<Vector> offsets;
    Vector centre(d, 0.0);
    for (std::size_t k = 0; k < c; ++k) {
      offsets.push_back(random_point(child_stream, d, half));
      for (std::size_t a = 0; a < d; ++a) centre[a] += offsets.back()[a];
    }
    for (double& a : centre) a /= static_cast<double>(c);
    for (auto& off : offsets) {
      Vector child = mu.point(i);
      for (std::size_t a = 0; a < d; ++a) child[a] += off[a] - centre[a];
      children.push_back(std::move(child));
      child_weights.push_back(mu.weight(i) / static_cast<double>(c));
      parent.push_back(i);
    }
  }
  DiscreteMeasure nu = build_measure(children, child_weights);

  std::map<Vector, std::size_t> index;
  for (std::size_t j = 0; j < nu.size(); ++j) index.emplace(nu.point(j), j);
  Coupling spread(mu, nu);
  for (std::size_t k = 0; k < children.size(); ++k)
    spread(parent[k], index.at(children[k])) += child_weights[k];
  return {std::move(mu), std::move(nu), std::move(spread)};
}

MeasurePair gen_unordered_pair(const GenConfig& cfg) {
  OrderedPair ordered = gen_ordered_pair(cfg);
  if (!same_atoms(ordered.mu, ordered.nu)) return {std::move(ordered.nu), std::move(ordered.mu)};

  // Degenerate spread: translate instead, which breaks equality of means.
  Stream s(cfg.seed, kShiftStream);
  Vector shift(cfg.dimension, 0.0);
  const double magnitude = std::max(cfg.coordinate_scale, 1.0) * s.uniform(0.25, 0.5);
  shift[s.below(cfg.dimension)] = s.uniform() < 0.5 ? -magnitude : magnitude;
  std::vector<Vector> moved = ordered.mu.points();
  for (auto& p : moved)
    for (std::size_t a = 0; a < p.size(); ++a) p[a] += shift[a];
  DiscreteMeasure shifted = build_measure(moved, ordered.mu.weights());
  return {std::move(ordered.mu), std::move(shifted)};
}

DiscreteMeasure gen_rho(const GenConfig& cfg) {
  validate(cfg);
  Stream s(cfg.seed, kRhoStream);
  return random_measure(s, cfg);
}

double potential_1d(const DiscreteMeasure& theta, double t) {
  double u = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) u += theta.weight(i) * std::abs(t - theta.point(i)[0]);
  return u;
}

bool convex_order_1d_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dimension() != 1 || nu.dimension() != 1)
    throw Error(ErrorKind::DimensionMismatch, "the potential-function oracle is one-dimensional");
  if (std::abs(mean(mu)[0] - mean(nu)[0]) > 1e-10) return false;
  // Both potentials are piecewise linear with kinks at atoms only.
  for (const auto* theta : {&mu, &nu})
    for (const Vector& p : theta->points())
      if (potential_1d(mu, p[0]) > potential_1d(nu, p[0]) + 1e-10) return false;
  return true;
}

}  // namespace cxorder::genlab
