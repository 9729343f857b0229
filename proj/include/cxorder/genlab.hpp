#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "cxorder/coupling.hpp"
#include "cxorder/measure.hpp"

namespace cxorder::genlab {

// Upper bound on atoms * spread_children.
inline constexpr std::size_t kMaxGeneratedAtoms = 10000;

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t dimension = 1;
  std::size_t atoms = 1;
  double coordinate_scale = 1.0;
  std::size_t spread_children = 2;
};

void validate(const GenConfig& cfg);

// Random source for one generated object. mt19937_64 is specified bit-exactly
// by the standard; doubles are formed from the top 53 bits so no
// implementation-defined distribution is involved.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform();                           // [0, 1)
  double uniform(double lo, double hi);       // [lo, hi)
  std::size_t below(std::size_t n);           // {0, ..., n-1}

 private:
  std::mt19937_64 engine_;
};

struct MeasurePair {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
};

struct OrderedPair {
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  // The spread itself, a martingale coupling of (mu, nu).
  Coupling spread;
};

/// nu is a mean-preserving spread of a random mu: each atom x_i is split into
/// spread_children equally weighted children x_i + delta_k whose offsets are
/// recentred to mean zero, so mu <=_c nu by construction.
OrderedPair gen_ordered_pair(const GenConfig& cfg);

/// An ordered pair swapped, or (mu, mu + shift) when the spread is trivial.
MeasurePair gen_unordered_pair(const GenConfig& cfg);

DiscreteMeasure gen_rho(const GenConfig& cfg);

/// Complete 1-D test: equal means and U_mu(t) <= U_nu(t) on the union of the
/// supports, where U_theta(t) = integral of |t - x| d theta(x).
bool convex_order_1d_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Potential function U_theta(t) of a 1-D measure.
double potential_1d(const DiscreteMeasure& theta, double t);

}  // namespace cxorder::genlab
