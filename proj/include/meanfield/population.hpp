#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "meanfield/grid_distribution.hpp"
#include "meanfield/rng.hpp"

namespace meanfield::popdyn {

using grid::BoundarySide;
using grid::RecursionMode;

/// Multiset of valuation samples on [-lambda/2, lambda/2] with its seed
/// lineage.  Identical (seed, size, generations, mode, lambda) reproduce the
/// sample multiset exactly, independent of thread count.
struct Population {
  double lambda = 0;
  RecursionMode mode = RecursionMode::kMin;
  int generation = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;
};

Population boundary_population(double lambda, RecursionMode mode, std::size_t size,
                               std::uint64_t seed, BoundarySide side);

/// One root update: Poisson(lambda) children with lengths uniform on
/// [0, lambda] and values resampled from `source`; returns the clamped (min
/// or second-min) valuation.  Restricting children to lengths <= lambda is
/// exact, not an approximation: a child at distance l > lambda satisfies
/// l - f > lambda/2 for every f <= lambda/2, so it can never beat the quit
/// value, in either mode.
double draw_valuation(rng::SampleStream& stream, const std::vector<double>& source,
                      double lambda, RecursionMode mode);

/// Synchronous generational update: a whole new population drawn from
/// `source`.  `salt` separates logical streams sharing one root seed.
Population advance(const Population& source, std::uint64_t salt, int n_threads = 1);

struct AlternatingResult {
  Population lower;
  Population upper;
  double mean_gap = 0;       // E[upper] - E[lower] estimate
  double gap_std_error = 0;  // standard error of the paired gap estimate
};

/// Two populations from the extreme boundary starts, each updated from the
/// other for `steps` generations, mirroring the alternating grid recursion.
/// The pair shares child randomness, so the coupled gap is nonnegative
/// sample by sample.
AlternatingResult run_alternating(double lambda, RecursionMode mode, int steps,
                                  std::size_t size, std::uint64_t seed,
                                  int n_threads = 1);

/// Single self-consistent chain from the all-high start.
Population run_chain(double lambda, RecursionMode mode, int generations,
                     std::size_t size, std::uint64_t seed, int n_threads = 1);

/// Sup distance between the empirical survival and the reference survival
/// over the reference's interior nodes; the point masses at +lambda/2 are
/// compared separately (see atom_fraction).
double ks_distance(const Population& pop, const grid::GridDistribution& reference);

double atom_fraction(const Population& pop);
double mean_value(const Population& pop);

}  // namespace meanfield::popdyn
