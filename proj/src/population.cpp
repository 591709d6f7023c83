#include "meanfield/population.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "meanfield/errors.hpp"

namespace meanfield::popdyn {
namespace {

constexpr std::uint64_t kChainSalt = 0x636861696eull;
constexpr std::uint64_t kPairSalt = 0x70616972ull;

void parallel_fill(std::vector<double>& out, int n_threads,
                   const std::function<void(std::size_t, std::size_t)>& work) {
  const std::size_t size = out.size();
  if (n_threads <= 1 || size < 4096) {
    work(0, size);
    return;
  }
  const std::size_t chunk = (size + n_threads - 1) / n_threads;
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) {
    const std::size_t begin = t * chunk;
    if (begin >= size) break;
    pool.emplace_back(work, begin, std::min(size, begin + chunk));
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Population boundary_population(double lambda, RecursionMode mode, std::size_t size,
                               std::uint64_t seed, BoundarySide side) {
  if (!(lambda > 0.0)) throw domain_error("boundary_population: lambda must be positive");
  if (size == 0) throw domain_error("boundary_population: size must be positive");
  Population pop;
  pop.lambda = lambda;
  pop.mode = mode;
  pop.seed = seed;
  pop.samples.assign(size, side == BoundarySide::kUpper ? 0.5 * lambda : -0.5 * lambda);
  return pop;
}

double draw_valuation(rng::SampleStream& stream, const std::vector<double>& source,
                      double lambda, RecursionMode mode) {
  const double quit = 0.5 * lambda;
  const int children = stream.next_poisson(lambda);
  double best = std::numeric_limits<double>::infinity();
  double second = best;
  for (int j = 0; j < children; ++j) {
    const double length = stream.next_uniform(lambda);
    const double value = length - source[stream.next_below(source.size())];
    if (value < best) {
      second = best;
      best = value;
    } else if (value < second) {
      second = value;
    }
  }
  // Too few children leaves the relevant order statistic at +inf: quit value.
  return std::min(quit, mode == RecursionMode::kMin ? best : second);
}

Population advance(const Population& source, std::uint64_t salt, int n_threads) {
  if (source.samples.empty()) throw contract_error("advance: source population is empty");
  Population next;
  next.lambda = source.lambda;
  next.mode = source.mode;
  next.generation = source.generation + 1;
  next.seed = source.seed;
  next.samples.resize(source.samples.size());
  const std::uint64_t gen = static_cast<std::uint64_t>(next.generation);
  parallel_fill(next.samples, n_threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      rng::SampleStream stream(source.seed, gen, i, salt);
      next.samples[i] = draw_valuation(stream, source.samples, source.lambda, source.mode);
    }
  });
  return next;
}

AlternatingResult run_alternating(double lambda, RecursionMode mode, int steps,
                                  std::size_t size, std::uint64_t seed, int n_threads) {
  if (size < 10000) {
    throw domain_error("run_alternating: population size below 10^4 gives meaningless gaps");
  }
  Population lower = boundary_population(lambda, mode, size, seed, BoundarySide::kLower);
  Population upper = boundary_population(lambda, mode, size, seed, BoundarySide::kUpper);
  for (int k = 1; k <= steps; ++k) {
    // Both updates replay the same child randomness (counts, lengths, source
    // indices) and differ only in the source population, so the pointwise
    // ordering lower <= upper survives each generation.
    Population next_lower;
    next_lower.lambda = lambda;
    next_lower.mode = mode;
    next_lower.generation = k;
    next_lower.seed = seed;
    next_lower.samples.resize(size);
    Population next_upper = next_lower;
    const std::uint64_t gen = static_cast<std::uint64_t>(k);
    parallel_fill(next_lower.samples, n_threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        rng::SampleStream from_upper(seed, gen, i, kPairSalt);
        rng::SampleStream from_lower(seed, gen, i, kPairSalt);
        next_lower.samples[i] = draw_valuation(from_upper, upper.samples, lambda, mode);
        next_upper.samples[i] = draw_valuation(from_lower, lower.samples, lambda, mode);
      }
    });
    lower = std::move(next_lower);
    upper = std::move(next_upper);
  }

  AlternatingResult result{std::move(lower), std::move(upper), 0.0, 0.0};
  long double sum = 0.0L, sum_sq = 0.0L;
  const std::size_t n = result.lower.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const long double d = result.upper.samples[i] - result.lower.samples[i];
    sum += d;
    sum_sq += d * d;
  }
  result.mean_gap = static_cast<double>(sum / n);
  const long double var = std::max(0.0L, sum_sq / n - (sum / n) * (sum / n));
  result.gap_std_error = static_cast<double>(std::sqrt(var / n));
  return result;
}

Population run_chain(double lambda, RecursionMode mode, int generations,
                     std::size_t size, std::uint64_t seed, int n_threads) {
  Population pop = boundary_population(lambda, mode, size, seed, BoundarySide::kUpper);
  for (int k = 1; k <= generations; ++k) {
    pop = advance(pop, kChainSalt, n_threads);
  }
  return pop;
}

double ks_distance(const Population& pop, const grid::GridDistribution& reference) {
  if (std::abs(pop.lambda - reference.lambda) > 1e-12) {
    throw domain_error("ks_distance: population and reference lambda differ");
  }
  std::vector<double> sorted(pop.samples);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (int i = 0; i < reference.n_cells(); ++i) {
    const double x = reference.node(i);
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    const double empirical = static_cast<double>(sorted.end() - it) / n;
    worst = std::max(worst, std::abs(empirical - reference.values[i]));
  }
  return worst;
}

double atom_fraction(const Population& pop) {
  const double quit = 0.5 * pop.lambda;
  std::size_t hits = 0;
  for (double s : pop.samples) hits += (s == quit);
  return static_cast<double>(hits) / static_cast<double>(pop.samples.size());
}

double mean_value(const Population& pop) {
  long double total = 0.0L;
  for (double s : pop.samples) total += s;
  return static_cast<double>(total / pop.samples.size());
}

}  // namespace meanfield::popdyn
