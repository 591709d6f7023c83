#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace meanfield::oracle {

/// Complete graph on n vertices with symmetric edge lengths drawn uniformly
/// on [0, n] (the rescaled model), reproducible from the seed.
class CompleteGraph {
 public:
  CompleteGraph(int n, std::uint64_t seed);

  /// Explicit-lengths construction (row-major n x n, must be symmetric).
  static CompleteGraph from_lengths(int n, std::vector<double> lengths);

  int size() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  double length(int i, int j) const { return lengths_[i * n_ + j]; }

 private:
  CompleteGraph() = default;
  int n_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> lengths_;
};

enum class SolverId { kDilutedMatching, kTour, kDilutedTwoFactor };

struct SolutionRecord {
  double cost = 0;
  std::vector<std::pair<int, int>> edges;
  int unmatched = 0;  // missing degree slots (matching: unmatched vertices)
  double longest_edge = 0;
  SolverId solver{};
};

/// Exact minimum of (matched length + lambda/2 per unmatched vertex) over all
/// partial matchings, by subset dynamic programming.  n <= 22.
SolutionRecord diluted_matching(const CompleteGraph& graph, double lambda);

/// Exact minimum Hamiltonian cycle by subset dynamic programming, 3 <= n <= 17.
SolutionRecord optimal_tour(const CompleteGraph& graph);

/// Exact minimum of (length + lambda * (n - #edges)) over all edge sets with
/// maximum degree 2, by exhaustive edge-subset search.  n <= 7.
SolutionRecord diluted_two_factor(const CompleteGraph& graph, double lambda);

struct EnsembleParams {
  int n = 0;
  double lambda = 0;
  int replicas = 0;
  std::uint64_t seed = 0;
  int participation_bins = 12;
};

struct ReplicaRow {
  int replica;
  double cost;
  int unmatched;
  double longest_edge;
};

struct ParticipationBin {
  double length_lo;
  double length_hi;
  long participated;
  long total;
  double predicted;  // limiting participation probability at the bin center
};

struct EnsembleSummary {
  EnsembleParams params;
  std::vector<ReplicaRow> rows;
  std::vector<ParticipationBin> bins;
  double mean_unmatched_fraction = 0;
  double mean_cost_per_vertex = 0;
  double mean_longest_edge = 0;
};

/// Seeded replicas of the diluted matching solver with the summary statistics
/// the limiting theory predicts (unmatched density, per-vertex cost,
/// longest-edge concentration, participation frequency by length).
EnsembleSummary run_ensemble(const EnsembleParams& params);

}  // namespace meanfield::oracle
