#include "meanfield/graph_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "meanfield/diluted.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/rng.hpp"

namespace meanfield::oracle {
namespace {

double longest_of(const CompleteGraph& g, const std::vector<std::pair<int, int>>& edges) {
  double longest = 0.0;
  for (auto [i, j] : edges) longest = std::max(longest, g.length(i, j));
  return longest;
}

}  // namespace

CompleteGraph::CompleteGraph(int n, std::uint64_t seed) : n_(n), seed_(seed) {
  if (n < 2) throw domain_error("CompleteGraph: need at least two vertices");
  lengths_.assign(static_cast<std::size_t>(n) * n, 0.0);
  rng::SampleStream stream(seed, 0x696e7374ull, 0, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = stream.next_uniform(static_cast<double>(n));
      lengths_[i * n_ + j] = w;
      lengths_[j * n_ + i] = w;
    }
  }
}

CompleteGraph CompleteGraph::from_lengths(int n, std::vector<double> lengths) {
  if (n < 2) throw domain_error("CompleteGraph: need at least two vertices");
  if (lengths.size() != static_cast<std::size_t>(n) * n) {
    throw domain_error("CompleteGraph: lengths must be an n x n matrix");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (lengths[i * n + j] != lengths[j * n + i]) {
        throw domain_error("CompleteGraph: lengths must be symmetric");
      }
    }
  }
  CompleteGraph graph;
  graph.n_ = n;
  graph.lengths_ = std::move(lengths);
  return graph;
}

SolutionRecord diluted_matching(const CompleteGraph& graph, double lambda) {
  const int n = graph.size();
  if (n > 22) throw capacity_error("diluted_matching: exact solver limited to n <= 22");
  if (lambda < 0.0) throw domain_error("diluted_matching: lambda must be nonnegative");

  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> best(full + 1, 0.0);
  std::vector<std::int8_t> choice(full + 1, -1);

  for (std::uint32_t s = 1; s <= full; ++s) {
    const int v = std::countr_zero(s);
    const std::uint32_t rest = s & (s - 1);  // s without its lowest vertex
    // Leaving the pivot unmatched wins ties; among pairings the lowest
    // partner index wins (strict improvement only).
    double c = 0.5 * lambda + best[rest];
    int pick = -1;
    std::uint32_t others = rest;
    while (others) {
      const int u = std::countr_zero(others);
      others &= others - 1;
      const double cand = graph.length(v, u) + best[rest ^ (1u << u)];
      if (cand < c) {
        c = cand;
        pick = u;
      }
    }
    best[s] = c;
    choice[s] = static_cast<std::int8_t>(pick);
  }

  SolutionRecord rec;
  rec.solver = SolverId::kDilutedMatching;
  rec.cost = best[full];
  std::uint32_t s = full;
  while (s) {
    const int v = std::countr_zero(s);
    const int pick = choice[s];
    if (pick < 0) {
      ++rec.unmatched;
      s ^= 1u << v;
    } else {
      rec.edges.emplace_back(v, pick);
      s ^= (1u << v) | (1u << pick);
    }
  }
  rec.longest_edge = longest_of(graph, rec.edges);
  return rec;
}

SolutionRecord optimal_tour(const CompleteGraph& graph) {
  const int n = graph.size();
  if (n < 3) throw domain_error("optimal_tour: need at least three vertices");
  if (n > 17) throw capacity_error("optimal_tour: exact solver limited to n <= 17");

  const int m = n - 1;  // vertices 1..n-1, anchored at vertex 0
  const std::uint32_t full = (1u << m) - 1u;
  const std::size_t states = static_cast<std::size_t>(full + 1) * m;
  constexpr double kUnset = -1.0;
  std::vector<double> cost(states, kUnset);
  std::vector<std::int8_t> parent(states, -1);

  auto idx = [m](std::uint32_t mask, int j) { return static_cast<std::size_t>(mask) * m + j; };

  for (int j = 0; j < m; ++j) {
    cost[idx(1u << j, j)] = graph.length(0, j + 1);
  }
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t bits = mask;
    while (bits) {
      const int j = std::countr_zero(bits);
      bits &= bits - 1;
      const double base = cost[idx(mask, j)];
      if (base == kUnset) continue;
      std::uint32_t rest = full & ~mask;
      while (rest) {
        const int k = std::countr_zero(rest);
        rest &= rest - 1;
        const std::uint32_t next = mask | (1u << k);
        const double cand = base + graph.length(j + 1, k + 1);
        double& slot = cost[idx(next, k)];
        if (slot == kUnset || cand < slot) {
          slot = cand;
          parent[idx(next, k)] = static_cast<std::int8_t>(j);
        }
      }
    }
  }

  double best = kUnset;
  int last = -1;
  for (int j = 0; j < m; ++j) {
    const double cand = cost[idx(full, j)] + graph.length(j + 1, 0);
    if (best == kUnset || cand < best) {
      best = cand;
      last = j;
    }
  }

  SolutionRecord rec;
  rec.solver = SolverId::kTour;
  rec.cost = best;
  std::uint32_t mask = full;
  int j = last;
  rec.edges.emplace_back(j + 1, 0);
  while (true) {
    const int prev = parent[idx(mask, j)];
    if (prev < 0) break;
    rec.edges.emplace_back(prev + 1, j + 1);
    mask ^= 1u << j;
    j = prev;
  }
  rec.edges.emplace_back(0, j + 1);
  rec.longest_edge = longest_of(graph, rec.edges);
  return rec;
}

SolutionRecord diluted_two_factor(const CompleteGraph& graph, double lambda) {
  const int n = graph.size();
  if (n > 7) throw capacity_error("diluted_two_factor: exhaustive search limited to n <= 7");
  if (lambda < 0.0) throw domain_error("diluted_two_factor: lambda must be nonnegative");

  std::vector<std::pair<int, int>> all_edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) all_edges.emplace_back(i, j);
  }
  const int m = static_cast<int>(all_edges.size());

  double best = n * lambda;  // empty edge set
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    int degree[7] = {0};
    double length = 0.0;
    bool feasible = true;
    std::uint32_t bits = mask;
    while (bits) {
      const int e = std::countr_zero(bits);
      bits &= bits - 1;
      const auto [i, j] = all_edges[e];
      if (++degree[i] > 2 || ++degree[j] > 2) {
        feasible = false;
        break;
      }
      length += graph.length(i, j);
    }
    if (!feasible) continue;
    const double cand = length + lambda * (n - std::popcount(mask));
    if (cand < best) {
      best = cand;
      best_mask = mask;
    }
  }

  SolutionRecord rec;
  rec.solver = SolverId::kDilutedTwoFactor;
  rec.cost = best;
  for (int e = 0; e < m; ++e) {
    if (best_mask & (1u << e)) rec.edges.push_back(all_edges[e]);
  }
  rec.unmatched = 2 * n - 2 * static_cast<int>(rec.edges.size());
  rec.longest_edge = longest_of(graph, rec.edges);
  return rec;
}

EnsembleSummary run_ensemble(const EnsembleParams& params) {
  if (params.replicas < 1) throw domain_error("run_ensemble: need at least one replica");
  if (params.participation_bins < 1) {
    throw domain_error("run_ensemble: need at least one participation bin");
  }
  EnsembleSummary summary;
  summary.params = params;
  const int bins = params.participation_bins;
  const double q = diluted::unmatched_density(params.lambda);
  summary.bins.resize(bins);
  for (int b = 0; b < bins; ++b) {
    const double lo = params.lambda * b / bins;
    const double hi = params.lambda * (b + 1) / bins;
    summary.bins[b] = {lo, hi, 0, 0,
                       diluted::participation_probability(0.5 * (lo + hi), q)};
  }

  double unmatched_sum = 0.0, cost_sum = 0.0, longest_sum = 0.0;
  std::vector<char> in_solution(static_cast<std::size_t>(params.n) * params.n);
  for (int r = 0; r < params.replicas; ++r) {
    const CompleteGraph graph(params.n, rng::derive_seed(params.seed, r));
    const SolutionRecord sol = diluted_matching(graph, params.lambda);
    summary.rows.push_back({r, sol.cost, sol.unmatched, sol.longest_edge});
    unmatched_sum += static_cast<double>(sol.unmatched) / params.n;
    cost_sum += sol.cost / params.n;
    longest_sum += sol.longest_edge;

    std::fill(in_solution.begin(), in_solution.end(), 0);
    for (auto [i, j] : sol.edges) {
      in_solution[i * params.n + j] = in_solution[j * params.n + i] = 1;
    }
    for (int i = 0; i < params.n; ++i) {
      for (int j = i + 1; j < params.n; ++j) {
        const double len = graph.length(i, j);
        if (len >= params.lambda) continue;
        const int b = std::min(bins - 1, static_cast<int>(len / params.lambda * bins));
        ++summary.bins[b].total;
        summary.bins[b].participated += in_solution[i * params.n + j];
      }
    }
  }
  summary.mean_unmatched_fraction = unmatched_sum / params.replicas;
  summary.mean_cost_per_vertex = cost_sum / params.replicas;
  summary.mean_longest_edge = longest_sum / params.replicas;
  return summary;
}

}  // namespace meanfield::oracle
