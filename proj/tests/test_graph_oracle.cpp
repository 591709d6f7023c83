#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "meanfield/diluted.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/graph_oracle.hpp"
#include "meanfield/rng.hpp"
#include "oracle_helpers.hpp"

using namespace meanfield::oracle;
namespace mf = meanfield;

namespace {

std::vector<double> matrix_of(const CompleteGraph& graph) {
  const int n = graph.size();
  std::vector<double> m(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i * n + j] = graph.length(i, j);
  }
  return m;
}

double recompute_cost(const CompleteGraph& graph, const SolutionRecord& record,
                      double lambda) {
  double cost = 0.5 * lambda * record.unmatched;
  for (auto [i, j] : record.edges) cost += graph.length(i, j);
  return cost;
}

}  // namespace

TEST_CASE("instances: shape, determinism, uniform moments") {
  const CompleteGraph tiny(2, 5);
  CHECK(tiny.length(0, 1) >= 0.0);
  CHECK(tiny.length(0, 1) <= 2.0);
  CHECK(tiny.length(0, 1) == tiny.length(1, 0));

  const CompleteGraph a(9, 123), b(9, 123), c(9, 124);
  CHECK(matrix_of(a) == matrix_of(b));
  CHECK(matrix_of(a) != matrix_of(c));

  // empirical mean of the lengths approaches n/2
  const int n = 10;
  double sum = 0.0;
  long count = 0;
  for (int seed = 0; seed < 2000; ++seed) {
    const CompleteGraph g(n, seed);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        sum += g.length(i, j);
        ++count;
      }
    }
  }
  const double mean = sum / count;
  const double se = (n / std::sqrt(12.0)) / std::sqrt(double(count));
  CHECK(std::abs(mean - 0.5 * n) < 3.0 * se);
}

TEST_CASE("diluted_matching: two vertices and the zero-penalty boundary") {
  const CompleteGraph g(2, 77);
  const double w = g.length(0, 1);
  for (double lambda : {0.1, w, 10.0}) {
    const auto sol = diluted_matching(g, lambda);
    CHECK(sol.cost == doctest::Approx(std::min(w, lambda)).epsilon(1e-15));
  }
  const auto free_run = diluted_matching(g, 0.0);
  CHECK(free_run.cost == 0.0);
  CHECK(free_run.unmatched == 2);
  CHECK(free_run.edges.empty());
}

TEST_CASE("diluted_matching: explicit four-vertex instance against all ten structures") {
  // ten partial-matching structures on four vertices
  CHECK(test_oracle::count_partial_matchings(4, 0xF) == 10);
  std::vector<double> m(16, 0.0);
  auto set = [&](int i, int j, double w) { m[i * 4 + j] = m[j * 4 + i] = w; };
  set(0, 1, 1.4);
  set(0, 2, 0.3);
  set(0, 3, 2.8);
  set(1, 2, 2.1);
  set(1, 3, 0.9);
  set(2, 3, 1.7);
  const auto graph = CompleteGraph::from_lengths(4, m);
  for (double lambda : {0.4, 1.0, 2.0, 8.0}) {
    test_oracle::WeightAccess w{4, &m};
    const double expected = test_oracle::brute_partial_matching(w, lambda, 0xF);
    const auto sol = diluted_matching(graph, lambda);
    CHECK(sol.cost == doctest::Approx(expected).epsilon(1e-14));
    CHECK(recompute_cost(graph, sol, lambda) == doctest::Approx(sol.cost).epsilon(1e-14));
  }
}

TEST_CASE("diluted_matching: equals exhaustive enumeration on random instances") {
  for (int seed = 0; seed < 15; ++seed) {
    const int n = 2 + seed % 7;
    const CompleteGraph graph(n, 1000 + seed);
    const auto m = matrix_of(graph);
    test_oracle::WeightAccess w{n, &m};
    for (double lambda : {0.5, 1.5, 3.0, 8.0}) {
      const double expected =
          test_oracle::brute_partial_matching(w, lambda, (1u << n) - 1);
      const auto sol = diluted_matching(graph, lambda);
      CHECK(std::abs(sol.cost - expected) < 1e-12);
    }
  }
}

TEST_CASE("diluted_matching: monotone in the penalty") {
  const CompleteGraph graph(12, 9);
  double prev_cost = 0.0;
  int prev_unmatched = 12;
  for (double lambda : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const auto sol = diluted_matching(graph, lambda);
    CHECK(sol.cost >= prev_cost - 1e-12);
    CHECK(sol.unmatched <= prev_unmatched);
    prev_cost = sol.cost;
    prev_unmatched = sol.unmatched;
  }
  CHECK_THROWS_AS(diluted_matching(CompleteGraph(23, 1), 1.0), mf::capacity_error);
}

TEST_CASE("optimal_tour: three vertices, permutation oracle, relabeling invariance") {
  const CompleteGraph triangle(3, 3);
  const auto tri = optimal_tour(triangle);
  CHECK(tri.cost == doctest::Approx(triangle.length(0, 1) + triangle.length(1, 2) +
                                    triangle.length(0, 2))
                        .epsilon(1e-14));
  CHECK(tri.edges.size() == 3);

  for (int seed = 0; seed < 6; ++seed) {
    const int n = 5 + seed % 4;
    const CompleteGraph graph(n, 400 + seed);
    const auto m = matrix_of(graph);
    test_oracle::WeightAccess w{n, &m};
    const auto sol = optimal_tour(graph);
    CHECK(std::abs(sol.cost - test_oracle::brute_tour(w)) < 1e-12);
    CHECK(sol.edges.size() == static_cast<std::size_t>(n));
  }

  // relabeling the vertices leaves the optimum cost unchanged
  const CompleteGraph graph(8, 31);
  std::vector<int> perm{3, 1, 7, 0, 5, 2, 6, 4};
  std::vector<double> relabeled(64);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) relabeled[i * 8 + j] = graph.length(perm[i], perm[j]);
  }
  const auto twin = CompleteGraph::from_lengths(8, relabeled);
  CHECK(optimal_tour(twin).cost == doctest::Approx(optimal_tour(graph).cost).epsilon(1e-13));

  CHECK_THROWS_AS(optimal_tour(CompleteGraph(2, 1)), mf::domain_error);
  CHECK_THROWS_AS(optimal_tour(CompleteGraph(18, 1)), mf::capacity_error);
}

TEST_CASE("diluted_two_factor: boundaries and the exhaustive oracle") {
  const CompleteGraph g5(5, 55);
  CHECK(diluted_two_factor(g5, 0.0).cost == 0.0);
  CHECK(diluted_two_factor(g5, 0.0).edges.empty());

  // huge penalty forces the best Hamiltonian cycle (degree 2 everywhere)
  const auto forced = diluted_two_factor(g5, 50.0);
  const auto tour = optimal_tour(g5);
  CHECK(forced.cost == doctest::Approx(tour.cost).epsilon(1e-12));
  CHECK(forced.unmatched == 0);

  for (int seed = 0; seed < 5; ++seed) {
    const int n = 4 + seed % 4;
    const CompleteGraph graph(n, 600 + seed);
    const auto m = matrix_of(graph);
    test_oracle::WeightAccess w{n, &m};
    for (double lambda : {0.7, 1.0, 2.5}) {
      CHECK(std::abs(diluted_two_factor(graph, lambda).cost -
                     test_oracle::brute_two_factor(w, lambda)) < 1e-12);
    }
  }

  // relaxation inequality: the degree-<=2 optimum never exceeds the tour
  for (int seed = 0; seed < 4; ++seed) {
    const CompleteGraph graph(6, 900 + seed);
    CHECK(diluted_two_factor(graph, 50.0).cost <= optimal_tour(graph).cost + 1e-12);
  }
  CHECK_THROWS_AS(diluted_two_factor(CompleteGraph(8, 1), 1.0), mf::capacity_error);
}

TEST_CASE("ensemble: determinism and limit-theory agreement at modest size") {
  const EnsembleParams params{14, 3.0, 80, 4242, 6};
  const auto a = run_ensemble(params);
  const auto b = run_ensemble(params);
  CHECK(a.rows.size() == 80);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].cost == b.rows[i].cost);
    CHECK(a.rows[i].unmatched == b.rows[i].unmatched);
  }

  const double q = mf::diluted::unmatched_density(3.0);
  CHECK(std::abs(a.mean_unmatched_fraction - q) < 0.05);
  CHECK(std::abs(a.mean_cost_per_vertex - mf::diluted::total_cost(3.0)) < 0.05);
  CHECK(a.mean_longest_edge > 1.0);
  CHECK(a.mean_longest_edge < 3.0);

  // participation frequency tracks the limit prediction on short edges
  for (const auto& bin : a.bins) {
    if (bin.length_hi > 1.01) continue;
    REQUIRE(bin.total > 50);
    const double frequency = double(bin.participated) / double(bin.total);
    CHECK(std::abs(frequency - bin.predicted) < 0.07);
  }
}
