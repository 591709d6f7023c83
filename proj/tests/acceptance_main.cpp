// Acceptance suite: every release criterion evaluated at its pinned
// tolerance, one pass/fail line each, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "meanfield/diluted.hpp"
#include "meanfield/graph_oracle.hpp"
#include "meanfield/grid_distribution.hpp"
#include "meanfield/order_parameter.hpp"
#include "meanfield/population.hpp"
#include "oracle_helpers.hpp"

namespace {

namespace mf = meanfield;
using Clock = std::chrono::steady_clock;

constexpr double kPiSqTwelfth = std::numbers::pi * std::numbers::pi / 12.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    } else if (detail.empty()) {
      detail = what;
    }
  }
};

std::string measure(const char* label, double value, double target, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s=%.10g |err|=%.2e tol=%.0e", label, value,
                std::abs(value - target), tol);
  return buf;
}

bool within(double value, double target, double tol) {
  return std::abs(value - target) <= tol;
}

int run_all() {
  struct Criterion {
    int id;
    const char* label;
    std::function<Outcome()> body;
  };

  std::vector<Criterion> criteria;
  const auto matching = mf::cavity::Kernel::matching();
  const auto tsp = mf::cavity::Kernel::tsp();

  criteria.push_back({1, "matching ground state = pi^2/12 (1e-6, <1s)", [&] {
    Outcome out;
    const auto t0 = Clock::now();
    const double gs = mf::cavity::ground_state_energy(matching);
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(within(gs, kPiSqTwelfth, 1e-6), measure("L_M", gs, kPiSqTwelfth, 1e-6));
    out.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + "s < 1s");
    return out;
  }});

  criteria.push_back({2, "TSP ground state = 2.0415 (5e-4, <5s)", [&] {
    Outcome out;
    const auto t0 = Clock::now();
    const double gs = mf::cavity::ground_state_energy(tsp);
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(within(gs, 2.0415, 5e-4), measure("L_TSP", gs, 2.0415, 5e-4));
    out.require(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s < 5s");
    return out;
  }});

  criteria.push_back({3, "TSP symmetric field G(0) = 1.146 (1e-3)", [&] {
    Outcome out;
    const double g0 = mf::cavity::center_field(tsp, 2.0);
    out.require(within(g0, 1.146, 1e-3), measure("G(0)", g0, 1.146, 1e-3));
    return out;
  }});

  criteria.push_back({4, "consistency residual <= 1e-5 for both kernels", [&] {
    Outcome out;
    const auto curve_m = mf::cavity::solve_curve(matching, 1.0, 12.0, 1200);
    const double res_m = mf::cavity::consistency_residual(matching, curve_m);
    out.require(res_m <= 1e-5, measure("matching", res_m, 0.0, 1e-5));
    const auto curve_t = mf::cavity::solve_curve(tsp, 2.0, 12.0, 1200);
    const double res_t = mf::cavity::consistency_residual(tsp, curve_t);
    out.require(res_t <= 1e-5, measure("tsp", res_t, 0.0, 1e-5));
    return out;
  }});

  criteria.push_back({5, "matching curve = log(1+e^x) on [-10,10] (sup 1e-6)", [&] {
    Outcome out;
    const auto curve = mf::cavity::solve_curve(matching, 1.0, 10.0, 1000);
    double sup = 0.0;
    for (const auto& p : curve.points) {
      const double closed =
          p.x > 0 ? p.x + std::log1p(std::exp(-p.x)) : std::log1p(std::exp(p.x));
      sup = std::max(sup, std::abs(p.g - closed));
    }
    out.require(sup <= 1e-6, measure("sup", sup, 0.0, 1e-6));
    return out;
  }});

  criteria.push_back({6, "grid recursion: limit law + gap bounds (<30s)", [&] {
    Outcome out;
    const auto t0 = Clock::now();
    const auto min_run = mf::grid::run_iteration(mf::grid::RecursionMode::kMin, 3.0, 2000, 400);
    out.require(min_run.trace.converged, "min run converged");
    const auto reference = mf::grid::tabulate_limit_survival(3.0, 2000);
    double sup = 0.0;
    for (std::size_t i = 0; i < reference.values.size(); ++i) {
      sup = std::max(sup, std::abs(min_run.lower.values[i] - reference.values[i]));
    }
    out.require(sup <= 1e-3, measure("sup_vs_limit", sup, 0.0, 1e-3));
    bool terminal_ok = true, expectation_ok = true;
    for (const auto& row : min_run.trace.rows) {
      terminal_ok &= row.terminal_gap <= 3.0 / (row.step + 1) + 1e-12;
      expectation_ok &= row.expectation_gap <= 3.0 * std::exp(3.0) / (row.step + 1) + 1e-12;
    }
    out.require(terminal_ok, "terminal gap <= lambda/(k+1) at every k");
    out.require(expectation_ok, "expectation gap <= lambda e^lambda/(k+1) at every k");

    const auto min2_run =
        mf::grid::run_iteration(mf::grid::RecursionMode::kMinSecond, 3.0, 2000, 400);
    bool min2_ok = true;
    for (const auto& row : min2_run.trace.rows) {
      min2_ok &= row.expectation_gap <= std::exp(3.0) / (row.step + 1) + 1e-12;
    }
    out.require(min2_ok, "second-min expectation gap <= e^lambda/(k+1) at every k");
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + "s < 30s");
    return out;
  }});

  criteria.push_back({7, "edge cost q->0 limit and area derivative (1e-6)", [&] {
    Outcome out;
    const double limit = mf::diluted::edge_cost(1e-9);
    out.require(within(limit, kPiSqTwelfth, 1e-6),
                measure("edge_cost(q->0)", limit, kPiSqTwelfth, 1e-6));
    const double delta = 1e-4;
    for (double q : {0.1, 0.3, 0.5}) {
      const double derivative = (mf::cavity::curve_area(matching, 1.0 + q + delta) -
                                 mf::cavity::curve_area(matching, 1.0 + q - delta)) /
                                (2 * delta);
      const double expected = 2.0 * std::log(q) / (1.0 + q);
      out.require(within(derivative, expected, 1e-6),
                  measure("dArea/dq", derivative, expected, 1e-6));
    }
    return out;
  }});

  criteria.push_back({8, "participation function: h(0), q=0 law, convolution (1e-9/1e-6)", [&] {
    Outcome out;
    for (double q = 0.0; q < 0.95; q += 0.1) {
      const double h0 = mf::diluted::participation_probability(0.0, q);
      out.require(within(h0, 0.5 + q - 0.5 * q * q, 1e-9),
                  measure("h(0)", h0, 0.5 + q - 0.5 * q * q, 1e-9));
    }
    bool q0_law_ok = true;
    for (double x = 0.05; x <= 8.0; x += 0.1317) {
      const double e = std::exp(x);
      const double reference = (1.0 - e + x * e) / ((e - 1.0) * (e - 1.0));
      q0_law_ok &= within(mf::diluted::participation_probability(x, 0.0), reference, 1e-9);
    }
    out.require(q0_law_ok, "q=0 closed form on the grid (1e-9)");
    bool convolution_ok = true;
    for (double q : {0.1, 0.3, 0.6}) {
      const double lambda = mf::diluted::penalty_from_density(q);
      for (double x = 0.0; x <= lambda; x += lambda / 6) {
        const double conv = test_oracle::participation_convolution(x, q, 60000);
        convolution_ok &=
            within(mf::diluted::participation_probability(x, q), conv, 1e-6);
      }
    }
    out.require(convolution_ok, "closed form vs direct convolution (1e-6)");
    return out;
  }});

  criteria.push_back({9, "finite-penalty TSP constant and cost cross-check", [&] {
    Outcome out;
    double previous = 4.0;
    for (double lambda : {1.0, 2.0, 4.0, 8.0}) {
      const auto constant = mf::cavity::tsp_constant(lambda);
      out.require(constant.c > 2.0 && constant.c < 4.0, "C in (2,4)");
      out.require(constant.c < previous, "C strictly decreasing in lambda");
      out.require(constant.lambda_residual <= 1e-8,
                  measure("round trip", constant.lambda_residual, 0.0, 1e-8));
      previous = constant.c;
    }
    const auto c4 = mf::cavity::tsp_constant(4.0);
    const double half_area = 0.5 * mf::cavity::curve_area(tsp, c4.c);
    const auto fixed_point =
        mf::grid::run_iteration(mf::grid::RecursionMode::kMinSecond, 4.0, 2000, 40000);
    const double grid_cost =
        mf::grid::edge_cost(fixed_point.lower, mf::grid::RecursionMode::kMinSecond);
    out.require(within(grid_cost, half_area, 1e-3),
                measure("grid vs area", grid_cost, half_area, 1e-3));
    return out;
  }});

  criteria.push_back({10, "population dynamics: 3 seeds x 1e6 x 100 generations (<2min)", [&] {
    Outcome out;
    const auto t0 = Clock::now();
    const double lambda = 3.0;
    const double q = mf::diluted::unmatched_density(lambda);
    const auto reference = mf::grid::tabulate_limit_survival(lambda, 2000);
    const double atom_se = std::sqrt(q * (1.0 - q) / 1e6);
    for (std::uint64_t seed : {101ull, 202ull, 303ull}) {
      const auto pop =
          mf::popdyn::run_chain(lambda, mf::grid::RecursionMode::kMin, 100, 1000000, seed, 4);
      const double ks = mf::popdyn::ks_distance(pop, reference);
      out.require(ks <= 0.01, measure("ks", ks, 0.0, 0.01));
      const double atom = mf::popdyn::atom_fraction(pop);
      out.require(std::abs(atom - q) <= 3.0 * atom_se,
                  measure("atom", atom, q, 3.0 * atom_se));
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    out.require(elapsed < 120.0, "runtime " + std::to_string(elapsed) + "s < 120s");
    return out;
  }});

  criteria.push_back({11, "oracle equivalence: DP vs exhaustive enumeration", [&] {
    Outcome out;
    bool matching_ok = true;
    for (int i = 0; i < 50; ++i) {
      const int n = 2 + i % 7;
      const mf::oracle::CompleteGraph graph(n, 5000 + i);
      std::vector<double> m(n * n);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) m[a * n + b] = graph.length(a, b);
      }
      test_oracle::WeightAccess w{n, &m};
      const double lambda = 0.5 + (i % 5);
      const double expected = test_oracle::brute_partial_matching(w, lambda, (1u << n) - 1);
      matching_ok &=
          std::abs(mf::oracle::diluted_matching(graph, lambda).cost - expected) <= 1e-12;
    }
    out.require(matching_ok, "diluted matching == enumeration on 50 instances (n<=8)");
    bool tour_ok = true;
    for (int i = 0; i < 20; ++i) {
      const int n = 3 + i % 6;
      const mf::oracle::CompleteGraph graph(n, 7000 + i);
      std::vector<double> m(n * n);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) m[a * n + b] = graph.length(a, b);
      }
      test_oracle::WeightAccess w{n, &m};
      tour_ok &=
          std::abs(mf::oracle::optimal_tour(graph).cost - test_oracle::brute_tour(w)) <= 1e-12;
    }
    out.require(tour_ok, "tour DP == permutation minimum on 20 instances (n<=8)");
    return out;
  }});

  criteria.push_back({12, "ensemble n=16: unmatched density and per-vertex cost (0.05)", [&] {
    Outcome out;
    const auto summary = mf::oracle::run_ensemble({16, 3.0, 200, 20240808, 12});
    const double q = mf::diluted::unmatched_density(3.0);
    out.require(within(summary.mean_unmatched_fraction, q, 0.05),
                measure("unmatched", summary.mean_unmatched_fraction, q, 0.05));
    const double predicted = mf::diluted::total_cost(3.0);
    out.require(within(summary.mean_cost_per_vertex, predicted, 0.05),
                measure("cost/vertex", summary.mean_cost_per_vertex, predicted, 0.05));
    return out;
  }});

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criterion.body();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] criterion %2d | %-58s | %s (%.2f s)\n", out.pass ? "PASS" : "FAIL",
                criterion.id, criterion.label, out.detail.c_str(), elapsed);
    std::fflush(stdout);
    failures += !out.pass;
  }
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures ? 1 : 0;
}

}  // namespace

int main() { return run_all(); }
