#include "meanfield/grid_distribution.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "meanfield/diluted.hpp"
#include "meanfield/errors.hpp"

namespace meanfield::grid {
namespace {

std::string fmt(const char* pattern, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

double phi(RecursionMode mode, double s) {
  return mode == RecursionMode::kMin ? std::exp(-s) : (1.0 + s) * std::exp(-s);
}

// Suffix trapezoid integrals: suffix[j] = integral of the survival over
// [x_j, lambda/2].  The terminal node carries the atom value, which thereby
// enters only with its endpoint weight.
std::vector<double> suffix_integrals(const GridDistribution& d) {
  const int n = d.n_cells();
  const double h = d.cell_width();
  std::vector<double> suffix(n + 1);
  suffix[n] = 0.0;
  for (int j = n; j-- > 0;) {
    suffix[j] = suffix[j + 1] + 0.5 * h * (d.values[j] + d.values[j + 1]);
  }
  return suffix;
}

}  // namespace

void validate(const GridDistribution& dist) {
  if (!(dist.lambda > 0.0)) throw contract_error("grid distribution: lambda must be positive");
  if (dist.values.size() < 17) {
    throw contract_error("grid distribution: needs at least 16 cells");
  }
  if (std::abs(dist.values.front() - 1.0) > 1e-12) {
    throw contract_error("grid distribution: survival at -lambda/2 must be 1");
  }
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    const double v = dist.values[i];
    if (!(v >= -1e-15) || !(v <= 1.0 + 1e-12)) {
      throw contract_error(fmt("grid distribution: value %.6g at node %g outside [0, 1]",
                               v, static_cast<double>(i)));
    }
    if (i > 0 && v > dist.values[i - 1] + 1e-12) {
      throw contract_error(fmt("grid distribution: survival increases at node %g",
                               static_cast<double>(i)));
    }
  }
}

GridDistribution boundary_start(double lambda, int n_cells, BoundarySide side) {
  if (!(lambda > 0.0)) throw domain_error("boundary_start: lambda must be positive");
  if (n_cells < 16) throw domain_error("boundary_start: n_cells must be >= 16");
  GridDistribution d{lambda, std::vector<double>(
                                 n_cells + 1, side == BoundarySide::kUpper ? 1.0 : 0.0)};
  d.values[0] = 1.0;  // survival at the left edge is 1 for any distribution here
  return d;
}

GridDistribution iterate_step(RecursionMode mode, const GridDistribution& input) {
  validate(input);
  const int n = input.n_cells();
  const auto suffix = suffix_integrals(input);
  GridDistribution out{input.lambda, std::vector<double>(n + 1)};
  for (int i = 0; i <= n; ++i) {
    // integral over [-x_i, lambda/2] = suffix at the mirrored node n - i
    out.values[i] = phi(mode, suffix[n - i]);
  }
  return out;
}

IterationResult run_iteration(RecursionMode mode, double lambda, int n_cells,
                              int max_steps, double stop_gap) {
  if (max_steps < 1) throw domain_error("run_iteration: max_steps must be >= 1");
  GridDistribution lower = boundary_start(lambda, n_cells, BoundarySide::kLower);
  GridDistribution upper = boundary_start(lambda, n_cells, BoundarySide::kUpper);

  IterationTrace trace;
  trace.mode = mode;
  trace.lambda = lambda;
  trace.n_cells = n_cells;

  const double grid_tol = 1e-12;
  const double bound_slack = 1e-9;
  const double exp_lambda = std::exp(lambda);

  auto record = [&](int k) {
    double sup = 0.0;
    for (std::size_t i = 0; i < lower.values.size(); ++i) {
      const double gap = upper.values[i] - lower.values[i];
      if (gap < -grid_tol) {
        throw numeric_error(fmt("run_iteration: sandwich violated at step %g, x = %.6g",
                                static_cast<double>(k), lower.node(static_cast<int>(i))));
      }
      if (gap > sup) sup = gap;
    }
    const double terminal = upper.atom() - lower.atom();
    const double expect = suffix_integrals(upper)[0] - suffix_integrals(lower)[0];
    const double bound = (mode == RecursionMode::kMin ? lambda * exp_lambda : exp_lambda) /
                         (k + 1);
    trace.rows.push_back({k, sup, terminal, expect, bound});
    if (expect > bound + bound_slack) {
      throw numeric_error(fmt("run_iteration: expectation gap %.6g breaks the proved bound at step %g",
                              expect, static_cast<double>(k)));
    }
    if (mode == RecursionMode::kMin && k >= 1 && terminal > lambda / k + bound_slack) {
      throw numeric_error(fmt("run_iteration: terminal gap %.6g breaks lambda/k at step %g",
                              terminal, static_cast<double>(k)));
    }
  };

  record(0);
  for (int k = 1; k <= max_steps; ++k) {
    GridDistribution next_lower = iterate_step(mode, upper);
    GridDistribution next_upper = iterate_step(mode, lower);
    for (std::size_t i = 0; i < next_lower.values.size(); ++i) {
      const bool monotone = next_lower.values[i] >= lower.values[i] - grid_tol &&
                            next_upper.values[i] <= upper.values[i] + grid_tol &&
                            next_lower.values[i] <= next_upper.values[i] + grid_tol;
      if (!monotone) {
        throw numeric_error(fmt("run_iteration: sandwich violated at step %g, x = %.6g",
                                static_cast<double>(k), lower.node(static_cast<int>(i))));
      }
    }
    lower = std::move(next_lower);
    upper = std::move(next_upper);
    record(k);
    if (trace.rows.back().terminal_gap < stop_gap) {
      trace.converged = true;
      break;
    }
  }
  return {std::move(lower), std::move(upper), std::move(trace)};
}

double expectation(const GridDistribution& dist) {
  validate(dist);
  return -0.5 * dist.lambda + suffix_integrals(dist)[0];
}

double edge_cost(const GridDistribution& dist, RecursionMode mode) {
  validate(dist);
  const GridDistribution next = iterate_step(mode, dist);
  double resid = 0.0;
  for (std::size_t i = 0; i < dist.values.size(); ++i) {
    resid = std::max(resid, std::abs(next.values[i] - dist.values[i]));
  }
  if (resid > 1e-3) {
    throw contract_error(fmt(
        "edge_cost: input is not a converged fixed point (self-consistency residual %.3e)",
        resid));
  }
  const int n = dist.n_cells();
  const double h = dist.cell_width();
  const auto suffix = suffix_integrals(dist);
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double fg = dist.values[i] * suffix[n - i];
    total += (i == 0 || i == n) ? 0.5 * fg : fg;
  }
  return 0.5 * total * h;
}

GridDistribution tabulate_limit_survival(double lambda, int n_cells) {
  const auto model = diluted::make_model(lambda);
  GridDistribution d{lambda, std::vector<double>(n_cells + 1)};
  for (int i = 0; i <= n_cells; ++i) {
    d.values[i] = diluted::limit_survival(model, d.node(i));
  }
  d.values[0] = 1.0;
  d.values[n_cells] = model.q;
  return d;
}

}  // namespace meanfield::grid
