#pragma once

#include <vector>

namespace meanfield::grid {

enum class RecursionMode { kMin, kMinSecond };
enum class BoundarySide { kLower, kUpper };

/// Survival function tabulated on a uniform grid over [-lambda/2, lambda/2].
/// values[i] = P(f >= x_i); the terminal value is the point mass at
/// +lambda/2 and is never smeared over a cell.
struct GridDistribution {
  double lambda = 0;
  std::vector<double> values;

  int n_cells() const { return static_cast<int>(values.size()) - 1; }
  double cell_width() const { return lambda / n_cells(); }
  double node(int i) const { return -0.5 * lambda + i * cell_width(); }
  double atom() const { return values.back(); }
};

struct TraceRow {
  int step;
  double sup_gap;          // sup_x (upper - lower)
  double terminal_gap;     // upper(lambda/2) - lower(lambda/2)
  double expectation_gap;  // integral of (upper - lower)
  double bound;            // proved expectation-gap bound at this step
};

struct IterationTrace {
  RecursionMode mode{};
  double lambda = 0;
  int n_cells = 0;
  bool converged = false;
  std::vector<TraceRow> rows;
};

struct IterationResult {
  GridDistribution lower;  // ascending iterate (all-low start)
  GridDistribution upper;  // descending iterate (all-high start)
  IterationTrace trace;
};

/// Throws contract_error unless the invariants hold: values in [0, 1],
/// nonincreasing, leading value 1.
void validate(const GridDistribution& dist);

/// Boundary iterates: the lower start is a point mass at -lambda/2 (survival
/// drops immediately after the first node), the upper start a point mass at
/// +lambda/2 (survival identically 1).
GridDistribution boundary_start(double lambda, int n_cells, BoundarySide side);

/// One recursion sweep: out(x) = phi(integral of input over [-x, lambda/2])
/// with phi(s) = e^{-s} (min) or (1+s)e^{-s} (second-min).  The inner
/// integral is a cumulative trapezoid over the stored survival values.
GridDistribution iterate_step(RecursionMode mode, const GridDistribution& input);

/// Alternating iteration from both boundary starts, recording all gap
/// diagnostics and verifying the proved bounds each step.  Stops when the
/// terminal gap falls below stop_gap or after max_steps sweeps.
IterationResult run_iteration(RecursionMode mode, double lambda, int n_cells,
                              int max_steps, double stop_gap = 1e-6);

/// E[f] = -lambda/2 + integral of the survival function.
double expectation(const GridDistribution& dist);

/// Per-vertex expected length of participating edges for a converged fixed
/// point: half the double integral of F(u) * G(u) with G(u) the suffix
/// integral of F.  Throws contract_error if the input is not a fixed point.
double edge_cost(const GridDistribution& dist, RecursionMode mode);

/// The closed-form limiting survival for the min recursion, tabulated on the
/// same grid layout (reference for convergence tests and exports).
GridDistribution tabulate_limit_survival(double lambda, int n_cells);

}  // namespace meanfield::grid
