#pragma once

namespace meanfield::diluted {

/// Finite-penalty matching model: penalty parameter lambda and the limiting
/// density q of unmatched vertices, tied by q = exp(-(1+q) * lambda / 2).
struct DilutedModel {
  double lambda = 0;
  double q = 0;
};

/// Unique q in (0, 1) with q = exp(-(1+q) lambda / 2).  Damped fixed-point
/// iteration with a bisection fallback, polished to machine residual.
double unmatched_density(double lambda);

/// Inverse relation lambda(q) = -2 log(q) / (1 + q), q in (0, 1).
double penalty_from_density(double q);

DilutedModel make_model(double lambda);

/// Limiting survival function F(x) = (1+q) / (1 + e^{(1+q)x}) on
/// [-lambda/2, lambda/2]; F(lambda/2) = q is the point mass at the top.
double limit_survival(const DilutedModel& model, double x);

/// Probability that an edge of rescaled length x joins the optimum diluted
/// matching at density 1 - q.  Closed form away from alpha = e^{(1+q)x} = 1;
/// inside |alpha - 1| <= 1e-4 the direct integral form is used because the
/// closed form has a removable singularity there.
double participation_probability(double x, double q);

/// The same quantity by direct quadrature of the integral form (used for the
/// near-degenerate branch and as an independent route in tests).
double participation_probability_integral(double x, double q);

/// Per-vertex expected length of matched edges at unmatched density q:
/// the integral of -log(t)/(1+t) over [q, 1].
double edge_cost(double q);

/// Per-vertex total cost including penalties: edge_cost(q(lambda)) plus
/// lambda * q / 2.
double total_cost(double lambda);

/// Limit in probability of the longest edge in the minimum partial matching
/// covering all but a q-fraction of vertices.
double longest_edge_limit(double q);

}  // namespace meanfield::diluted
