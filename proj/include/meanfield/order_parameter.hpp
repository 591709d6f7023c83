#pragma once

#include <vector>

#include "meanfield/kernel.hpp"

namespace meanfield::cavity {

struct CurvePoint {
  double x;
  double g;  // G(x)
};

/// Tabulated solution of the order-parameter equation, parameterized by the
/// conserved constant c: pair_value(G(x)) + pair_value(G(-x)) = c at every
/// mirrored pair.  c = full_constant gives the full problem; larger c gives
/// the finite-penalty curves, which live on a bounded interval and reach
/// G = 0 at the left endpoint.
struct OrderParameterCurve {
  KernelKind kind{};
  double c = 0;
  double g0 = 0;            // G(0), fixed by 2 * pair_value(g0) = c
  double g_max = 0;         // largest tabulated field value
  double x_half_width = 0;  // intrinsic half width; +inf for full curves
  double pair_residual = 0; // worst conservation residual over tabulated pairs
  std::vector<CurvePoint> points;  // ascending in x, symmetric in +-x
};

/// The mirror map: the y >= 0 with pair_value(field) + pair_value(y) = c.
/// Returns +inf at the logarithmic singularity (c - pair_value(field) = 0,
/// e.g. field = 0 on a full curve).  Throws domain_error when no y >= 0 can
/// bracket the conservation equation.
double mirror_field(const Kernel& kernel, double field, double c);

/// The symmetric fixed point G(0): 2 * pair_value(g0) = c, c in (0, 2c*).
double center_field(const Kernel& kernel, double c);

/// Tabulates the curve on [-x_limit, x_limit] (clipped to the intrinsic
/// domain for finite-penalty constants) by marching uniformly in G and
/// accumulating x through the slope identity dx/dG = 1 / survival(mirror(G)).
/// n_points counts the tabulated points with x >= 0.
OrderParameterCurve solve_curve(const Kernel& kernel, double c, double x_limit,
                                int n_points);

/// Ground-state energy of the full problem: half the integral of the mirror
/// map over (0, inf), with the logarithmic endpoint handled by substitution.
double ground_state_energy(const Kernel& kernel);

/// |curve functional - ground_state_energy|: integrates g * survival(g) in
/// field space across the tabulated cells plus asymptotic tails, and compares
/// against the mirror-map integral.  Requires a full-constant curve tabulated
/// to x >= 10 with conservation residual <= 1e-8.
double consistency_residual(const Kernel& kernel, const OrderParameterCurve& curve);

/// Area under the mirror curve {(x, y): pair_value(x) + pair_value(y) = c}
/// in the positive quadrant; c in [full_constant, 2*full_constant].
double curve_area(const Kernel& kernel, double c);

struct TspConstant {
  double c = 0;                // conserved constant of the finite-penalty curve
  double lambda_residual = 0;  // |domain length at c - lambda|
  bool clamped = false;        // precision floor hit (extremely large lambda)
};

/// The finite-penalty TSP constant C(lambda) in (2, 4): the c whose curve
/// domain [-lambda/2, lambda/2] has total length lambda.  Monotone bisection.
TspConstant tsp_constant(double lambda);

}  // namespace meanfield::cavity
