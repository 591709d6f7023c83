#include "meanfield/order_parameter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "meanfield/errors.hpp"
#include "meanfield/quadrature.hpp"
#include "meanfield/roots.hpp"

namespace meanfield::cavity {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// c - pair_value(field), written through the primitive so the difference
// stays accurate when field is tiny and c equals the full constant.
double mirror_target(const Kernel& k, double field, double c) {
  return k.survival_primitive(field) + (c - k.full_constant());
}

double slope_integrand(const Kernel& k, double t, double c) {
  return 1.0 / k.survival(mirror_field(k, t, c));
}

// x(G) along the positive branch, measured from the symmetric point g0.
double x_of_field(const Kernel& k, double c, double g0, double g) {
  if (g == g0) return 0.0;
  return integrate([&](double t) { return slope_integrand(k, t, c); }, g0, g,
                   {.abs_tol = 1e-13, .rel_tol = 1e-13});
}

// Integral of the mirror map over (0, hi] with the logarithmic singularity at
// zero removed by the substitution t = e^{-s}.
double mirror_integral_singular(const Kernel& k, double c) {
  const double split = 0.5;
  const double near = integrate(
      [&](double s) {
        const double t = std::exp(-s);
        return mirror_field(k, t, c) * t;
      },
      -std::log(split), 60.0, {.abs_tol = 5e-10, .rel_tol = 1e-12});
  const double far = integrate([&](double t) { return mirror_field(k, t, c); },
                               split, 80.0, {.abs_tol = 5e-10, .rel_tol = 1e-12});
  return near + far;
}

}  // namespace

double mirror_field(const Kernel& kernel, double field, double c) {
  if (!(field >= 0.0)) {
    throw domain_error(fmt("mirror_field: field must be >= 0, got %.6g", field));
  }
  const double c_full = kernel.full_constant();
  if (!(c > 0.0) || c > 2.0 * c_full + 1e-12) {
    throw domain_error(
        fmt("mirror_field: c = %.6g outside the admissible range (0, %g]", c, 2 * c_full));
  }
  const double target = mirror_target(kernel, field, c);
  if (target < -1e-12) {
    throw domain_error(fmt(
        "mirror_field: pair_value(%.6g) exceeds c = %.6g, no y >= 0 brackets the conservation equation",
        field, c));
  }
  if (target <= 0.0) return kInf;  // logarithmic singularity, y -> +inf
  if (target > c_full + 1e-12) {
    throw domain_error(fmt(
        "mirror_field: c - pair_value(field) = %.6g exceeds full_constant = %g (y would be negative)",
        target, c_full));
  }
  return kernel.pair_inverse(std::min(target, c_full));
}

double center_field(const Kernel& kernel, double c) {
  if (!(c > 0.0) || !(c < 2.0 * kernel.full_constant())) {
    throw domain_error(fmt("center_field: c = %.6g outside (0, %g)", c,
                           2 * kernel.full_constant()));
  }
  return kernel.pair_inverse(0.5 * c);
}

OrderParameterCurve solve_curve(const Kernel& kernel, double c, double x_limit,
                                int n_points) {
  if (n_points < 2) throw domain_error("solve_curve: n_points must be >= 2");
  if (!(x_limit > 0.0)) throw domain_error("solve_curve: x_limit must be positive");
  const double c_full = kernel.full_constant();
  if (!(c > 0.0) || !(c < 2.0 * c_full)) {
    throw domain_error(
        fmt("solve_curve: c = %.6g inconsistent with kernel (admissible range (0, %g))",
            c, 2 * c_full));
  }

  const double g0 = center_field(kernel, c);

  // Finite-penalty curves end where the mirrored field hits zero.
  double x_half = kInf;
  double g_cap = kInf;
  if (c > c_full) {
    g_cap = kernel.pair_inverse(c - c_full);
    x_half = x_of_field(kernel, c, g0, g_cap);
  }

  double g_top, x_top;
  if (x_half <= x_limit) {
    g_top = g_cap;
    x_top = x_half;
  } else {
    // dG/dx = survival(mirror) <= survival(0) = 1, so G(x_limit) <= g0 + x_limit.
    const double hi = std::min(g0 + x_limit, g_cap);
    g_top = roots::bisect(
        [&](double g) { return x_of_field(kernel, c, g0, g) - x_limit; }, g0, hi,
        1e-12);
    x_top = x_of_field(kernel, c, g0, g_top);
  }

  const int m = n_points;
  std::vector<double> gs(m), xs(m), mirrors(m);
  gs[0] = g0;
  xs[0] = 0.0;
  mirrors[0] = g0;
  const double dg = (g_top - g0) / (m - 1);
  for (int j = 1; j < m; ++j) {
    gs[j] = (j == m - 1) ? g_top : g0 + dg * j;
    xs[j] = xs[j - 1] + integrate([&](double t) { return slope_integrand(kernel, t, c); },
                                  gs[j - 1], gs[j], {.abs_tol = 1e-13, .rel_tol = 1e-13});
    mirrors[j] = mirror_field(kernel, gs[j], c);
  }

  OrderParameterCurve curve;
  curve.kind = kernel.kind();
  curve.c = c;
  curve.g0 = g0;
  curve.g_max = g_top;
  curve.x_half_width = x_half;
  curve.points.reserve(2 * m - 1);
  for (int j = m - 1; j >= 1; --j) curve.points.push_back({-xs[j], mirrors[j]});
  for (int j = 0; j < m; ++j) curve.points.push_back({xs[j], gs[j]});

  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    worst = std::max(worst, std::abs(kernel.pair_value(gs[j]) +
                                     kernel.pair_value(mirrors[j]) - c));
  }
  curve.pair_residual = worst;

  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (!(curve.points[i].g > curve.points[i - 1].g - 1e-14)) {
      throw numeric_error(fmt("solve_curve: tabulated G not increasing near x = %.6g",
                              curve.points[i].x));
    }
  }
  (void)x_top;
  return curve;
}

double ground_state_energy(const Kernel& kernel) {
  return 0.5 * mirror_integral_singular(kernel, kernel.full_constant());
}

double consistency_residual(const Kernel& kernel, const OrderParameterCurve& curve) {
  if (curve.kind != kernel.kind()) {
    throw contract_error("consistency_residual: curve kind does not match kernel");
  }
  if (std::abs(curve.c - kernel.full_constant()) > 1e-12) {
    throw contract_error(
        "consistency_residual: curve must be solved at the full-problem constant");
  }
  const double x_tab = curve.points.back().x;
  if (x_tab < 10.0 - 1e-9) {
    throw contract_error(fmt(
        "consistency_residual: curve tabulated only to x = %.4g; the contract requires "
        "x_limit >= 10, refusing to report a silently truncated functional",
        x_tab));
  }
  if (curve.pair_residual > 1e-8) {
    throw contract_error(fmt(
        "consistency_residual: conservation residual %.3e exceeds 1e-8", curve.pair_residual));
  }

  auto integrand = [&](double g) {
    return g * kernel.survival(g) /
           kernel.survival(mirror_field(kernel, g, curve.c));
  };

  // Field-space integral across the tabulated cells (points ascend in both x
  // and G), then the two untabulated tails.
  double total = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    total += integrate(integrand, curve.points[i - 1].g, curve.points[i].g,
                       {.abs_tol = 1e-12, .rel_tol = 1e-12});
  }
  const double g_lo = curve.points.front().g;
  const double g_hi = curve.points.back().g;
  if (g_lo > 0.0) {
    total += integrate(integrand, 0.0, g_lo, {.abs_tol = 1e-12, .rel_tol = 1e-12});
  }
  total += integrate(integrand, g_hi, g_hi + 60.0, {.abs_tol = 1e-12, .rel_tol = 1e-12});

  return std::abs(0.5 * total - ground_state_energy(kernel));
}

double curve_area(const Kernel& kernel, double c) {
  const double c_full = kernel.full_constant();
  if (c < c_full - 1e-12 || c > 2.0 * c_full + 1e-12) {
    throw domain_error(fmt("curve_area: constant %.6g outside [%g, %g]", c, c_full,
                           2 * c_full));
  }
  if (c >= 2.0 * c_full - 1e-15) return 0.0;  // empty curve
  if (std::abs(c - c_full) <= 1e-15) return mirror_integral_singular(kernel, c);
  const double x_max = kernel.pair_inverse(c - c_full);
  return integrate([&](double x) { return mirror_field(kernel, x, c); }, 0.0, x_max,
                   {.abs_tol = 1e-10, .rel_tol = 1e-12});
}

TspConstant tsp_constant(double lambda) {
  if (!(lambda > 0.0)) throw domain_error("tsp_constant: lambda must be positive");
  const Kernel kernel = Kernel::tsp();
  auto domain_length = [&](double c) {
    const double g_hi = kernel.pair_inverse(c - 2.0);
    if (g_hi == 0.0) return 0.0;
    return integrate([&](double t) { return slope_integrand(kernel, t, c); }, 0.0, g_hi,
                     {.abs_tol = 1e-11, .rel_tol = 1e-12, .max_panels = 20000});
  };

  double lo = 2.0 + 1e-13;
  double hi = 4.0 - 1e-13;
  const double len_lo = domain_length(lo);
  if (len_lo < lambda) {
    // The requested lambda needs c - 2 below the working precision floor.
    return {lo, std::abs(len_lo - lambda), true};
  }

  double best_c = lo, best_resid = std::abs(len_lo - lambda);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double len = domain_length(mid);
    const double resid = std::abs(len - lambda);
    if (resid < best_resid) {
      best_resid = resid;
      best_c = mid;
    }
    if (resid <= 1e-10) break;
    if (len > lambda) {
      lo = mid;  // domain too long: constant must grow
    } else {
      hi = mid;
    }
  }
  if (best_resid > 1e-9) {
    throw numeric_error(fmt("tsp_constant: bisection stalled, |domain - lambda| = %.3e",
                            best_resid));
  }
  return {best_c, best_resid, false};
}

}  // namespace meanfield::cavity
