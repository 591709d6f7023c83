#pragma once

#include <cmath>
#include <cstdio>
#include <queue>
#include <utility>
#include <vector>

#include "meanfield/errors.hpp"

namespace meanfield {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_panels = 4000;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK constants).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double value;
  double error;
};

template <class F>
PanelResult kronrod_panel(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  const double value = half * kronrod;
  return {value, std::abs(half * (kronrod - gauss))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// Panels are split worst-error-first, so integrable endpoint singularities
/// converge even though their error mass is concentrated in a tiny interval.
/// Throws numeric_error with the worst residual if the panel budget runs out.
template <class F>
double integrate(F&& f, double a, double b, QuadratureOptions opts = {}) {
  if (a == b) return 0.0;
  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  std::priority_queue<Panel> queue;
  auto first = detail::kronrod_panel(f, a, b);
  queue.push({a, b, first.value, first.error});
  double total = first.value;
  double total_error = first.error;
  int panels = 1;
  while (total_error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (panels >= opts.max_panels) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "quadrature did not converge on [%g, %g]: worst residual %.3e after %d panels",
                    a, b, total_error, panels);
      throw numeric_error(msg);
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod_panel(f, worst.a, mid);
    auto right = detail::kronrod_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push({worst.a, mid, left.value, left.error});
    queue.push({mid, worst.b, right.value, right.error});
    ++panels;
  }
  if (!std::isfinite(total)) {
    throw numeric_error("quadrature produced a non-finite value");
  }
  return total;
}

}  // namespace meanfield
