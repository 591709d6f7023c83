#include "meanfield/diluted.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "meanfield/errors.hpp"
#include "meanfield/quadrature.hpp"
#include "meanfield/roots.hpp"

namespace meanfield::diluted {
namespace {

std::string fmt(const char* pattern, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

double unmatched_density(double lambda) {
  if (!(lambda > 0.0)) {
    throw domain_error(fmt("unmatched_density: lambda must be positive, got %.6g", lambda));
  }
  auto image = [lambda](double q) { return std::exp(-0.5 * (1.0 + q) * lambda); };
  double q = 0.5;
  for (int i = 0; i < 300; ++i) {
    const double next = 0.5 * (q + image(q));
    if (std::abs(next - q) < 1e-16) {
      q = next;
      break;
    }
    q = next;
  }
  if (std::abs(q - image(q)) > 1e-12) {
    q = roots::bisect([&](double t) { return t - image(t); },
                      std::numeric_limits<double>::min(), 1.0, 1e-16, 400);
  }
  // Newton polish: f(q) = q - e^{-(1+q) lambda/2}, f' = 1 + (lambda/2) e^{...}.
  for (int i = 0; i < 3; ++i) {
    const double e = image(q);
    q -= (q - e) / (1.0 + 0.5 * lambda * e);
  }
  return q;
}

double penalty_from_density(double q) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw domain_error(fmt("penalty_from_density: q = %.6g outside (0, 1)", q));
  }
  return -2.0 * std::log(q) / (1.0 + q);
}

DilutedModel make_model(double lambda) {
  return {lambda, unmatched_density(lambda)};
}

double limit_survival(const DilutedModel& model, double x) {
  const double half = 0.5 * model.lambda;
  if (x < -half - 1e-12 || x > half + 1e-12) {
    throw domain_error(fmt("limit_survival: x = %.6g outside [-%.6g, +%.6g]", x, half));
  }
  return (1.0 + model.q) / (1.0 + std::exp((1.0 + model.q) * x));
}

double participation_probability_integral(double x, double q) {
  if (!(q >= 0.0) || q >= 1.0) {
    throw domain_error(fmt("participation: q = %.6g outside [0, 1)", q));
  }
  if (x < 0.0) throw domain_error(fmt("participation: edge length %.6g is negative", x));
  const double alpha = std::exp((1.0 + q) * x);
  if (std::isinf(alpha)) return q;
  // After s = t/(1+t) the integrand is smooth and bounded on a fixed interval.
  const double lo = q / (1.0 + q);
  const double hi = 1.0 / (1.0 + q);
  const double integral = integrate(
      [alpha](double s) { return s / (s + alpha * (1.0 - s)); }, lo, hi,
      {.abs_tol = 1e-13, .rel_tol = 1e-13});
  return q + (1.0 + q) * (1.0 + q) * integral;
}

double participation_probability(double x, double q) {
  if (!(q >= 0.0) || q >= 1.0) {
    throw domain_error(fmt("participation: q = %.6g outside [0, 1)", q));
  }
  if (x < 0.0) throw domain_error(fmt("participation: edge length %.6g is negative", x));
  if (q > 0.0 && x > penalty_from_density(q) + 1e-9) {
    throw domain_error(
        fmt("participation: edge length %.6g exceeds lambda(q) = %.6g", x,
            penalty_from_density(q)));
  }
  const double alpha = std::exp((1.0 + q) * x);
  if (std::abs(alpha - 1.0) <= 1e-4) return participation_probability_integral(x, q);
  if (std::isinf(alpha)) return q;
  const double opq = 1.0 + q;
  return q + opq * opq * alpha / ((alpha - 1.0) * (alpha - 1.0)) *
                 std::log((alpha + q) / (1.0 + alpha * q)) -
         opq * (1.0 - q) / (alpha - 1.0);
}

double edge_cost(double q) {
  if (!(q > 0.0) || q > 1.0) {
    throw domain_error(fmt("edge_cost: q = %.6g outside (0, 1]", q));
  }
  if (q >= 1.0) return 0.0;
  return integrate([](double t) { return -std::log(t) / (1.0 + t); }, q, 1.0,
                   {.abs_tol = 1e-12, .rel_tol = 1e-13});
}

double total_cost(double lambda) {
  if (!(lambda > 0.0)) {
    throw domain_error(fmt("total_cost: lambda must be positive, got %.6g", lambda));
  }
  const double q = unmatched_density(lambda);
  return edge_cost(q) + 0.5 * lambda * q;
}

double longest_edge_limit(double q) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw domain_error(fmt("longest_edge_limit: q = %.6g must lie strictly inside (0, 1)", q));
  }
  return penalty_from_density(q);
}

}  // namespace meanfield::diluted
