#include "meanfield/kernel.hpp"

#include <cmath>
#include <cstdio>

#include "meanfield/errors.hpp"
#include "meanfield/roots.hpp"

namespace meanfield::cavity {

double Kernel::survival(double field) const {
  if (kind_ == KernelKind::kMatching) return std::exp(-field);
  return (1.0 + field) * std::exp(-field);
}

double Kernel::survival_primitive(double field) const {
  // Written through expm1 so the value stays accurate for tiny fields.
  if (kind_ == KernelKind::kMatching) return -std::expm1(-field);
  return -2.0 * std::expm1(-field) - field * std::exp(-field);
}

double Kernel::pair_value(double field) const {
  if (kind_ == KernelKind::kMatching) return std::exp(-field);
  return (2.0 + field) * std::exp(-field);
}

double Kernel::pair_inverse(double value) const {
  if (!(value > 0.0) || value > full_constant_ * (1.0 + 1e-12)) {
    char msg[120];
    std::snprintf(msg, sizeof msg,
                  "pair_inverse: value %.6g outside (0, %g]", value, full_constant_);
    throw domain_error(msg);
  }
  if (value >= full_constant_) return 0.0;
  if (kind_ == KernelKind::kMatching) return -std::log(value);

  double hi = 1.0;
  while (pair_value(hi) > value) hi *= 2.0;
  return roots::newton_bisect(
      [&](double y) { return pair_value(y) - value; },
      [&](double y) { return -survival(y); }, 0.0, hi, 1e-14);
}

}  // namespace meanfield::cavity
