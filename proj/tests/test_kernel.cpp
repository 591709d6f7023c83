#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "meanfield/errors.hpp"
#include "meanfield/kernel.hpp"

using meanfield::cavity::Kernel;

namespace {
const Kernel kKernels[] = {Kernel::matching(), Kernel::tsp()};
}

TEST_CASE("primitive differentiates back to the survival map") {
  const double h = 1e-5;
  for (const auto& kernel : kKernels) {
    for (double g = h; g <= 40.0; g += 0.25) {
      const double derivative =
          (kernel.survival_primitive(g + h) - kernel.survival_primitive(g - h)) / (2 * h);
      CHECK(std::abs(derivative - kernel.survival(g)) < 1e-8);
    }
  }
}

TEST_CASE("survival is positive and strictly decreasing, primitive increasing from 0") {
  for (const auto& kernel : kKernels) {
    CHECK(kernel.survival_primitive(0.0) == 0.0);
    double prev_t = kernel.survival(0.0);
    double prev_w = 0.0;
    for (double g = 0.05; g < 30.0; g += 0.05) {
      const double t = kernel.survival(g);
      const double w = kernel.survival_primitive(g);
      CHECK(t > 0.0);
      CHECK(t < prev_t);
      CHECK(w > prev_w);
      prev_t = t;
      prev_w = w;
    }
    // primitive saturates at the full constant
    CHECK(std::abs(kernel.survival_primitive(60.0) - kernel.full_constant()) < 1e-12);
  }
}

TEST_CASE("pair_value inverse round trips") {
  for (const auto& kernel : kKernels) {
    for (double g = 0.0; g <= 30.0; g += 0.37) {
      const double value = kernel.pair_value(g);
      CHECK(std::abs(kernel.pair_inverse(value) - g) < 1e-10);
    }
  }
  // matching inverse is the closed logarithm
  const auto matching = Kernel::matching();
  CHECK(matching.pair_inverse(0.25) == doctest::Approx(-std::log(0.25)).epsilon(1e-15));
}

TEST_CASE("pair_inverse domain errors") {
  for (const auto& kernel : kKernels) {
    CHECK_THROWS_AS(kernel.pair_inverse(0.0), meanfield::domain_error);
    CHECK_THROWS_AS(kernel.pair_inverse(kernel.full_constant() + 0.5),
                    meanfield::domain_error);
    CHECK(kernel.pair_inverse(kernel.full_constant()) == 0.0);
  }
}
