#pragma once

#include <string_view>

namespace meanfield::cavity {

enum class KernelKind { kMatching, kTsp };

/// A problem family (matching or degree-2/TSP) packaged as the scalar maps
/// that drive the cavity order-parameter equation.
///
/// `survival(s)` maps an integrated field to a survival probability: e^{-s}
/// for matching, (1+s)e^{-s} for the degree-2 problem.  `survival_primitive`
/// is its primitive vanishing at zero; it increases to `full_constant`.
/// `pair_value(g) = full_constant - survival_primitive(g)` is the quantity
/// whose sum over mirrored fields G(x), G(-x) is constant along a solved
/// curve; for the full (undiluted) problem that constant equals
/// `full_constant` itself.
class Kernel {
 public:
  static Kernel matching() { return Kernel(KernelKind::kMatching, 1.0); }
  static Kernel tsp() { return Kernel(KernelKind::kTsp, 2.0); }

  KernelKind kind() const { return kind_; }
  std::string_view name() const {
    return kind_ == KernelKind::kMatching ? "matching" : "tsp";
  }
  double full_constant() const { return full_constant_; }

  double survival(double field) const;
  double survival_primitive(double field) const;
  double pair_value(double field) const;

  /// Inverse of pair_value on [0, inf): the y >= 0 with pair_value(y) = value.
  /// Requires value in (0, full_constant]; closed form for matching,
  /// bracketed Newton otherwise.
  double pair_inverse(double value) const;

 private:
  Kernel(KernelKind kind, double full_constant)
      : kind_(kind), full_constant_(full_constant) {}

  KernelKind kind_;
  double full_constant_;
};

}  // namespace meanfield::cavity
