#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "driftbench/core_math.hpp"

namespace driftbench {

/// A strongly convex mirror map with its strong-convexity constant `sigma`
/// measured in `reference_norm`. Immutable after construction.
class Regularizer {
 public:
  enum class Kind { CenteredSquaredL2, NegEntropy, ShiftedNegEntropy, PNormSquared };

  /// R(x) = ||x - k||_2^2 / 2; sigma = 1 in l2.
  static Regularizer centered_squared_l2(Vector center);
  /// R(x) = sum x_i ln x_i over {x > 0, ||x||_1 <= mass_bound}; sigma = 1/mass_bound in l1.
  static Regularizer neg_entropy(double mass_bound = 1.0);
  /// R(x) = sum (x_i + theta) ln(x_i + theta). On the n-simplex the shifted point
  /// has mass 1 + n*theta, so sigma = 1 / (1 + n*theta) in l1.
  static Regularizer shifted_neg_entropy(double theta, std::size_t dimension);
  /// R(x) = ||x||_p^2 / 2 for p in (1, 2]; sigma = p - 1 in l_p.
  static Regularizer pnorm_squared(double p);

  Kind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  const NormSpec& reference_norm() const noexcept { return reference_norm_; }
  const Vector& center() const noexcept { return center_; }
  double theta() const noexcept { return theta_; }
  double exponent() const noexcept { return exponent_; }
  double mass_bound() const noexcept { return mass_bound_; }
  /// Dimension the regularizer is bound to, 0 when any dimension is accepted.
  std::size_t dimension() const noexcept { return dimension_; }
  std::string name() const;
  std::string domain_note() const;

  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;
  /// Point y with gradient(y) == g.
  Vector gradient_inverse(std::span<const double> g) const;

  bool operator==(const Regularizer&) const = default;

 private:
  Regularizer(Kind kind, double sigma, NormSpec reference_norm)
      : kind_(kind), sigma_(sigma), reference_norm_(reference_norm) {}

  void check_dimension(std::span<const double> x, const char* op) const;

  Kind kind_;
  double sigma_;
  NormSpec reference_norm_;
  Vector center_;
  double theta_ = 0.0;
  double exponent_ = 2.0;
  double mass_bound_ = 1.0;
  std::size_t dimension_ = 0;
};

/// B_R(x, y) = R(x) - R(y) - grad R(y).(x - y).
double bregman(const Regularizer& r, std::span<const double> x, std::span<const double> y);

/// |[grad R(a) - grad R(b)].(c - b) - (B(b,a) - B(c,a) + B(c,b))|; zero in exact arithmetic.
double three_point_residual(const Regularizer& r, std::span<const double> a,
                            std::span<const double> b, std::span<const double> c);

/// B_R(x, y) - sigma/2 ||x - y||^2 in the reference norm.
double strong_convexity_gap(const Regularizer& r, std::span<const double> x,
                            std::span<const double> y);

}  // namespace driftbench
