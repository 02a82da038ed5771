#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "driftbench/core_math.hpp"
#include "driftbench/regularizers.hpp"

namespace driftbench {

/// Convex feasible set: the probability simplex, or {x : ||x - k||_p <= D}.
class Body {
 public:
  enum class Kind { Simplex, PBall };

  static Body simplex(std::size_t dimension);
  static Body pball(NormSpec p, Vector center, double radius);

  Kind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const NormSpec& ball_norm() const noexcept { return norm_; }
  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  std::string name() const;

  /// How far x is from feasibility (0 when feasible).
  double infeasibility(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol = kDefaultTolerance) const {
    return infeasibility(x) <= tol;
  }
  /// Uniform vector on the simplex, the centre of a ball.
  Vector default_point() const;
  /// Componentwise minimum over the body (used for the nonnegative-orthant check).
  double min_coordinate() const;

  bool operator==(const Body&) const = default;

 private:
  Body(Kind kind, std::size_t dimension) : kind_(kind), dimension_(dimension) {}

  Kind kind_;
  std::size_t dimension_;
  NormSpec norm_ = NormSpec::of(1.0);
  Vector center_;
  double radius_ = 0.0;
};

struct ProjectionResult {
  Vector x;
  /// Simplex: the multiplier of Claim-1 type, [grad R(y) - grad R(x)]_i <= lambda.
  /// Ball: the multiplier of the norm constraint, ||y - k|| - D when active.
  double lambda = 0.0;
  /// Simplex only: multipliers of x_i >= 0.
  Vector kappa;
  int iterations = 0;
  /// Feasibility residual of the returned point.
  double residual = 0.0;
};

/// Euclidean (= Bregman for centred squared l2) projection onto the 2-ball at k.
ProjectionResult project_ball_l2(std::span<const double> center, double radius,
                                 std::span<const double> y);

/// Bregman projection onto the simplex for sum (x_i + theta) ln(x_i + theta), given the
/// target gradient g = grad R(y). theta == 0 selects the unshifted entropy.
ProjectionResult project_simplex_shifted_entropy(double theta, std::span<const double> g);

/// Bregman projection for ||x||_p^2/2 onto the origin-centred p-ball of radius D by
/// bisection on the ball multiplier.
ProjectionResult project_pball(const Regularizer& r, double radius, std::span<const double> y);

/// Projection of the point whose mirror image is g. Supported pairings:
/// centred squared l2 / 2-ball, p-norm squared / origin p-ball, (shifted) entropy / simplex.
ProjectionResult project_gradient(const Regularizer& r, const Body& body,
                                  std::span<const double> g);
ProjectionResult project(const Regularizer& r, const Body& body, std::span<const double> y);

/// ||grad R(y1) - grad R(y2)||_* - sigma ||x1 - x2||; nonnegative by the projection lemma.
double projection_lemma_gap(const Regularizer& r, const Body& body, std::span<const double> y1,
                            std::span<const double> y2);
double projection_lemma_gap_from_gradients(const Regularizer& r, const Body& body,
                                           std::span<const double> g1,
                                           std::span<const double> g2);

}  // namespace driftbench
