#include "driftbench/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "driftbench/errors.hpp"

namespace driftbench {

namespace {

constexpr double kRootTolerance = 1e-12;
constexpr int kMaxRootIterations = 200;
// Coordinates at or below this are treated as inactive in KKT classifications.
constexpr double kActiveThreshold = 1e-9;

}  // namespace

Body Body::simplex(std::size_t dimension) {
  if (dimension == 0) throw InvalidInput("simplex: dimension must be >= 1");
  return Body(Kind::Simplex, dimension);
}

Body Body::pball(NormSpec p, Vector center, double radius) {
  require_finite(center, "pball center");
  if (!std::isfinite(radius) || radius < 0.0) throw InvalidInput("pball: radius must be >= 0");
  if (radius == 0.0) throw DegenerateBody("pball: radius must be positive");
  Body b(Kind::PBall, center.size());
  b.norm_ = p;
  b.center_ = std::move(center);
  b.radius_ = radius;
  return b;
}

std::string Body::name() const { return kind_ == Kind::Simplex ? "simplex" : "pball"; }

double Body::infeasibility(std::span<const double> x) const {
  require_finite(x, "infeasibility");
  if (x.size() != dimension_) throw InvalidInput("infeasibility: dimension mismatch");
  if (kind_ == Kind::Simplex) {
    double sum = 0.0;
    double worst = 0.0;
    for (double xi : x) {
      sum += xi;
      worst = std::max(worst, -xi);
    }
    return std::max(worst, std::abs(sum - 1.0));
  }
  return std::max(0.0, norm(subtract(x, center_), norm_) - radius_);
}

Vector Body::default_point() const {
  if (kind_ == Kind::Simplex) return Vector(dimension_, 1.0 / static_cast<double>(dimension_));
  return center_;
}

double Body::min_coordinate() const {
  if (kind_ == Kind::Simplex) return 0.0;
  // Smallest x_i over the ball is k_i - D for every l_p ball (attained along e_i).
  return *std::min_element(center_.begin(), center_.end()) - radius_;
}

ProjectionResult project_ball_l2(std::span<const double> center, double radius,
                                 std::span<const double> y) {
  require_finite(center, "project_ball_l2 center");
  require_finite(y, "project_ball_l2 point");
  require_same_dimension(center, y, "project_ball_l2");
  if (!(radius > 0.0)) throw DegenerateBody("project_ball_l2: radius must be positive");

  ProjectionResult out;
  const Vector offset = subtract(y, center);
  const double dist = norm(offset, NormSpec::of(2.0));
  if (dist <= radius) {
    out.x.assign(y.begin(), y.end());
    return out;
  }
  out.x = axpy(center, radius / dist, offset);
  out.lambda = dist - radius;
  out.residual = std::abs(norm(subtract(out.x, center), NormSpec::of(2.0)) - radius);
  return out;
}

ProjectionResult project_simplex_shifted_entropy(double theta, std::span<const double> g) {
  require_finite(g, "project_simplex_shifted_entropy");
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw InvalidInput("project_simplex_shifted_entropy: theta must be >= 0");
  }
  const std::size_t n = g.size();
  const double g_max = *std::max_element(g.begin(), g.end());
  ProjectionResult out;
  out.kappa.assign(n, 0.0);

  if (theta == 0.0) {
    // Unshifted entropy: every coordinate stays positive and lambda is a log-sum-exp.
    double s = 0.0;
    for (double gi : g) s += std::exp(gi - g_max);
    out.lambda = g_max - 1.0 + std::log(s);
    out.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.x[i] = std::exp(g[i] - 1.0 - out.lambda);
    double sum = 0.0;
    for (double xi : out.x) sum += xi;
    out.residual = std::abs(sum - 1.0);
    return out;
  }

  // mass(lambda) = sum_i max(0, e^{g_i - lambda - 1} - theta) is continuous and
  // strictly decreasing wherever positive; find mass(lambda) = 1.
  auto mass = [&](double lambda) {
    double s = 0.0;
    for (double gi : g) s += std::max(0.0, std::exp(gi - lambda - 1.0) - theta);
    return s;
  };
  double lo = g_max - 1.0 - std::log1p(theta);  // top coordinate alone carries mass 1
  double hi = g_max - 1.0 - std::log(theta);    // every coordinate clipped to 0
  for (double step = 1.0; mass(lo) < 1.0; step *= 2.0) lo -= step;
  for (double step = 1.0; mass(hi) > 1.0; step *= 2.0) hi += step;

  double lambda = 0.5 * (lo + hi);
  int it = 0;
  for (; it < kMaxRootIterations; ++it) {
    lambda = 0.5 * (lo + hi);
    const double f = mass(lambda) - 1.0;
    if (std::abs(f) <= kRootTolerance || hi - lo <= 4 * std::numeric_limits<double>::epsilon() *
                                                          std::max(1.0, std::abs(lambda))) {
      break;
    }
    if (f > 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
  }
  if (it == kMaxRootIterations) {
    throw InternalError("project_simplex_shifted_entropy: bisection did not converge");
  }

  // Polish: with the active set fixed, lambda has a closed form.
  {
    double a_max = -std::numeric_limits<double>::infinity();
    std::size_t active = 0;
    for (double gi : g) {
      if (std::exp(gi - lambda - 1.0) > theta) {
        ++active;
        a_max = std::max(a_max, gi);
      }
    }
    if (active > 0) {
      double s = 0.0;
      for (double gi : g) {
        if (std::exp(gi - lambda - 1.0) > theta) s += std::exp(gi - a_max);
      }
      const double candidate =
          a_max - 1.0 + std::log(s) - std::log1p(static_cast<double>(active) * theta);
      std::size_t still_active = 0;
      bool consistent = true;
      for (double gi : g) {
        const bool was = std::exp(gi - lambda - 1.0) > theta;
        const bool now = std::exp(gi - candidate - 1.0) > theta;
        if (now) ++still_active;
        if (was != now) consistent = false;
      }
      if (consistent && still_active == active) lambda = candidate;
    }
  }

  out.lambda = lambda;
  out.iterations = it + 1;
  out.x.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.x[i] = std::max(0.0, std::exp(g[i] - lambda - 1.0) - theta);
    sum += out.x[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double grad_x = std::log(out.x[i] + theta) + 1.0;
    const double k = lambda - (g[i] - grad_x);
    out.kappa[i] = out.x[i] > kActiveThreshold ? 0.0 : std::max(0.0, k);
  }
  out.residual = std::abs(sum - 1.0);
  return out;
}

ProjectionResult project_pball(const Regularizer& r, double radius, std::span<const double> y) {
  if (r.kind() != Regularizer::Kind::PNormSquared) {
    throw InvalidInput("project_pball: needs the p-norm squared regularizer");
  }
  if (!(radius > 0.0)) throw DegenerateBody("project_pball: radius must be positive");
  require_finite(y, "project_pball");
  const NormSpec& p = r.reference_norm();
  ProjectionResult out;
  const double y_norm = norm(y, p);
  if (y_norm <= radius) {
    out.x.assign(y.begin(), y.end());
    return out;
  }

  // Stationarity of ||x||^2/2 - g.x + nu (||x|| - D) gives grad R(x) = g D / (D + nu);
  // search nu >= 0 so that the resulting point lies on the sphere.
  const Vector g = r.gradient(y);
  auto point_for = [&](double nu) { return r.gradient_inverse(scale(g, radius / (radius + nu))); };
  auto excess = [&](double nu) { return norm(point_for(nu), p) - radius; };

  double lo = 0.0;
  double hi = 1.0;
  int it = 0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++it > kMaxRootIterations) throw NumericError("project_pball: bracket expansion failed", excess(hi));
  }
  double nu = hi;
  double f = excess(hi);
  for (; it < kMaxRootIterations && std::abs(f) > kRootTolerance; ++it) {
    nu = 0.5 * (lo + hi);
    f = excess(nu);
    if (f > 0.0) {
      lo = nu;
    } else {
      hi = nu;
    }
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  if (std::abs(f) > kDefaultTolerance) throw NumericError("project_pball: no convergence", f);
  out.x = point_for(nu);
  out.lambda = nu;
  out.iterations = it;
  out.residual = std::abs(f);
  return out;
}

ProjectionResult project_gradient(const Regularizer& r, const Body& body,
                                  std::span<const double> g) {
  require_finite(g, "project_gradient");
  if (g.size() != body.dimension()) throw InvalidInput("project_gradient: dimension mismatch");
  using RK = Regularizer::Kind;
  if (body.kind() == Body::Kind::Simplex) {
    if (r.kind() == RK::ShiftedNegEntropy) return project_simplex_shifted_entropy(r.theta(), g);
    if (r.kind() == RK::NegEntropy) return project_simplex_shifted_entropy(0.0, g);
  } else {
    const bool l2 = !body.ball_norm().is_infinite() && body.ball_norm().p() == 2.0;
    if (r.kind() == RK::CenteredSquaredL2 && l2) {
      return project_ball_l2(body.center(), body.radius(), r.gradient_inverse(g));
    }
    if (r.kind() == RK::PNormSquared && body.ball_norm() == r.reference_norm()) {
      for (double c : body.center()) {
        if (c != 0.0) throw InvalidInput("project_gradient: p-norm squared needs an origin ball");
      }
      return project_pball(r, body.radius(), r.gradient_inverse(g));
    }
  }
  throw InvalidInput("project_gradient: unsupported pairing " + r.name() + " / " + body.name());
}

ProjectionResult project(const Regularizer& r, const Body& body, std::span<const double> y) {
  return project_gradient(r, body, r.gradient(y));
}

double projection_lemma_gap_from_gradients(const Regularizer& r, const Body& body,
                                           std::span<const double> g1,
                                           std::span<const double> g2) {
  const ProjectionResult p1 = project_gradient(r, body, g1);
  const ProjectionResult p2 = project_gradient(r, body, g2);
  const NormSpec& ref = r.reference_norm();
  return norm(subtract(g1, g2), ref.dual()) - r.sigma() * norm(subtract(p1.x, p2.x), ref);
}

double projection_lemma_gap(const Regularizer& r, const Body& body, std::span<const double> y1,
                            std::span<const double> y2) {
  return projection_lemma_gap_from_gradients(r, body, r.gradient(y1), r.gradient(y2));
}

}  // namespace driftbench
