#include "driftbench/regularizers.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "driftbench/errors.hpp"

namespace driftbench {

Regularizer Regularizer::centered_squared_l2(Vector center) {
  require_finite(center, "centered_squared_l2 center");
  Regularizer r(Kind::CenteredSquaredL2, 1.0, NormSpec::of(2.0));
  r.dimension_ = center.size();
  r.center_ = std::move(center);
  return r;
}

Regularizer Regularizer::neg_entropy(double mass_bound) {
  if (!(mass_bound > 0.0) || !std::isfinite(mass_bound)) {
    throw InvalidInput("neg_entropy: mass bound must be positive");
  }
  Regularizer r(Kind::NegEntropy, 1.0 / mass_bound, NormSpec::of(1.0));
  r.mass_bound_ = mass_bound;
  return r;
}

Regularizer Regularizer::shifted_neg_entropy(double theta, std::size_t dimension) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw InvalidInput("shifted_neg_entropy: theta must be positive and finite");
  }
  if (dimension == 0) throw InvalidInput("shifted_neg_entropy: dimension must be >= 1");
  const double mass = 1.0 + static_cast<double>(dimension) * theta;
  Regularizer r(Kind::ShiftedNegEntropy, 1.0 / mass, NormSpec::of(1.0));
  r.theta_ = theta;
  r.mass_bound_ = mass;
  r.dimension_ = dimension;
  return r;
}

Regularizer Regularizer::pnorm_squared(double p) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw InvalidInput("pnorm_squared: p must lie in (1, 2]");
  }
  Regularizer r(Kind::PNormSquared, p - 1.0, NormSpec::of(p));
  r.exponent_ = p;
  return r;
}

std::string Regularizer::name() const {
  switch (kind_) {
    case Kind::CenteredSquaredL2: return "centered-squared-l2";
    case Kind::NegEntropy: return "neg-entropy";
    case Kind::ShiftedNegEntropy: return "shifted-neg-entropy";
    case Kind::PNormSquared: return "pnorm-squared";
  }
  return "unknown";
}

std::string Regularizer::domain_note() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::CenteredSquaredL2: return "all of R^n";
    case Kind::NegEntropy: return "entries >= 0 (gradient needs entries > 0)";
    case Kind::ShiftedNegEntropy:
      os << "entries > -" << theta_;
      return os.str();
    case Kind::PNormSquared: return "all of R^n";
  }
  return "";
}

void Regularizer::check_dimension(std::span<const double> x, const char* op) const {
  require_finite(x, op);
  if (dimension_ != 0 && x.size() != dimension_) {
    throw InvalidInput(std::string(op) + ": expected dimension " + std::to_string(dimension_) +
                       ", got " + std::to_string(x.size()));
  }
}

double Regularizer::value(std::span<const double> x) const {
  check_dimension(x, "value");
  double s = 0.0;
  switch (kind_) {
    case Kind::CenteredSquaredL2:
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - center_[i];
        s += d * d;
      }
      return 0.5 * s;
    case Kind::NegEntropy:
      for (double xi : x) {
        if (xi < 0.0) throw DomainError("neg-entropy value: negative entry");
        if (xi > 0.0) s += xi * std::log(xi);
      }
      return s;
    case Kind::ShiftedNegEntropy:
      for (double xi : x) {
        const double v = xi + theta_;
        if (!(v > 0.0)) throw DomainError("shifted-neg-entropy value: entry <= -theta");
        s += v * std::log(v);
      }
      return s;
    case Kind::PNormSquared: {
      const double n = norm(x, reference_norm_);
      return 0.5 * n * n;
    }
  }
  throw InternalError("unhandled regularizer kind");
}

namespace {

// Gradient of ||x||_e^2 / 2: ||x||_e * sign(x_i) (|x_i| / ||x||_e)^(e-1).
Vector squared_norm_gradient(std::span<const double> x, const NormSpec& e) {
  Vector g(x.size(), 0.0);
  const double m = norm(x, e);
  if (m == 0.0) return g;
  const double power = e.p() - 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    g[i] = std::copysign(m * std::pow(std::abs(x[i]) / m, power), x[i]);
  }
  return g;
}

}  // namespace

Vector Regularizer::gradient(std::span<const double> x) const {
  check_dimension(x, "gradient");
  Vector g(x.size());
  switch (kind_) {
    case Kind::CenteredSquaredL2:
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] - center_[i];
      return g;
    case Kind::NegEntropy:
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0)) throw DomainError("neg-entropy gradient diverges at entries <= 0");
        g[i] = std::log(x[i]) + 1.0;
      }
      return g;
    case Kind::ShiftedNegEntropy:
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i] + theta_;
        if (!(v > 0.0)) throw DomainError("shifted-neg-entropy gradient: entry <= -theta");
        g[i] = std::log(v) + 1.0;
      }
      return g;
    case Kind::PNormSquared:
      return squared_norm_gradient(x, reference_norm_);
  }
  throw InternalError("unhandled regularizer kind");
}

Vector Regularizer::gradient_inverse(std::span<const double> g) const {
  check_dimension(g, "gradient_inverse");
  Vector y(g.size());
  switch (kind_) {
    case Kind::CenteredSquaredL2:
      for (std::size_t i = 0; i < g.size(); ++i) y[i] = g[i] + center_[i];
      return y;
    case Kind::NegEntropy:
      for (std::size_t i = 0; i < g.size(); ++i) {
        y[i] = std::exp(g[i] - 1.0);
        if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
          throw DomainError("neg-entropy gradient_inverse: value outside representable range");
        }
      }
      return y;
    case Kind::ShiftedNegEntropy:
      for (std::size_t i = 0; i < g.size(); ++i) {
        y[i] = std::exp(g[i] - 1.0) - theta_;
        if (!std::isfinite(y[i])) {
          throw DomainError("shifted-neg-entropy gradient_inverse: overflow");
        }
      }
      return y;
    case Kind::PNormSquared:
      // The conjugate of ||.||_p^2/2 is ||.||_q^2/2; its gradient inverts ours.
      return squared_norm_gradient(g, reference_norm_.dual());
  }
  throw InternalError("unhandled regularizer kind");
}

double bregman(const Regularizer& r, std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x, y, "bregman");
  using Kind = Regularizer::Kind;
  switch (r.kind()) {
    case Kind::CenteredSquaredL2: {
      r.value(x);  // dimension checks
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
      }
      return 0.5 * s;
    }
    case Kind::NegEntropy:
    case Kind::ShiftedNegEntropy: {
      // Unnormalised KL divergence of the shifted points; equal to the definition
      // but free of the cancellation between R(x) and R(y).
      const double shift = r.kind() == Kind::ShiftedNegEntropy ? r.theta() : 0.0;
      r.value(x);
      r.gradient(y);
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = x[i] + shift;
        const double b = y[i] + shift;
        s += (a > 0.0 ? a * std::log(a / b) : 0.0) - a + b;
      }
      return s;
    }
    case Kind::PNormSquared: {
      const Vector gy = r.gradient(y);
      return r.value(x) - r.value(y) - dot(gy, subtract(x, y));
    }
  }
  throw InternalError("unhandled regularizer kind");
}

double three_point_residual(const Regularizer& r, std::span<const double> a,
                            std::span<const double> b, std::span<const double> c) {
  const Vector lhs_dir = subtract(r.gradient(a), r.gradient(b));
  const double lhs = dot(lhs_dir, subtract(c, b));
  const double rhs = bregman(r, b, a) - bregman(r, c, a) + bregman(r, c, b);
  return std::abs(lhs - rhs);
}

double strong_convexity_gap(const Regularizer& r, std::span<const double> x,
                            std::span<const double> y) {
  const double d = norm(subtract(x, y), r.reference_norm());
  return bregman(r, x, y) - 0.5 * r.sigma() * d * d;
}

}  // namespace driftbench
