#include "driftbench/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "driftbench/errors.hpp"

namespace driftbench {

NormSpec NormSpec::of(double p) {
  if (!std::isfinite(p)) {
    throw InvalidInput("norm exponent must be finite; use NormSpec::infinity()");
  }
  if (p < 1.0) {
    throw InvalidInput("norm exponent must be >= 1, got " + std::to_string(p));
  }
  return NormSpec(p);
}

double NormSpec::p() const {
  if (infinite_) throw InvalidInput("exponent is infinite");
  return p_;
}

NormSpec NormSpec::dual() const noexcept {
  if (infinite_) return NormSpec(1.0);
  if (p_ == 1.0) return NormSpec();
  if (p_ == 2.0) return NormSpec(2.0);
  return NormSpec(p_ / (p_ - 1.0));
}

NormSpec dual_exponent(const NormSpec& p) { return p.dual(); }

void require_finite(std::span<const double> v, const char* what) {
  if (v.empty()) throw InvalidInput(std::string(what) + ": empty vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

void require_same_dimension(std::span<const double> x, std::span<const double> y,
                            const char* what) {
  if (x.size() != y.size()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(x.size()) +
                       " vs " + std::to_string(y.size()) + ")");
  }
}

double norm(std::span<const double> v, const NormSpec& p) {
  require_finite(v, "norm");
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  if (p.is_infinite() || peak == 0.0) return peak;
  const double e = p.p();
  if (e == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  // Scale by the peak entry so large inputs do not overflow |x|^p.
  double s = 0.0;
  if (e == 2.0) {
    for (double x : v) {
      const double r = x / peak;
      s += r * r;
    }
    return peak * std::sqrt(s);
  }
  for (double x : v) s += std::pow(std::abs(x) / peak, e);
  return peak * std::pow(s, 1.0 / e);
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double holder_gap(std::span<const double> x, std::span<const double> y, const NormSpec& p) {
  require_same_dimension(x, y, "holder_gap");
  return norm(x, p) * norm(y, p.dual()) - dot(x, y);
}

Vector add(std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x, y, "add");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

Vector subtract(std::span<const double> x, std::span<const double> y) {
  require_same_dimension(x, y, "subtract");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

Vector scale(std::span<const double> x, double s) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
  return out;
}

Vector axpy(std::span<const double> x, double s, std::span<const double> y) {
  require_same_dimension(x, y, "axpy");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + s * y[i];
  return out;
}

}  // namespace driftbench
