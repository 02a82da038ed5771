#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace driftbench {

/// Dense real coordinate vector: points, costs, gradients.
using Vector = std::vector<double>;

/// Default absolute tolerance for derived-inequality comparisons.
inline constexpr double kDefaultTolerance = 1e-9;

/// Exponent of an l_p norm, p in [1, inf]. Infinity is a distinguished state,
/// never a large float.
class NormSpec {
 public:
  /// Throws InvalidInput for p < 1 or non-finite p (use infinity() for p = inf).
  static NormSpec of(double p);
  static NormSpec infinity() noexcept { return NormSpec(); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Finite exponent; throws InvalidInput when is_infinite().
  double p() const;
  /// Holder conjugate q with 1/p + 1/q = 1.
  NormSpec dual() const noexcept;

  bool operator==(const NormSpec&) const = default;

 private:
  NormSpec() noexcept : infinite_(true), p_(0.0) {}
  NormSpec(double p) noexcept : infinite_(false), p_(p) {}

  bool infinite_;
  double p_;
};

/// Holder conjugate of p. dual_exponent(dual_exponent(p)) == p.
NormSpec dual_exponent(const NormSpec& p);

double norm(std::span<const double> v, const NormSpec& p);
double dot(std::span<const double> x, std::span<const double> y);

/// ||x||_p * ||y||_q - x.y; nonnegative by Holder's inequality.
double holder_gap(std::span<const double> x, std::span<const double> y, const NormSpec& p);

/// Throws InvalidInput unless every entry is finite and v is nonempty.
void require_finite(std::span<const double> v, const char* what);
void require_same_dimension(std::span<const double> x, std::span<const double> y,
                            const char* what);

Vector add(std::span<const double> x, std::span<const double> y);
Vector subtract(std::span<const double> x, std::span<const double> y);
Vector scale(std::span<const double> x, double s);
/// x + s * y
Vector axpy(std::span<const double> x, double s, std::span<const double> y);

}  // namespace driftbench
