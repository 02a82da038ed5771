#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/core_math.hpp"
#include "driftbench/errors.hpp"
#include "driftbench/projections.hpp"
#include "driftbench/regularizers.hpp"

namespace driftbench {

enum class Lookahead { Zero, One };

std::string to_string(Lookahead l);
Lookahead lookahead_from_string(const std::string& s);

struct Scenario {
  Body body;
  Regularizer regularizer;
  double eta = 0.0;
  Lookahead lookahead = Lookahead::Zero;
  std::vector<Vector> costs;
  /// Defaults to Body::default_point().
  std::optional<Vector> x0;
  NormSpec movement_norm = NormSpec::of(2.0);
  /// 1LA 2-ball margin: k_min >= D + epsilon.
  double epsilon = 0.0;
  /// Drifting / MTS dual parameter.
  double alpha = 0.0;
};

struct StepRecord {
  std::size_t t = 0;  // 1-based round
  Vector c;
  Vector x;           // x_t
  Vector y_gradient;  // grad R(y_t) = grad R(x_{t-1}) - eta c_t
  double lambda = 0.0;
  Vector kappa;
  double service = 0.0;
  double movement = 0.0;

  bool operator==(const StepRecord&) const = default;
};

struct Trace {
  Regularizer regularizer;
  Body body;
  double eta = 0.0;
  Lookahead lookahead = Lookahead::Zero;
  NormSpec movement_norm = NormSpec::of(2.0);
  double epsilon = 0.0;
  double alpha = 0.0;
  Vector x0{};
  std::vector<StepRecord> steps{};
  double service = 0.0;
  double movement = 0.0;

  std::size_t horizon() const noexcept { return steps.size(); }
  /// x_t for t in [0, T].
  const Vector& x(std::size_t t) const { return t == 0 ? x0 : steps.at(t - 1).x; }
  std::vector<Vector> costs() const;

  bool operator==(const Trace&) const = default;
};

/// Raised by run(); carries the steps completed before the failure.
class RunError : public Error {
 public:
  RunError(const std::string& what, std::size_t step, Trace partial)
      : Error(what), step_(step), partial_(std::move(partial)) {}
  std::size_t step() const noexcept { return step_; }
  const Trace& partial() const noexcept { return partial_; }

 private:
  std::size_t step_;
  Trace partial_;
};

struct OmdStepResult {
  Vector y_gradient;
  ProjectionResult projection;
};

/// One mirror step from x_prev against cost c.
OmdStepResult omd_step(const Regularizer& r, const Body& body, double eta,
                       std::span<const double> x_prev, std::span<const double> c);

/// Validates the scenario and runs all T rounds with the lookahead's charging order.
Trace run(const Scenario& s);

struct Lemma2Terms {
  double P = 0.0;
  double Q = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  /// sum_{t=1}^{T-1} (R(u_t) - R(u_{t-1}))
  double drift_terms = 0.0;
  /// eta * S_0
  double lhs = 0.0;
  /// |lhs - (drift_terms + A + B + C)|
  double residual = 0.0;
  /// |lhs - (P + Q + B + C)|
  double pq_residual = 0.0;
  /// sum_t ||eta c_t||_*^2 / sigma
  double cost_energy = 0.0;
  /// sum_t [grad R(y_t) - grad R(x_t)].x_t; equals D * multiplier on origin balls.
  double support = 0.0;
  /// cost_energy - support - (B + C); nonnegative when the second inequality holds.
  double part2_slack = 0.0;
};

/// Regret decomposition for a 0LA trace against comparators u_0..u_{T-1}.
Lemma2Terms lemma2_decomposition(const Trace& trace, const std::vector<Vector>& comparators);

}  // namespace driftbench
