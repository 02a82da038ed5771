#include "driftbench/omd_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace driftbench {

std::string to_string(Lookahead l) { return l == Lookahead::Zero ? "0LA" : "1LA"; }

Lookahead lookahead_from_string(const std::string& s) {
  if (s == "0LA" || s == "0" || s == "zero") return Lookahead::Zero;
  if (s == "1LA" || s == "1" || s == "one") return Lookahead::One;
  throw InvalidInput("unknown lookahead: " + s);
}

std::vector<Vector> Trace::costs() const {
  std::vector<Vector> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.c);
  return out;
}

OmdStepResult omd_step(const Regularizer& r, const Body& body, double eta,
                       std::span<const double> x_prev, std::span<const double> c) {
  require_finite(c, "omd_step cost");
  require_same_dimension(x_prev, c, "omd_step");
  OmdStepResult out;
  out.y_gradient = axpy(r.gradient(x_prev), -eta, c);
  // A zero cost leaves y = x_prev, already in the body.
  if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; }) && body.infeasibility(x_prev) <= 1e-12) {
    out.projection.x.assign(x_prev.begin(), x_prev.end());
    if (body.kind() == Body::Kind::Simplex) out.projection.kappa.assign(x_prev.size(), 0.0);
    return out;
  }
  out.projection = project_gradient(r, body, out.y_gradient);
  return out;
}

namespace {

void validate(const Scenario& s, const Vector& x0) {
  const std::size_t n = s.body.dimension();
  if (!(s.eta > 0.0) || !std::isfinite(s.eta)) throw InvalidInput("scenario: eta must be > 0");
  if (x0.size() != n) throw InvalidInput("scenario: x0 dimension mismatch");
  require_finite(x0, "scenario x0");
  if (!s.body.contains(x0)) throw InvalidInput("scenario: x0 is not feasible");
  if (s.regularizer.dimension() != 0 && s.regularizer.dimension() != n) {
    throw InvalidInput("scenario: regularizer bound to another dimension");
  }
  if (s.epsilon < 0.0 || s.alpha < 0.0) throw InvalidInput("scenario: epsilon, alpha must be >= 0");
  for (std::size_t t = 0; t < s.costs.size(); ++t) {
    if (s.costs[t].size() != n) {
      throw InvalidInput("scenario: cost " + std::to_string(t + 1) + " has wrong dimension");
    }
    require_finite(s.costs[t], "scenario cost");
    if (s.lookahead == Lookahead::One) {
      for (double v : s.costs[t]) {
        if (v < 0.0) {
          throw InvalidInput("scenario: 1LA cost " + std::to_string(t + 1) + " has a negative entry");
        }
      }
    }
  }
  if (s.lookahead == Lookahead::One && s.body.min_coordinate() < -kDefaultTolerance) {
    throw InvalidInput("scenario: 1LA body must lie in the nonnegative orthant");
  }
}

}  // namespace

Trace run(const Scenario& s) {
  Vector x0 = s.x0 ? *s.x0 : s.body.default_point();
  validate(s, x0);

  Trace trace{s.regularizer, s.body, s.eta, s.lookahead, s.movement_norm, s.epsilon, s.alpha,
              x0, {}, 0.0, 0.0};
  trace.steps.reserve(s.costs.size());
  Vector x_prev = x0;
  for (std::size_t t = 1; t <= s.costs.size(); ++t) {
    const Vector& c = s.costs[t - 1];
    StepRecord rec;
    rec.t = t;
    rec.c = c;
    if (s.lookahead == Lookahead::Zero) rec.service = dot(c, x_prev);
    try {
      OmdStepResult step = omd_step(s.regularizer, s.body, s.eta, x_prev, c);
      rec.y_gradient = std::move(step.y_gradient);
      rec.x = std::move(step.projection.x);
      rec.lambda = step.projection.lambda;
      rec.kappa = std::move(step.projection.kappa);
    } catch (const Error& e) {
      throw RunError("step " + std::to_string(t) + ": " + e.what(), t, trace);
    }
    if (s.lookahead == Lookahead::One) rec.service = dot(c, rec.x);
    rec.movement = norm(subtract(rec.x, x_prev), s.movement_norm);
    trace.service += rec.service;
    trace.movement += rec.movement;
    x_prev = rec.x;
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

Lemma2Terms lemma2_decomposition(const Trace& trace, const std::vector<Vector>& u) {
  const std::size_t T = trace.horizon();
  if (u.size() != T) throw InvalidInput("lemma2_decomposition: need T comparators");
  if (trace.lookahead != Lookahead::Zero) throw InvalidInput("lemma2_decomposition: 0LA trace required");
  const Regularizer& r = trace.regularizer;
  const double eta = trace.eta;
  const NormSpec dual = r.reference_norm().dual();
  for (const auto& ut : u) {
    if (!trace.body.contains(ut)) throw InvalidInput("lemma2_decomposition: comparator not feasible");
  }

  Lemma2Terms out;
  if (T == 0) return out;
  std::vector<Vector> grad(T + 1);
  for (std::size_t t = 0; t <= T; ++t) grad[t] = r.gradient(trace.x(t));

  for (std::size_t t = 1; t <= T; ++t) {
    const StepRecord& s = trace.steps[t - 1];
    const Vector& xp = trace.x(t - 1);
    const Vector& ut = u[t - 1];
    out.lhs += eta * dot(s.c, xp);
    out.P += bregman(r, ut, xp) - bregman(r, ut, s.x);
    out.Q += dot(subtract(grad[t - 1], grad[t]), ut);
    out.B += bregman(r, xp, s.x);
    out.C += dot(subtract(grad[t], s.y_gradient), xp);
    const double ec = eta * norm(s.c, dual);
    out.cost_energy += ec * ec / r.sigma();
    out.support += dot(subtract(s.y_gradient, grad[t]), s.x);
  }
  for (std::size_t t = 1; t + 1 <= T; ++t) out.drift_terms += r.value(u[t]) - r.value(u[t - 1]);
  out.A = bregman(r, u[0], trace.x0) - bregman(r, u[T - 1], trace.x(T)) + dot(grad[0], u[0]) -
          dot(grad[T], u[T - 1]);
  out.residual = std::abs(out.lhs - (out.drift_terms + out.A + out.B + out.C));
  out.pq_residual = std::abs(out.lhs - (out.P + out.Q + out.B + out.C));
  out.part2_slack = out.cost_energy - out.support - (out.B + out.C);
  return out;
}

}  // namespace driftbench
