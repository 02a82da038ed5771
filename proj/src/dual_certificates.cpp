#include "driftbench/dual_certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "driftbench/errors.hpp"

namespace driftbench {

namespace {

bool is_l2(const NormSpec& p) { return !p.is_infinite() && p.p() == 2.0; }

void require_eta(const Trace& trace, double eta, const char* who) {
  if (!(eta > 0.0) || std::abs(eta - trace.eta) > 1e-12 * std::max(1.0, trace.eta)) {
    throw InvalidInput(std::string(who) + ": eta does not match the trace");
  }
}

void require_shift(const Trace& trace, double eta, double alpha, const char* who) {
  if (trace.body.kind() != Body::Kind::Simplex ||
      trace.regularizer.kind() != Regularizer::Kind::ShiftedNegEntropy) {
    throw InvalidInput(std::string(who) + ": needs a shifted-entropy simplex trace");
  }
  if (!(alpha > 0.0)) throw InvalidInput(std::string(who) + ": alpha must be > 0");
  const double theta = shift_for(eta, alpha);
  const double have = trace.regularizer.theta();
  if (std::abs(have - theta) > 1e-9 * std::max(1.0, theta)) {
    throw InvalidInput(std::string(who) + ": regularizer shift " + std::to_string(have) +
                       " does not match 1/(e^{eta alpha}-1) = " + std::to_string(theta));
  }
}

double sum(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Row residual b_next - b_prev - c for the norm programs.
Vector row_vector(const Vector* b_next, const Vector* b_prev, const Vector& c) {
  Vector r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    r[i] = (b_next ? (*b_next)[i] : 0.0) - (b_prev ? (*b_prev)[i] : 0.0) - c[i];
  }
  return r;
}

}  // namespace

std::string to_string(Program p) {
  switch (p) {
    case Program::OcoPBall: return "OCO_PBALL";
    case Program::DriftExpert: return "DRIFT_EXPERT";
    case Program::OnelaTwoBall: return "ONELA_2BALL";
    case Program::OnelaMts: return "ONELA_MTS";
  }
  return "?";
}

Program program_from_string(const std::string& s) {
  if (s == "OCO_PBALL") return Program::OcoPBall;
  if (s == "DRIFT_EXPERT") return Program::DriftExpert;
  if (s == "ONELA_2BALL") return Program::OnelaTwoBall;
  if (s == "ONELA_MTS") return Program::OnelaMts;
  throw InvalidInput("unknown program: " + s);
}

double shift_for(double eta, double alpha) { return 1.0 / std::expm1(eta * alpha); }

double log_ratio_gap(double a, double b) {
  if (!(a > 0.0 && b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("log_ratio_gap: needs finite a, b > 0");
  }
  return a * (std::log(a) - std::log(b)) - (a - b);
}

DualCertificate build_oco_pball(const Trace& trace, double eta, double drift_budget) {
  require_eta(trace, eta, "build_oco_pball");
  if (trace.lookahead != Lookahead::Zero || trace.body.kind() != Body::Kind::PBall) {
    throw InvalidInput("build_oco_pball: needs a 0LA p-ball trace");
  }
  if (drift_budget < 0.0) throw InvalidInput("build_oco_pball: drift budget must be >= 0");
  const Regularizer& r = trace.regularizer;
  const Body& body = trace.body;
  const std::size_t T = trace.horizon();

  DualCertificate cert;
  cert.program = Program::OcoPBall;
  cert.eta = eta;
  cert.radius = body.radius();
  cert.center = body.center();
  cert.dual_norm = body.ball_norm().dual();
  cert.alpha = body.radius() / eta;
  cert.drift_budget = drift_budget;
  cert.a0_convention = "eta*a_0 = ||grad R(y_1) - grad R(x_1) - grad R(x_0)||_q, b_0 = 0";

  std::vector<Vector> grad(T + 1);
  for (std::size_t t = 0; t <= T; ++t) grad[t] = r.gradient(trace.x(t));
  for (std::size_t t = 1; t <= T; ++t) cert.b.push_back(scale(grad[t], -1.0 / eta));
  if (T >= 1) {
    Vector v = subtract(subtract(trace.steps[0].y_gradient, grad[1]), grad[0]);
    cert.a.push_back(norm(v, cert.dual_norm) / eta);
  }
  for (std::size_t t = 1; t + 1 <= T; ++t) {
    cert.a.push_back(norm(subtract(trace.steps[t].y_gradient, grad[t + 1]), cert.dual_norm) / eta);
  }
  if (T >= 1) {
    const Vector* prev = T >= 2 ? &cert.b[T - 2] : nullptr;
    cert.terminal_a = norm(row_vector(nullptr, prev, trace.steps[T - 1].c), cert.dual_norm);
  }
  cert.objective = certificate_objective(cert, trace.costs());
  return cert;
}

DualCertificate build_drift_expert(const Trace& trace, double eta, double alpha,
                                   double drift_budget) {
  require_eta(trace, eta, "build_drift_expert");
  if (trace.lookahead != Lookahead::Zero) throw InvalidInput("build_drift_expert: needs a 0LA trace");
  require_shift(trace, eta, alpha, "build_drift_expert");
  if (drift_budget < 0.0) throw InvalidInput("build_drift_expert: drift budget must be >= 0");
  const Regularizer& r = trace.regularizer;
  const std::size_t T = trace.horizon();
  const std::size_t n = trace.body.dimension();

  DualCertificate cert;
  cert.program = Program::DriftExpert;
  cert.eta = eta;
  cert.alpha = alpha;
  cert.theta = r.theta();
  cert.drift_budget = drift_budget;
  cert.dual_norm = NormSpec::infinity();
  cert.a0_convention = "a_0 = max_i (b_{i,1} - c_{i,1})";

  const Vector top = r.gradient(Vector(n, 1.0));
  for (std::size_t t = 1; t <= T; ++t) {
    cert.b.push_back(scale(subtract(top, r.gradient(trace.x(t))), 1.0 / eta));
  }
  if (T >= 1) {
    double a0 = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) a0 = std::max(a0, cert.b[0][i] - trace.steps[0].c[i]);
    cert.a.push_back(a0);
  }
  for (std::size_t t = 1; t + 1 <= T; ++t) cert.a.push_back(trace.steps[t].lambda / eta);
  cert.objective = certificate_objective(cert, trace.costs());
  return cert;
}

DualCertificate build_onela_2ball(const Trace& trace, double eta) {
  require_eta(trace, eta, "build_onela_2ball");
  const Body& body = trace.body;
  const Regularizer& r = trace.regularizer;
  if (trace.lookahead != Lookahead::One || body.kind() != Body::Kind::PBall ||
      !is_l2(body.ball_norm()) || r.kind() != Regularizer::Kind::CenteredSquaredL2 ||
      r.center() != body.center()) {
    throw InvalidInput("build_onela_2ball: needs a 1LA centred 2-ball trace");
  }
  const std::size_t T = trace.horizon();
  const Vector& k = body.center();
  const NormSpec l2 = NormSpec::of(2.0);

  DualCertificate cert;
  cert.program = Program::OnelaTwoBall;
  cert.eta = eta;
  cert.radius = body.radius();
  cert.center = k;
  cert.dual_norm = l2;
  cert.a0_convention = "eta*a_0 = ||grad R(x_0 - k)||";

  for (std::size_t t = 0; t <= T; ++t) cert.b.push_back(scale(subtract(trace.x(t), k), -1.0 / eta));
  cert.a.push_back(norm(subtract(trace.x0, k), l2) / eta);
  for (std::size_t t = 1; t <= T; ++t) {
    const StepRecord& s = trace.steps[t - 1];
    cert.a.push_back(norm(subtract(s.y_gradient, r.gradient(s.x)), l2) / eta);
  }
  if (T >= 1) cert.terminal_a = norm(row_vector(nullptr, &cert.b[T - 1], trace.steps[T - 1].c), l2);
  cert.objective = certificate_objective(cert, trace.costs());
  return cert;
}

DualCertificate build_onela_mts(const Trace& trace, double eta, double alpha) {
  require_eta(trace, eta, "build_onela_mts");
  if (trace.lookahead != Lookahead::One) throw InvalidInput("build_onela_mts: needs a 1LA trace");
  require_shift(trace, eta, alpha, "build_onela_mts");
  const Regularizer& r = trace.regularizer;
  const std::size_t T = trace.horizon();
  const std::size_t n = trace.body.dimension();

  DualCertificate cert;
  cert.program = Program::OnelaMts;
  cert.eta = eta;
  cert.alpha = alpha;
  cert.theta = r.theta();
  cert.dual_norm = NormSpec::infinity();
  cert.a0_convention = "a_0 = -max_i b_{i,1}";

  const Vector top = r.gradient(Vector(n, 1.0));
  for (std::size_t t = 0; t <= T; ++t) {
    cert.b.push_back(scale(subtract(top, r.gradient(trace.x(t))), 1.0 / eta));
  }
  cert.a.push_back(-*std::max_element(cert.b[0].begin(), cert.b[0].end()));
  for (std::size_t t = 1; t <= T; ++t) cert.a.push_back(-trace.steps[t - 1].lambda / eta);
  cert.objective = certificate_objective(cert, trace.costs());
  return cert;
}

DualCertificate build_certificate(const Trace& trace, double drift_budget) {
  if (trace.body.kind() == Body::Kind::Simplex) {
    const double alpha = std::log1p(1.0 / trace.regularizer.theta()) / trace.eta;
    if (trace.lookahead == Lookahead::Zero) {
      return build_drift_expert(trace, trace.eta, alpha, drift_budget);
    }
    return build_onela_mts(trace, trace.eta, alpha);
  }
  if (trace.lookahead == Lookahead::Zero) return build_oco_pball(trace, trace.eta, drift_budget);
  return build_onela_2ball(trace, trace.eta);
}

double certificate_objective(const DualCertificate& cert, const std::vector<Vector>& costs) {
  const std::size_t T = costs.size();
  switch (cert.program) {
    case Program::OcoPBall: {
      if (T == 0) return 0.0;
      double s = 0.0;
      for (std::size_t t = 0; t + 1 < T; ++t) s += cert.a.at(t);
      double lin = 0.0;
      for (const auto& c : costs) lin += dot(c, cert.center);
      return lin - cert.radius * (s + cert.terminal_a) - cert.alpha * cert.drift_budget;
    }
    case Program::DriftExpert:
      return -sum(cert.a) - cert.alpha * cert.drift_budget;
    case Program::OnelaTwoBall: {
      double s = 0.0;
      for (std::size_t t = 0; t < T; ++t) s += cert.a.at(t);
      double lin = 0.0;
      for (const auto& c : costs) lin += dot(c, cert.center);
      return lin - cert.radius * (s + cert.terminal_a);
    }
    case Program::OnelaMts:
      return sum(cert.a);
  }
  return 0.0;
}

std::vector<Violation> check_feasibility(const DualCertificate& cert,
                                         const std::vector<Vector>& costs, double tol) {
  const std::size_t T = costs.size();
  const bool norm_program = cert.program == Program::OcoPBall || cert.program == Program::OnelaTwoBall;
  const std::size_t expect_a = (cert.program == Program::OcoPBall || cert.program == Program::DriftExpert)
                                   ? T
                                   : T + 1;
  if (cert.a.size() != expect_a || cert.b.size() != expect_a) {
    throw InvalidInput("check_feasibility: certificate shape does not match " + std::to_string(T) +
                       " rounds");
  }
  for (const auto& b : cert.b) {
    if (!costs.empty() && b.size() != costs[0].size()) {
      throw InvalidInput("check_feasibility: dual vector dimension mismatch");
    }
  }

  std::vector<Violation> out;
  auto report = [&](const char* id, std::size_t t, std::size_t i, double excess) {
    if (!(excess <= tol)) out.push_back({id, t, i, excess});
  };
  auto b = [&](std::size_t t) -> const Vector* { return t == 0 ? nullptr : &cert.b[t - 1]; };
  const NormSpec& q = cert.dual_norm;

  switch (cert.program) {
    case Program::OcoPBall:
      for (std::size_t t = 0; t < T; ++t) {
        const double need = norm(row_vector(b(t + 1), b(t), costs[t]), q);
        report(t == 0 ? "cp2.a0" : "cp2.row", t, 0, need - cert.a[t]);
        report("cp2.a_nonneg", t, 0, -cert.a[t]);
      }
      if (T >= 1) {
        const double need = norm(row_vector(nullptr, b(T - 1), costs[T - 1]), q);
        report("cp2.closure", T - 1, 0, need - cert.terminal_a);
      }
      if (cert.drift_budget > 0.0) {
        for (std::size_t t = 1; t < T; ++t) report("cp2.b_norm", t, 0, norm(*b(t), q) - cert.alpha);
      }
      report("cp2.alpha", 0, 0, -cert.alpha);
      break;
    case Program::DriftExpert:
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t i = 0; i < costs[t].size(); ++i) {
          const double need = (*b(t + 1))[i] - (t == 0 ? 0.0 : (*b(t))[i]) - costs[t][i];
          report(t == 0 ? "lp4.a0" : "lp4.row", t, i, need - cert.a[t]);
        }
      }
      if (T >= 1) {
        for (std::size_t i = 0; i < costs[T - 1].size(); ++i) {
          const double need = -(T >= 2 ? (*b(T - 1))[i] : 0.0) - costs[T - 1][i];
          report("lp4.terminal", T - 1, i, need - cert.a[T - 1]);
        }
      }
      for (std::size_t t = 1; t <= T; ++t) {
        for (std::size_t i = 0; i < b(t)->size(); ++i) {
          report("lp4.b_lower", t, i, -(*b(t))[i]);
          report("lp4.b_upper", t, i, (*b(t))[i] - cert.alpha);
        }
      }
      report("lp4.alpha", 0, 0, -cert.alpha);
      break;
    case Program::OnelaTwoBall:
      for (std::size_t t = 1; t <= T; ++t) report("cp6.b_norm", t, 0, norm(*b(t), q) - 1.0);
      if (T >= 1) report("cp6.a0", 0, 0, norm(*b(1), q) - cert.a[0]);
      for (std::size_t t = 1; t <= T; ++t) {
        const double need = norm(row_vector(b(t + 1), b(t), costs[t - 1]), q);
        report("cp6.row", t, 0, need - cert.a[t]);
      }
      for (std::size_t t = 0; t <= T; ++t) report("cp6.a_nonneg", t, 0, -cert.a[t]);
      {
        const double need = T >= 1 ? norm(row_vector(nullptr, b(T), costs[T - 1]), q) : 0.0;
        report("cp6.closure", T, 0, need - cert.terminal_a);
      }
      break;
    case Program::OnelaMts:
      for (std::size_t i = 0; i < b(1)->size(); ++i) report("lp2.a0", 0, i, cert.a[0] + (*b(1))[i]);
      for (std::size_t t = 1; t <= T; ++t) {
        for (std::size_t i = 0; i < costs[t - 1].size(); ++i) {
          const double lhs = (*b(t + 1))[i] - (*b(t))[i] - costs[t - 1][i] + cert.a[t];
          report("lp2.row", t, i, lhs);
        }
      }
      for (std::size_t t = 1; t <= T + 1; ++t) {
        for (std::size_t i = 0; i < b(t)->size(); ++i) {
          report("lp2.b_lower", t, i, -(*b(t))[i]);
          report("lp2.b_upper", t, i, (*b(t))[i] - cert.alpha);
        }
      }
      break;
  }
  const double obj = certificate_objective(cert, costs);
  report(norm_program ? "cp.objective" : "lp.objective", 0, 0,
         std::abs(obj - cert.objective) - tol * std::max(1.0, std::abs(obj)) + tol);
  return out;
}

double weak_duality_gap(const DualCertificate& cert, double opt_value) {
  return opt_value - cert.objective;
}

double oco_tightness(const DualCertificate& cert, const std::vector<Vector>& costs) {
  if (cert.program != Program::OcoPBall) throw InvalidInput("oco_tightness: OCO_PBALL only");
  double worst = 0.0;
  for (std::size_t t = 0; t < costs.size(); ++t) {
    const Vector* next = &cert.b.at(t);
    const Vector* prev = t == 0 ? nullptr : &cert.b.at(t - 1);
    worst = std::max(worst, std::abs(cert.a.at(t) - norm(row_vector(next, prev, costs[t]), cert.dual_norm)));
  }
  return worst;
}

BoundCheck make_check(std::string name, double lhs, double rhs, double tolerance,
                      bool informational) {
  BoundCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.tolerance = tolerance;
  c.pass = c.slack >= -tolerance;
  c.informational = informational;
  return c;
}

BoundCheck skipped_check(std::string name) {
  BoundCheck c;
  c.name = std::move(name);
  c.skipped = true;
  c.pass = true;
  return c;
}

double measured_drift(const Body& body, const std::vector<Vector>& u) {
  double d = 0.0;
  const NormSpec p = body.kind() == Body::Kind::Simplex ? NormSpec::of(1.0) : body.ball_norm();
  for (std::size_t t = 1; t < u.size(); ++t) d += norm(subtract(u[t], u[t - 1]), p);
  return body.kind() == Body::Kind::Simplex ? 0.5 * d : d;
}

namespace {

// Worst-step aggregate of a per-step inequality lhs_t <= rhs_t.
struct StepWorst {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool seen = false;

  void add(double l, double r) {
    if (!seen || r - l < rhs - lhs) {
      lhs = l;
      rhs = r;
      seen = true;
    }
  }
  BoundCheck finish(double tol) const {
    return seen ? make_check(name, lhs, rhs, tol) : skipped_check(name);
  }
};

void lemma2_checks(const Trace& trace, const std::vector<Vector>& u, const BoundParams& p,
                   std::vector<BoundCheck>& out, double& cost_energy, double& support) {
  const Lemma2Terms l = lemma2_decomposition(trace, u);
  const double scale_ = std::max(1.0, std::abs(l.lhs));
  out.push_back(make_check("lemma2.part1", l.residual, 0.0, p.relative_tolerance * scale_));
  out.push_back(make_check("lemma2.part2", l.B + l.C, l.cost_energy - l.support,
                           p.relative_tolerance * scale_));
  cost_energy = l.cost_energy;
  support = l.support;
}

void theorem4_check(const Trace& trace, const std::vector<Vector>& u, double cost_energy,
                    double support, const BoundParams& p, std::vector<BoundCheck>& out) {
  const Regularizer& r = trace.regularizer;
  const NormSpec ref = r.reference_norm();
  const std::size_t T = trace.horizon();
  try {
    double path = 0.0;
    for (std::size_t t = 1; t + 1 <= T; ++t) {
      path += norm(subtract(u[t], u[t - 1]), ref) * norm(r.gradient(u[t]), ref.dual());
    }
    const Lemma2Terms l = lemma2_decomposition(trace, u);
    const double rhs = path + l.A + cost_energy - support;
    out.push_back(make_check("thm4", l.lhs, rhs, p.relative_tolerance * std::max(1.0, std::abs(l.lhs))));
  } catch (const DomainError&) {
    out.push_back(skipped_check("thm4"));
  }
}

double comparator_cost(const Trace& trace, const std::vector<Vector>& u) {
  double s = 0.0;
  for (std::size_t t = 0; t < trace.horizon(); ++t) s += dot(trace.steps[t].c, u[t]);
  return s;
}

void weak_duality_check(const DualCertificate& cert, const OracleValues& o, const BoundParams& p,
                        std::vector<BoundCheck>& out) {
  if (!o.opt_value) {
    out.push_back(skipped_check("weak_duality"));
    return;
  }
  out.push_back(make_check("weak_duality", cert.objective, *o.opt_value,
                           p.duality_tolerance * std::max(1.0, std::abs(*o.opt_value))));
}

}  // namespace

std::vector<BoundCheck> theorem_bound_report(const Trace& trace, const DualCertificate& cert,
                                             const OracleValues& oracle, const BoundParams& p) {
  std::vector<BoundCheck> out;
  const std::size_t T = trace.horizon();
  const std::size_t n = trace.body.dimension();
  const double eta = trace.eta;
  const Regularizer& r = trace.regularizer;
  const std::vector<Vector> costs = trace.costs();
  if (oracle.comparator && oracle.comparator->size() != T) {
    throw InvalidInput("theorem_bound_report: comparator length must equal T");
  }
  const std::vector<Vector> constant(T, trace.x0);
  const std::vector<Vector>& u = oracle.comparator ? *oracle.comparator : constant;

  switch (cert.program) {
    case Program::OcoPBall: {
      double energy = 0.0, support = 0.0;
      lemma2_checks(trace, u, p, out, energy, support);
      const Vector& xT = trace.x(T);
      const Vector g0 = r.gradient(trace.x0);
      const Vector gT = r.gradient(xT);
      const double rhs = (r.value(xT) - r.value(trace.x0) + dot(trace.x0, g0) - dot(xT, gT)) / eta +
                         energy / eta - support / eta;
      out.push_back(make_check("thm1", trace.service, rhs,
                               p.relative_tolerance * std::max(1.0, std::abs(trace.service))));
      if (oracle.comparator) {
        theorem4_check(trace, u, energy, support, p, out);
      } else {
        out.push_back(skipped_check("thm4"));
      }
      weak_duality_check(cert, oracle, p, out);
      if (oracle.comparator) {
        out.push_back(make_check("regret", trace.service - comparator_cost(trace, u), 0.0, 0.0, true));
      }
      break;
    }
    case Program::DriftExpert: {
      double energy = 0.0, support = 0.0;
      lemma2_checks(trace, u, p, out, energy, support);
      const double ln_n = std::log(static_cast<double>(n));
      double sq = 0.0;
      for (const auto& c : costs) {
        const double m = norm(c, NormSpec::infinity());
        sq += m * m;
      }
      const double L = oracle.comparator ? measured_drift(trace.body, u) : cert.drift_budget;
      const double sum_a = -(cert.objective + cert.alpha * cert.drift_budget);
      const double dual = -sum_a - cert.alpha * L;
      const double base = 3.0 * (L + 2.0) * ln_n / eta + eta * sq;
      const double tol = p.relative_tolerance * std::max(1.0, std::abs(trace.service));
      out.push_back(make_check("thm2", trace.service, base + dual, tol));
      if (oracle.comparator) {
        out.push_back(make_check("thm2.regret", trace.service - comparator_cost(trace, u), base, tol));
        theorem4_check(trace, u, energy, support, p, out);
      } else {
        out.push_back(skipped_check("thm2.regret"));
        out.push_back(skipped_check("thm4"));
      }
      const double appendix = (2.0 * L * eta * cert.alpha + 6.0 * ln_n) / eta + eta * sq - sum_a;
      out.push_back(make_check("thm2.appendix_form", trace.service, appendix, tol, true));
      weak_duality_check(cert, oracle, p, out);
      break;
    }
    case Program::OnelaTwoBall: {
      const double D = trace.body.radius();
      const double eps = trace.epsilon;
      const Vector& k = trace.body.center();
      const double kmin = *std::min_element(k.begin(), k.end());
      const NormSpec l2 = NormSpec::of(2.0);
      const NormSpec l1 = NormSpec::of(1.0);

      StepWorst claim4{"claim4.per_step"}, move{"movement.per_step"}, incr{"dual_increment.per_step"},
          ident{"projection_identity.per_step"};
      double C = 0.0, sum_eta_a = 0.0;
      for (std::size_t t = 1; t <= T; ++t) {
        const StepRecord& s = trace.steps[t - 1];
        const double a = cert.a[t];
        const double cn = norm(s.c, l2);
        claim4.add(a, cn);
        move.add(s.movement, eta * cn);
        if (kmin >= D + eps) incr.add(eps * norm(s.c, l1), dot(k, s.c) - D * a);
        const Vector xk = subtract(s.x, k);
        const Vector diff = subtract(s.y_gradient, r.gradient(s.x));
        C -= dot(diff, xk);
        sum_eta_a += eta * a;
        if (a > p.tolerance) {
          const double rn = norm(xk, l2);
          double worst = 0.0;
          for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(eta * a * xk[i] / rn - diff[i]));
          ident.add(worst, 0.0);
        }
      }
      out.push_back(claim4.finish(p.tolerance));
      out.push_back(move.finish(p.tolerance));
      out.push_back(incr.finish(p.tolerance));
      out.push_back(ident.finish(p.tolerance));
      out.push_back(make_check("claim3", std::abs(C + D * sum_eta_a), 0.0,
                               p.tolerance * std::max(1.0, std::abs(C))));
      {
        double lin = 0.0;
        for (const auto& c : costs) lin += dot(k, c);
        const Vector x0k = subtract(trace.x0, k);
        const Vector xTk = subtract(trace.x(T), k);
        const double rhs = eta * lin + 0.5 * dot(x0k, x0k) - 0.5 * dot(xTk, xTk) - D * sum_eta_a;
        out.push_back(make_check("service_chain", eta * trace.service, rhs,
                                 p.relative_tolerance * std::max(1.0, eta * trace.service)));
      }
      std::optional<double> lb = oracle.opt_lower;
      if (check_feasibility(cert, costs).empty()) {
        lb = lb ? std::max(*lb, cert.objective) : cert.objective;
      }
      if (lb) {
        const double opt = *lb;
        const double tol = p.duality_tolerance * std::max(1.0, std::abs(opt));
        out.push_back(make_check("thm3.service", trace.service, opt + D / eta, tol));
        if (eps > 0.0) {
          out.push_back(make_check("thm3.movement", trace.movement, eta / eps * opt, tol));
          out.push_back(make_check("thm3.combined", trace.service + trace.movement,
                                   (1.0 + eta / eps) * opt + D / eta, tol));
        } else {
          out.push_back(skipped_check("thm3.movement"));
          out.push_back(skipped_check("thm3.combined"));
        }
      } else {
        out.push_back(skipped_check("thm3.service"));
      }
      weak_duality_check(cert, oracle, p, out);
      if (oracle.opt_value && *oracle.opt_value > 0.0) {
        out.push_back(make_check("competitive_ratio", (trace.service + trace.movement) / *oracle.opt_value,
                                 1.0 + D / std::max(eps, std::numeric_limits<double>::min()), 0.0, true));
      }
      break;
    }
    case Program::OnelaMts: {
      const double theta = cert.theta;
      StepWorst move{"mts_movement.per_step"};
      for (std::size_t t = 1; t <= T; ++t) {
        const Vector& prev = trace.x(t - 1);
        const Vector& cur = trace.x(t);
        double up = 0.0;
        for (std::size_t i = 0; i < n; ++i) up += std::max(0.0, cur[i] - prev[i]);
        move.add(up, eta * (1.0 + static_cast<double>(n) * theta) * cert.a[t]);
      }
      out.push_back(move.finish(p.tolerance));
      weak_duality_check(cert, oracle, p, out);
      break;
    }
  }
  return out;
}

}  // namespace driftbench
