// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "driftbench/dual_certificates.hpp"
#include "driftbench/harness.hpp"
#include "driftbench/omd_engine.hpp"
#include "driftbench/oracles.hpp"
#include "driftbench/projections.hpp"
#include "driftbench/regularizers.hpp"
#include "driftbench/serialization.hpp"
#include "test_oracles.hpp"

using namespace driftbench;
using testsupport::Rng;

namespace {

struct Tally {
  bool ok = true;
  long count = 0;
  double worst = INFINITY;  // tightest slack seen
  std::string first_failure;

  void slack(double s, const std::string& what) {
    ++count;
    worst = std::min(worst, s);
    if (!(s >= 0.0)) fail(what);
  }
  void expect(bool cond, const std::string& what) {
    ++count;
    if (!cond) fail(what);
  }
  void fail(const std::string& what) {
    if (ok) first_failure = what;
    ok = false;
  }
};

int failures = 0;

void report(int id, const char* title, const std::function<Tally()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  try {
    t = body();
  } catch (const std::exception& e) {
    t.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char slack[32] = "n/a";
  if (std::isfinite(t.worst)) std::snprintf(slack, sizeof(slack), "%.3g", t.worst);
  std::printf("criterion %2d: %s  %s  (%ld checks, tightest slack %s, %.1fs)%s%s\n", id, t.ok ? "PASS" : "FAIL", title,
              t.count, slack, secs, t.ok ? "" : "  first failure: ", t.first_failure.c_str());
  std::fflush(stdout);
  if (!t.ok) ++failures;
}

std::vector<Vector> costs_in(Rng& rng, std::size_t T, std::size_t n, double lo, double hi) {
  std::vector<Vector> c;
  for (std::size_t t = 0; t < T; ++t) c.push_back(rng.uniform_vec(n, lo, hi));
  return c;
}

Vector filled(std::size_t n, double v) { return Vector(n, v); }

// A random scenario for each certificate family, with its drift budget.
struct Family {
  Scenario scenario;
  double drift = 0.0;
};

Family random_family(int family, Rng& rng, std::size_t max_T, std::size_t max_n) {
  const std::size_t T = rng.index(1, max_T);
  switch (family) {
    case 0: {  // OCO on p-balls
      const std::size_t n = rng.index(1, max_n);
      const bool two = rng.uniform(0, 1) < 0.5;
      const double p = two ? 2.0 : rng.uniform(1.1, 2.0);
      const Vector origin(n, 0.0);
      const Body body = Body::pball(NormSpec::of(p), origin, rng.uniform(0.3, 2.0));
      const Regularizer r = two ? Regularizer::centered_squared_l2(origin) : Regularizer::pnorm_squared(p);
      Scenario s{body, r, rng.uniform(0.02, 1.5), Lookahead::Zero, costs_in(rng, T, n, -2, 2)};
      return {s, two ? rng.uniform(0, 2) : 0.0};
    }
    case 1: {  // drifting experts
      const std::size_t n = rng.index(2, std::max<std::size_t>(2, max_n + 2));
      const double eta = rng.uniform(0.01, 1.0);
      const double alpha = std::log(double(n)) / eta * rng.uniform(0.5, 2.0);
      Scenario s{Body::simplex(n), Regularizer::shifted_neg_entropy(shift_for(eta, alpha), n), eta, Lookahead::Zero,
                 costs_in(rng, T, n, -1, 1)};
      s.alpha = alpha;
      s.movement_norm = NormSpec::of(1);
      return {s, rng.uniform(0, 3)};
    }
    case 2: {  // 1LA on a 2-ball with k_min >= D + eps
      const std::size_t n = rng.index(1, max_n);
      const double D = rng.uniform(0.2, 2.0), eps = rng.uniform(0.0, 1.0);
      Vector k(n);
      for (auto& v : k) v = D + eps + rng.uniform(0, 1);
      Scenario s{Body::pball(NormSpec::of(2), k, D), Regularizer::centered_squared_l2(k), D * rng.uniform(1.0, 3.0),
                 Lookahead::One, costs_in(rng, T, n, 0, 2)};
      s.epsilon = eps;
      return {s, 0.0};
    }
    default: {  // alpha-unfair MTS
      const std::size_t n = rng.index(2, std::max<std::size_t>(2, max_n + 2));
      const double eta = rng.uniform(0.02, 1.0), alpha = rng.uniform(0.3, 3.0);
      Scenario s{Body::simplex(n), Regularizer::shifted_neg_entropy(shift_for(eta, alpha), n), eta, Lookahead::One,
                 costs_in(rng, T, n, 0, 1)};
      s.alpha = alpha;
      s.movement_norm = NormSpec::of(1);
      return {s, 0.0};
    }
  }
}

const char* kFamilyNames[] = {"CP2", "LP4", "CP6", "LP2"};

RunConfig config_of(int family, const Family& f) {
  RunConfig c;
  c.setting = family == 0 ? Setting::OcoPBall
              : family == 1 ? Setting::DriftExpert
              : family == 2 ? Setting::OnelaTwoBall
                            : Setting::OnelaMts;
  c.n = f.scenario.body.dimension();
  c.T = f.scenario.costs.size();
  c.drift = f.drift;
  return c;
}

}  // namespace

int main() {
  report(1, "projection lemma on every regularizer/body pairing", [] {
    Tally t;
    Rng rng(1001);
    const Vector k{0.5, -1.0, 2.0};
    struct Pair {
      Regularizer r;
      Body b;
      bool from_gradients;
    };
    const std::vector<Pair> pairs = {
        {Regularizer::centered_squared_l2(k), Body::pball(NormSpec::of(2), k, 1.3), false},
        {Regularizer::pnorm_squared(1.5), Body::pball(NormSpec::of(1.5), filled(3, 0.0), 1.0), false},
        {Regularizer::neg_entropy(), Body::simplex(4), true},
        {Regularizer::shifted_neg_entropy(0.25, 5), Body::simplex(5), true}};
    for (const auto& p : pairs) {
      const std::size_t n = p.b.dimension();
      for (int i = 0; i < 10000; ++i) {
        const Vector y1 = rng.normal_vec(n, 2.0), y2 = rng.normal_vec(n, 2.0);
        const double gap = p.from_gradients ? projection_lemma_gap_from_gradients(p.r, p.b, y1, y2)
                                            : projection_lemma_gap(p.r, p.b, y1, y2);
        t.slack(gap + 1e-9, p.r.name());
      }
    }
    return t;
  });

  report(2, "three-point identity, Bregman sign, strong convexity, 1-D log lemma", [] {
    Tally t;
    Rng rng(1002);
    const std::vector<Regularizer> regs = {Regularizer::centered_squared_l2({0.1, 0.2, -0.3}),
                                           Regularizer::neg_entropy(), Regularizer::shifted_neg_entropy(0.3, 3),
                                           Regularizer::pnorm_squared(1.4)};
    for (const auto& r : regs) {
      const bool simplex = r.kind() == Regularizer::Kind::NegEntropy ||
                           r.kind() == Regularizer::Kind::ShiftedNegEntropy;
      auto point = [&] { return simplex ? rng.simplex_point(3) : rng.normal_vec(3); };
      for (int i = 0; i < 10000; ++i) {
        const Vector a = point(), b = point(), c = point();
        t.slack(1e-9 - three_point_residual(r, a, b, c), r.name() + " three-point");
        t.slack(bregman(r, a, b) + 1e-12, r.name() + " bregman");
        t.slack(strong_convexity_gap(r, a, b) + 1e-9, r.name() + " strong convexity");
      }
    }
    for (int i = 0; i < 10000; ++i) {
      t.slack(log_ratio_gap(rng.uniform(1e-8, 20), rng.uniform(1e-8, 20)) + 1e-12, "log lemma");
    }
    return t;
  });

  report(3, "dual feasibility of built certificates, injected faults detected", [] {
    Tally t;
    Rng rng(1003);
    for (int fam = 0; fam < 4; ++fam) {
      for (int i = 0; i < 1000; ++i) {
        const Family f = random_family(fam, rng, 40, 5);
        const Trace tr = run(f.scenario);
        const DualCertificate cert = build_certificate(tr, f.drift);
        const auto& costs = f.scenario.costs;
        const auto v = check_feasibility(cert, costs, 1e-8);
        t.expect(v.empty(), std::string(kFamilyNames[fam]) + " violation " + (v.empty() ? "" : v[0].id));
        if (i % 10 == 0 && cert.a.size() >= 2) {
          // Loosen one multiplier below its tight value.
          DualCertificate bad = cert;
          bad.a[rng.index(0, cert.a.size() - 2)] -= 0.1;
          t.expect(!check_feasibility(bad, costs, 1e-8).empty(), std::string(kFamilyNames[fam]) + " a-fault missed");
        }
        if (i % 25 == 0 && tr.horizon() >= 1) {
          // Corrupt one stored iterate and re-verify the trace.
          Trace bad = tr;
          auto& x = bad.steps[rng.index(0, tr.horizon() - 1)].x;
          x[rng.index(0, x.size() - 1)] += 1e-3;
          const Report rep = verify_trace(config_of(fam, f), bad, std::nullopt);
          t.expect(!rep.pass(), std::string(kFamilyNames[fam]) + " trace fault missed");
        }
      }
    }
    return t;
  });

  report(4, "weak duality against certified oracle bounds and grids", [] {
    Tally t;
    Rng rng(1004);
    for (int fam = 0; fam < 4; ++fam) {
      for (int i = 0; i < 200; ++i) {
        const bool small = i % 4 == 0;
        Family f = random_family(fam, rng, small ? 6 : 12, 3);
        if (fam == 2 && small) {  // the disc grid is 2-D
          const Vector k = f.scenario.body.center();
          const Vector k2{k[0], k.size() > 1 ? k[1] : k[0]};
          f.scenario.regularizer = Regularizer::centered_squared_l2(k2);
          f.scenario.body = Body::pball(NormSpec::of(2), k2, f.scenario.body.radius());
          for (auto& c : f.scenario.costs) c.resize(2, 0.3);
        }
        const Trace tr = run(f.scenario);
        const DualCertificate cert = build_certificate(tr, f.drift);
        const auto& costs = f.scenario.costs;
        const Body& body = tr.body;
        OracleResult o;
        if (fam == 0) {
          o = body.ball_norm() == NormSpec::of(2) ? offline_drifting_opt(costs, body, f.drift)
                                                  : offline_drifting_opt(costs, body, 0.0);
        } else if (fam == 1) {
          o = offline_drifting_opt(costs, body, f.drift);
        } else if (fam == 2) {
          o = offline_onela_opt(costs, body, NormSpec::of(2));
        } else {
          o = offline_onela_opt(costs, body, NormSpec::of(1), tr.alpha);
        }
        const double tol = 1e-6 * std::max(1.0, std::abs(o.lower_bound));
        t.slack(o.lower_bound - cert.objective + tol, std::string(kFamilyNames[fam]) + " objective above OPT");
        if (small) {
          const std::size_t n = body.dimension();
          double grid = o.value;
          if (fam == 1) grid = testsupport::grid_simplex_drift(costs, n, f.drift, n == 2 ? 100 : 20);
          if (fam == 3) grid = testsupport::grid_simplex_onela(costs, n, tr.alpha, n == 2 ? 100 : 20);
          if (fam == 2) grid = testsupport::grid_ball_onela(costs, body.center(), body.radius());
          t.slack(grid - cert.objective + tol, std::string(kFamilyNames[fam]) + " objective above grid");
        }
      }
    }
    return t;
  });

  report(5, "Theorem 3 at desk scale: k=(2,2), D=1, eps=1, eta=D", [] {
    Tally t;
    for (std::size_t T : {100, 1000}) {
      for (std::uint64_t seed : {1, 2, 3}) {
        ConfigMap m{{"preset", "thm3"}, {"T", std::to_string(T)}, {"seed", std::to_string(seed)}};
        const RunResult r = run_scenario(RunConfig::from_map(m));
        const double opt = r.report.oracle.lower_bound, S = r.trace.service, M = r.trace.movement;
        const double tol = 1e-6 * opt;
        const std::string tag = "T=" + std::to_string(T) + " seed=" + std::to_string(seed);
        t.slack(opt + 1.0 - S + tol, tag + " service");
        t.slack(1.0 * opt - M + tol, tag + " movement");
        t.slack(2.0 * opt + 1.0 - (S + M) + tol, tag + " combined");
        for (const char* name : {"thm3.service", "thm3.movement", "thm3.combined", "dual_feasibility"}) {
          const BoundCheck* c = r.report.find(name);
          t.expect(c && c->pass && !c->skipped, tag + " " + name);
        }
      }
    }
    return t;
  });

  report(6, "Theorem 2 drifting regret, n in {5,20}, L in {0,3,10}, eta in {0.01,0.1}", [] {
    Tally t;
    for (std::size_t n : {5, 20}) {
      for (double L : {0.0, 3.0, 10.0}) {
        for (double eta : {0.01, 0.1}) {
          for (bool oracle_path : {true, false}) {
            ConfigMap m{{"setting", "drift-expert"}, {"n", std::to_string(n)},
                        {"T", "2000"},              {"drift", std::to_string(L)},
                        {"eta", std::to_string(eta)}, {"cost-model", "switcher"},
                        {"period", std::to_string(2000 / (std::size_t(L) + 2))}};
            if (!oracle_path) {
              m["comparator"] = L > 0 ? "kswitch" : "constant";
              m["switches"] = std::to_string(std::size_t(L));
            }
            const RunResult r = run_scenario(RunConfig::from_map(m));
            const std::string tag = "n=" + std::to_string(n) + " L=" + std::to_string(L) + " eta=" + std::to_string(eta);
            for (const char* name : {"thm2", "thm2.regret", "dual_feasibility"}) {
              const BoundCheck* c = r.report.find(name);
              t.expect(c && !c->skipped, tag + " missing " + name);
              if (c) t.slack(c->slack + c->tolerance, tag + " " + name);
            }
          }
        }
      }
    }
    return t;
  });

  report(7, "Lemma 2 decomposition and second inequality on 2-ball runs", [] {
    Tally t;
    Rng rng(1007);
    for (int i = 0; i < 200; ++i) {
      const std::size_t n = rng.index(1, 4), T = rng.index(1, 80);
      const Vector origin(n, 0.0);
      const double D = rng.uniform(0.3, 2.0);
      Scenario s{Body::pball(NormSpec::of(2), origin, D), Regularizer::centered_squared_l2(origin),
                 rng.uniform(0.05, 1.5), Lookahead::Zero, costs_in(rng, T, n, -2, 2)};
      const Trace tr = run(s);
      std::vector<Vector> u;
      for (std::size_t j = 0; j < T; ++j) u.push_back(rng.ball_point(origin, D));
      const Lemma2Terms l = lemma2_decomposition(tr, u);
      const double scale = std::max({1.0, std::abs(l.lhs), std::abs(l.A), std::abs(l.B), std::abs(l.C)});
      t.slack(1e-7 * scale - l.residual, "part 1 residual");
      // B + C <= sum ||eta c_t||^2 - D sum ||grad R(y_t) - grad R(x_t)||.
      double energy = 0.0, clip = 0.0;
      for (const auto& st : tr.steps) {
        for (double c : st.c) energy += tr.eta * tr.eta * c * c;
        double d = 0.0;
        for (std::size_t j = 0; j < n; ++j) d += std::pow(st.y_gradient[j] - st.x[j], 2);
        clip += std::sqrt(d);
      }
      t.slack(energy - D * clip - (l.B + l.C) + 1e-7, "part 2");
    }
    return t;
  });

  report(8, "per-step chains: Claim 4, movement, dual increment, MTS movement", [] {
    Tally t;
    Rng rng(1008);
    for (int i = 0; i < 20; ++i) {
      ConfigMap m{{"preset", "thm3"}, {"T", std::to_string(50 + 50 * (i % 4))}, {"seed", std::to_string(i)}};
      if (i % 2) m["cost-model"] = "radial";
      const RunConfig cfg = RunConfig::from_map(m);
      const Trace tr = run(make_scenario(cfg));
      const DualCertificate cert = build_certificate(tr);
      const Vector k = tr.body.center();
      for (std::size_t s = 1; s <= tr.horizon(); ++s) {
        const Vector& c = tr.steps[s - 1].c;
        const double c2 = testsupport::pnorm(c, 2), c1 = testsupport::pnorm(c, 1);
        t.slack(c2 - cert.a[s] + 1e-9, "claim 4");
        t.slack(tr.eta * c2 - tr.steps[s - 1].movement + 1e-9, "movement");
        t.slack(testsupport::dotp(k, c) - 1.0 * cert.a[s] - 1.0 * c1 + 1e-9, "dual increment");
      }
    }
    for (int i = 0; i < 200; ++i) {
      const Family f = random_family(3, rng, 80, 6);
      const Trace tr = run(f.scenario);
      const DualCertificate cert = build_certificate(tr);
      const double n = double(tr.body.dimension()), theta = tr.regularizer.theta();
      for (std::size_t s = 1; s <= tr.horizon(); ++s) {
        t.slack(tr.eta * (1 + n * theta) * cert.a[s] - tr.steps[s - 1].movement / 2 + 1e-9, "MTS movement");
      }
    }
    return t;
  });

  report(9, "oracle equivalence with enumeration, closed forms and grids", [] {
    Tally t;
    Rng rng(1009);
    for (int i = 0; i < 1000; ++i) {
      const std::size_t n = rng.index(2, 8), T = rng.index(1, 30);
      const auto costs = costs_in(rng, T, n, -1, 1);
      t.expect(offline_fixed_opt(costs, Body::simplex(n)).value == testsupport::best_expert_value(costs, n),
               "simplex fixed optimum");
      const Vector k = rng.normal_vec(2);
      const double D = rng.uniform(0.2, 2);
      const auto c2 = costs_in(rng, T, 2, -1, 1);
      const FixedOpt f = offline_fixed_opt(c2, Body::pball(NormSpec::of(2), k, D));
      const Vector C = testsupport::column_sums(c2, 2);
      const double closed = testsupport::dotp(C, k) - D * testsupport::pnorm(C, 2);
      t.slack(1e-12 * std::max(1.0, std::abs(closed)) - std::abs(f.value - closed), "2-ball closed form");
      if (i % 50 == 0) t.slack(1e-4 - std::abs(f.value - testsupport::circle_min(C, k, D)), "2-ball grid");
    }
    for (std::size_t n : {2, 3}) {
      for (std::size_t T = 2; T <= 6; ++T) {
        const auto sc = costs_in(rng, T, n, -1, 1);
        const auto nn = costs_in(rng, T, n, 0, 1);
        const double L = rng.uniform(0.2, 1.5), alpha = rng.uniform(0.5, 2.0);
        const int m = n == 2 ? 100 : 20;
        t.slack(5e-2 - std::abs(offline_drifting_opt(sc, Body::simplex(n), L).value -
                                testsupport::grid_simplex_drift(sc, n, L, m)),
                "simplex drifting grid");
        t.slack(5e-2 - std::abs(offline_onela_opt(nn, Body::simplex(n), NormSpec::of(1), alpha).value -
                                testsupport::grid_simplex_onela(nn, n, alpha, m)),
                "simplex 1LA grid");
        if (n == 2) {
          const Vector k{2, 2};
          const Body ball = Body::pball(NormSpec::of(2), k, 1);
          t.slack(5e-2 - std::abs(offline_drifting_opt(sc, ball, L).value - testsupport::grid_ball_drift(sc, k, 1, L)),
                  "2-ball drifting grid");
          t.slack(5e-2 - std::abs(offline_onela_opt(nn, ball, NormSpec::of(2)).value -
                                  testsupport::grid_ball_onela(nn, k, 1)),
                  "2-ball 1LA grid");
        }
      }
    }
    return t;
  });

  report(10, "pipeline determinism and JSON round trips", [] {
    Tally t;
    for (const char* s : {"oco-pball", "drift-expert", "onela-2ball", "onela-mts"}) {
      for (std::uint64_t seed : {1, 2}) {
        const RunConfig cfg = RunConfig::from_map(
            {{"setting", s}, {"n", "3"}, {"T", "80"}, {"drift", "1"}, {"seed", std::to_string(seed)}});
        const RunResult a = run_scenario(cfg), b = run_scenario(cfg);
        const RunDocument da{cfg.to_map(), a.trace, a.certificate};
        const std::string ja = emit_run_document(da);
        t.expect(ja == emit_run_document({cfg.to_map(), b.trace, b.certificate}), std::string(s) + " bytes differ");
        t.expect(emit_csv(a.trace) == emit_csv(b.trace), std::string(s) + " csv differs");
        t.expect(parse_run_document(ja) == da, std::string(s) + " run document");
        t.expect(parse_trace_json(emit_json(a.trace)) == a.trace, std::string(s) + " trace");
        t.expect(parse_certificate_json(emit_json(a.certificate)) == a.certificate, std::string(s) + " certificate");
        t.expect(parse_report_json(emit_json(a.report)) == a.report, std::string(s) + " report");
      }
    }
    return t;
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
