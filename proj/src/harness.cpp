#include "driftbench/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "driftbench/errors.hpp"

namespace driftbench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double get_double(const ConfigMap& m, const std::string& key, double fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  const std::string& s = it->second;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidInput("config key '" + key + "': expected a number, got '" + s + "'");
  }
  return v;
}

std::uint64_t get_count(const ConfigMap& m, const std::string& key, std::uint64_t fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  const std::string& s = it->second;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("config key '" + key + "': expected a nonnegative integer, got '" + s + "'");
  }
  return v;
}

bool get_bool(const ConfigMap& m, const std::string& key, bool fallback) {
  auto it = m.find(key);
  if (it == m.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw InvalidInput("config key '" + key + "': expected true or false, got '" + it->second + "'");
}

Vector get_vector(const ConfigMap& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end() || trim(it->second).empty()) return {};
  Vector out;
  std::stringstream ss(it->second);
  std::string item;
  std::size_t idx = 0;
  while (std::getline(ss, item, ',')) {
    ConfigMap one{{key + "[" + std::to_string(idx++) + "]", trim(item)}};
    out.push_back(get_double(one, one.begin()->first, 0.0));
  }
  return out;
}

std::string join(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

BoundCheck failed(std::string name) {
  return make_check(std::move(name), std::numeric_limits<double>::max(), 0.0, 0.0);
}

}  // namespace

std::string to_string(Setting s) {
  switch (s) {
    case Setting::OcoPBall: return "oco-pball";
    case Setting::DriftExpert: return "drift-expert";
    case Setting::OnelaTwoBall: return "onela-2ball";
    case Setting::OnelaMts: return "onela-mts";
  }
  return "?";
}

Setting setting_from_string(const std::string& s) {
  if (s == "oco-pball") return Setting::OcoPBall;
  if (s == "drift-expert") return Setting::DriftExpert;
  if (s == "onela-2ball") return Setting::OnelaTwoBall;
  if (s == "onela-mts") return Setting::OnelaMts;
  throw InvalidInput("config key 'setting': unknown setting '" + s + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "setting", "n", "T", "eta", "alpha", "drift", "radius", "p", "center", "epsilon",
      "cost-model", "cost-low", "cost-high", "period", "spike-round", "magnitude", "cost-file",
      "nonneg", "seed", "tol", "feas-tol", "comparator", "switches", "max-iterations",
      "solver-tol", "preset"};
  return keys;
}

ConfigMap preset(const std::string& name) {
  if (name == "thm3" || name == "thm3-demo") {
    return {{"setting", "onela-2ball"}, {"n", "2"},       {"T", "500"},
            {"center", "2,2"},          {"radius", "1"},  {"epsilon", "1"},
            {"eta", "1"},               {"cost-model", "uniform"}};
  }
  if (name == "thm2") {
    return {{"setting", "drift-expert"}, {"n", "5"}, {"T", "2000"}, {"drift", "3"},
            {"eta", "0.1"}, {"cost-model", "switcher"}, {"period", "200"}};
  }
  throw InvalidInput("config key 'preset': unknown preset '" + name + "'");
}

ConfigMap parse_config_text(const std::string& text, const std::string& source) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  const auto& keys = config_keys();
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw InvalidInput(source + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

ConfigMap merge(const ConfigMap& base, const ConfigMap& over) {
  ConfigMap out = base;
  for (const auto& [k, v] : over) out[k] = v;
  return out;
}

ConfigMap RunConfig::to_map() const {
  ConfigMap m;
  m["setting"] = to_string(setting);
  m["n"] = std::to_string(n);
  m["T"] = std::to_string(T);
  if (eta) m["eta"] = fmt(*eta);
  if (alpha) m["alpha"] = fmt(*alpha);
  m["drift"] = fmt(drift);
  m["radius"] = fmt(radius);
  m["p"] = fmt(p);
  if (!center.empty()) m["center"] = join(center);
  m["epsilon"] = fmt(epsilon);
  m["cost-model"] = to_string(cost.kind);
  m["cost-low"] = fmt(cost.low);
  m["cost-high"] = fmt(cost.high);
  m["period"] = std::to_string(cost.period);
  m["spike-round"] = std::to_string(cost.spike_round);
  m["magnitude"] = fmt(cost.magnitude);
  if (!cost.path.empty()) m["cost-file"] = cost.path;
  m["nonneg"] = cost.nonneg ? "true" : "false";
  m["seed"] = std::to_string(seed);
  m["tol"] = fmt(tolerance);
  m["feas-tol"] = fmt(feasibility_tolerance);
  m["comparator"] = oracle_comparator ? "oracle" : to_string(comparator.kind);
  m["switches"] = std::to_string(comparator.switches);
  m["max-iterations"] = std::to_string(solver.max_iterations);
  m["solver-tol"] = fmt(solver.relative_tolerance);
  return m;
}

RunConfig RunConfig::from_map(const ConfigMap& raw) {
  const auto& keys = config_keys();
  for (const auto& [k, v] : raw) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw InvalidInput("config: unknown key '" + k + "'");
    }
  }
  ConfigMap m = raw;
  if (auto it = raw.find("preset"); it != raw.end()) {
    m = merge(preset(it->second), raw);
    m.erase("preset");
  }
  RunConfig c;
  if (auto it = m.find("setting"); it != m.end()) c.setting = setting_from_string(it->second);
  c.n = get_count(m, "n", c.n);
  c.T = get_count(m, "T", c.T);
  if (m.count("eta")) c.eta = get_double(m, "eta", 0.0);
  if (m.count("alpha")) c.alpha = get_double(m, "alpha", 0.0);
  c.drift = get_double(m, "drift", c.drift);
  c.radius = get_double(m, "radius", c.radius);
  c.p = get_double(m, "p", c.p);
  c.center = get_vector(m, "center");
  c.epsilon = get_double(m, "epsilon", c.epsilon);
  const bool one_la = c.setting == Setting::OnelaTwoBall || c.setting == Setting::OnelaMts;
  c.cost.nonneg = one_la;
  if (auto it = m.find("cost-model"); it != m.end()) c.cost.kind = cost_kind_from_string(it->second);
  c.cost.low = get_double(m, "cost-low", c.cost.low);
  c.cost.high = get_double(m, "cost-high", c.cost.high);
  c.cost.period = get_count(m, "period", c.cost.period);
  c.cost.spike_round = get_count(m, "spike-round", c.cost.spike_round);
  c.cost.magnitude = get_double(m, "magnitude", c.cost.magnitude);
  if (auto it = m.find("cost-file"); it != m.end()) c.cost.path = it->second;
  c.cost.nonneg = get_bool(m, "nonneg", c.cost.nonneg);
  c.seed = get_count(m, "seed", c.seed);
  c.cost.seed = c.seed;
  c.tolerance = get_double(m, "tol", c.tolerance);
  c.feasibility_tolerance = get_double(m, "feas-tol", c.feasibility_tolerance);
  if (auto it = m.find("comparator"); it != m.end()) {
    c.oracle_comparator = it->second == "oracle";
    if (!c.oracle_comparator) c.comparator.kind = comparator_kind_from_string(it->second);
  }
  c.comparator.switches = get_count(m, "switches", c.comparator.switches);
  c.solver.max_iterations = get_count(m, "max-iterations", c.solver.max_iterations);
  c.solver.relative_tolerance = get_double(m, "solver-tol", c.solver.relative_tolerance);

  if (c.n == 0) throw InvalidInput("config key 'n': must be >= 1");
  if (c.eta && !(*c.eta > 0.0)) throw InvalidInput("config key 'eta': must be > 0");
  if (c.alpha && !(*c.alpha > 0.0)) throw InvalidInput("config key 'alpha': must be > 0");
  if (c.drift < 0.0) throw InvalidInput("config key 'drift': must be >= 0");
  if (!(c.radius > 0.0)) throw InvalidInput("config key 'radius': must be > 0");
  if (c.epsilon < 0.0) throw InvalidInput("config key 'epsilon': must be >= 0");
  if (!c.center.empty() && c.center.size() != c.n) {
    throw InvalidInput("config key 'center': expected " + std::to_string(c.n) + " entries");
  }
  if (one_la && !c.cost.nonneg) throw InvalidInput("config key 'nonneg': 1LA settings need nonnegative costs");
  switch (c.setting) {
    case Setting::OcoPBall:
      if (!(c.p > 1.0 && c.p <= 2.0)) throw InvalidInput("config key 'p': must lie in (1, 2]");
      if (c.p != 2.0 && std::any_of(c.center.begin(), c.center.end(), [](double v) { return v != 0.0; })) {
        throw InvalidInput("config key 'center': p != 2 needs the origin");
      }
      break;
    case Setting::OnelaTwoBall: {
      if (c.p != 2.0) throw InvalidInput("config key 'p': onela-2ball uses p = 2");
      const Vector k = c.resolved_center();
      const double kmin = *std::min_element(k.begin(), k.end());
      if (kmin < c.radius + c.epsilon) {
        throw InvalidInput("config key 'center': need min_i k_i >= radius + epsilon");
      }
      break;
    }
    case Setting::DriftExpert:
    case Setting::OnelaMts:
      if (c.n < 2) throw InvalidInput("config key 'n': simplex settings need n >= 2");
      break;
  }
  return c;
}

double RunConfig::resolved_eta() const {
  if (eta) return *eta;
  switch (setting) {
    case Setting::OcoPBall: return radius / std::sqrt(static_cast<double>(std::max<std::size_t>(T, 1)));
    case Setting::OnelaTwoBall: return radius;
    case Setting::DriftExpert:
    case Setting::OnelaMts: return 0.1;
  }
  return 0.1;
}

double RunConfig::resolved_alpha() const {
  if (alpha) return *alpha;
  if (setting == Setting::DriftExpert) return std::log(static_cast<double>(n)) / resolved_eta();
  if (setting == Setting::OnelaMts) return 1.0;
  return 0.0;
}

Vector RunConfig::resolved_center() const {
  if (!center.empty()) return center;
  if (setting == Setting::OnelaTwoBall) return Vector(n, radius + epsilon);
  return Vector(n, 0.0);
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return c.informational || c.skipped || c.pass; });
}

const BoundCheck* Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Scenario make_scenario(const RunConfig& cfg) {
  const double eta = cfg.resolved_eta();
  const double alpha = cfg.resolved_alpha();
  const Vector k = cfg.resolved_center();
  std::vector<Vector> costs = gen_costs(cfg.cost, cfg.T, cfg.n);
  switch (cfg.setting) {
    case Setting::OcoPBall: {
      Body body = Body::pball(NormSpec::of(cfg.p), k, cfg.radius);
      Regularizer r = cfg.p == 2.0 ? Regularizer::centered_squared_l2(k) : Regularizer::pnorm_squared(cfg.p);
      return Scenario{body, r, eta, Lookahead::Zero, std::move(costs), std::nullopt, NormSpec::of(cfg.p),
                      cfg.epsilon, 0.0};
    }
    case Setting::DriftExpert:
      return Scenario{Body::simplex(cfg.n), Regularizer::shifted_neg_entropy(shift_for(eta, alpha), cfg.n),
                      eta, Lookahead::Zero, std::move(costs), std::nullopt, NormSpec::of(1.0), 0.0, alpha};
    case Setting::OnelaTwoBall:
      return Scenario{Body::pball(NormSpec::of(2.0), k, cfg.radius), Regularizer::centered_squared_l2(k), eta,
                      Lookahead::One, std::move(costs), std::nullopt, NormSpec::of(2.0), cfg.epsilon, 0.0};
    case Setting::OnelaMts:
      return Scenario{Body::simplex(cfg.n), Regularizer::shifted_neg_entropy(shift_for(eta, alpha), cfg.n),
                      eta, Lookahead::One, std::move(costs), std::nullopt, NormSpec::of(1.0), 0.0, alpha};
  }
  throw InternalError("make_scenario: unreachable");
}

std::optional<OracleResult> solve_offline(const RunConfig& cfg, const std::vector<Vector>& costs,
                                          const Body& body) {
  std::optional<OracleResult> opt;
  try {
    switch (cfg.setting) {
      case Setting::OcoPBall:
        if (cfg.drift == 0.0) {
          const FixedOpt f = offline_fixed_opt(costs, body);
          OracleResult r;
          r.method = "closed-form";
          r.path = make_path(body, std::vector<Vector>(costs.size(), f.u));
          r.value = r.lower_bound = f.value;
          opt = r;
        } else {
          opt = offline_drifting_opt(costs, body, cfg.drift, cfg.solver);
        }
        break;
      case Setting::DriftExpert:
        opt = offline_drifting_opt(costs, body, cfg.drift, cfg.solver);
        break;
      case Setting::OnelaTwoBall:
        opt = offline_onela_opt(costs, body, NormSpec::of(2.0), 1.0, cfg.solver);
        break;
      case Setting::OnelaMts:
        opt = offline_onela_opt(costs, body, NormSpec::of(1.0), cfg.resolved_alpha(), cfg.solver);
        break;
    }
  } catch (const InvalidInput&) {
    opt.reset();
  } catch (const NumericError&) {
    opt.reset();
  }
  return opt;
}

Report evaluate(const RunConfig& cfg, const Trace& trace, const DualCertificate& cert) {
  Report rep;
  rep.setting = to_string(cfg.setting);
  rep.seed = cfg.seed;
  const std::vector<Vector> costs = trace.costs();

  const std::vector<Violation> viol = check_feasibility(cert, costs, cfg.feasibility_tolerance);
  rep.feasibility.violations = viol.size();
  for (const auto& v : viol) rep.feasibility.worst = std::max(rep.feasibility.worst, v.magnitude);
  for (std::size_t i = 0; i < std::min<std::size_t>(viol.size(), 8); ++i) rep.feasibility.sample.push_back(viol[i]);
  rep.checks.push_back(make_check("dual_feasibility", static_cast<double>(viol.size()), 0.0, 0.0));

  OracleValues ov;
  const auto t0 = Clock::now();
  const std::optional<OracleResult> opt = solve_offline(cfg, costs, trace.body);
  rep.oracle_seconds = seconds_since(t0);
  if (opt) {
    rep.oracle = {true, opt->method, opt->value, opt->lower_bound, opt->residual, opt->converged, opt->iterations};
    ov.opt_value = opt->value;
    ov.opt_lower = opt->lower_bound;
  }
  const bool zero_la = cfg.setting == Setting::OcoPBall || cfg.setting == Setting::DriftExpert;
  if (zero_la) {
    if (cfg.oracle_comparator && opt) {
      ov.comparator = opt->path.u;
    } else if (!cfg.oracle_comparator) {
      ov.comparator = gen_comparator_path(cfg.comparator, trace.body, cfg.drift, trace.horizon(), cfg.seed + 1).u;
    }
  }
  BoundParams bp;
  bp.tolerance = cfg.tolerance;
  for (auto& c : theorem_bound_report(trace, cert, ov, bp)) rep.checks.push_back(std::move(c));
  return rep;
}

RunResult run_scenario(const RunConfig& cfg) {
  Scenario s = [&] {
    try {
      return make_scenario(cfg);
    } catch (const Error& e) {
      throw Error(std::string("stage scenario: ") + e.what());
    }
  }();
  auto t0 = Clock::now();
  Trace trace = [&] {
    try {
      return run(s);
    } catch (const Error& e) {
      throw Error(std::string("stage run: ") + e.what());
    }
  }();
  const double run_s = seconds_since(t0);
  t0 = Clock::now();
  DualCertificate cert = [&] {
    try {
      return build_certificate(trace, cfg.drift);
    } catch (const Error& e) {
      throw Error(std::string("stage certificate: ") + e.what());
    }
  }();
  const double cert_s = seconds_since(t0);
  Report rep = [&] {
    try {
      return evaluate(cfg, trace, cert);
    } catch (const Error& e) {
      throw Error(std::string("stage report: ") + e.what());
    }
  }();
  rep.run_seconds = run_s;
  rep.certificate_seconds = cert_s;
  return {std::move(trace), std::move(cert), std::move(rep)};
}

namespace {

double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::max();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double certificate_difference(const DualCertificate& x, const DualCertificate& y) {
  if (x.program != y.program || x.a.size() != y.a.size() || x.b.size() != y.b.size()) {
    return std::numeric_limits<double>::max();
  }
  double m = max_abs_diff(x.a, y.a);
  for (std::size_t t = 0; t < x.b.size(); ++t) m = std::max(m, max_abs_diff(x.b[t], y.b[t]));
  m = std::max({m, std::abs(x.objective - y.objective), std::abs(x.terminal_a - y.terminal_a),
                std::abs(x.alpha - y.alpha)});
  return m;
}

// Claim 1 / complementary slackness of one stored projection.
double projection_violation(const Trace& trace, const StepRecord& s) {
  const Body& body = trace.body;
  const Vector gx = trace.regularizer.gradient(s.x);
  double worst = 0.0;
  if (body.kind() == Body::Kind::Simplex) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double d = s.y_gradient[i] - gx[i];
      worst = std::max(worst, d - s.lambda);
      if (s.x[i] > 1e-9) worst = std::max(worst, std::abs(d - s.lambda));
    }
    return worst;
  }
  // Ball: the stored point must be the projection of the stored mirror point.
  const ProjectionResult p = project_gradient(trace.regularizer, body, s.y_gradient);
  worst = std::max(max_abs_diff(p.x, s.x), std::abs(p.lambda - s.lambda));
  if (s.lambda > 1e-9) {
    worst = std::max(worst, std::abs(norm(subtract(s.x, body.center()), body.ball_norm()) - body.radius()));
  }
  return worst;
}

}  // namespace

Report verify_trace(const RunConfig& cfg, const Trace& trace,
                    const std::optional<DualCertificate>& stored) {
  const double tol = cfg.tolerance;
  std::vector<BoundCheck> pre;

  double rec = 0.0, proj = 0.0, feas = 0.0, totals = 0.0;
  bool broken = false;
  try {
    double service = 0.0, movement = 0.0;
    for (std::size_t t = 1; t <= trace.horizon(); ++t) {
      const StepRecord& s = trace.steps[t - 1];
      const Vector& prev = trace.x(t - 1);
      const OmdStepResult r = omd_step(trace.regularizer, trace.body, trace.eta, prev, s.c);
      rec = std::max({rec, max_abs_diff(r.y_gradient, s.y_gradient), max_abs_diff(r.projection.x, s.x)});
      proj = std::max(proj, projection_violation(trace, s));
      feas = std::max(feas, trace.body.infeasibility(s.x));
      const double sv = dot(s.c, trace.lookahead == Lookahead::Zero ? prev : s.x);
      const double mv = norm(subtract(s.x, prev), trace.movement_norm);
      totals = std::max({totals, std::abs(sv - s.service), std::abs(mv - s.movement)});
      service += s.service;
      movement += s.movement;
    }
    feas = std::max(feas, trace.body.infeasibility(trace.x0));
    totals = std::max({totals, std::abs(service - trace.service), std::abs(movement - trace.movement)});
  } catch (const Error&) {
    broken = true;
  }
  if (broken) {
    pre.push_back(failed("omd_recurrence"));
  } else {
    pre.push_back(make_check("omd_recurrence", rec, 0.0, tol));
    pre.push_back(make_check("projection_kkt", proj, 0.0, tol));
    pre.push_back(make_check("primal_feasibility", feas, 0.0, tol));
    pre.push_back(make_check("trace_totals", totals, 0.0, tol * std::max(1.0, std::abs(trace.service))));
  }

  Report rep;
  try {
    const DualCertificate cert = build_certificate(trace, cfg.drift);
    if (stored) pre.push_back(make_check("certificate_match", certificate_difference(cert, *stored), 0.0, tol));
    rep = evaluate(cfg, trace, stored ? *stored : cert);
  } catch (const Error&) {
    rep.setting = to_string(cfg.setting);
    rep.seed = cfg.seed;
    pre.push_back(failed("evaluation"));
  }
  rep.checks.insert(rep.checks.begin(), pre.begin(), pre.end());
  return rep;
}

}  // namespace driftbench
