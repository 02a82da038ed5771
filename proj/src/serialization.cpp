#include "driftbench/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "driftbench/errors.hpp"

namespace driftbench {

using nlohmann::json;

namespace {

// JSON has no inf/nan; those travel as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InvalidInput("expected a number, got " + j.dump());
}

json vec(const Vector& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Vector get_vec(const json& j) {
  Vector v;
  for (const auto& e : j) v.push_back(get_num(e));
  return v;
}

json norm_json(const NormSpec& n) { return n.is_infinite() ? json("inf") : json(n.p()); }

NormSpec get_norm(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return NormSpec::infinity();
  return NormSpec::of(get_num(j));
}

const json& at(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
  return *it;
}

json regularizer_json(const Regularizer& r) {
  switch (r.kind()) {
    case Regularizer::Kind::CenteredSquaredL2:
      return {{"kind", "centered-l2"}, {"center", vec(r.center())}};
    case Regularizer::Kind::NegEntropy:
      return {{"kind", "entropy"}, {"mass_bound", num(r.mass_bound())}};
    case Regularizer::Kind::ShiftedNegEntropy:
      return {{"kind", "shifted-entropy"}, {"theta", num(r.theta())}, {"dimension", r.dimension()}};
    case Regularizer::Kind::PNormSquared:
      return {{"kind", "pnorm-squared"}, {"p", num(r.exponent())}};
  }
  throw InternalError("regularizer_json: unreachable");
}

Regularizer get_regularizer(const json& j) {
  const auto kind = at(j, "kind").get<std::string>();
  if (kind == "centered-l2") return Regularizer::centered_squared_l2(get_vec(at(j, "center")));
  if (kind == "entropy") return Regularizer::neg_entropy(get_num(at(j, "mass_bound")));
  if (kind == "shifted-entropy") {
    return Regularizer::shifted_neg_entropy(get_num(at(j, "theta")), at(j, "dimension").get<std::size_t>());
  }
  if (kind == "pnorm-squared") return Regularizer::pnorm_squared(get_num(at(j, "p")));
  throw InvalidInput("unknown regularizer kind '" + kind + "'");
}

json body_json(const Body& b) {
  if (b.kind() == Body::Kind::Simplex) return {{"kind", "simplex"}, {"dimension", b.dimension()}};
  return {{"kind", "pball"}, {"p", norm_json(b.ball_norm())}, {"center", vec(b.center())},
          {"radius", num(b.radius())}};
}

Body get_body(const json& j) {
  const auto kind = at(j, "kind").get<std::string>();
  if (kind == "simplex") return Body::simplex(at(j, "dimension").get<std::size_t>());
  if (kind == "pball") return Body::pball(get_norm(at(j, "p")), get_vec(at(j, "center")), get_num(at(j, "radius")));
  throw InvalidInput("unknown body kind '" + kind + "'");
}

json trace_json(const Trace& t) {
  json j;
  j["schema"] = kTraceSchema;
  j["regularizer"] = regularizer_json(t.regularizer);
  j["body"] = body_json(t.body);
  j["eta"] = num(t.eta);
  j["lookahead"] = to_string(t.lookahead);
  j["movement_norm"] = norm_json(t.movement_norm);
  j["epsilon"] = num(t.epsilon);
  j["alpha"] = num(t.alpha);
  j["x0"] = vec(t.x0);
  j["service"] = num(t.service);
  j["movement"] = num(t.movement);
  json it = json::array();
  for (const auto& s : t.steps) {
    it.push_back({{"t", s.t},
                  {"c", vec(s.c)},
                  {"x", vec(s.x)},
                  {"y_gradient", vec(s.y_gradient)},
                  {"lambda", num(s.lambda)},
                  {"kappa", vec(s.kappa)},
                  {"service", num(s.service)},
                  {"movement", num(s.movement)}});
  }
  j["iterations"] = std::move(it);
  return j;
}

Trace get_trace(const json& j) {
  if (at(j, "schema").get<std::string>() != kTraceSchema) {
    throw InvalidInput("unsupported trace schema " + at(j, "schema").dump());
  }
  Trace t{.regularizer = get_regularizer(at(j, "regularizer")), .body = get_body(at(j, "body"))};
  t.eta = get_num(at(j, "eta"));
  t.lookahead = lookahead_from_string(at(j, "lookahead").get<std::string>());
  t.movement_norm = get_norm(at(j, "movement_norm"));
  t.epsilon = get_num(at(j, "epsilon"));
  t.alpha = get_num(at(j, "alpha"));
  t.x0 = get_vec(at(j, "x0"));
  t.service = get_num(at(j, "service"));
  t.movement = get_num(at(j, "movement"));
  for (const auto& e : at(j, "iterations")) {
    StepRecord s;
    s.t = at(e, "t").get<std::size_t>();
    s.c = get_vec(at(e, "c"));
    s.x = get_vec(at(e, "x"));
    s.y_gradient = get_vec(at(e, "y_gradient"));
    s.lambda = get_num(at(e, "lambda"));
    s.kappa = get_vec(at(e, "kappa"));
    s.service = get_num(at(e, "service"));
    s.movement = get_num(at(e, "movement"));
    t.steps.push_back(std::move(s));
  }
  return t;
}

json cert_json(const DualCertificate& c) {
  json b = json::array();
  for (const auto& row : c.b) b.push_back(vec(row));
  return {{"program", to_string(c.program)},
          {"a", vec(c.a)},
          {"b", std::move(b)},
          {"alpha", num(c.alpha)},
          {"eta", num(c.eta)},
          {"terminal_a", num(c.terminal_a)},
          {"objective", num(c.objective)},
          {"radius", num(c.radius)},
          {"center", vec(c.center)},
          {"dual_norm", norm_json(c.dual_norm)},
          {"drift_budget", num(c.drift_budget)},
          {"theta", num(c.theta)},
          {"a0_convention", c.a0_convention}};
}

DualCertificate get_cert(const json& j) {
  DualCertificate c;
  c.program = program_from_string(at(j, "program").get<std::string>());
  c.a = get_vec(at(j, "a"));
  for (const auto& row : at(j, "b")) c.b.push_back(get_vec(row));
  c.alpha = get_num(at(j, "alpha"));
  c.eta = get_num(at(j, "eta"));
  c.terminal_a = get_num(at(j, "terminal_a"));
  c.objective = get_num(at(j, "objective"));
  c.radius = get_num(at(j, "radius"));
  c.center = get_vec(at(j, "center"));
  c.dual_norm = get_norm(at(j, "dual_norm"));
  c.drift_budget = get_num(at(j, "drift_budget"));
  c.theta = get_num(at(j, "theta"));
  c.a0_convention = at(j, "a0_convention").get<std::string>();
  return c;
}

json report_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"lhs", num(c.lhs)},
                      {"rhs", num(c.rhs)},
                      {"slack", num(c.slack)},
                      {"tolerance", num(c.tolerance)},
                      {"pass", c.pass},
                      {"informational", c.informational},
                      {"skipped", c.skipped}});
  }
  json sample = json::array();
  for (const auto& v : r.feasibility.sample) {
    sample.push_back({{"id", v.id}, {"t", v.t}, {"i", v.i}, {"magnitude", num(v.magnitude)}});
  }
  return {{"schema", kReportSchema},
          {"setting", r.setting},
          {"seed", r.seed},
          {"version", r.version},
          {"pass", r.pass()},
          {"checks", std::move(checks)},
          {"feasibility",
           {{"violations", r.feasibility.violations}, {"worst", num(r.feasibility.worst)}, {"sample", sample}}},
          {"oracle",
           {{"available", r.oracle.available},
            {"method", r.oracle.method},
            {"value", num(r.oracle.value)},
            {"lower_bound", num(r.oracle.lower_bound)},
            {"residual", num(r.oracle.residual)},
            {"converged", r.oracle.converged},
            {"iterations", r.oracle.iterations}}},
          {"timings",
           {{"run_seconds", num(r.run_seconds)},
            {"certificate_seconds", num(r.certificate_seconds)},
            {"oracle_seconds", num(r.oracle_seconds)}}}};
}

Report get_report(const json& j) {
  if (at(j, "schema").get<std::string>() != kReportSchema) {
    throw InvalidInput("unsupported report schema " + at(j, "schema").dump());
  }
  Report r;
  r.setting = at(j, "setting").get<std::string>();
  r.seed = at(j, "seed").get<std::uint64_t>();
  r.version = at(j, "version").get<std::string>();
  for (const auto& e : at(j, "checks")) {
    BoundCheck c;
    c.name = at(e, "name").get<std::string>();
    c.lhs = get_num(at(e, "lhs"));
    c.rhs = get_num(at(e, "rhs"));
    c.slack = get_num(at(e, "slack"));
    c.tolerance = get_num(at(e, "tolerance"));
    c.pass = at(e, "pass").get<bool>();
    c.informational = at(e, "informational").get<bool>();
    c.skipped = at(e, "skipped").get<bool>();
    r.checks.push_back(std::move(c));
  }
  const json& f = at(j, "feasibility");
  r.feasibility.violations = at(f, "violations").get<std::size_t>();
  r.feasibility.worst = get_num(at(f, "worst"));
  for (const auto& e : at(f, "sample")) {
    r.feasibility.sample.push_back(
        {at(e, "id").get<std::string>(), at(e, "t").get<std::size_t>(), at(e, "i").get<std::size_t>(),
         get_num(at(e, "magnitude"))});
  }
  const json& o = at(j, "oracle");
  r.oracle.available = at(o, "available").get<bool>();
  r.oracle.method = at(o, "method").get<std::string>();
  r.oracle.value = get_num(at(o, "value"));
  r.oracle.lower_bound = get_num(at(o, "lower_bound"));
  r.oracle.residual = get_num(at(o, "residual"));
  r.oracle.converged = at(o, "converged").get<bool>();
  r.oracle.iterations = at(o, "iterations").get<std::size_t>();
  const json& tm = at(j, "timings");
  r.run_seconds = get_num(at(tm, "run_seconds"));
  r.certificate_seconds = get_num(at(tm, "certificate_seconds"));
  r.oracle_seconds = get_num(at(tm, "oracle_seconds"));
  return r;
}

template <class F>
auto parse_with(const std::string& text, const char* what, F f) {
  try {
    return f(json::parse(text));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Format format_from_string(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw InvalidInput("unknown format '" + s + "' (json or csv)");
}

std::string emit_json(const Trace& trace) { return trace_json(trace).dump(1) + "\n"; }
std::string emit_json(const DualCertificate& cert) { return cert_json(cert).dump(1) + "\n"; }
std::string emit_json(const Report& report) { return report_json(report).dump(1) + "\n"; }

Trace parse_trace_json(const std::string& text) { return parse_with(text, "trace", get_trace); }
DualCertificate parse_certificate_json(const std::string& text) {
  return parse_with(text, "certificate", get_cert);
}
Report parse_report_json(const std::string& text) { return parse_with(text, "report", get_report); }

std::string emit_csv(const Trace& trace) {
  const std::size_t n = trace.x0.size();
  std::ostringstream out;
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",c_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",lambda,service,movement\n";
  for (const auto& s : trace.steps) {
    out << s.t;
    for (double v : s.c) out << ',' << csv_num(v);
    for (double v : s.x) out << ',' << csv_num(v);
    out << ',' << csv_num(s.lambda) << ',' << csv_num(s.service) << ',' << csv_num(s.movement) << '\n';
  }
  return out.str();
}

std::string emit_csv(const Report& report) {
  std::ostringstream out;
  out << "name,lhs,rhs,slack,tolerance,pass,informational,skipped\n";
  for (const auto& c : report.checks) {
    out << c.name << ',' << csv_num(c.lhs) << ',' << csv_num(c.rhs) << ',' << csv_num(c.slack) << ','
        << csv_num(c.tolerance) << ',' << c.pass << ',' << c.informational << ',' << c.skipped << '\n';
  }
  return out.str();
}

std::string emit_run_document(const RunDocument& doc) {
  json j = trace_json(doc.trace);
  j["config"] = doc.config;
  if (doc.certificate) j["certificate"] = cert_json(*doc.certificate);
  return j.dump(1) + "\n";
}

RunDocument parse_run_document(const std::string& text) {
  return parse_with(text, "trace", [](const json& j) {
    RunDocument d{.config = {}, .trace = get_trace(j), .certificate = std::nullopt};
    if (auto it = j.find("config"); it != j.end()) d.config = it->get<ConfigMap>();
    if (auto it = j.find("certificate"); it != j.end()) d.certificate = get_cert(*it);
    return d;
  });
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace driftbench
