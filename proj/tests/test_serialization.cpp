#include <doctest.h>

#include <limits>
#include <sstream>

#include "driftbench/errors.hpp"
#include "driftbench/harness.hpp"
#include "driftbench/serialization.hpp"

using namespace driftbench;

namespace {

RunConfig config_for(Setting s, std::size_t T, std::uint64_t seed) {
  ConfigMap m{{"setting", to_string(s)}, {"T", std::to_string(T)}, {"seed", std::to_string(seed)}};
  if (s == Setting::DriftExpert || s == Setting::OnelaMts) m["n"] = "4";
  if (s == Setting::DriftExpert || s == Setting::OcoPBall) m["drift"] = "1.5";
  if (s == Setting::OcoPBall) m["cost-low"] = "-1";
  return RunConfig::from_map(m);
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("empty trace JSON") {
  const RunResult r = run_scenario(config_for(Setting::DriftExpert, 0, 1));
  const std::string j = emit_json(r.trace);
  CHECK(j.find("\"schema\": \"driftbench-trace/1\"") != std::string::npos);
  CHECK(j.find("\"iterations\": []") != std::string::npos);
  CHECK(parse_trace_json(j) == r.trace);
}

TEST_CASE("trace CSV layout") {
  const RunResult one = run_scenario(config_for(Setting::OnelaTwoBall, 1, 1));
  const std::string csv = emit_csv(one.trace);
  CHECK(count_lines(csv) == 2);
  CHECK(csv.rfind("t,c_1,c_2,x_1,x_2,lambda,service,movement\n", 0) == 0);
  const RunResult many = run_scenario(config_for(Setting::DriftExpert, 5, 1));
  CHECK(count_lines(emit_csv(many.trace)) == 6);
  CHECK(emit_csv(many.trace).rfind("t,c_1,c_2,c_3,c_4,x_1,x_2,x_3,x_4,lambda,service,movement\n", 0) == 0);
}

TEST_CASE("JSON round trips for every setting") {
  for (auto s : {Setting::OcoPBall, Setting::DriftExpert, Setting::OnelaTwoBall, Setting::OnelaMts}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const RunConfig cfg = config_for(s, 25, seed);
      const RunResult r = run_scenario(cfg);
      CHECK(parse_trace_json(emit_json(r.trace)) == r.trace);
      CHECK(parse_certificate_json(emit_json(r.certificate)) == r.certificate);
      CHECK(parse_report_json(emit_json(r.report)) == r.report);
      const RunDocument doc{cfg.to_map(), r.trace, r.certificate};
      CHECK(parse_run_document(emit_run_document(doc)) == doc);
      CHECK(RunConfig::from_map(parse_run_document(emit_run_document(doc)).config).to_map() == cfg.to_map());
    }
  }
}

TEST_CASE("non-finite numbers survive a report round trip") {
  Report r;
  r.setting = "oco-pball";
  r.checks.push_back(make_check("x", std::numeric_limits<double>::infinity(), 1.0, 0.0));
  r.checks.push_back(make_check("y", -std::numeric_limits<double>::infinity(), 1.0, 0.0));
  const Report back = parse_report_json(emit_json(r));
  CHECK(back.checks[0].lhs == std::numeric_limits<double>::infinity());
  CHECK(back.checks[1].lhs == -std::numeric_limits<double>::infinity());
  CHECK(back == r);
}

TEST_CASE("report CSV") {
  const RunResult r = run_scenario(config_for(Setting::OnelaTwoBall, 10, 4));
  const std::string csv = emit_csv(r.report);
  CHECK(csv.rfind("name,lhs,rhs,slack,tolerance,pass,informational,skipped\n", 0) == 0);
  CHECK(count_lines(csv) == r.report.checks.size() + 1);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(parse_trace_json("{"), InvalidInput);
  CHECK_THROWS_AS(parse_trace_json("{\"schema\": \"other/2\"}"), InvalidInput);
  CHECK_THROWS_AS(parse_report_json("[]"), InvalidInput);
  CHECK_THROWS_AS(format_from_string("xml"), InvalidInput);
}
