#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/dual_certificates.hpp"
#include "driftbench/omd_engine.hpp"
#include "driftbench/oracles.hpp"

namespace driftbench {

inline constexpr const char* kVersion = "driftbench 1.0.0";

enum class Setting { OcoPBall, DriftExpert, OnelaTwoBall, OnelaMts };

std::string to_string(Setting s);
Setting setting_from_string(const std::string& s);

/// Flat key/value configuration as read from a file or flags.
using ConfigMap = std::map<std::string, std::string>;

/// Keys accepted in a ConfigMap.
const std::vector<std::string>& config_keys();

/// Values a named preset contributes ("thm2", "thm3", "thm3-demo").
ConfigMap preset(const std::string& name);

/// Parses `key = value` lines; '#' starts a comment.
ConfigMap parse_config_text(const std::string& text, const std::string& source = "<config>");
ConfigMap read_config_file(const std::string& path);

/// later entries win
ConfigMap merge(const ConfigMap& base, const ConfigMap& over);

struct RunConfig {
  Setting setting = Setting::DriftExpert;
  std::size_t n = 2;
  std::size_t T = 100;
  /// Left empty, each setting picks its tuned value: oco-pball D/sqrt(T),
  /// drift-expert 0.1, onela-2ball D, onela-mts 0.1.
  std::optional<double> eta;
  /// Drift-expert default ln(n)/eta; onela-mts default 1.
  std::optional<double> alpha;
  double drift = 0.0;
  double radius = 1.0;
  double p = 2.0;
  /// Empty: origin (oco-pball) or (D + epsilon) * 1 (onela-2ball).
  Vector center;
  double epsilon = 1.0;
  CostModel cost;
  ComparatorSpec comparator;
  /// true when the comparator is chosen by the offline oracle.
  bool oracle_comparator = true;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  double feasibility_tolerance = kFeasibilityTolerance;
  SolverOptions solver;

  /// Canonical key/value form; from_map(to_map()) reproduces the config.
  ConfigMap to_map() const;
  static RunConfig from_map(const ConfigMap& m);

  double resolved_eta() const;
  double resolved_alpha() const;
  Vector resolved_center() const;
};

struct FeasibilitySummary {
  std::size_t violations = 0;
  double worst = 0.0;
  /// First few violations, for display.
  std::vector<Violation> sample;

  bool operator==(const FeasibilitySummary&) const = default;
};

struct OracleSummary {
  bool available = false;
  std::string method;
  double value = 0.0;
  double lower_bound = 0.0;
  double residual = 0.0;
  bool converged = true;
  std::size_t iterations = 0;

  bool operator==(const OracleSummary&) const = default;
};

struct Report {
  std::string setting;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<BoundCheck> checks;
  FeasibilitySummary feasibility;
  OracleSummary oracle;
  double run_seconds = 0.0;
  double certificate_seconds = 0.0;
  double oracle_seconds = 0.0;

  /// All non-informational, non-skipped checks pass.
  bool pass() const;
  const BoundCheck* find(const std::string& name) const;

  bool operator==(const Report&) const = default;
};

/// Builds the scenario for a config (costs included).
Scenario make_scenario(const RunConfig& cfg);

struct RunResult {
  Trace trace;
  DualCertificate certificate;
  Report report;
};

/// run -> certificate -> oracle -> report. Errors are rethrown with the failing stage.
RunResult run_scenario(const RunConfig& cfg);

/// Report for a stored trace: re-checks every OMD step against the recurrence and the
/// projection, primal feasibility, the stored certificate against a rebuilt one, then
/// produces the same checks as run_scenario.
Report verify_trace(const RunConfig& cfg, const Trace& trace,
                    const std::optional<DualCertificate>& stored);

/// Offline benchmark for the config's setting; nullopt when no oracle covers it.
std::optional<OracleResult> solve_offline(const RunConfig& cfg, const std::vector<Vector>& costs,
                                          const Body& body);

/// Certificate, oracle and theorem checks shared by run_scenario and verify_trace.
Report evaluate(const RunConfig& cfg, const Trace& trace, const DualCertificate& cert);

}  // namespace driftbench
