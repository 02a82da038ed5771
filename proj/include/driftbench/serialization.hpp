#pragma once

#include <optional>
#include <string>

#include "driftbench/dual_certificates.hpp"
#include "driftbench/harness.hpp"
#include "driftbench/omd_engine.hpp"

namespace driftbench {

inline constexpr const char* kTraceSchema = "driftbench-trace/1";
inline constexpr const char* kReportSchema = "driftbench-report/1";

enum class Format { Json, Csv };
Format format_from_string(const std::string& s);

std::string emit_json(const Trace& trace);
std::string emit_json(const DualCertificate& cert);
std::string emit_json(const Report& report);

Trace parse_trace_json(const std::string& text);
DualCertificate parse_certificate_json(const std::string& text);
Report parse_report_json(const std::string& text);

/// Header t,c_1..c_n,x_1..x_n,lambda,service,movement then one row per round.
std::string emit_csv(const Trace& trace);
/// Header name,lhs,rhs,slack,tolerance,pass,informational,skipped.
std::string emit_csv(const Report& report);

/// What `run --out` writes: the trace plus the config and certificate that produced it.
struct RunDocument {
  ConfigMap config;
  Trace trace;
  std::optional<DualCertificate> certificate;

  bool operator==(const RunDocument&) const = default;
};

std::string emit_run_document(const RunDocument& doc);
RunDocument parse_run_document(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace driftbench
