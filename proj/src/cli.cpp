#include "driftbench/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "driftbench/errors.hpp"
#include "driftbench/harness.hpp"
#include "driftbench/serialization.hpp"

namespace driftbench {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Scenario flags shared by run, opt and sweep. Each maps onto a config key.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "flat key = value config file");
    for (const auto& key : config_keys()) {
      std::string help = "config key " + key;
      if (key == "drift") help = "drift budget L";
      if (key == "radius") help = "ball radius D";
      if (key == "center") help = "ball centre, comma separated";
      options[key] = app->add_option("--" + key, values[key], help);
    }
  }

  RunConfig resolve() const {
    ConfigMap m;
    if (!config_file.empty()) m = read_config_file(config_file);
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) m[key] = values.at(key);
    }
    return RunConfig::from_map(m);
  }
};

void print_report(const Report& r, std::ostream& out) {
  out << r.version << "  setting=" << r.setting << "  seed=" << r.seed << "\n";
  for (const auto& c : r.checks) {
    const char* tag = c.skipped ? "SKIP" : c.informational ? "INFO" : c.pass ? "PASS" : "FAIL";
    out << tag << "  " << c.name << "  lhs=" << g6(c.lhs) << "  rhs=" << g6(c.rhs) << "  slack=" << g6(c.slack)
        << "\n";
  }
  if (r.feasibility.violations > 0) {
    out << "dual violations: " << r.feasibility.violations << " (worst " << g6(r.feasibility.worst) << ")\n";
    for (const auto& v : r.feasibility.sample) {
      out << "  " << v.id << " t=" << v.t << " i=" << v.i << " by " << g6(v.magnitude) << "\n";
    }
  }
  if (r.oracle.available) {
    out << "oracle " << r.oracle.method << ": value=" << g6(r.oracle.value)
        << " lower=" << g6(r.oracle.lower_bound) << (r.oracle.converged ? "" : " (not converged)") << "\n";
  } else {
    out << "oracle: unavailable\n";
  }
  out << (r.pass() ? "result: PASS" : "result: FAIL") << "\n";
}

int verdict(const Report& r) { return r.pass() ? kExitPass : kExitCheckFailure; }

int do_run(const ConfigFlags& flags, const std::string& out_path, const std::string& format,
           const std::string& report_path, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  const Format fmt = format_from_string(format);
  RunResult res = run_scenario(cfg);
  if (!out_path.empty()) {
    write_text_file(out_path, fmt == Format::Json
                                  ? emit_run_document({cfg.to_map(), res.trace, res.certificate})
                                  : emit_csv(res.trace));
  }
  if (!report_path.empty()) {
    write_text_file(report_path, fmt == Format::Json ? emit_json(res.report) : emit_csv(res.report));
  }
  print_report(res.report, out);
  return verdict(res.report);
}

int do_check(const std::string& trace_path, const std::string& tol, const std::string& report_path,
             std::ostream& out) {
  const RunDocument doc = parse_run_document(read_text_file(trace_path));
  if (doc.config.empty()) throw InvalidInput(trace_path + ": trace carries no config");
  ConfigMap m = doc.config;
  if (!tol.empty()) m["tol"] = tol;
  const RunConfig cfg = RunConfig::from_map(m);
  const Report rep = verify_trace(cfg, doc.trace, doc.certificate);
  if (!report_path.empty()) write_text_file(report_path, emit_json(rep));
  print_report(rep, out);
  return verdict(rep);
}

int do_opt(const ConfigFlags& flags, std::ostream& out) {
  const RunConfig cfg = flags.resolve();
  const Scenario s = make_scenario(cfg);
  const auto opt = solve_offline(cfg, s.costs, s.body);
  if (!opt) throw InvalidInput("no offline oracle for this configuration");
  out << "method=" << opt->method << "\nvalue=" << g17(opt->value) << "\nlower_bound=" << g17(opt->lower_bound)
      << "\nresidual=" << g17(opt->residual) << "\nconverged=" << (opt->converged ? "true" : "false")
      << "\niterations=" << opt->iterations << "\ndrift=" << g17(opt->path.drift_lp) << "\n";
  return kExitPass;
}

int do_sweep(const ConfigFlags& flags, const std::string& param, const std::string& values,
             const std::string& out_path, std::ostream& out) {
  if (param != "eta" && param != "drift") throw InvalidInput("--param must be eta or drift");
  std::vector<std::string> list;
  {
    std::stringstream ss(values);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) list.push_back(item);
    }
  }
  if (list.empty()) throw InvalidInput("--values needs at least one entry");
  const RunConfig base = flags.resolve();
  std::vector<RunConfig> cfgs;
  for (const auto& v : list) {
    ConfigMap m = base.to_map();
    m[param] = v;
    cfgs.push_back(RunConfig::from_map(m));
  }
  std::vector<std::future<RunResult>> jobs;
  for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [c] { return run_scenario(c); }));

  std::ostringstream csv;
  csv << "param,value,pass,service,movement,total,opt,opt_lower,certificate,service_minus_opt,movement_over_opt\n";
  bool all = true;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const RunResult r = jobs[i].get();
    const double opt = r.report.oracle.available ? r.report.oracle.value : 0.0;
    all = all && r.report.pass();
    csv << param << ',' << list[i] << ',' << (r.report.pass() ? 1 : 0) << ',' << g17(r.trace.service) << ','
        << g17(r.trace.movement) << ',' << g17(r.trace.service + r.trace.movement) << ',' << g17(opt) << ','
        << g17(r.report.oracle.lower_bound) << ',' << g17(r.certificate.objective) << ','
        << g17(r.trace.service - opt) << ',' << g17(opt > 0 ? r.trace.movement / opt : 0.0) << '\n';
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    write_text_file(out_path, csv.str());
  }
  return all ? kExitPass : kExitCheckFailure;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"driftbench: mirror descent runs with dual certificates", "driftbench"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* run = app.add_subcommand("run", "run the full pipeline and report every check");
  ConfigFlags run_flags;
  run_flags.attach(run);
  std::string out_path, format = "json", report_path;
  run->add_option("--out", out_path, "write the trace here");
  run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--report", report_path, "write the report here");

  auto* check = app.add_subcommand("check-duals", "re-verify a stored trace");
  std::string trace_path, check_tol, check_report;
  check->add_option("--trace", trace_path, "trace written by run")->required();
  check->add_option("--tol", check_tol, "override the check tolerance");
  check->add_option("--report", check_report, "write the report here");

  auto* opt = app.add_subcommand("opt", "offline benchmark only");
  ConfigFlags opt_flags;
  opt_flags.attach(opt);

  auto* sweep = app.add_subcommand("sweep", "grid over eta or drift, CSV summary");
  ConfigFlags sweep_flags;
  sweep_flags.attach(sweep);
  std::string param, values, sweep_out;
  sweep->add_option("--param", param, "eta or drift")->required();
  sweep->add_option("--values", values, "comma separated values")->required();
  sweep->add_option("--out", sweep_out, "CSV destination (stdout by default)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*run) return do_run(run_flags, out_path, format, report_path, out);
    if (*check) return do_check(trace_path, check_tol, check_report, out);
    if (*opt) return do_opt(opt_flags, out);
    if (*sweep) return do_sweep(sweep_flags, param, values, sweep_out, out);
  } catch (const std::exception& e) {
    err << "driftbench: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace driftbench
