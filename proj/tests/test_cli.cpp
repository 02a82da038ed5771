#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "driftbench/cli.hpp"
#include "driftbench/serialization.hpp"

using namespace driftbench;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("run then check-duals") {
  const Result r = cli({"run", "--setting", "drift-expert", "--n", "5", "--T", "100", "--drift", "3", "--seed", "7",
                        "--out", "cli_test_r.json", "--report", "cli_test_report.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("result: PASS") != std::string::npos);
  const RunDocument doc = parse_run_document(read_text_file("cli_test_r.json"));
  CHECK(doc.trace.horizon() == 100);
  CHECK(parse_report_json(read_text_file("cli_test_report.json")).pass());

  const Result check = cli({"check-duals", "--trace", "cli_test_r.json"});
  CHECK(check.code == 0);

  RunDocument bad = doc;
  bad.trace.steps[40].x[2] += 0.05;
  write_text_file("cli_test_bad.json", emit_run_document(bad));
  const Result corrupt = cli({"check-duals", "--trace", "cli_test_bad.json"});
  CHECK(corrupt.code == 2);
  CHECK(corrupt.out.find("FAIL  omd_recurrence") != std::string::npos);
  for (const char* f : {"cli_test_r.json", "cli_test_report.json", "cli_test_bad.json"}) std::remove(f);
}

TEST_CASE("identical runs write identical files") {
  const std::vector<std::string> base = {"run", "--preset", "thm3", "--T", "50", "--seed", "3", "--out"};
  auto a = base, b = base;
  a.push_back("cli_test_a.json");
  b.push_back("cli_test_b.json");
  CHECK(cli(a).code == 0);
  CHECK(cli(b).code == 0);
  CHECK(read_text_file("cli_test_a.json") == read_text_file("cli_test_b.json"));
  std::remove("cli_test_a.json");
  std::remove("cli_test_b.json");
}

TEST_CASE("csv output") {
  CHECK(cli({"run", "--setting", "onela-mts", "--n", "3", "--T", "4", "--format", "csv", "--out", "cli_test.csv"}).code ==
        0);
  std::ifstream in("cli_test.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,c_1,c_2,c_3,x_1,x_2,x_3,lambda,service,movement");
  std::remove("cli_test.csv");
}

TEST_CASE("config file plus flag override") {
  std::ofstream("cli_test.cfg") << "setting = onela-2ball\nT = 20\ncenter = 3,3\n";
  const Result r = cli({"run", "--config", "cli_test.cfg", "--T", "10", "--out", "cli_test_cfg.json"});
  CHECK(r.code == 0);
  CHECK(parse_run_document(read_text_file("cli_test_cfg.json")).trace.horizon() == 10);
  std::remove("cli_test.cfg");
  std::remove("cli_test_cfg.json");
}

TEST_CASE("opt and sweep") {
  const Result o = cli({"opt", "--setting", "drift-expert", "--n", "3", "--T", "30", "--drift", "1"});
  CHECK(o.code == 0);
  CHECK(o.out.find("method=exact-dp") != std::string::npos);
  const Result s = cli({"sweep", "--preset", "thm3", "--T", "40", "--param", "eta", "--values", "1,2,4"});
  CHECK(s.code == 0);
  std::size_t lines = 0;
  for (char c : s.out) lines += c == '\n';
  CHECK(lines == 4);
  CHECK(cli({"sweep", "--param", "radius", "--values", "1"}).code == 1);
}

TEST_CASE("usage and runtime errors exit 1") {
  Result r = cli({});
  CHECK(r.code == 1);
  CHECK(r.err.find("run") != std::string::npos);
  r = cli({"run", "--n"});
  CHECK(r.code == 1);
  CHECK_FALSE(r.err.empty());
  r = cli({"run", "--setting", "bogus"});
  CHECK(r.code == 1);
  CHECK(r.err.find("setting") != std::string::npos);
  CHECK(cli({"check-duals", "--trace", "/nonexistent.json"}).code == 1);
  CHECK(cli({"--version"}).code == 0);
}
