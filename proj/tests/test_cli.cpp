#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "cli.hpp"
#include "cweno/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int rc = -1;
  std::string out, err;
};

CliResult cli(std::initializer_list<std::string> args) {
  std::vector<std::string> storage{"cweno"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.rc = cweno::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "cweno-cli-tests";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

long parse_steps(const std::string& out) {
  const auto pos = out.find("steps: ");
  REQUIRE(pos != std::string::npos);
  return std::stol(out.substr(pos + 7));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("list-problems prints the whole catalog") {
  const CliResult r = cli({"list-problems"});
  CHECK(r.rc == 0);
  CHECK(r.err.empty());
  for (const char* name : {"density-perturbation", "sod", "lax", "shu-osher", "blast-wave",
                           "double-rarefaction", "strong-shock", "vacuum-rarefaction", "sedov",
                           "leblanc"})
    CHECK(contains(r.out, name));
  int lines = 0;
  for (char c : r.out)
    if (c == '\n') ++lines;
  CHECK(lines == 11);  // header + ten problems
}

TEST_CASE("--help succeeds and shows the subcommands") {
  const CliResult r = cli({"--help"});
  CHECK(r.rc == 0);
  for (const char* word : {"run", "converge", "compare", "list-problems"})
    CHECK(contains(r.out, word));
}

TEST_CASE("run: summary, snapshot export, and reproducibility") {
  const fs::path csv1 = scratch_dir() / "run-sod-1.csv";
  const fs::path csv2 = scratch_dir() / "run-sod-2.csv";
  const CliResult r = cli({"run", "--problem", "sod", "--n", "32", "--t-final", "0.05", "--out",
                           csv1.string()});
  REQUIRE(r.rc == 0);
  CHECK(r.err.empty());
  CHECK(contains(r.out, "problem: sod"));
  CHECK(contains(r.out, "scheme: fvcw"));
  CHECK(contains(r.out, "variables: characteristic"));
  CHECK(contains(r.out, "flux: hllc"));
  CHECK(contains(r.out, "limiter: on"));
  CHECK(contains(r.out, "n: 32"));
  CHECK(contains(r.out, "cfl: 0.08333333333"));
  CHECK(contains(r.out, "t-final: 0.05"));
  CHECK(contains(r.out, "min-rho-cell:"));
  CHECK(contains(r.out, "min-e-traces:"));
  CHECK(contains(r.out, "wrote: " + csv1.string()));
  CHECK(parse_steps(r.out) >= 1);

  const cweno::Snapshot snap = cweno::read_snapshot_csv(csv1);
  REQUIRE(snap.size() == 32);
  for (size_t i = 0; i < snap.size(); ++i) {
    if (i > 0) CHECK(snap.x[i] > snap.x[i - 1]);
    CHECK(snap.rho[i] > 0.0);
    CHECK(snap.p[i] > 0.0);
  }

  const CliResult again = cli({"run", "--problem", "sod", "--n", "32", "--t-final", "0.05",
                               "--out", csv2.string()});
  REQUIRE(again.rc == 0);
  CHECK(slurp(csv1) == slurp(csv2));  // bitwise reproducible
}

TEST_CASE("run: per-step minima trace has one row per step plus the initial row") {
  const fs::path csv = scratch_dir() / "run-minima.csv";
  const CliResult r = cli({"run", "--problem", "sod", "--n", "16", "--t-final", "0.02", "--minima",
                           csv.string()});
  REQUIRE(r.rc == 0);
  const long steps = parse_steps(r.out);
  const std::string text = slurp(csv);
  CHECK(text.rfind("step,t,min_rho,min_e\n", 0) == 0);
  long rows = -1;  // do not count the header
  for (char c : text)
    if (c == '\n') ++rows;
  CHECK(rows == steps + 1);
}

TEST_CASE("run: intermediate snapshots land in time-tagged files") {
  const fs::path base = scratch_dir() / "snaps.csv";
  const CliResult r = cli({"run", "--problem", "sod", "--n", "16", "--t-final", "0.04",
                           "--snap-times", "0.01,0.02", "--out", base.string()});
  REQUIRE(r.rc == 0);
  for (const char* stem : {"snaps-t0.01.csv", "snaps-t0.02.csv", "snaps.csv"}) {
    const fs::path p = scratch_dir() / stem;
    CHECK(contains(r.out, p.string()));
    CHECK(cweno::read_snapshot_csv(p).size() == 16);
  }

  CHECK(cli({"run", "--problem", "sod", "--snap-times", "0.01"}).rc == 1);
  const CliResult late = cli({"run", "--problem", "sod", "--n", "16", "--t-final", "0.04",
                              "--snap-times", "0.05", "--out", base.string()});
  CHECK(late.rc == 1);
  CHECK(contains(late.err, "(0, t-final]"));
  const CliResult dup = cli({"run", "--problem", "sod", "--n", "16", "--t-final", "0.04",
                             "--snap-times", "0.01,0.01", "--out", base.string()});
  CHECK(dup.rc == 1);
  CHECK(contains(dup.err, "distinct"));
}

TEST_CASE("usage errors exit 1 with a diagnostic on stderr") {
  struct Case {
    std::initializer_list<std::string> args;
    const char* expect;
  };
  const Case cases[] = {
      {{"run", "--problem", "nope", "--n", "16", "--t-final", "0.01"}, "available"},
      {{"run", "--problem", "sod", "--scheme", "bogus"}, "unknown scheme"},
      {{"run", "--problem", "sod", "--variables", "prims"}, "unknown variable set"},
      {{"run", "--problem", "sod", "--flux", "roe"}, "unknown flux"},
      {{"run", "--problem", "sod", "--limiter", "maybe"}, "expected on or off"},
      {{"run", "--problem", "sod", "--n", "5"}, "at least 10"},
      {{"run", "--problem", "sod", "--cfl", "-0.1"}, "cfl"},
      {{"run"}, "missing --problem"},
      {{"converge", "--problem", "sod", "--ns", "10,bad"}, "invalid integer"},
      {{"frobnicate"}, "error"},
      {{}, "error"},
  };
  for (const auto& c : cases) {
    const CliResult r = cli(c.args);
    CHECK(r.rc == 1);
    CHECK(contains(r.err, "error:"));
    CHECK(contains(r.err, c.expect));
  }
}

TEST_CASE("config file: applied, overridden by flags, and validated") {
  const fs::path cfg = scratch_dir() / "run.cfg";
  std::ofstream(cfg) << "# comment line\n\nn = 24\nscheme = weno-z\n";

  const CliResult r =
      cli({"run", "--problem", "sod", "--t-final", "0.02", "--config", cfg.string()});
  REQUIRE(r.rc == 0);
  CHECK(contains(r.out, "n: 24"));
  CHECK(contains(r.out, "scheme: weno-z"));

  const CliResult over = cli({"run", "--problem", "sod", "--t-final", "0.02", "--n", "16",
                              "--config", cfg.string()});
  REQUIRE(over.rc == 0);
  CHECK(contains(over.out, "n: 16"));  // explicit flag beats the config file
  CHECK(contains(over.out, "scheme: weno-z"));

  const fs::path bad = scratch_dir() / "bad.cfg";
  std::ofstream(bad) << "cells = 5\n";
  const CliResult unknown =
      cli({"run", "--problem", "sod", "--t-final", "0.02", "--config", bad.string()});
  CHECK(unknown.rc == 1);
  CHECK(contains(unknown.err, "unknown key 'cells'"));
  CHECK(contains(unknown.err, "valid keys:"));
  CHECK(contains(unknown.err, "scheme"));

  std::ofstream(bad) << "just-a-token\n";
  const CliResult malformed =
      cli({"run", "--problem", "sod", "--t-final", "0.02", "--config", bad.string()});
  CHECK(malformed.rc == 1);
  CHECK(contains(malformed.err, "expected key = value"));

  const CliResult missing = cli({"run", "--problem", "sod", "--config",
                                 (scratch_dir() / "no-such.cfg").string()});
  CHECK(missing.rc == 1);
  CHECK(contains(missing.err, "cannot open config file"));
}

TEST_CASE("converge: refinement table with decreasing errors") {
  const CliResult r = cli({"converge", "--problem", "density-perturbation", "--ns", "10,20"});
  REQUIRE(r.rc == 0);
  CHECK(contains(r.out, "L1 error"));
  std::istringstream lines(r.out);
  std::string line;
  std::vector<double> l1;
  while (std::getline(lines, line)) {
    std::istringstream row(line);
    int n = 0;
    double e = 0.0;
    if (row >> n >> e && (n == 10 || n == 20)) l1.push_back(e);
  }
  REQUIRE(l1.size() == 2);
  CHECK(l1[1] < l1[0]);
  CHECK(l1[0] < 0.1);
}

TEST_CASE("compare: table plus density-profile CSV export") {
  const fs::path csv = scratch_dir() / "compare.csv";
  const CliResult r = cli({"compare", "--problem", "sod", "--n", "24", "--schemes",
                           "fvcw,weno-js", "--out", csv.string()});
  REQUIRE(r.rc == 0);
  CHECK(contains(r.out, "fvcw"));
  CHECK(contains(r.out, "weno-js"));
  CHECK(contains(r.out, "min rho"));

  std::ifstream in(csv);
  REQUIRE(static_cast<bool>(in));
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "x,rho_ref,rho_fvcw,rho_weno-js");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 24);
}

}  // TEST_SUITE
