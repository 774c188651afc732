#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "table.hpp"

namespace {

std::string g_bgkc;

struct Run {
  int status;
  std::string out;
};

// runs bgkc with the given arguments; stderr is discarded
Run run_bgkc(const std::string& args) {
  const std::string cmd = g_bgkc + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bgkc_test_" + name)).string();
}

bgkc::Table parse_csv(const std::string& s) {
  std::istringstream is(s);
  return bgkc::read_csv(is);
}

bgkc::Table parse_json(const std::string& s) {
  std::istringstream is(s);
  return bgkc::read_json(is);
}

double num(const bgkc::Cell& c) { return std::get<double>(c); }

int column(const bgkc::Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  FAIL("missing column " << name);
  return -1;
}

}  // namespace

TEST_CASE("table formats round-trip byte for byte") {
  bgkc::Table t;
  t.schema = "bgkc.test.v1";
  t.meta = {{"tau", 0.25}, {"model", std::string("exact, \"quoted\"")}, {"z", 0.1}};
  t.columns = {"k", "name", "value"};
  t.rows = {{0.1, std::string("a"), -1.0 / 3}, {1e-300, std::string(""), std::nan("")},
            {2.0, std::string("b,c"), INFINITY}, {-0.0, std::string("d"), 123456789.125}};
  std::ostringstream c1, j1;
  bgkc::write_csv(t, c1);
  bgkc::write_json(t, j1);
  const auto tc = parse_csv(c1.str());
  const auto tj = parse_json(j1.str());
  std::ostringstream c2, j2;
  bgkc::write_csv(tc, c2);
  bgkc::write_json(tj, j2);
  CHECK(c1.str() == c2.str());
  // JSON has no infinity; it comes back as null (NaN)
  CHECK(std::isnan(num(tj.rows[2][2])));
  CHECK(num(tc.rows[0][2]) == -1.0 / 3);
  CHECK(std::get<std::string>(tc.meta[1].second) == "exact, \"quoted\"");
  CHECK(bgkc::format_number(0.1) == "0.10000000000000001");
  CHECK(bgkc::format_number(-INFINITY) == "-inf");
  // finite-only tables survive JSON exactly
  t.rows.pop_back();
  t.rows[1][2] = 1.5;
  t.rows[2][2] = 2.5;
  std::ostringstream j3, j4;
  bgkc::write_json(t, j3);
  bgkc::write_json(parse_json(j3.str()), j4);
  CHECK(j3.str() == j4.str());
  std::istringstream bad("# s\na,b\n1\n");
  CHECK_THROWS(bgkc::read_csv(bad));
}

TEST_CASE("modes sweep") {
  const auto r = run_bgkc("modes --tau 0.5 --k-min 0.5 --k-max 3 --k-n 6");
  REQUIRE(r.status == 0);
  const auto t = parse_csv(r.out);
  CHECK(t.schema == "bgkc.modes.v1");
  REQUIRE(t.rows.size() == 6);
  const int alive = column(t, "alive_shear"), re = column(t, "re_shear");
  // shear dies at sqrt(pi/2)/tau = 2.5066
  CHECK(num(t.rows[0][alive]) == 1);
  CHECK(num(t.rows[5][alive]) == 0);
  CHECK(std::isnan(num(t.rows[5][re])));
  // JSON and CSV carry the same numbers
  const auto j = parse_json(run_bgkc("modes --tau 0.5 --k-min 0.5 --k-max 3 --k-n 6 --format json").out);
  CHECK(j.schema == t.schema);
  CHECK(num(j.rows[2][re]) == num(t.rows[2][re]));
}

TEST_CASE("deterministic across thread counts") {
  const std::string a = "coeffs --tau 0.25 --k-min 0 --k-max 4 --k-n 17";
  const auto r1 = run_bgkc(a + " --threads 1"), r4 = run_bgkc(a + " --threads 4");
  REQUIRE(r1.status == 0);
  CHECK(r1.out == r4.out);
  const auto t = parse_csv(r1.out);
  CHECK(t.schema == "bgkc.coeffs.v1");
  CHECK(num(t.rows[0][column(t, "c1")]) == 0.0);
  CHECK(num(t.rows[4][column(t, "k")]) == 1.0);
}

TEST_CASE("critical wave numbers and generator") {
  const auto k = parse_csv(run_bgkc("kcrit --tau 2").out);
  CHECK(k.schema == "bgkc.kcrit.v1");
  bool found = false;
  for (const auto& row : k.rows)
    if (std::get<std::string>(row[0]) == "shear" && std::get<std::string>(row[1]) == "analytic") {
      found = true;
      CHECK(std::abs(num(row[2]) - 0.62665706865775) < 1e-12);
    }
  CHECK(found);
  const auto g = run_bgkc("generator --tau 0.5 --kvec 0.7,0,0 --format json");
  REQUIRE(g.status == 0);
  CHECK(parse_json(g.out).schema == "bgkc.generator.v1");
  CHECK(run_bgkc("generator --tau 0.5 --kvec 4,0,0").status == 2);
  CHECK(run_bgkc("generator --tau 0.5 --kvec 4,0,0 --beyond-critical pin").status == 0);
}

TEST_CASE("simulation outputs") {
  const std::string ic = tmp_path("ic.txt"), fin = tmp_path("final.txt"), snap = tmp_path("snap.csv");
  const auto r = run_bgkc("simulate --tau 0.5 --kmax 1 --t-end 1 --dt 0.5 --seed 3 --final-state " + fin +
                      " --snapshot " + snap + " --snapshot-n 4");
  REQUIRE(r.status == 0);
  std::istringstream is(r.out);
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 2 + 3 * 7);
  CHECK(std::filesystem::exists(fin));
  CHECK(std::filesystem::exists(snap));
  // restarting from the final state continues the trajectory
  const auto again = run_bgkc("simulate --tau 0.5 --kmax 1 --t-end 0 --dt 0.5 --ic " + fin);
  CHECK(again.status == 0);
  CHECK(run_bgkc("simulate --tau 0.25 --kmax 6").status == 2);
  CHECK(run_bgkc("simulate --tau 0.5 --kmax 1 --ic /nonexistent/ic.txt").status == 2);
  const auto js = run_bgkc("simulate --tau 0.5 --kmax 1 --t-end 1 --dt 0.5 --seed 3 --format json");
  REQUIRE(js.status == 0);
  CHECK(parse_json(js.out).schema == "bgkc.timeseries.v1");
  for (const auto& p : {ic, fin, snap}) std::filesystem::remove(p);
}

TEST_CASE("model comparison") {
  const auto r = run_bgkc("compare --tau 0.05 --kmax 1 --t-end 2 --dt 1 --seed 1");
  REQUIRE(r.status == 0);
  const auto t = parse_csv(r.out);
  CHECK(t.schema == "bgkc.compare.v1");
  const auto& last = t.rows.back();
  const double eu = num(last[column(t, "diff_euler")]), ns = num(last[column(t, "diff_ns")]);
  CHECK(num(last[column(t, "diff_exact")]) == 0.0);
  CHECK(ns < eu);
}

TEST_CASE("configuration file") {
  const std::string cfg = tmp_path("cfg.ini");
  {
    std::ofstream os(cfg);
    os << "[modes]\ntau = 0.5\nk-min = 0.1\nk-max = 0.2\nk-n = 2\n";
  }
  const auto a = parse_csv(run_bgkc("--config " + cfg + " modes").out);
  CHECK(a.rows.size() == 2);
  // flags override the file
  const auto b = parse_csv(run_bgkc("--config " + cfg + " modes --k-n 3").out);
  CHECK(b.rows.size() == 3);
  {
    std::ofstream os(cfg);
    os << "[modes]\nbogus = 1\n";
  }
  CHECK(run_bgkc("--config " + cfg + " modes").status == 2);
  std::filesystem::remove(cfg);
}

TEST_CASE("argument errors") {
  CHECK(run_bgkc("modes --no-such-flag").status == 2);
  CHECK(run_bgkc("modes --tau -1").status == 2);
  CHECK(run_bgkc("frobnicate").status == 2);
  CHECK(run_bgkc("modes --format xml").status == 2);
}

TEST_CASE("validate exit codes") {
  const auto ok = run_bgkc("validate --criteria 1 6 --format csv");
  CHECK(ok.status == 0);
  const auto t = parse_csv(ok.out);
  CHECK(t.schema == "bgkc.validate.v1");
  CHECK(t.rows.size() == 2);
  // a fault in c2 moves the small-k expansion check far off its targets
  const auto clean = run_bgkc("validate --criteria 4 --format csv");
  const auto fault = run_bgkc("validate --criteria 4 --format csv --perturb-c2 1e-3");
  CHECK(fault.status == 1);
  const auto tc = parse_csv(clean.out), tf = parse_csv(fault.out);
  const int v = column(tc, "value");
  CHECK(num(tf.rows[0][v]) > 10 * num(tc.rows[0][v]));
  CHECK(run_bgkc("validate --criteria 13").status == 2);
}

int main(int argc, char** argv) {
  // first argument: path of the bgkc binary
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <bgkc> [doctest options]\n");
    return 2;
  }
  g_bgkc = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv + 1);
  return ctx.run();
}
