#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "bfa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bfa::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bfa_cli_test_" + name)).string();
}

}  // namespace

TEST_CASE("fourier json lists the maj3 coefficients") {
  const Run r = run({"fourier", "--fn", "maj:3", "--json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["coefficients"].size() == 4);
  CHECK(j["coefficients"][3]["set"] == "{1,2,3}");
  CHECK(j["coefficients"][3]["value"].get<double>() == doctest::Approx(-0.5));
  CHECK(j["seed"] == 1);
}

TEST_CASE("tsv output") {
  const Run r = run({"test", "blr", "--fn", "parity:0b101:8", "--exact"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("exact\t1\n") != std::string::npos);
  CHECK(r.out.find("seed\t1\n") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"nope"}).code == 2);
  CHECK(run({"fourier"}).code == 2);
  CHECK(run({"--help"}).code == 0);

  const Run fam = run({"fourier", "--fn", "nope:3"});
  CHECK(fam.code == 2);
  CHECK(fam.err.find("unknown family") != std::string::npos);
  const Run dom = run({"stability", "--fn", "maj:3", "--rho", "2"});
  CHECK(dom.code == 2);
  CHECK(dom.err.find("domain error") != std::string::npos);
  const Run file = run({"ulc", "opt", "--in", "/nonexistent.json"});
  CHECK(file.code == 2);
  CHECK(file.err.find("cannot open") != std::string::npos);

  // W^1(MAJ_3) is far from 2/pi, so the asserted majority row fails
  CHECK(run({"ineq", "twopi", "--fn", "maj:3"}).code == 0);
  CHECK(run({"--assert", "ineq", "twopi", "--fn", "maj:3"}).code == 1);
  CHECK(run({"--assert", "ineq", "twopi", "--fn", "maj:101"}).code == 0);
  CHECK(run({"--assert", "ineq", "suite", "--name", "kkl", "--n", "3"}).code == 0);
}

TEST_CASE("seeds: flag, environment and determinism") {
  const std::vector<std::string> cmd{"stability", "--fn", "random:3:8", "--rho", "0.3", "--mc", "--samples", "5000"};
  const Run a = run(cmd);
  const Run b = run(cmd);
  CHECK(a.out == b.out);

  std::vector<std::string> seeded = cmd;
  seeded.insert(seeded.end(), {"--seed", "17"});
  const Run c = run(seeded);
  CHECK(c.out.find("seed\t17\n") != std::string::npos);
  CHECK(c.out != a.out);

  ::setenv("BFA_SEED", "17", 1);
  const Run d = run(cmd);
  ::setenv("BFA_SEED", "x", 1);
  const Run bad = run(cmd);
  ::unsetenv("BFA_SEED");
  CHECK(d.out == c.out);
  CHECK(bad.code == 2);
}

TEST_CASE("ulc pipeline through files") {
  const std::string psi = temp_path("psi.json");
  const std::string csp = temp_path("csp.json");
  {
    const Run g = run({"ulc", "gen", "--vertices", "10", "--degree", "2", "--L", "4", "--delta", "0"});
    REQUIRE(g.code == 0);
    std::ofstream(psi) << g.out;
  }
  const Run r1 = run({"ulc", "reduce", "--in", psi, "--tester", "kkmo:0.707", "--m", "20000", "--seed", "7"});
  const Run r2 = run({"ulc", "reduce", "--in", psi, "--tester", "kkmo:0.707", "--m", "20000", "--seed", "7"});
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  std::ofstream(csp) << r1.out;
  const auto j = nlohmann::json::parse(r1.out);
  CHECK(j["k"] == 2);
  CHECK(j["predicate"] == "eq");
  CHECK(j["constraints"].size() == 20000);

  const Run v = run({"--assert", "--json", "ulc", "value", "--csp", csp, "--in", psi, "--source", "dictator"});
  REQUIRE(v.code == 0);
  const auto vj = nlohmann::json::parse(v.out);
  CHECK(vj["value"]["estimate"].get<double>() > 0.8);

  const Run dec = run({"--json", "ulc", "decode", "--in", psi, "--source", "dictator"});
  REQUIRE(dec.code == 0);
  CHECK(nlohmann::json::parse(dec.out)["matches_planted"] == true);

  const Run opt = run({"ulc", "opt", "--in", psi});
  CHECK(opt.out.find("value\t1\n") != std::string::npos);
  std::filesystem::remove(psi);
  std::filesystem::remove(csp);
}

TEST_CASE("every subcommand runs") {
  const std::vector<std::vector<std::string>> cmds{
      {"influence", "--fn", "maj:101"},
      {"influence", "--fn", "tribes:2:3", "--rho", "0.5"},
      {"stability", "--fn", "maj:101", "--rho", "0.5"},
      {"test", "nae", "--fn", "maj:5", "--mc", "--exact", "--samples", "2000"},
      {"test", "kkmo", "--fn", "dict:1:4", "--rho", "0.5"},
      {"test", "3xor", "--fn", "maj:201", "--delta", "0.1", "--samples", "2000"},
      {"test", "decode", "--fn", "parity:0b11:6", "--x", "5"},
      {"gaussian", "sheppard", "--rho", "0.5", "--samples", "2000"},
      {"gaussian", "rs", "--halfspace", "1,2", "--delta", "0.5", "--samples", "2000"},
      {"gaussian", "rs", "--fn", "pairwise:4", "--ell", "2", "--samples", "2000"},
      {"gaussian", "gstab", "--fn", "maj:5", "--rho", "0.3", "--mc", "--samples", "2000"},
      {"ineq", "bonami", "--fn", "random:1:5", "--d", "5"},
      {"ineq", "hyper", "--fn", "random:1:5"},
      {"ineq", "sse", "--fn", "and:4"},
      {"ineq", "kkl", "--fn", "maj:5"},
      {"ineq", "level1", "--fn", "and:4"},
      {"ineq", "mist", "--fn", "maj:101", "--rho", "0.5"},
      {"ineq", "poincare", "--fn", "maj:5"},
      {"ineq", "edgeiso", "--fn", "maj:5"},
      {"ineq", "suite", "--name", "bonami", "--n", "4", "--count", "5"},
      {"clt", "be", "--n", "50"},
      {"clt", "be", "--ns", "4,8"},
      {"clt", "hybrid", "--weights", "1,2,3"},
      {"clt", "invariance", "--fn", "pairwise:6", "--samples", "2000"},
      {"clt", "invariance", "--ns", "4,6", "--samples", "2000"},
      {"clt", "cw", "--fn", "pairwise:4", "--samples", "2000"},
  };
  for (const auto& cmd : cmds) {
    const Run r = run(cmd);
    CAPTURE(cmd[0]);
    CAPTURE(cmd[1]);
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    std::vector<std::string> json = cmd;
    json.push_back("--json");
    CHECK(nlohmann::json::accept(run(json).out));
  }
}
