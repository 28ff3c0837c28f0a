// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "femtocap/cli.hpp"

namespace fs = std::filesystem;
using femtocap::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "femtocap");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("femtocap_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("allocate") {
  auto r = call({"allocate", "--floors", "0.1,0.1", "--caps", "0.3,inf", "--budget", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("powers: 0.3,0.7") != std::string::npos);
  r = call({"allocate", "--floors", "1,2,4", "--budget", "2", "--solver", "bisection"});
  CHECK(r.code == 0);
  const auto at = r.out.find("powers: ");
  REQUIRE(at != std::string::npos);
  std::istringstream line(r.out.substr(at + 8));
  double p0 = 0, p1 = 0, p2 = -1;
  char comma = 0;
  line >> p0 >> comma >> p1 >> comma >> p2;
  CHECK(p0 == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(p1 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p2 == 0.0);
  CHECK(call({"allocate", "--floors", "1,2", "--caps", "1", "--budget", "2"}).code == 2);
  CHECK(call({"allocate", "--floors", "0,2", "--budget", "2"}).code == 2);
  CHECK(call({"allocate", "--floors", "1,x", "--budget", "2"}).code == 2);
  CHECK(call({"allocate", "--floors", "1", "--budget", "2", "--solver", "magic"}).code == 2);
}

TEST_CASE("cap") {
  auto r = call({"cap", "--gamma", "0.5", "--epsilon", "0.5", "--ibar", "1e-9", "--hbar", "1e-6", "--antenna-db", "0", "--inside"});
  CHECK(r.code == 0);
  CHECK(r.out.find("cap_w: 0.001\n") != std::string::npos);
  CHECK(call({"cap", "--gamma", "0.5", "--epsilon", "1", "--ibar", "1e-9", "--hbar", "1e-6"}).code == 2);
  CHECK(call({"cap", "--gamma", "0", "--epsilon", "0.1", "--ibar", "1e-9", "--hbar", "1e-6"}).code == 2);
  CHECK(call({"cap", "--gamma", "0.5", "--epsilon", "0.1"}).code == 2);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"simulate", "--reps", "0"}).code == 2);
  CHECK(call({"simulate", "--ibar-mode", "fast"}).code == 2);
  CHECK(call({"simulate", "--config", "/nonexistent/x.json"}).code == 2);
  CHECK(call({"validate-qos", "--trials", "100"}).code == 2);
}

TEST_CASE("simulate is byte-identical across runs") {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  const auto ra = call({"simulate", "--reps", "3", "--seed", "11", "--fading-trials", "50", "--out", a.string()});
  const auto rb = call({"simulate", "--reps", "3", "--seed", "11", "--fading-trials", "50", "--out", b.string()});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.out.find("seed: 11") != std::string::npos);
  CHECK(ra.out.find("config_hash: ") != std::string::npos);
  for (const char* f : {"fig2.csv", "fig3.csv", "summary.json"}) {
    CHECK(fs::exists(a / f));
    CHECK_FALSE(fs::exists(a / (std::string(f) + ".tmp")));
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("simulate reads a config file and reports an unwritable directory") {
  const fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"seed": 5, "reps": 2, "fading_trials": 10})";
  auto r = call({"simulate", "--config", (dir / "c.json").string(), "--out", (dir / "o").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("seed: 5") != std::string::npos);
  std::ofstream(dir / "bad.json") << R"({"reps": 2, "nope": 1})";
  r = call({"simulate", "--config", (dir / "bad.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("nope") != std::string::npos);
  std::ofstream(dir / "blocker") << "x";
  r = call({"simulate", "--reps", "1", "--fading-trials", "10", "--out", (dir / "blocker" / "sub").string()});
  CHECK(r.code == 1);
}

TEST_CASE("gamma override of 1 gives a full-degradation CCDF") {
  const fs::path out = scratch("g1");
  REQUIRE(call({"simulate", "--reps", "3", "--qos-gamma", "1.0", "--fading-trials", "10", "--out", out.string()})
              .code == 0);
  const std::string f3 = slurp(out / "fig3.csv");
  CHECK(f3.find("override,1,") != std::string::npos);
  CHECK(f3.find(",exact,1,1\n") != std::string::npos);
  CHECK(f3.find(",approx,1,1\n") != std::string::npos);
}

TEST_CASE("validate-qos gate") {
  auto r = call({"validate-qos", "--reps", "4", "--trials", "10000", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("QoS guarantee holds") != std::string::npos);
  r = call({"validate-qos", "--reps", "2", "--trials", "10000", "--cap-scale", "1000"});
  CHECK(r.code == 1);
  CHECK(r.out.find("VIOLATED") != std::string::npos);
  r = call({"validate-qos", "--reps", "2", "--trials", "10000", "--femto-off"});
  CHECK(r.code == 0);
  CHECK(r.out.find(" 0.00000 ") != std::string::npos);
  CHECK(r.out.find("over") == std::string::npos);
}
