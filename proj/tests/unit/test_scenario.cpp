#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fharm/errors.hpp"
#include "fharm/scenario.hpp"

using namespace fharm;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "fharm_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

const char* kTinySuite = R"json({
  "suite": "tiny",
  "scenarios": [
    {
      "id": "flat_graph",
      "profile": {"name": "minimal_graph"},
      "manifold": {"kind": "euclidean", "m": 3},
      "factor": {"kind": "one"},
      "target": {"kind": "scalar"},
      "theorem": "cor62",
      "mode": "certify",
      "solver": {"flux": [0.0, 1.0], "r_interval": [1e-8, 40.0]},
      "expect": {"verdict": "CONSTANT_FORCED"}
    },
    {
      "id": "catenoid_annulus",
      "profile": {"name": "minimal_graph"},
      "manifold": {"kind": "euclidean", "m": 3},
      "theorem": "thm51",
      "mode": "witness",
      "solver": {"flux": [1.0], "r_interval": [1e-8, 40.0]},
      "expect": {"verdict": "HYPOTHESIS_FAILS", "failing": ["map_entire"]}
    }
  ]
})json";

}  // namespace

TEST_CASE("suite loading resolves names and validates") {
  const auto path = write_temp("tiny.json", kTinySuite);
  std::string name;
  const auto scenarios = load_suite(path.string(), &name);
  CHECK(name == "tiny");
  CHECK(scenarios.size() == 2);
  CHECK(scenarios[0].audit.theorem == TheoremId::cor62);
  CHECK(scenarios[1].audit.mode == AuditMode::witness);
  CHECK(scenarios[0].expect_verdict == VerdictKind::constant_forced);

  const auto bad1 = write_temp("bad1.json", "{ not json");
  CHECK_THROWS_AS(load_suite(bad1.string()), Error);

  const auto bad2 = write_temp("bad2.json", R"({"scenarios": [
    {"id": "x", "profile": {"name": "no_such_profile"},
     "manifold": {"kind": "euclidean", "m": 3}, "theorem": "thm51",
     "solver": {"flux": [0.0], "r_interval": [0.1, 1.0]}}]})");
  CHECK_THROWS_AS(load_suite(bad2.string()), Error);

  // Duplicate ids are rejected.
  std::string dup = kTinySuite;
  const auto pos = dup.find("catenoid_annulus");
  dup.replace(pos, std::string("catenoid_annulus").size(), "flat_graph");
  const auto bad3 = write_temp("bad3.json", dup);
  CHECK_THROWS_AS(load_suite(bad3.string()), Error);
}

TEST_CASE("suite run writes reports and meets expectations") {
  const auto path = write_temp("tiny_run.json", kTinySuite);
  const auto scenarios = load_suite(path.string());

  RunOptions opt;
  opt.out_dir = (fs::temp_directory_path() / "fharm_tests" / "out1").string();
  fs::remove_all(opt.out_dir);

  const auto suite = run_suite(scenarios, opt, "tiny");
  CHECK(suite.all_expectations_met);
  REQUIRE(suite.results.size() == 2);
  CHECK(suite.results[0].outcome.verdict == VerdictKind::constant_forced);
  CHECK(suite.results[1].outcome.verdict == VerdictKind::hypothesis_fails);

  CHECK(fs::exists(fs::path(opt.out_dir) / "flat_graph" / "report.json"));
  CHECK(fs::exists(fs::path(opt.out_dir) / "catenoid_annulus" / "report.json"));
  CHECK(fs::exists(fs::path(opt.out_dir) / "catenoid_annulus" / "curves.csv"));
}

TEST_CASE("re-running a suite is bit-identical") {
  const auto path = write_temp("tiny_det.json", kTinySuite);
  const auto scenarios = load_suite(path.string());

  auto run_and_read = [&](const std::string& out) {
    RunOptions opt;
    opt.out_dir = (fs::temp_directory_path() / "fharm_tests" / out).string();
    fs::remove_all(opt.out_dir);
    run_suite(scenarios, opt, "tiny");
    std::ostringstream buf;
    for (const char* id : {"flat_graph", "catenoid_annulus"}) {
      std::ifstream in(fs::path(opt.out_dir) / id / "report.json");
      buf << in.rdbuf();
    }
    return buf.str();
  };
  const std::string a = run_and_read("det_a");
  const std::string b = run_and_read("det_b");
  CHECK(a == b);
  CHECK_FALSE(a.empty());
}

TEST_CASE("single-scenario filter") {
  const auto path = write_temp("tiny_one.json", kTinySuite);
  const auto scenarios = load_suite(path.string());
  RunOptions opt;
  opt.out_dir = (fs::temp_directory_path() / "fharm_tests" / "out_one").string();
  opt.only_scenario = "flat_graph";
  const auto suite = run_suite(scenarios, opt, "tiny");
  CHECK(suite.results.size() == 1);

  opt.only_scenario = "nope";
  CHECK_THROWS_AS(run_suite(scenarios, opt, "tiny"), Error);
}

TEST_CASE("run_suite_file exit codes") {
  const auto good = write_temp("exit_good.json", kTinySuite);
  RunOptions opt;
  opt.out_dir = (fs::temp_directory_path() / "fharm_tests" / "out_exit").string();
  CHECK(run_suite_file(good.string(), opt) == 0);

  const auto bad = write_temp("exit_bad.json", "{ nope");
  CHECK(run_suite_file(bad.string(), opt) == 2);

  // An unmet expectation is a nonzero exit but not a parse failure.
  std::string wrong = kTinySuite;
  const auto pos = wrong.find("CONSTANT_FORCED");
  wrong.replace(pos, std::string("CONSTANT_FORCED").size(), "INCONSISTENT");
  const auto unmet = write_temp("exit_unmet.json", wrong);
  CHECK(run_suite_file(unmet.string(), opt) == 1);
}
