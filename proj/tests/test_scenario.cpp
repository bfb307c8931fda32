#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dshock/scenario.hpp"

using namespace dshock;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dshock_test_" + name);
  fs::remove_all(p);
  return p;
}

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("minimal riemann document takes defaults") {
  const Scenario s = parse_scenario(R"({"kind": "riemann",
    "left": {"rho": 2, "u": 1, "H": 0}, "right": {"rho": 1, "u": 0, "H": 0}, "half_length": 5})");
  CHECK(s.kind == ScenarioKind::Riemann);
  CHECK(s.dt == 1e-3);
  CHECK(s.N == 10000);
  CHECK(s.weak_tol == 1e-7);
  CHECK(s.conservation_tol == 1e-12);
  CHECK(s.left.rho == 2.0);
  CHECK(s.half_length == 5.0);
}

TEST_CASE("validation and parse errors") {
  try {
    parse_scenario(R"({"kind": "riemann", "left": {"rho": -1, "u": 1, "H": 0}})");
    FAIL("expected Validation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()) == "rho must be nonnegative");
  }
  try {
    parse_scenario("{\n  \"kind\": \"riemann\",\n  \"left\": {\"rho\": 1,}\n}");
    FAIL("expected Parse");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(parse_error_kind(R"({"kind": "riemann", "lefty": {}})") == ErrorKind::Parse);
  CHECK(parse_error_kind(R"({"kind": "riemann", "left": {"rho": "one"}})") == ErrorKind::Parse);
  CHECK(parse_error_kind(R"({"left": {}})") == ErrorKind::Parse);
  CHECK(parse_error_kind(R"({"kind": "plasma"})") == ErrorKind::Validation);
  CHECK(parse_error_kind(R"({"kind": "riemann", "time": {"dt": 0}})") == ErrorKind::Validation);
  CHECK(parse_error_kind(R"({"kind": "riemann", "time": {"t_end": 20}})") == ErrorKind::Validation);
  CHECK(parse_error_kind(R"({"kind": "particles", "numerics": {"N": 1}})") == ErrorKind::Validation);
  CHECK(parse_error_kind(R"({"kind": "spherical", "sphere": {"G0": 0.5}})") == ErrorKind::Validation);
  CHECK(parse_error_kind(R"({"kind": "audit", "audit": {"source": "verify"}})") ==
        ErrorKind::Validation);
}

TEST_CASE("round trip through JSON") {
  for (const auto& entry : fs::directory_iterator(DSHOCK_SCENARIO_DIR)) {
    const Scenario s = load_scenario(entry.path().string());
    CHECK(parse_scenario(to_json(s).dump()) == s);
  }
  Scenario s;
  s.kind = ScenarioKind::FrontOde;
  s.front = FrontSeed{0.1, 0.2, 0.3, 0.4};
  s.left = {0.1 + 0.2, 1.0 / 3.0, 2.0 / 7.0};
  CHECK(parse_scenario(to_json(s).dump()) == s);
}

TEST_CASE("shipped benchmark is the symmetric acceptance scenario") {
  const Scenario s = load_scenario(std::string(DSHOCK_SCENARIO_DIR) + "/symmetric_benchmark.json");
  CHECK(s.kind == ScenarioKind::Riemann);
  CHECK(s.left == StateSpec{1, 1, 1});
  CHECK(s.right == StateSpec{1, -1, 1});
  CHECK(s.half_length == 10.0);
  CHECK(s.t_end == 1.0);
}

TEST_CASE("running the benchmark writes e(1) = 2 and h(1) = 3") {
  Scenario s = load_scenario(std::string(DSHOCK_SCENARIO_DIR) + "/symmetric_benchmark.json");
  const fs::path dir = scratch("bench");
  const RunResult r = run_scenario(s, {dir.string(), std::nullopt, true});
  CHECK(r.exit_code == 0);
  const std::string csv = slurp((dir / "symmetric_benchmark_front.csv").string());
  CHECK(csv.find("\n1,0,0,2,3,2,0,3\n") != std::string::npos);
  CHECK(r.summary["energy_final"]["total"].get<double>() == doctest::Approx(30.0));
  CHECK(fs::exists(dir / "symmetric_benchmark_energy.svg"));
  CHECK(fs::exists(dir / "symmetric_benchmark_summary.json"));

  // Identical inputs give identical bytes.
  const std::string first = slurp((dir / "symmetric_benchmark_budget.csv").string());
  run_scenario(s, {dir.string(), std::nullopt, true});
  CHECK(slurp((dir / "symmetric_benchmark_budget.csv").string()) == first);
}

TEST_CASE("verify scenario passes and reports coverage") {
  Scenario s = load_scenario(std::string(DSHOCK_SCENARIO_DIR) + "/verify_symmetric.json");
  const fs::path dir = scratch("verify");
  const RunResult r = run_scenario(s, {dir.string(), std::nullopt, true});
  CHECK(r.exit_code == 0);
  CHECK(r.summary["weak"]["passed"] == true);
  const auto weak = nlohmann::json::parse(slurp((dir / "verify_symmetric_weak.json").string()));
  CHECK(weak["coverage"]["bumps"] == 20);
  // An impossible tolerance turns into a check failure.
  CHECK(run_scenario(s, {dir.string(), 1e-30, true}).exit_code == 5);
}

TEST_CASE("exit codes per error class") {
  Scenario s;
  s.kind = ScenarioKind::FrontOde;
  s.front = FrontSeed{0.0, 1.5, 0.0, 0.0};
  const fs::path dir = scratch("codes");
  const RunResult bad = run_scenario(s, {dir.string(), std::nullopt, true});
  CHECK(bad.exit_code == 3);
  CHECK(bad.summary["error"]["kind"] == "EntropyViolation");

  Scenario v;
  v.left.rho = -1.0;
  CHECK(run_scenario(v, {dir.string(), std::nullopt, true}).exit_code == 2);

  CHECK(exit_code_for(ErrorKind::QuadratureFailure) == 4);
  CHECK(exit_code_for(ErrorKind::Validation) == 2);
}

TEST_CASE("sweeps measure convergence order") {
  const fs::path dir = scratch("sweep");
  Scenario p = load_scenario(std::string(DSHOCK_SCENARIO_DIR) + "/particles_asymmetric.json");
  const RunResult rp = run_sweep(p, "N", {100, 1000, 10000}, {dir.string(), std::nullopt, true});
  REQUIRE(rp.exit_code == 0);
  CHECK(rp.summary["convergence_order"].get<double>() == doctest::Approx(1.0).epsilon(0.2));

  Scenario o = load_scenario(std::string(DSHOCK_SCENARIO_DIR) + "/compression_front_ode.json");
  const RunResult ro = run_sweep(o, "dt", {0.1, 0.05, 0.025}, {dir.string(), std::nullopt, true});
  REQUIRE(ro.exit_code == 0);
  CHECK(ro.summary["convergence_order"].get<double>() == doctest::Approx(4.0).epsilon(0.1));

  CHECK(run_sweep(o, "N", {1, 2}, {dir.string(), std::nullopt, true}).exit_code == 2);
}

TEST_CASE("every shipped scenario runs green") {
  const fs::path dir = scratch("all");
  for (const auto& entry : fs::directory_iterator(DSHOCK_SCENARIO_DIR)) {
    const RunResult r = run_scenario(load_scenario(entry.path().string()), {dir.string(), std::nullopt, true});
    INFO(entry.path().string() << ": " << r.message);
    CHECK(r.exit_code == 0);
  }
}
