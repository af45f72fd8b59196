#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acousticbc/cli.hpp"
#include "acousticbc/error.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

using namespace acbc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "acousticbc_unit";
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json base_scenario(const std::string& tag) {
  const fs::path d = scratch_dir();
  nlohmann::json j = nlohmann::json::parse(R"({
    "domain": {"R0": 0.5, "R1": 1.0, "N": 32},
    "material": {"rho0": 1.3, "B": 1.7, "mu": 0.8, "sigma": 1.1, "delta": 0.3, "kappa": 0.9},
    "model": "E",
    "modes": [0, {"l": 1, "m": -1}, 2],
    "initial_data": {"preset": "RandomCompatible", "seed": 42},
    "integrator": {"dt": 0.02, "t_end": 0.4}
  })");
  j["output"] = {{"csv", (d / (tag + ".csv")).string()}, {"summary", (d / (tag + ".json")).string()}};
  return j;
}

Error parse_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("parsed without error");
  return Error(ErrorKind::ValidationError, "", "");
}

int run_cli(std::vector<std::string> args) {
  std::vector<char*> argv;
  args.insert(args.begin(), "acousticbc");
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path write_scenario(const nlohmann::json& j, const std::string& tag) {
  const fs::path p = scratch_dir() / (tag + ".scenario.json");
  std::ofstream(p) << j.dump(1);
  return p;
}

}  // namespace

TEST_CASE("splitmix64 reference stream") {
  SplitMix64 g(0);
  CHECK(g.next() == 0xe220a8397b1dcdafULL);
  CHECK(g.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(g.next() == 0x06c45d188009454fULL);
  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK((x >= 0.0 && x < 1.0));
  }
}

TEST_CASE("stationary-drift preset validation") {
  const auto o = acbc::testing::mode_ops(0.0, 1.0, 16, 0);
  MaterialParams p;
  p.kappa = 2.0;
  try {
    stationary_drift_state(o, p, 1.0, 3.0);
    FAIL("kappa mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.field() == "material.kappa");
  }
  try {
    stationary_drift_state(o, p, 1.0, 0.0);
    FAIL("zero k0 accepted");
  } catch (const Error& e) {
    CHECK(e.field() == "initial_data.k0");
  }
  const PotentialModeState s = stationary_drift_state(o, p, 1.0, 2.0);
  CHECK(s.v == doctest::Approx(-0.5));
  CHECK(std::abs(constraint_functional(o, p, s)) > 0.0);
  // the preset only provides data for the potential and pressure models
  InitialDataRecipe r{PresetKind::StationaryDrift, 1.0, 2.0, 0};
  CHECK_THROWS_AS(make_initial_state(o, p, ModelTag::L, r), Error);
}

TEST_CASE("random data is order-2 compatible and reproducible") {
  MaterialParams p;
  for (double R0 : {0.0, 0.5}) {
    const auto o = acbc::testing::mode_ops(R0, 1.0, 32, 1);
    const PotentialModeState a = random_potential_state(o, p, 5, true);
    const PotentialModeState b = random_potential_state(o, p, 5, true);
    CHECK(a.u == b.u);
    CHECK(check_compat_potential(o, p, a, 2).pass);
  }
}

TEST_CASE("sha256 digest") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("scenario parse errors carry a location") {
  Error e = parse_error("{\n  \"domain\": {\"N\": 32,}\n}");
  CHECK(e.kind() == ErrorKind::ConfigParseError);
  CHECK(e.field().find("line 2") != std::string::npos);

  nlohmann::json j = base_scenario("types");
  j["domain"]["N"] = "many";
  e = parse_error(j.dump());
  CHECK(e.kind() == ErrorKind::ConfigParseError);
  CHECK(e.field() == "domain.N");

  j = base_scenario("unknown");
  j["material"]["viscosity"] = 1.0;
  e = parse_error(j.dump());
  CHECK(e.kind() == ErrorKind::ConfigParseError);
  CHECK(e.field() == "material.viscosity");
}

TEST_CASE("scenario validation names the field") {
  auto field_of = [](nlohmann::json j) {
    const Error e = parse_error(j.dump());
    CHECK(e.kind() == ErrorKind::ValidationError);
    return e.field();
  };
  nlohmann::json j = base_scenario("v");
  j["material"]["mu"] = 0.0;
  CHECK(field_of(j) == "material.mu");
  j = base_scenario("v");
  j["domain"]["R0"] = 2.0;
  CHECK(field_of(j).rfind("domain", 0) == 0);
  j = base_scenario("v");
  j["integrator"]["dt"] = -1.0;
  CHECK(field_of(j) == "integrator.dt");
  j = base_scenario("v");
  j["modes"] = {1, 1};
  CHECK(field_of(j) == "modes");
  j = base_scenario("v");
  j["convergence"] = {{"study", "elliptic"}, {"levels", {{{"N", 32}, {"dt", 0.01}}}}};
  CHECK(field_of(j) == "convergence.levels");
  j = base_scenario("v");
  j["equivalence"] = {{"source", "E"}, {"target", "Ec"}};
  CHECK(field_of(j).rfind("equivalence", 0) == 0);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli({"simulate", write_scenario(base_scenario("ok"), "ok").string()}) == 0);
  nlohmann::json j = base_scenario("strict");
  j["audits"] = {"energy"};
  CHECK(run_cli({"--tol-scale", "1e-30", "simulate", write_scenario(j, "strict").string()}) == 1);
  j = base_scenario("invalid");
  j["material"]["B"] = -1.0;
  CHECK(run_cli({"verify", write_scenario(j, "invalid").string()}) == 2);
  const fs::path bad = scratch_dir() / "broken.json";
  std::ofstream(bad) << "{ \"domain\": ";
  CHECK(run_cli({"simulate", bad.string()}) == 2);
  CHECK(run_cli({"simulate", (scratch_dir() / "missing.json").string()}) != 0);
  // unconstrained data cannot be mapped into the displacement model
  j = base_scenario("noconstraint");
  j["model"] = "P";
  j["modes"] = {0};
  j["equivalence"] = {{"source", "P"}, {"target", "L"}};
  CHECK(run_cli({"equivalence", write_scenario(j, "noconstraint").string()}) == 3);
}

TEST_CASE("time series and summary artifacts") {
  const nlohmann::json j = base_scenario("artifacts");
  REQUIRE(run_cli({"verify", write_scenario(j, "artifacts").string()}) == 0);
  const std::string csv = slurp(j["output"]["csv"].get<std::string>());
  CHECK(csv.rfind("model,l,m,time,acoustic_kinetic,acoustic_compression,membrane_tension,membrane_kinetic,"
                  "membrane_stiffness,energy_total,dissipation_to_date,constraint,curl_defect,trace_bulk_R1,"
                  "trace_v,trace_vt\r\n",
                  0) == 0);
  size_t rows = 0;
  for (size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) ++rows;
  CHECK(rows == 1 + 3 * 21);
  const auto summary = nlohmann::json::parse(slurp(j["output"]["summary"].get<std::string>()));
  for (const char* key : {"command", "config_sha256", "model", "modes", "grid", "integrator", "tol_scale", "audits", "pass"})
    CHECK(summary.contains(key));
  CHECK(summary["pass"] == true);
  CHECK(summary["config_sha256"].get<std::string>().size() == 64);
}

TEST_CASE("output is identical for any thread count") {
  nlohmann::json j = base_scenario("threads");
  j["model"] = "P";
  j["modes"] = {0, 1, 2, 3};
  const Scenario sc = parse_scenario(j.dump());
  run_scenario(sc, RunOptions{1.0, 1}, true);
  const std::string one = slurp(sc.csv_path), one_s = slurp(sc.summary_path);
  run_scenario(sc, RunOptions{1.0, 4}, true);
  CHECK(slurp(sc.csv_path) == one);
  CHECK(slurp(sc.summary_path) == one_s);
}

TEST_CASE("convergence ladder reports orders") {
  nlohmann::json j = base_scenario("ladder");
  j["modes"] = {0, 1};
  j["convergence"] = {{"study", "energy_identity"},
                      {"levels", {{{"N", 32}, {"dt", 0.04}}, {{"N", 32}, {"dt", 0.02}}, {{"N", 32}, {"dt", 0.01}}}}};
  const Scenario sc = parse_scenario(j.dump());
  const RunSummary rs = run_convergence(sc, RunOptions{});
  CHECK(rs.pass());
  const std::string csv = slurp(sc.csv_path);
  CHECK(csv.rfind("quantity,level,N,h,dt,residual,observed_order,flag", 0) == 0);
}
