/// @file cli.hpp
/// @brief Scenario files, batch runs and their CSV/JSON artifacts.
#pragma once
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "acousticbc/domain.hpp"
#include "acousticbc/evolve.hpp"
#include "acousticbc/material.hpp"
#include "acousticbc/presets.hpp"

namespace acbc {

struct ConvergenceLevel {
  int N = 0;
  double dt = 0.0;
};

struct ConvergenceSpec {
  std::string study;  // energy_identity | elliptic | weak_residual | cross_integrator
  std::vector<ConvergenceLevel> levels;
  double min_order = 1.7;
};

struct EquivalenceSpec {
  ModelTag source = ModelTag::P;
  ModelTag target = ModelTag::E;
  bool round_trip = false;
};

struct Scenario {
  std::string raw;  // file contents, hashed into the summary
  double R0 = 0.0, R1 = 1.0;
  int N = 64;
  MaterialParams material;
  ModelTag model = ModelTag::P;
  ModeSet modes;
  InitialDataRecipe initial;
  IntegratorConfig integrator;
  std::vector<std::string> audits;
  std::string csv_path = "timeseries.csv";
  std::string summary_path = "summary.json";
  std::optional<ConvergenceSpec> convergence;
  std::optional<EquivalenceSpec> equivalence;
};

// Parse and validate. ConfigParseError carries line/column or the JSON path of
// a mistyped field; ValidationError names the offending field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct RunOptions {
  double tol_scale = 1.0;
  int threads = 0;  // 0: ACOUSTICBC_THREADS or hardware concurrency
};

struct AuditEntry {
  std::string name;
  int l = 0;
  double value = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct RunSummary {
  std::string command;
  std::vector<AuditEntry> audits;
  bool pass() const;
};

// Each run writes its artifacts to the scenario's output paths and returns the
// audit list; the exit code is 0 iff every entry passed.
RunSummary run_scenario(const Scenario& sc, const RunOptions& opt, bool full_battery);
RunSummary run_convergence(const Scenario& sc, const RunOptions& opt);
RunSummary run_equivalence(const Scenario& sc, const RunOptions& opt);

std::string sha256_hex(const std::string& data);
int effective_threads(const RunOptions& opt);

int cli_main(int argc, char** argv);

}  // namespace acbc
