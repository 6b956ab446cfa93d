#pragma once
// Scenario configuration, the named-check catalog, the deterministic runner,
// and report emission for the verification CLI.
//
// A scenario is a JSON document selecting a grid, a magnetic field, a gauge,
// a fixture family, a seed, and a list of named checks with optional
// per-check tolerance overrides.  Each check builds its inputs from the
// scenario alone (seeded generators, fixed-order reductions), measures one
// residual, and reports it against its tolerance.  Reports serialize to CSV
// and JSON-lines with byte-stable numeric formatting.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "magweyl/bargmann.hpp"

namespace magweyl {

struct ScenarioConfig {
  int N = 2;
  int n = 12;
  double L = 6.0;
  FieldSpec field = FieldSpec::constant(1.0);
  // "transversal" | "symmetric" | "custom" (symmetric shifted by rho).
  std::string gauge = "symmetric";
  RhoSpec rho{};
  // "gaussian" | "hermite" | "random-bandlimited".
  std::string fixtures = "gaussian";
  std::uint64_t seed = 1;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;  // per-check overrides
  double toleranceScale = 1.0;
  double memoryCeilingMiB = 512.0;
};

// Throws std::invalid_argument on malformed or incomplete JSON.
ScenarioConfig config_from_json(const std::string& text);
std::string config_to_json(const ScenarioConfig& cfg);

struct CheckReport {
  std::string id;
  std::string digest;  // hex digest of the inputs (config + check id)
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;  // pass <=> residual <= tolerance
  double seconds = 0.0;
  int N = 0;
  int n = 0;
  double L = 0.0;
  std::string notes;  // measured constants and sub-residuals, "k=v" pairs
};

// Catalog order is the execution and report order.
const std::vector<std::string>& known_checks();
double default_tolerance(const std::string& check);

// Predicted peak dense-allocation footprint of the scenario, in bytes.
double predicted_bytes(const ScenarioConfig& cfg);

// Full up-front validation: grid invariants, field/gauge compatibility,
// fixture family, check identifiers (std::invalid_argument naming the
// offender), and the memory guard (std::length_error carrying the predicted
// size).  Runs before any computation.
void validate_config(const ScenarioConfig& cfg);

// Executes the configured checks and returns one report per check, in
// catalog order.  Deterministic for fixed config + seed regardless of jobs;
// every reduction uses a fixed summation order.
std::vector<CheckReport> run_scenario(const ScenarioConfig& cfg, int jobs = 1);

inline bool all_pass(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass) return false;
  return true;
}

// CSV: header + one row per check (id, residual, tolerance, pass, seconds).
std::string reports_to_csv(const std::vector<CheckReport>& reports);
// JSON-lines: one full structured record per report; round-trips exactly.
std::string reports_to_jsonl(const std::vector<CheckReport>& reports);
std::vector<CheckReport> reports_from_jsonl(const std::string& text);

// Measured normalization constants on the scenario grid: kappa (pairing /
// trace ratio), kappaPrime (L^2 -> Hilbert-Schmidt norm ratio of the
// quantization), and sfNorm (norm ratio of the symplectic Fourier
// transform, unitary on the grid).
struct Calibration {
  double kappa = 0.0;
  double kappaPrime = 0.0;
  double sfNorm = 0.0;
};
Calibration run_calibration(const ScenarioConfig& cfg);

}  // namespace magweyl
