#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "epaut/peakons.hpp"
#include "epaut/suites.hpp"

namespace epaut::app {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline const std::vector<std::string>& scenarios() {
  static const std::vector<std::string> names = {
      "simulate",          "verify-dual-pair",    "verify-vol-dual-pair", "verify-noether",
      "verify-conservation", "verify-derivatives", "cocycle"};
  return names;
}

// Peakon ensemble for `simulate`. Without `initial` the state is drawn from
// EnsembleSampler with the run seed.
struct SimulateConfig {
  int nodes = 5;
  std::string group = "SO3";    // SO3 | U1
  std::string ambient = "line"; // line | circle
  std::string kernel = "line";  // line | circle
  double alpha1 = 1.0, alpha2 = 1.0;
  double dt = 1e-3;
  double t_end = 10.0;
  int stride = 100;
  double energy_tol = 1e-8;
  double charge_tol = 1e-8;
  double casimir_tol = 1e-10;
  double closed_form_tol = 1e-10;
  struct Initial {
    Eigen::VectorXd q, p, weights;
    Field sigma;
    Field gamma;  // algebra coordinates, g = exp(gamma)
  };
  std::optional<Initial> initial;
};

struct RunConfig {
  std::string scenario;
  std::uint64_t seed = 42;
  int threads = 1;
  bool strict = false;
  std::filesystem::path out = "out";

  SimulateConfig simulate;
  OrthogonalityOptions orthogonality;
  InclusionOptions inclusion;
  DegeneracyOptions degeneracy;
  IsotropyOptions isotropy;
  ConservationOptions conservation;
  WeakConsistencyOptions weak_consistency;
  DerivativeOptions derivatives;
  CocycleSuiteOptions cocycle;
  VolDualPairOptions vol_dual_pair;
  ReconstructionOptions reconstruction;

  std::vector<std::string> warnings;  // filled by parse_config
};

// TOML, or JSON when the extension is .json. Throws ConfigInvalid.
Json load_config_file(const std::filesystem::path& path);
// EPAUT_<KEY>=value sets a top-level key, EPAUT_<TABLE>__<KEY> a key of a table.
// Values are read as JSON when they parse, as strings otherwise.
void apply_environment(Json& config, const std::vector<std::string>& environment);
std::vector<std::string> process_environment();
// Throws ConfigInvalid on unknown keys, wrong types and invalid values.
RunConfig parse_config(const Json& config);

struct RunResult {
  Json report;
  bool passed = false;
  std::filesystem::path report_path;
};

// Runs the scenario and writes report.json (plus CSV files for simulate) into
// config.out. Throws AssertionFailed after writing when a check fails, or when
// --strict is set and there are warnings. One summary line per suite goes to `log`.
RunResult run(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace epaut::app
