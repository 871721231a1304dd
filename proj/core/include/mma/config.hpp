#pragma once

#include "mma/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mma {

struct CaseSpec {
  DecayCase decay = DecayCase::poly;
  double alpha = 1.0;
};

/// A grid of simulation cells (cases x sample sizes) sharing the remaining
/// settings. JSON and TOML files use the same keys:
///
///   reps, master_seed, snr, sigma2_mode ("known" | "lsq" | "rice"), lsq_kappa,
///   fixed_design, mstar ("population" | "replication"), methods, n, cases
///
/// where each entry of `cases` is {case = "poly" | "exp", alpha = ...}.
struct ExperimentConfig {
  std::size_t reps = 1000;
  std::uint64_t master_seed = 20240601;
  double snr = 1.0;
  VarianceMethod sigma2_mode = VarianceMethod::known;
  double lsq_kappa = 0.5;
  bool fixed_design = false;
  MstarSource mstar = MstarSource::population;
  std::vector<MethodId> methods;
  std::vector<std::size_t> n;
  std::vector<CaseSpec> cases;

  /// One ScenarioConfig per (case, n), cases outermost. Validates each cell.
  std::vector<ScenarioConfig> scenarios() const;
};

/// Throw ConfigError with a message naming the offending key.
ExperimentConfig parse_experiment_json(std::string_view text);
ExperimentConfig parse_experiment_toml(std::string_view text);

/// Dispatches on the extension (.json or .toml).
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// The resolved configuration as a JSON document (all keys explicit).
std::string experiment_to_json(const ExperimentConfig& config);

/// Reads a whole file; throws ConfigError if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace mma
