#pragma once

#include "mma/candidates.hpp"
#include "mma/risk.hpp"
#include "mma/seqmodel.hpp"
#include "mma/variance.hpp"
#include "mma/weights.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mma {

/// Case 1: beta_j = j^{-alpha}. Case 2: beta_j = exp(-j^alpha).
enum class DecayCase { poly, exp };

/// Where MR1/MR2 take the optimal nested size m* from.
enum class MstarSource {
  /// best_ms on the population coefficients beta (orthonormal-design idealization).
  population,
  /// best_ms on the replication's transformed theta.
  replication,
};

enum class MethodId { WR1, WR2, MR1, MR2, M_ALL, M_G1, M_G2, M_MS1, M_MS2, ORACLE };

std::string_view method_name(MethodId id);
std::optional<MethodId> parse_method(std::string_view name);
const std::vector<MethodId>& all_methods();

std::string_view case_name(DecayCase c);
std::optional<DecayCase> parse_case(std::string_view name);

std::string_view to_string(MstarSource s);

/// One simulation cell: a decay profile at one sample size.
struct ScenarioConfig {
  DecayCase decay = DecayCase::poly;
  double alpha = 1.0;
  std::size_t n = 100;
  double snr = 1.0;
  std::size_t reps = 1000;
  std::uint64_t master_seed = 1;
  std::vector<MethodId> methods;
  VarianceMethod sigma2_mode = VarianceMethod::known;
  double lsq_kappa = 0.5;
  bool fixed_design = false;
  MstarSource mstar = MstarSource::population;

  /// floor(2n/3).
  std::size_t p() const noexcept { return 2 * n / 3; }

  /// Throws ConfigError on invalid settings.
  void validate() const;
};

/// Population quantities shared by every replication of a scenario.
struct ScenarioPlan {
  ScenarioConfig config;
  std::size_t p = 0;
  Eigen::VectorXd beta;
  double sigma2 = 0.0;
  std::size_t mstar_population = 0;
};

ScenarioPlan make_plan(const ScenarioConfig& config);

/// Regenerates replication `rep` of the scenario. The RNG stream depends only
/// on (master_seed, rep); with fixed_design the design comes from a separate
/// stream shared by all replications.
RegressionData gen_replication(const ScenarioConfig& config, std::size_t rep);
RegressionData gen_replication(const ScenarioPlan& plan, std::size_t rep);

/// Noise-variance estimate used by the methods of one replication.
double replication_sigma2(const ScenarioPlan& plan, const RegressionData& data, const SequenceView& view);

/// m* used by MR1/MR2 for one replication.
std::size_t replication_mstar(const ScenarioPlan& plan, const SequenceView& view);

struct MethodFit {
  CandidateSet set;
  CumulativeWeights gamma;
  double loss = 0.0;
};

/// Runs one registered method on a replication in sequence coordinates. `n`
/// enters the (log n)-based candidate sets; `mstar` only matters for MR1/MR2.
MethodFit fit_method(MethodId id, const SequenceView& view, double sigma2_hat, std::size_t mstar);

/// Loss of `id` on replication `rep`.
double run_method(MethodId id, const ScenarioPlan& plan, std::size_t rep);

/// Loss of `id` on externally supplied data that carries f and sigma2.
double run_method(MethodId id, const RegressionData& data, VarianceMethod sigma2_mode, double lsq_kappa = 0.5);

struct MethodSummary {
  MethodId method = MethodId::M_ALL;
  double mean_ratio = 0.0;  // mean over replications of loss / loss(M-ALL)
  double se = 0.0;          // sample sd of the ratios / sqrt(R); NaN when R = 1
  double mean_loss = 0.0;
  /// sum_r loss(method) / sum_r loss(ORACLE).
  double risk_ratio = 0.0;
};

struct ScenarioResult {
  ScenarioConfig config;
  std::size_t p = 0;
  double sigma2 = 0.0;
  std::size_t mstar_population = 0;
  std::vector<MethodSummary> methods;
  double oracle_mean_loss = 0.0;
};

/// Runs every replication of a scenario on `jobs` worker threads. Results are
/// aggregated in replication order, so they do not depend on `jobs`.
ScenarioResult run_scenario(const ScenarioConfig& config, std::size_t jobs = 1);

/// Table of relative losses for the configured methods (M-ALL is the reference
/// and is always evaluated).
ScenarioResult table2(const ScenarioConfig& config, std::size_t jobs = 1);

/// Risk ratio of M-ALL against the per-replication oracle at each n of the grid.
std::vector<ScenarioResult> risk_ratio_curve(const ScenarioConfig& config, const std::vector<std::size_t>& n_grid,
                                             std::size_t jobs = 1);

/// Per-replication losses of every evaluated method, in the order of
/// `evaluated_methods(config)`.
std::vector<std::vector<double>> replication_losses(const ScenarioConfig& config, std::size_t jobs = 1);

/// The configured methods plus M-ALL and ORACLE, without duplicates.
std::vector<MethodId> evaluated_methods(const ScenarioConfig& config);

}  // namespace mma
