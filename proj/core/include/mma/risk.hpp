#pragma once

#include "mma/candidates.hpp"
#include "mma/weights.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace mma {

/// True transformed coefficients together with the noise level and sample size
/// that define every oracle risk.
struct CoefficientProfile {
  Eigen::VectorXd theta;
  double sigma2 = 1.0;
  std::size_t n = 1;

  std::size_t p() const noexcept { return static_cast<std::size_t>(theta.size()); }
  double noise() const noexcept { return sigma2 / static_cast<double>(n); }

  /// Throws std::invalid_argument on non-finite theta, sigma2 <= 0 or p > n.
  void validate() const;
};

/// theta_j = j^{-alpha}, j = 1..p.
CoefficientProfile poly_profile(double alpha, std::size_t p, std::size_t n, double sigma2 = 1.0);

/// theta_j = exp(-j^alpha), j = 1..p.
CoefficientProfile exp_profile(double alpha, std::size_t p, std::size_t n, double sigma2 = 1.0);

/// Risk of the nested model of size m: m sigma^2/n + sum_{j>m} theta_j^2.
double ms_risk(const CoefficientProfile& profile, std::size_t m);

struct MsChoice {
  std::size_t m = 0;
  double risk = 0.0;
};

/// argmin over m = 0..p of ms_risk, ties toward the smaller model.
MsChoice best_ms(const CoefficientProfile& profile);

/// Best single model among the sizes of a nested set.
MsChoice best_in_set(const CoefficientProfile& profile, const CandidateSet& set);

/// Risk of the model-averaged estimator with cumulative weights gamma:
/// sum_j sum_{l in group j} [(1-gamma_j)^2 theta_l^2 + gamma_j^2 sigma^2/n] + sum_{l>k_M} theta_l^2.
double ma_risk(const CoefficientProfile& profile, const CandidateSet& set, const CumulativeWeights& gamma);

struct OracleWeights {
  CumulativeWeights gamma;
  double risk = 0.0;
  /// For oracle_nested: whether the closed-form weights are nonincreasing, i.e.
  /// feasible cumulative weights. Always true for the other oracles.
  bool monotone = true;
};

/// Closed-form optimum over all nested models: gamma_1 = 1 and
/// gamma_j = theta_j^2 / (theta_j^2 + sigma^2/n) for j >= 2.
OracleWeights oracle_nested(const CoefficientProfile& profile);

/// Minimizer of ma_risk over cumulative weights of a nested set (PAVA).
OracleWeights oracle_grouped(const CoefficientProfile& profile, const CandidateSet& set);

/// Minimizer of ma_risk over the discrete weight set W(N) (dynamic programming).
OracleWeights oracle_discrete(const CoefficientProfile& profile, const CandidateSet& set, std::size_t N);

/// min_k { k sigma^2/n + sum of the p - k smallest theta_j^2 }.
double ideal_subset_ms_risk(const CoefficientProfile& profile);

enum class SubsetHull {
  /// Convex hull of all subsets including the empty model: every coordinate
  /// shrinks independently.
  with_empty,
  /// The coordinate with the largest |theta| is kept with multiplier 1, the
  /// analogue of gamma_1 = 1 for nested sets.
  first_pinned,
};

/// Ideal model-averaging risk over all subsets. With the default hull this is
/// sum_j theta_j^2 sigma^2 / (n theta_j^2 + sigma^2).
double ideal_subset_ma_risk(const CoefficientProfile& profile, SubsetHull hull = SubsetHull::with_empty);

/// Candidate-set complexity
///   [M min (1 + sum_{j<M} (k_{j+1}-k_j)/(4 k_j) + sum_{j<M'} (S_{j-1}-S_j)/(4 S_j))] (1 + log M)^2
/// with S_j = sum_{k_j < l <= k_M} theta_l^2, k_0 = 0, M' = min{j >= 1 : S_j = 0}.
double psi(const CoefficientProfile& profile, const CandidateSet& set);

struct PinskerResult {
  Eigen::VectorXd gamma;  // (1 - kappa j^alpha)_+, j = 1..p
  double kappa = 0.0;
  double risk = 0.0;      // sup of the risk over the ellipsoid boundary
};

/// Linear minimax weights over the ellipsoid {sum_j j^{2 alpha} theta_j^2 <= R},
/// j = 1..p. kappa solves (sigma^2/n) sum_j j^alpha (1 - kappa j^alpha)_+ = kappa R
/// by bisection on [0, 1].
PinskerResult pinsker_oracle(double alpha, double R, double sigma2, std::size_t n, std::size_t p);

/// sum_{j=1}^n c^2 j^{-2q} sigma^2 / (n c^2 j^{-2q} + sigma^2).
double hyperrect_minimax_risk(double c, double q, double sigma2, std::size_t n);

}  // namespace mma
