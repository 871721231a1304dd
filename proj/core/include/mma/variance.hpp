#pragma once

#include "mma/seqmodel.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>

namespace mma {

enum class VarianceMethod { known, lsq, rice };

struct VarianceEstimate {
  double value = 0.0;
  VarianceMethod method = VarianceMethod::known;
  /// Model size used by the least-squares estimator.
  std::size_t m = 0;
};

std::string to_string(VarianceMethod method);

/// ||y - P_m y||^2 / (n - m). Requires m < n and m <= p.
VarianceEstimate sigma2_lsq(const SequenceView& view, std::size_t m);

/// min(floor(kappa n), p), the default model size of the least-squares estimator.
std::size_t lsq_model_size(std::size_t n, std::size_t p, double kappa = 0.5);

/// First-difference estimator sum_{i=1}^{n-1} (y_(i+1) - y_(i))^2 / (2(n-1)) on
/// responses already ordered by the covariate.
VarianceEstimate sigma2_rice(std::span<const double> y_sorted);

/// Orders y by the covariate u (stable, so ties keep input order) and applies
/// the first-difference estimator.
VarianceEstimate sigma2_rice(const Eigen::VectorXd& y, const Eigen::VectorXd& u);

/// argmin over m = 0..max_m of ||y - P_m y||^2/n + 2 sigma2_hat m/n, ties toward
/// the smaller m.
std::size_t cp_select(const SequenceView& view, double sigma2_hat, std::size_t max_m);

}  // namespace mma
