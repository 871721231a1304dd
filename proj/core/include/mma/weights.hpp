#pragma once

#include "mma/candidates.hpp"
#include "mma/seqmodel.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mma {

/// Model weights on the unit simplex, one per candidate model.
struct WeightVector {
  Eigen::VectorXd w;
};

/// gamma_j = sum_{m >= j} w_m for a nested set; gamma_1 = 1, nonincreasing, >= 0.
struct CumulativeWeights {
  Eigen::VectorXd gamma;
};

/// The discrete weight set W(N): weights are multiples of 1/N.
struct DiscreteWeightSpec {
  std::size_t N = 1;
};

CumulativeWeights gamma_from_w(const WeightVector& w);
WeightVector w_from_gamma(const CumulativeWeights& gamma);

/// Throws std::invalid_argument unless gamma_1 = 1 (to 1e-12), gamma is
/// nonincreasing and gamma_M >= 0.
void check_cumulative(const CumulativeWeights& gamma);

/// Clips entries in [-1e-12, 0) to zero and renormalizes when |sum - 1| <= 1e-9.
/// Larger violations throw NumericalError.
WeightVector sanitize_simplex(Eigen::VectorXd w);

/// MMA criterion n^{-1}||y - f_hat||^2 + 2 sigma2_hat k^T w / n for a nested set,
/// evaluated group by group in sequence coordinates.
double mma_criterion(const SequenceView& view, const CandidateSet& set, const CumulativeWeights& gamma,
                     double sigma2_hat);

/// Same criterion for simplex weights on any set. Subset models select
/// coordinates of the sequence model.
double mma_criterion(const SequenceView& view, const CandidateSet& set, const WeightVector& w, double sigma2_hat);

/// Per-coordinate multipliers c_l (length p) such that the averaged fit is
/// sqrt(n) sum_l c_l theta_hat_l phi_l.
Eigen::VectorXd expand_gamma(const CandidateSet& set, const CumulativeWeights& gamma);
Eigen::VectorXd coordinate_multipliers(const CandidateSet& set, const WeightVector& w);

/// The model-averaged fit in the original coordinates.
Eigen::VectorXd averaged_fit(const SequenceView& view, const Eigen::VectorXd& multipliers);

/// Realized loss n^{-1}||f_hat - f||^2 of a model-averaged fit, computed in
/// sequence coordinates. Requires the true theta.
double ma_loss(const SequenceView& view, const Eigen::VectorXd& multipliers);
double ma_loss(const SequenceView& view, const CandidateSet& set, const CumulativeWeights& gamma);

/// Exact minimizer of the MMA criterion over cumulative weights of a nested set.
CumulativeWeights solve_nested(const SequenceView& view, const CandidateSet& set, double sigma2_hat);

/// Minimizer of the MMA criterion over the simplex by the active-set QP; any set kind.
WeightVector solve_qp(const SequenceView& view, const CandidateSet& set, double sigma2_hat);

/// Exact minimizer over the discrete weight set W(N) for a nested set.
CumulativeWeights solve_discrete(const SequenceView& view, const CandidateSet& set, double sigma2_hat,
                                 DiscreteWeightSpec spec);

/// Minimizer of the realized loss over cumulative weights of a nested set
/// (the per-replication oracle). Requires the true theta.
CumulativeWeights solve_loss_oracle(const SequenceView& view, const CandidateSet& set);

/// The quadratic form of the criterion: criterion(w) = w^T Q w + b^T w + ||y||^2/n.
struct CriterionQuadratic {
  Eigen::MatrixXd Q;
  Eigen::VectorXd b;
  double constant = 0.0;
};
CriterionQuadratic criterion_quadratic(const SequenceView& view, const CandidateSet& set, double sigma2_hat);

// Solver building blocks. Exposed for the risk module and for tests.

/// The block objective a g^2 + b g with a >= 0.
struct BlockQuadratic {
  double a = 0.0;
  double b = 0.0;

  double operator()(double g) const noexcept { return (a * g + b) * g; }
};

/// Minimizes sum_i blocks_i(g_i) subject to 1 >= g_1 >= g_2 >= ... >= 0 by
/// pool-adjacent-violators. A pooled block takes clip(-B/(2A), 0, 1); a block
/// with A = 0 takes 0 if B > 0 and 1 otherwise.
std::vector<double> isotonic_box_minimize(const std::vector<BlockQuadratic>& blocks);

/// Minimizes sum_i blocks_i(t_i / N) over integers N >= t_1 >= ... >= t_K >= 0
/// by dynamic programming. Among minimizers with identical objective value the
/// one with the smallest sum of t is returned.
std::vector<std::size_t> monotone_lattice_minimize(const std::vector<BlockQuadratic>& blocks, std::size_t N);

struct SimplexQpResult {
  Eigen::VectorXd w;
  double objective = 0.0;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
};

/// KKT residual below which simplex_qp() stops.
inline constexpr double kQpTolerance = 1e-8;

/// Minimizes w^T Q w + b^T w over the unit simplex for symmetric positive
/// semidefinite Q. Primal active-set method started from the best vertex.
/// Throws ConvergenceError after 50 M iterations.
SimplexQpResult simplex_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b);

}  // namespace mma
