#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>

namespace mma {

/// A linear regression problem y = f + e with a fixed design.
///
/// `f` and `sigma2` are the ground truth of a simulation and are only present
/// when the data was generated by the Monte Carlo engine (or supplied by the
/// user for diagnostics).
struct RegressionData {
  Eigen::MatrixXd X;  // n x p, columns in regressor order
  Eigen::VectorXd y;  // n
  std::optional<Eigen::VectorXd> f;
  std::optional<double> sigma2;

  std::size_t n() const noexcept { return static_cast<std::size_t>(X.rows()); }
  std::size_t p() const noexcept { return static_cast<std::size_t>(X.cols()); }

  /// Throws std::invalid_argument on shape or value violations. Rank is checked
  /// by orthogonalize().
  void validate() const;
};

/// The regression problem expressed in the orthonormal basis phi_1..phi_p that
/// is generated by successive nested projections:
///
///   phi_j phi_j^T = P_j - P_{j-1},  theta_hat_j = phi_j^T y / sqrt(n),
///   theta_j = phi_j^T f / sqrt(n).
///
/// Every risk, loss and criterion formula of the library is evaluated in these
/// coordinates. The view is immutable and cheap to copy (the factorization is
/// shared).
class SequenceView {
 public:
  /// Builds a view directly in sequence coordinates, without an underlying
  /// design. `residual_ss` is ||y - P_p y||^2 (the part of y outside the
  /// column space). Such a view has no basis: synthesize() and nested_fit() throw.
  static SequenceView from_coefficients(Eigen::VectorXd theta_hat, std::optional<Eigen::VectorXd> theta_true,
                                        std::size_t n, double residual_ss = 0.0,
                                        std::optional<double> sigma2 = std::nullopt, double mean_residual_ss = 0.0);

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return static_cast<std::size_t>(theta_hat_.size()); }

  const Eigen::VectorXd& theta_hat() const noexcept { return theta_hat_; }
  const std::optional<Eigen::VectorXd>& theta_true() const noexcept { return theta_true_; }
  const std::optional<double>& sigma2() const noexcept { return sigma2_; }

  /// ||y - P_p y||^2, accumulated from the trailing n - p rotated coordinates.
  double residual_ss() const noexcept { return residual_ss_; }

  /// ||y - P_m y||^2 = n * sum_{j>m} theta_hat_j^2 + residual_ss().
  double residual_ss(std::size_t m) const;

  /// n^{-1} ||y||^2.
  double mean_square_response() const;

  /// ||f - P_p f||^2, the part of the true mean outside the column space. Zero
  /// when f = X beta or when the view carries no truth.
  double mean_residual_ss() const noexcept { return mean_residual_ss_; }

  bool has_basis() const noexcept { return qr_ != nullptr; }
  bool has_truth() const noexcept { return theta_true_.has_value(); }

  /// The true mean vector f, when the view was built from data that carried it.
  const std::optional<Eigen::VectorXd>& mean() const noexcept { return f_; }

  /// The n x p matrix [phi_1 ... phi_p].
  Eigen::MatrixXd basis() const;

  /// sqrt(n) * sum_j coef_j phi_j.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& coef) const;

 private:
  friend SequenceView orthogonalize(const RegressionData& data);

  SequenceView() = default;

  std::size_t n_ = 0;
  Eigen::VectorXd theta_hat_;
  std::optional<Eigen::VectorXd> theta_true_;
  std::optional<Eigen::VectorXd> f_;
  std::optional<double> sigma2_;
  double residual_ss_ = 0.0;
  double mean_residual_ss_ = 0.0;

  std::shared_ptr<const Eigen::HouseholderQR<Eigen::MatrixXd>> qr_;
  Eigen::VectorXd signs_;  // sign of diag(R); flips Householder columns so diag(R) > 0
};

/// Relative tolerance on |R_jj| / max |R_kk| below which a column is rejected.
inline constexpr double kRankTolerance = 1e-10;

/// Column-by-column QR in the given regressor order (no pivoting). Throws
/// RankDeficientError naming the first column whose pivot falls below
/// kRankTolerance times the largest pivot.
SequenceView orthogonalize(const RegressionData& data);

/// Least-squares fit of the model with the first m regressors, P_m y.
/// m = 0 gives the zero vector; m > p throws std::out_of_range.
Eigen::VectorXd nested_fit(const SequenceView& view, std::size_t m);

/// Normalized squared loss n^{-1} ||fitted - f||^2. Requires the true mean.
double loss(const SequenceView& view, const Eigen::VectorXd& fitted);

}  // namespace mma
