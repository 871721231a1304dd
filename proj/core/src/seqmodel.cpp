#include "mma/seqmodel.hpp"

#include "mma/errors.hpp"
#include "mma/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mma {

void RegressionData::validate() const {
  if (X.rows() == 0 || X.cols() == 0) throw std::invalid_argument("design matrix is empty");
  if (X.cols() > X.rows()) {
    throw std::invalid_argument("design has more columns (" + std::to_string(X.cols()) + ") than rows (" +
                                std::to_string(X.rows()) + ")");
  }
  if (y.size() != X.rows()) {
    throw std::invalid_argument("response length " + std::to_string(y.size()) + " does not match " +
                                std::to_string(X.rows()) + " design rows");
  }
  if (f && f->size() != X.rows()) throw std::invalid_argument("true mean length does not match design rows");
  if (sigma2 && !(*sigma2 > 0.0 && std::isfinite(*sigma2))) {
    throw std::invalid_argument("noise variance must be positive and finite");
  }
  if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("design or response contains non-finite values");
}

SequenceView SequenceView::from_coefficients(Eigen::VectorXd theta_hat, std::optional<Eigen::VectorXd> theta_true,
                                             std::size_t n, double residual_ss, std::optional<double> sigma2,
                                             double mean_residual_ss) {
  if (static_cast<std::size_t>(theta_hat.size()) > n) throw std::invalid_argument("p must not exceed n");
  if (theta_true && theta_true->size() != theta_hat.size()) {
    throw std::invalid_argument("theta_true and theta_hat differ in length");
  }
  if (residual_ss < 0.0 || mean_residual_ss < 0.0) {
    throw std::invalid_argument("residual sums of squares must be nonnegative");
  }
  SequenceView v;
  v.n_ = n;
  v.theta_hat_ = std::move(theta_hat);
  v.theta_true_ = std::move(theta_true);
  v.sigma2_ = sigma2;
  v.residual_ss_ = residual_ss;
  v.mean_residual_ss_ = mean_residual_ss;
  return v;
}

double SequenceView::residual_ss(std::size_t m) const {
  if (m > p()) throw std::out_of_range("model size exceeds p");
  CompensatedSum s;
  for (Eigen::Index j = static_cast<Eigen::Index>(m); j < theta_hat_.size(); ++j) s += theta_hat_[j] * theta_hat_[j];
  return static_cast<double>(n_) * s.value() + residual_ss_;
}

double SequenceView::mean_square_response() const {
  return residual_ss(0) / static_cast<double>(n_);
}

Eigen::MatrixXd SequenceView::basis() const {
  if (!qr_) throw std::logic_error("sequence view has no basis (built from coefficients)");
  const auto n = static_cast<Eigen::Index>(n_);
  const auto p = theta_hat_.size();
  Eigen::MatrixXd phi = qr_->householderQ() * Eigen::MatrixXd::Identity(n, p);
  for (Eigen::Index j = 0; j < p; ++j) phi.col(j) *= signs_[j];
  return phi;
}

Eigen::VectorXd SequenceView::synthesize(const Eigen::VectorXd& coef) const {
  if (!qr_) throw std::logic_error("sequence view has no basis (built from coefficients)");
  if (coef.size() != theta_hat_.size()) throw std::invalid_argument("coefficient length must equal p");
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::VectorXd rotated = Eigen::VectorXd::Zero(n);
  rotated.head(coef.size()) = coef.cwiseProduct(signs_) * std::sqrt(static_cast<double>(n_));
  return qr_->householderQ() * rotated;
}

SequenceView orthogonalize(const RegressionData& data) {
  data.validate();
  auto qr = std::make_shared<Eigen::HouseholderQR<Eigen::MatrixXd>>(data.X);
  const auto p = data.X.cols();
  const auto n = data.X.rows();

  const auto& packed = qr->matrixQR();
  double largest = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) largest = std::max(largest, std::abs(packed(j, j)));
  for (Eigen::Index j = 0; j < p; ++j) {
    const double pivot = std::abs(packed(j, j));
    if (!(pivot > kRankTolerance * largest)) {
      throw RankDeficientError(static_cast<std::size_t>(j), pivot, largest);
    }
  }

  SequenceView v;
  v.n_ = static_cast<std::size_t>(n);
  v.signs_.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) v.signs_[j] = packed(j, j) < 0.0 ? -1.0 : 1.0;

  const double root_n = std::sqrt(static_cast<double>(n));
  const Eigen::VectorXd qty = qr->householderQ().adjoint() * data.y;
  v.theta_hat_ = qty.head(p).cwiseProduct(v.signs_) / root_n;
  CompensatedSum rss;
  for (Eigen::Index i = p; i < n; ++i) rss += qty[i] * qty[i];
  v.residual_ss_ = rss.value();

  if (data.f) {
    const Eigen::VectorXd qtf = qr->householderQ().adjoint() * (*data.f);
    v.theta_true_ = qtf.head(p).cwiseProduct(v.signs_) / root_n;
    CompensatedSum fres;
    for (Eigen::Index i = p; i < n; ++i) fres += qtf[i] * qtf[i];
    v.mean_residual_ss_ = fres.value();
    v.f_ = *data.f;
  }
  v.sigma2_ = data.sigma2;
  v.qr_ = std::move(qr);
  return v;
}

Eigen::VectorXd nested_fit(const SequenceView& view, std::size_t m) {
  if (m > view.p()) throw std::out_of_range("nested model size " + std::to_string(m) + " exceeds p = " +
                                            std::to_string(view.p()));
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(view.p()));
  coef.head(static_cast<Eigen::Index>(m)) = view.theta_hat().head(static_cast<Eigen::Index>(m));
  return view.synthesize(coef);
}

double loss(const SequenceView& view, const Eigen::VectorXd& fitted) {
  if (!view.mean()) throw std::invalid_argument("loss requires the true mean f");
  const auto& f = *view.mean();
  if (fitted.size() != f.size()) throw std::invalid_argument("fitted vector length does not match n");
  CompensatedSum s;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double d = fitted[i] - f[i];
    s += d * d;
  }
  return s.value() / static_cast<double>(view.n());
}

}  // namespace mma
