#include "mma/variance.hpp"

#include "mma/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mma {

std::string to_string(VarianceMethod method) {
  switch (method) {
    case VarianceMethod::known:
      return "known";
    case VarianceMethod::lsq:
      return "lsq";
    case VarianceMethod::rice:
      return "rice";
  }
  return "unknown";
}

VarianceEstimate sigma2_lsq(const SequenceView& view, std::size_t m) {
  if (m >= view.n()) throw std::invalid_argument("sigma2_lsq requires m < n");
  if (m > view.p()) throw std::invalid_argument("sigma2_lsq requires m <= p");
  const double rss = view.residual_ss(m);
  return {rss / static_cast<double>(view.n() - m), VarianceMethod::lsq, m};
}

std::size_t lsq_model_size(std::size_t n, std::size_t p, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("lsq kappa must lie in (0, 1)");
  const auto m = static_cast<std::size_t>(std::floor(kappa * static_cast<double>(n)));
  return std::min(m, p);
}

VarianceEstimate sigma2_rice(std::span<const double> y_sorted) {
  const std::size_t n = y_sorted.size();
  if (n < 2) throw std::invalid_argument("sigma2_rice requires at least two observations");
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = y_sorted[i + 1] - y_sorted[i];
    s += d * d;
  }
  return {s.value() / (2.0 * static_cast<double>(n - 1)), VarianceMethod::rice, 0};
}

VarianceEstimate sigma2_rice(const Eigen::VectorXd& y, const Eigen::VectorXd& u) {
  if (y.size() != u.size()) throw std::invalid_argument("sigma2_rice: covariate length does not match response");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(y.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return u[a] < u[b]; });
  std::vector<double> sorted(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = y[order[i]];
  return sigma2_rice(sorted);
}

std::size_t cp_select(const SequenceView& view, double sigma2_hat, std::size_t max_m) {
  if (max_m > view.p()) throw std::invalid_argument("cp_select: max_m exceeds p");
  if (!(sigma2_hat >= 0.0)) throw std::invalid_argument("cp_select: variance estimate must be nonnegative");
  const double n = static_cast<double>(view.n());
  const auto& th = view.theta_hat();

  // ||y - P_m y||^2 / n for every m, accumulated from the back.
  std::vector<double> rss(max_m + 1);
  CompensatedSum tail;
  for (Eigen::Index j = th.size() - 1; j >= static_cast<Eigen::Index>(max_m); --j) tail += th[j] * th[j];
  tail += view.residual_ss() / n;
  rss[max_m] = tail.value();
  for (std::size_t m = max_m; m-- > 0;) {
    tail += th[static_cast<Eigen::Index>(m)] * th[static_cast<Eigen::Index>(m)];
    rss[m] = tail.value();
  }

  std::size_t best = 0;
  double best_value = rss[0];
  for (std::size_t m = 1; m <= max_m; ++m) {
    const double value = rss[m] + 2.0 * sigma2_hat * static_cast<double>(m) / n;
    if (value < best_value) {
      best = m;
      best_value = value;
    }
  }
  return best;
}

}  // namespace mma
