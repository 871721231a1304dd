#include "mma/errors.hpp"
#include "mma/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mma {

namespace {

double objective(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b, const Eigen::VectorXd& w) {
  return w.dot(Q * w) + b.dot(w);
}

}  // namespace

SimplexQpResult simplex_qp(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b) {
  const Eigen::Index M = b.size();
  if (M == 0) throw std::invalid_argument("simplex_qp needs at least one variable");
  if (Q.rows() != M || Q.cols() != M) throw std::invalid_argument("simplex_qp: Q must be M x M");
  if (!Q.allFinite() || !b.allFinite()) throw std::invalid_argument("simplex_qp: non-finite input");

  const double scale = std::max({1.0, Q.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  const double tol = kQpTolerance * scale;

  SimplexQpResult result;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i < M; ++i) {
    if (Q(i, i) + b[i] < Q(start, start) + b[start]) start = i;
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(M);
  w[start] = 1.0;
  std::vector<Eigen::Index> free{start};

  // Moves w by step * d (d supported on `free`), dropping the first index that
  // hits zero. Returns true when the full step was taken.
  const auto move = [&](const Eigen::VectorXd& d, double max_step) {
    double step = max_step;
    std::size_t blocking = free.size();
    for (std::size_t a = 0; a < free.size(); ++a) {
      const double di = d[free[a]];
      if (di < 0.0) {
        const double ratio = -w[free[a]] / di;
        if (ratio < step) {
          step = ratio;
          blocking = a;
        }
      }
    }
    if (!std::isfinite(step)) throw NumericalError("simplex_qp: unbounded direction without a blocking bound");
    for (Eigen::Index i : free) w[i] = std::max(0.0, w[i] + step * d[i]);
    if (blocking == free.size()) return true;
    w[free[blocking]] = 0.0;
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(blocking));
    return false;
  };

  const std::size_t cap = 50 * static_cast<std::size_t>(M);
  for (std::size_t iter = 0; iter < cap; ++iter) {
    result.iterations = iter + 1;
    Eigen::VectorXd g = 2.0 * (Q * w) + b;

    if (free.size() > 1) {
      // Null-space step on the face {w_F : sum w_F = 1}: d_F = Z u with
      // Z = [I; -1^T], the last free index absorbing the sum constraint.
      std::sort(free.begin(), free.end());
      const auto k = static_cast<Eigen::Index>(free.size()) - 1;
      const Eigen::Index last = free.back();
      Eigen::MatrixXd H(k, k);
      Eigen::VectorXd rhs(k);
      for (Eigen::Index r = 0; r < k; ++r) {
        const Eigen::Index fr = free[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < k; ++c) {
          const Eigen::Index fc = free[static_cast<std::size_t>(c)];
          H(r, c) = Q(fr, fc) - Q(fr, last) - Q(last, fc) + Q(last, last);
        }
        rhs[r] = -0.5 * (g[fr] - g[last]);
      }
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(H);
      Eigen::VectorXd u = cod.solve(rhs);
      const Eigen::VectorXd residual = rhs - H * u;
      const bool consistent = residual.norm() <= 1e-10 * std::max(scale, rhs.norm());

      Eigen::VectorXd d = Eigen::VectorXd::Zero(M);
      const Eigen::VectorXd& dir = consistent ? u : residual;
      for (Eigen::Index r = 0; r < k; ++r) d[free[static_cast<std::size_t>(r)]] = dir[r];
      d[last] = -dir.sum();

      if (!consistent) {
        // Zero-curvature descent direction: the objective is linear along d, so
        // walk until a bound blocks.
        move(d, std::numeric_limits<double>::infinity());
        continue;
      }
      if (!move(d, 1.0)) continue;
      g = 2.0 * (Q * w) + b;
    }

    // Stationary on the current face; inspect the multipliers of the zero bounds.
    const double mu = w.dot(g);
    double stationarity = 0.0;
    for (Eigen::Index i : free) {
      if (w[i] > 0.0) stationarity = std::max(stationarity, std::abs(g[i] - mu));
    }
    Eigen::Index entering = -1;
    double most_negative = 0.0;
    std::vector<bool> is_free(static_cast<std::size_t>(M), false);
    for (Eigen::Index i : free) is_free[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < M; ++i) {
      if (is_free[static_cast<std::size_t>(i)]) continue;
      const double lambda = g[i] - mu;
      if (lambda < most_negative) {
        most_negative = lambda;
        entering = i;
      }
    }
    result.kkt_residual = std::max(stationarity, -most_negative) / scale;

    if (most_negative < -tol) {
      free.push_back(entering);
      continue;
    }
    if (result.kkt_residual <= kQpTolerance) {
      result.w = sanitize_simplex(w).w;
      result.objective = objective(Q, b, result.w);
      return result;
    }
    // Multipliers are fine but the face is not solved accurately yet; take
    // another null-space step from the current point.
    if (free.size() <= 1) {
      result.w = sanitize_simplex(w).w;
      result.objective = objective(Q, b, result.w);
      return result;
    }
  }
  throw ConvergenceError("simplex_qp did not converge within " + std::to_string(cap) + " iterations",
                         result.kkt_residual);
}

}  // namespace mma
