#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mma::testing {

Eigen::VectorXd projection_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t m) {
  if (m == 0) return Eigen::VectorXd::Zero(y.size());
  const Eigen::MatrixXd Xm = X.leftCols(static_cast<Eigen::Index>(m));
  const Eigen::MatrixXd G = Xm.transpose() * Xm;
  const Eigen::VectorXd beta = G.ldlt().solve(Xm.transpose() * y);
  return Xm * beta;
}

namespace {

Eigen::VectorXd averaged(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::vector<std::size_t>& sizes,
                         const Eigen::VectorXd& w) {
  Eigen::VectorXd fit = Eigen::VectorXd::Zero(y.size());
  for (std::size_t m = 0; m < sizes.size(); ++m) fit += w[static_cast<Eigen::Index>(m)] * projection_fit(X, y, sizes[m]);
  return fit;
}

}  // namespace

double matrix_criterion(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::vector<std::size_t>& sizes,
                        const Eigen::VectorXd& w, double sigma2_hat) {
  const double n = static_cast<double>(y.size());
  double k = 0.0;
  for (std::size_t m = 0; m < sizes.size(); ++m) k += w[static_cast<Eigen::Index>(m)] * static_cast<double>(sizes[m]);
  return (y - averaged(X, y, sizes, w)).squaredNorm() / n + 2.0 * sigma2_hat * k / n;
}

double matrix_loss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& f,
                   const std::vector<std::size_t>& sizes, const Eigen::VectorXd& w) {
  return (f - averaged(X, y, sizes, w)).squaredNorm() / static_cast<double>(y.size());
}

double monotone_grid_min(const std::vector<BlockQuadratic>& blocks, double step) {
  const auto levels = static_cast<std::size_t>(std::llround(1.0 / step));
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t j, std::size_t cap, double acc) {
    if (j == blocks.size()) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t t = 0; t <= cap; ++t) {
      rec(j + 1, t, acc + blocks[j](static_cast<double>(t) / static_cast<double>(levels)));
    }
  };
  if (blocks.empty()) return 0.0;
  rec(1, levels, blocks[0](1.0));
  return best;
}

std::vector<CumulativeWeights> enumerate_lattice(std::size_t M, std::size_t N) {
  std::vector<CumulativeWeights> out;
  std::vector<std::size_t> t(M, 0);
  t[0] = N;
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == M) {
      CumulativeWeights g{Eigen::VectorXd(static_cast<Eigen::Index>(M))};
      for (std::size_t i = 0; i < M; ++i) g.gamma[static_cast<Eigen::Index>(i)] = static_cast<double>(t[i]) / N;
      out.push_back(std::move(g));
      return;
    }
    for (std::size_t v = 0; v <= t[j - 1]; ++v) {
      t[j] = v;
      rec(j + 1);
    }
  };
  rec(1);
  return out;
}

double simplex_grid_min(const Eigen::MatrixXd& Q, const Eigen::VectorXd& b, double step) {
  const auto levels = static_cast<long>(std::llround(1.0 / step));
  double best = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= levels; ++i) {
    for (long j = 0; i + j <= levels; ++j) {
      Eigen::Vector3d w(static_cast<double>(i) / levels, static_cast<double>(j) / levels,
                        static_cast<double>(levels - i - j) / levels);
      best = std::min(best, w.dot(Q * w) + b.dot(w));
    }
  }
  return best;
}

std::vector<BlockQuadratic> criterion_blocks(const SequenceView& view, const CandidateSet& set, double sigma2_hat) {
  const double n = static_cast<double>(view.n());
  std::vector<BlockQuadratic> blocks;
  std::size_t lo = 0;
  for (std::size_t k : set.sizes) {
    double S = 0.0;
    for (std::size_t l = lo; l < k; ++l) S += view.theta_hat()[static_cast<Eigen::Index>(l)] * view.theta_hat()[static_cast<Eigen::Index>(l)];
    const double d = static_cast<double>(k - lo);
    blocks.push_back({S, 2.0 * (d * sigma2_hat / n - S)});
    lo = k;
  }
  return blocks;
}

double subset_ms_brute_force(const CoefficientProfile& profile) {
  const std::size_t p = profile.p();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p); ++mask) {
    double r = 0.0;
    for (std::size_t l = 0; l < p; ++l) {
      const double t = profile.theta[static_cast<Eigen::Index>(l)];
      r += (mask >> l & 1U) ? profile.noise() : t * t;
    }
    best = std::min(best, r);
  }
  return best;
}

double linear_risk(const Eigen::VectorXd& gamma, const Eigen::VectorXd& theta, double noise) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < gamma.size(); ++j) {
    r += noise * gamma[j] * gamma[j] + (1.0 - gamma[j]) * (1.0 - gamma[j]) * theta[j] * theta[j];
  }
  return r;
}

double ellipsoid_pairwise_sup(const Eigen::VectorXd& gamma, double alpha, double R, double noise, std::size_t steps) {
  const Eigen::Index p = gamma.size();
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i; j < p; ++j) {
      for (std::size_t s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / static_cast<double>(steps);
        theta.setZero();
        const double ai = std::pow(static_cast<double>(i + 1), 2.0 * alpha);
        const double aj = std::pow(static_cast<double>(j + 1), 2.0 * alpha);
        if (i == j) {
          theta[i] = std::sqrt(R / ai);
        } else {
          theta[i] = std::sqrt(t * R / ai);
          theta[j] = std::sqrt((1.0 - t) * R / aj);
        }
        best = std::max(best, linear_risk(gamma, theta, noise));
        if (i == j) break;
      }
    }
  }
  return best;
}

RegressionData random_regression(std::mt19937_64& rng, std::size_t n, std::size_t p, double sigma) {
  std::normal_distribution<double> z(0.0, 1.0);
  RegressionData d;
  d.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < d.X.cols(); ++j) {
    for (Eigen::Index i = 0; i < d.X.rows(); ++i) d.X(i, j) = z(rng);
  }
  Eigen::VectorXd beta(static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < beta.size(); ++j) beta[j] = z(rng) / static_cast<double>(j + 1);
  d.f = d.X * beta;
  d.y = *d.f;
  for (Eigen::Index i = 0; i < d.y.size(); ++i) d.y[i] += sigma * z(rng);
  d.sigma2 = sigma * sigma;
  return d;
}

CandidateSet random_nested_set(std::mt19937_64& rng, std::size_t p, std::size_t M) {
  std::vector<std::size_t> all(p);
  for (std::size_t i = 0; i < p; ++i) all[i] = i + 1;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(M);
  return CandidateSet::from_sizes(all, p);
}

}  // namespace mma::testing
