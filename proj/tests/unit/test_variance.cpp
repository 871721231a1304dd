#include "mma/variance.hpp"
#include "mma/weights.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace mma;
using namespace mma::testing;

TEST_SUITE("variance") {
  TEST_CASE("least-squares residual variance") {
    std::mt19937_64 rng(50);
    auto d = random_regression(rng, 30, 5);
    const auto v = orthogonalize(d);
    for (std::size_t m : {0, 2, 5}) {
      const double ref = (d.y - projection_fit(d.X, d.y, m)).squaredNorm() / static_cast<double>(30 - m);
      CHECK(sigma2_lsq(v, m).value == doctest::Approx(ref).epsilon(1e-11));
      CHECK(sigma2_lsq(v, m).m == m);
    }
    CHECK(sigma2_lsq(v, 0).value == doctest::Approx(d.y.squaredNorm() / 30.0).epsilon(1e-12));
    d.y = d.X.leftCols(2) * Eigen::Vector2d(1.0, -2.0);
    CHECK(sigma2_lsq(orthogonalize(d), 2).value == doctest::Approx(0.0).epsilon(1e-20));
    CHECK_THROWS(sigma2_lsq(v, 6));
    CHECK(lsq_model_size(100, 66) == 50);
    CHECK(lsq_model_size(100, 30) == 30);
  }

  TEST_CASE("first-difference estimator") {
    std::vector<double> c(10, 2.5);
    CHECK(sigma2_rice(c).value == 0.0);
    std::vector<double> alt;
    for (int i = 0; i < 11; ++i) alt.push_back(i % 2);
    CHECK(sigma2_rice(alt).value == 0.5);
    Eigen::VectorXd y(4), u(4);
    y << 0, 1, 0, 1;
    u << 0, 2, 1, 3;  // sorted by u: 0, 0, 1, 1
    CHECK(sigma2_rice(y, u).value == doctest::Approx(1.0 / 6.0));
  }

  TEST_CASE("first-difference estimator is unbiased on pure noise") {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> z(0.0, 1.5);
    const int reps = 2000;
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
      std::vector<double> y(50);
      for (double& x : y) x = z(rng);
      const double s = sigma2_rice(y).value;
      sum += s;
      sum2 += s * s;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sum2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean - 2.25) < 3 * se);
  }

  TEST_CASE("Cp selection") {
    std::mt19937_64 rng(52);
    for (int rep = 0; rep < 10; ++rep) {
      const auto d = random_regression(rng, 40, 10);
      const auto v = orthogonalize(d);
      std::size_t best = 0;
      double crit = std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m <= 8; ++m) {
        const double c = (d.y - projection_fit(d.X, d.y, m)).squaredNorm() / 40.0 + 2.0 * 0.9 * m / 40.0;
        if (c < crit - 1e-12) {
          crit = c;
          best = m;
        }
      }
      CHECK(cp_select(v, 0.9, 8) == best);
      if (best > 0) {
        const auto g = solve_discrete(v, successive(8, 10), 0.9, {1});
        CHECK(static_cast<std::size_t>(std::lround(g.gamma.sum())) == best);
      }
    }
    RegressionData d;
    d.X = Eigen::MatrixXd::Zero(4, 1);
    d.X.col(0) << 1, 1, 0, 0;
    d.y = Eigen::Vector4d(1, -1, 3, 2);
    CHECK(cp_select(orthogonalize(d), 1.0, 1) == 0);
  }
}
