#include "mma/errors.hpp"
#include "mma/variance.hpp"
#include "mma/weights.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace mma;
using namespace mma::testing;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Eigen::VectorXd random_simplex(std::mt19937_64& rng, std::size_t M) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd w(static_cast<Eigen::Index>(M));
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = e(rng);
  return w / w.sum();
}

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("cumulative weight conversions") {
    CHECK(gamma_from_w({vec({1, 0, 0})}).gamma == vec({1, 0, 0}));
    CHECK(gamma_from_w({vec({0, 0, 1})}).gamma == vec({1, 1, 1}));
    CHECK(gamma_from_w({vec({0.5, 0.5})}).gamma == vec({1, 0.5}));
    std::mt19937_64 rng(2);
    const Eigen::VectorXd w = random_simplex(rng, 6);
    CHECK((w_from_gamma(gamma_from_w({w})).w - w).norm() < 1e-15);
    CHECK_NOTHROW(check_cumulative(gamma_from_w({w})));
    CHECK_THROWS_AS(check_cumulative({vec({1, 0.2, 0.5})}), std::invalid_argument);
    CHECK_THROWS_AS(check_cumulative({vec({0.9, 0.2})}), std::invalid_argument);
  }

  TEST_CASE("simplex sanitizing") {
    const auto w = sanitize_simplex(vec({0.5, 0.5 + 5e-13, -5e-13}));
    CHECK(w.w[2] == 0.0);
    CHECK(w.w.sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(sanitize_simplex(vec({0.5, 0.6})), NumericalError);
    CHECK_THROWS_AS(sanitize_simplex(vec({1.1, -0.1})), NumericalError);
  }

  TEST_CASE("criterion matches the matrix form") {
    std::mt19937_64 rng(20);
    const auto d = random_regression(rng, 20, 5);
    const auto v = orthogonalize(d);
    const auto set = all_nested(5);
    for (int rep = 0; rep < 10; ++rep) {
      const Eigen::VectorXd w = random_simplex(rng, 5);
      const double ref = matrix_criterion(d.X, d.y, set.sizes, w, 1.3);
      CHECK(std::abs(mma_criterion(v, set, WeightVector{w}, 1.3) - ref) < 1e-9);
      CHECK(std::abs(mma_criterion(v, set, gamma_from_w({w}), 1.3) - ref) < 1e-9);
      CHECK(std::abs(ma_loss(v, set, gamma_from_w({w})) - matrix_loss(d.X, d.y, *d.f, set.sizes, w)) < 1e-10);
      // The criterion blocks used by the grid oracle describe the same function.
      const auto blocks = criterion_blocks(v, set, 1.3);
      const auto g = gamma_from_w({w}).gamma;
      double s = v.residual_ss(0) / 20.0;
      for (std::size_t j = 0; j < blocks.size(); ++j) s += blocks[j](g[static_cast<Eigen::Index>(j)]);
      CHECK(std::abs(s - ref) < 1e-9);
    }
    const auto sub = CandidateSet::from_sizes({2, 4}, 5);
    const Eigen::VectorXd w = random_simplex(rng, 2);
    CHECK(std::abs(mma_criterion(v, sub, WeightVector{w}, 0.7) - matrix_criterion(d.X, d.y, sub.sizes, w, 0.7)) < 1e-9);
  }

  TEST_CASE("criterion of a single model and with zero variance") {
    std::mt19937_64 rng(21);
    const auto d = random_regression(rng, 15, 4);
    const auto v = orthogonalize(d);
    const auto single = CandidateSet::from_sizes({3}, 4);
    CHECK(mma_criterion(v, single, CumulativeWeights{vec({1})}, 0.8) ==
          doctest::Approx(v.residual_ss(3) / 15.0 + 2 * 0.8 * 3 / 15.0).epsilon(1e-13));
    CHECK(mma_criterion(v, all_nested(4), CumulativeWeights{vec({1, 1, 1, 1})}, 0.0) ==
          doctest::Approx(v.residual_ss(4) / 15.0).epsilon(1e-13));
  }

  TEST_CASE("subset criterion acts on sequence coordinates") {
    std::mt19937_64 rng(22);
    const auto d = random_regression(rng, 12, 3);
    const auto v = orthogonalize(d);
    const auto set = all_subsets(3);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(8);
    w[3] = 1.0;  // {1, 2}, which is the nested model of size 2
    CHECK(mma_criterion(v, set, WeightVector{w}, 0.5) ==
          doctest::Approx(mma_criterion(v, CandidateSet::from_sizes({2}, 3), CumulativeWeights{vec({1})}, 0.5)));
  }

  TEST_CASE("PAVA examples") {
    const auto v = SequenceView::from_coefficients(vec({2, 0}), std::nullopt, 2);
    const auto g = solve_nested(v, all_nested(2), 2.0);
    CHECK(g.gamma == vec({1, 0}));
    CHECK(w_from_gamma(g).w == vec({1, 0}));
    std::mt19937_64 rng(23);
    const auto d = random_regression(rng, 30, 6);
    CHECK(solve_nested(orthogonalize(d), all_nested(6), 0.0).gamma == Eigen::VectorXd::Ones(6));
  }

  TEST_CASE("isotonic blocks handle zero curvature") {
    const auto g = isotonic_box_minimize({{0, -1}, {0, 1}, {0, -1}});
    // Block 2 wants 0 and block 3 wants 1: they pool to curvature 0, slope 0.
    CHECK(g[0] == 1.0);
    CHECK(g[1] >= g[2]);
    CHECK(isotonic_box_minimize({{1, -4}, {1, -1}, {1, -3}}) == std::vector<double>{1.0, 1.0, 1.0});
    const auto h = isotonic_box_minimize({{1, -1}, {1, -0.4}, {1, -1.2}});
    CHECK(h[0] == doctest::Approx(0.5));
    CHECK(h[1] == doctest::Approx(0.4));
    CHECK(h[2] == doctest::Approx(0.4));
  }

  TEST_CASE("PAVA beats a monotone grid") {
    std::mt19937_64 rng(24);
    for (int rep = 0; rep < 20; ++rep) {
      const auto d = random_regression(rng, 25, 8, 1.5);
      const auto v = orthogonalize(d);
      const auto set = random_nested_set(rng, 8, 4);
      const auto blocks = criterion_blocks(v, set, 2.0);
      const double grid = monotone_grid_min(blocks, 0.02) + v.residual_ss(0) / 25.0;
      CHECK(mma_criterion(v, set, solve_nested(v, set, 2.0), 2.0) <= grid + 1e-12);
    }
  }

  TEST_CASE("QP solver agrees with PAVA and with a simplex grid") {
    std::mt19937_64 rng(25);
    for (int rep = 0; rep < 20; ++rep) {
      const auto d = random_regression(rng, 30, 10);
      const auto v = orthogonalize(d);
      const auto set = random_nested_set(rng, 10, 6);
      const double a = mma_criterion(v, set, solve_nested(v, set, 1.0), 1.0);
      const double b = mma_criterion(v, set, solve_qp(v, set, 1.0), 1.0);
      CHECK(std::abs(a - b) < 1e-7);
    }
    for (int rep = 0; rep < 5; ++rep) {
      const auto d = random_regression(rng, 20, 6);
      const auto v = orthogonalize(d);
      const auto set = random_nested_set(rng, 6, 3);
      const auto q = criterion_quadratic(v, set, 1.0);
      const double grid = simplex_grid_min(q.Q, q.b, 1e-3) + q.constant;
      const double qp = mma_criterion(v, set, solve_qp(v, set, 1.0), 1.0);
      CHECK(qp <= grid + 1e-12);
      CHECK(grid - qp < 1e-5);
    }
    const auto d = random_regression(rng, 10, 3);
    CHECK(solve_qp(orthogonalize(d), CandidateSet::from_sizes({2}, 3), 1.0).w == vec({1}));
  }

  TEST_CASE("simplex QP on random PSD problems satisfies KKT") {
    std::mt19937_64 rng(26);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 50; ++rep) {
      const int M = 2 + rep % 9;
      Eigen::MatrixXd A(M, M / 2 + 1);
      for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = z(rng);
      const Eigen::MatrixXd Q = A * A.transpose();  // often singular
      Eigen::VectorXd b(M);
      for (int i = 0; i < M; ++i) b[i] = z(rng);
      const auto r = simplex_qp(Q, b);
      CHECK(r.w.minCoeff() >= 0.0);
      CHECK(std::abs(r.w.sum() - 1.0) < 1e-12);
      const Eigen::VectorXd g = 2.0 * Q * r.w + b;
      const double mu = r.w.dot(g);
      const double scale = std::max({1.0, Q.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
      for (int i = 0; i < M; ++i) CHECK(g[i] - mu >= -1e-7 * scale);
      CHECK(r.kkt_residual <= kQpTolerance);
    }
  }

  TEST_CASE("discrete weights equal lattice enumeration") {
    std::mt19937_64 rng(27);
    for (int rep = 0; rep < 30; ++rep) {
      const auto d = random_regression(rng, 20, 6, 1.2);
      const auto v = orthogonalize(d);
      const std::size_t M = 1 + rep % 6;
      const std::size_t N = 1 + rep % 4;
      const auto set = random_nested_set(rng, 6, M);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& g : enumerate_lattice(M, N)) best = std::min(best, mma_criterion(v, set, g, 1.44));
      const auto g = solve_discrete(v, set, 1.44, {N});
      CHECK_NOTHROW(check_cumulative(g));
      for (Eigen::Index j = 0; j < g.gamma.size(); ++j) {
        CHECK(g.gamma[j] * N == doctest::Approx(std::round(g.gamma[j] * N)));
      }
      CHECK(mma_criterion(v, set, g, 1.44) == best);
    }
  }

  TEST_CASE("lattice DP prefers the smaller sum on ties") {
    const auto t = monotone_lattice_minimize({{1, -2}, {0, 0}, {0, 0}}, 3);
    CHECK(t == std::vector<std::size_t>{3, 0, 0});
  }

  TEST_CASE("one discrete level is Mallows Cp selection") {
    std::mt19937_64 rng(28);
    for (int rep = 0; rep < 10; ++rep) {
      const auto d = random_regression(rng, 40, 12);
      const auto v = orthogonalize(d);
      const auto g = solve_discrete(v, all_nested(12), 1.0, {1});
      const std::size_t chosen = static_cast<std::size_t>(g.gamma.sum());
      CHECK(chosen == std::max<std::size_t>(1, cp_select(v, 1.0, 12)));
    }
  }

  TEST_CASE("many discrete levels approach the continuous optimum") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 5; ++rep) {
      const auto d = random_regression(rng, 40, 10);
      const auto v = orthogonalize(d);
      const auto set = all_nested(10);
      const double cont = mma_criterion(v, set, solve_nested(v, set, 1.0), 1.0);
      const double disc = mma_criterion(v, set, solve_discrete(v, set, 1.0, {10000}), 1.0);
      CHECK(disc >= cont - 1e-12);
      CHECK(disc - cont < 1e-4);
    }
  }

  TEST_CASE("loss oracle minimizes the realized loss") {
    std::mt19937_64 rng(30);
    const auto d = random_regression(rng, 30, 8);
    const auto v = orthogonalize(d);
    const auto set = all_nested(8);
    const double oracle = ma_loss(v, set, solve_loss_oracle(v, set));
    CHECK(oracle <= ma_loss(v, set, solve_nested(v, set, 1.0)) + 1e-15);
    for (std::size_t N : {1, 2, 5}) CHECK(oracle <= ma_loss(v, set, solve_discrete(v, set, 1.0, {N})) + 1e-15);
  }

  TEST_CASE("averaged fit equals the weighted nested fits") {
    std::mt19937_64 rng(31);
    const auto d = random_regression(rng, 18, 5);
    const auto v = orthogonalize(d);
    const auto set = CandidateSet::from_sizes({1, 3, 5}, 5);
    const Eigen::VectorXd w = random_simplex(rng, 3);
    Eigen::VectorXd ref = Eigen::VectorXd::Zero(18);
    for (int m = 0; m < 3; ++m) ref += w[m] * projection_fit(d.X, d.y, set.sizes[static_cast<std::size_t>(m)]);
    CHECK((averaged_fit(v, coordinate_multipliers(set, WeightVector{w})) - ref).norm() < 1e-10);
    CHECK((expand_gamma(set, gamma_from_w({w})) - coordinate_multipliers(set, WeightVector{w})).norm() < 1e-15);
  }
}
