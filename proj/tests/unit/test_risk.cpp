#include "mma/risk.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace mma;
using namespace mma::testing;

namespace {

CoefficientProfile profile(std::initializer_list<double> theta, std::size_t n, double sigma2 = 1.0) {
  Eigen::VectorXd t(static_cast<Eigen::Index>(theta.size()));
  Eigen::Index i = 0;
  for (double x : theta) t[i++] = x;
  return {t, sigma2, n};
}

CoefficientProfile random_profile(std::mt19937_64& rng, std::size_t p, std::size_t n, bool monotone) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd t(static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < t.size(); ++j) t[j] = u(rng) * std::pow(static_cast<double>(j + 1), -0.8);
  if (monotone) std::sort(t.data(), t.data() + t.size(), [](double a, double b) { return a > b; });
  return {t, 0.5 + u(rng), n};
}

}  // namespace

TEST_SUITE("risk") {
  TEST_CASE("single model risks") {
    const auto pr = profile({1, 0.05, 0}, 100);
    CHECK(ms_risk(pr, 1) == doctest::Approx(0.0125).epsilon(1e-14));
    CHECK(ms_risk(pr, 2) == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(ms_risk(pr, 3) == doctest::Approx(0.03).epsilon(1e-14));
    CHECK(ms_risk(pr, 0) == doctest::Approx(1.0025));
    CHECK(best_ms(pr).m == 1);
    CHECK(best_ms(profile({0, 0, 0}, 10)).m == 0);
  }

  TEST_CASE("best model size brackets the noise level") {
    std::mt19937_64 rng(40);
    for (int rep = 0; rep < 200; ++rep) {
      const auto pr = random_profile(rng, 30, 50 + rep, true);
      const std::size_t m = best_ms(pr).m;
      const double noise = pr.noise();
      if (m > 0) CHECK(pr.theta[static_cast<Eigen::Index>(m - 1)] * pr.theta[static_cast<Eigen::Index>(m - 1)] > noise);
      if (m < pr.p()) CHECK(pr.theta[static_cast<Eigen::Index>(m)] * pr.theta[static_cast<Eigen::Index>(m)] <= noise);
    }
  }

  TEST_CASE("best model size tracks the polynomial rate") {
    for (std::size_t n : {1000, 10000}) {
      const auto pr = poly_profile(1.0, n, n);
      const double rate = std::pow(static_cast<double>(n), 0.5);
      const double ratio = static_cast<double>(best_ms(pr).m) / rate;
      CHECK(ratio > 0.5);
      CHECK(ratio < 2.0);
    }
  }

  TEST_CASE("averaging risk consistency") {
    const auto pr = profile({1, 0.5, 0.2, 0.1}, 20);
    const auto set = all_nested(4);
    CHECK(ma_risk(pr, set, {Eigen::Vector4d(1, 1, 0, 0)}) == doctest::Approx(ms_risk(pr, 2)).epsilon(1e-14));
    CHECK(ma_risk(pr, CandidateSet::from_sizes({4}, 4), {Eigen::VectorXd::Ones(1)}) ==
          doctest::Approx(4.0 / 20.0).epsilon(1e-14));
  }

  TEST_CASE("nested oracle closed form") {
    const auto pr = profile({1, 0, 0, 0}, 10);
    const auto o = oracle_nested(pr);
    CHECK(o.gamma.gamma[0] == 1.0);
    CHECK(o.gamma.gamma.tail(3).isZero());
    CHECK(o.risk == doctest::Approx(0.1).epsilon(1e-14));
    const auto tiny = oracle_nested(profile({1, 0.5, 0.1}, 10, 1e-12));
    CHECK((tiny.gamma.gamma.array() > 1 - 1e-9).all());
  }

  TEST_CASE("nested oracle equals per-coordinate numeric minimization") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 30; ++rep) {
      const auto pr = random_profile(rng, 15, 40, rep % 2 == 0);
      const double noise = pr.noise();
      double ref = pr.theta[0] == 0 ? noise : noise;  // gamma_1 = 1
      for (Eigen::Index j = 1; j < pr.theta.size(); ++j) {
        const double t2 = pr.theta[j] * pr.theta[j];
        const auto f = [&](double g) { return (1 - g) * (1 - g) * t2 + g * g * noise; };
        ref += f(golden_min(f, 0.0, 1.0));
      }
      CHECK(std::abs(oracle_nested(pr).risk - ref) < 1e-10);
    }
  }

  TEST_CASE("grouped oracle") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 10; ++rep) {
      const auto pr = random_profile(rng, 12, 30, true);
      CHECK(oracle_grouped(pr, all_nested(12)).risk == doctest::Approx(oracle_nested(pr).risk).epsilon(1e-12));
    }
    const auto pr = random_profile(rng, 12, 30, false);
    CHECK(oracle_grouped(pr, CandidateSet::from_sizes({12}, 12)).risk == doctest::Approx(pr.noise() * 12));
    for (int rep = 0; rep < 10; ++rep) {
      const auto q = random_profile(rng, 9, 25, rep % 2 == 0);
      const auto set = random_nested_set(rng, 9, 3);
      const auto o = oracle_grouped(q, set);
      CHECK(o.risk == doctest::Approx(ma_risk(q, set, o.gamma)).epsilon(1e-13));
      double grid = std::numeric_limits<double>::infinity();
      for (int a = 0; a <= 1000; ++a)
        for (int b = 0; b <= a; ++b)
          grid = std::min(grid, ma_risk(q, set, {Eigen::Vector3d(1.0, a / 1000.0, b / 1000.0)}));
      CHECK(o.risk <= grid + 1e-6);
    }
  }

  TEST_CASE("discrete oracle") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 20; ++rep) {
      const auto pr = random_profile(rng, 8, 20, rep % 3 != 0);
      const std::size_t M = 1 + rep % 6, N = 1 + rep % 4;
      const auto set = random_nested_set(rng, 8, M);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& g : enumerate_lattice(M, N)) best = std::min(best, ma_risk(pr, set, g));
      CHECK(oracle_discrete(pr, set, N).risk == best);
      CHECK(oracle_discrete(pr, set, 1).risk == doctest::Approx(best_in_set(pr, set).risk).epsilon(1e-14));
    }
    const auto pr = random_profile(rng, 10, 30, true);
    const auto set = all_nested(10);
    CHECK(oracle_discrete(pr, set, 4).risk <= oracle_discrete(pr, set, 2).risk);
    CHECK(oracle_discrete(pr, set, 2).risk <= oracle_discrete(pr, set, 1).risk);
    CHECK(oracle_discrete(pr, set, 5000).risk - oracle_grouped(pr, set).risk < 1e-6);
  }

  TEST_CASE("ideal subset risks") {
    std::mt19937_64 rng(44);
    for (int rep = 0; rep < 20; ++rep) {
      const auto pr = random_profile(rng, 1 + rep % 10, 30, false);
      CHECK(ideal_subset_ms_risk(pr) == doctest::Approx(subset_ms_brute_force(pr)).epsilon(1e-14));
    }
    const auto mono = random_profile(rng, 10, 30, true);
    CHECK(ideal_subset_ms_risk(mono) == doctest::Approx(best_ms(mono).risk).epsilon(1e-14));
    auto perm = mono;
    std::reverse(perm.theta.data(), perm.theta.data() + perm.theta.size());
    CHECK(ideal_subset_ms_risk(perm) == doctest::Approx(ideal_subset_ms_risk(mono)).epsilon(1e-14));
    CHECK(ideal_subset_ma_risk(profile({0, 0}, 5)) == 0.0);
    CHECK(ideal_subset_ma_risk(profile({2, 0}, 5, 3)) == doctest::Approx(4.0 * 3 / (5 * 4.0 + 3)).epsilon(1e-14));
  }

  TEST_CASE("risk chain") {
    const auto pr = poly_profile(1.0, 10000, 10000);
    CHECK(ideal_subset_ma_risk(pr) <= oracle_nested(pr).risk);
    CHECK(oracle_nested(pr).risk <= best_ms(pr).risk);
    CHECK(ideal_subset_ma_risk(pr) <= ideal_subset_ma_risk(pr, SubsetHull::first_pinned));
  }

  TEST_CASE("candidate set complexity") {
    // Hand value 1.5 (1 + log 2)^2.
    CHECK(psi(profile({1, 1}, 10), all_nested(2)) == doctest::Approx(1.5 * std::pow(1 + std::log(2.0), 2)).epsilon(1e-14));
    CHECK(psi(profile({1, 1}, 10), CandidateSet::from_sizes({2}, 2)) == doctest::Approx(1.0));
    // S_j vanishes from the second group on: only the first group enters the second sum.
    const double a = psi(profile({1, 0, 0}, 10), all_nested(3));
    CHECK(std::isfinite(a));
    CHECK(a == doctest::Approx(std::min(3.0, 1.0 + 0.25 + 0.125) * std::pow(1 + std::log(3.0), 2)).epsilon(1e-14));
  }

  TEST_CASE("Pinsker weights") {
    const auto r = pinsker_oracle(1.0, 1.0, 1.0, 100, 50);
    for (Eigen::Index j = 1; j < r.gamma.size(); ++j) CHECK(r.gamma[j] <= r.gamma[j - 1]);
    CHECK(r.gamma.minCoeff() >= 0.0);
    const double sup = ellipsoid_pairwise_sup(r.gamma, 1.0, 1.0, 0.01, 200);
    CHECK(std::abs(r.risk - sup) < 1e-6);
    const auto tiny = pinsker_oracle(1.0, 1e-14, 1.0, 100, 50);
    CHECK(tiny.gamma.maxCoeff() < 1e-3);
    CHECK(tiny.risk < 1e-9);
  }

  TEST_CASE("hyperrectangle minimax risk") {
    CHECK(hyperrect_minimax_risk(1, 1, 1, 1) == 0.5);
    CHECK(hyperrect_minimax_risk(2, 1, 1, 50) > hyperrect_minimax_risk(1, 1, 1, 50));
    Eigen::VectorXd t(50);
    for (Eigen::Index j = 0; j < 50; ++j) t[j] = 1.5 * std::pow(static_cast<double>(j + 1), -0.7);
    CHECK(hyperrect_minimax_risk(1.5, 0.7, 2.0, 50) == doctest::Approx(ideal_subset_ma_risk({t, 2.0, 50})).epsilon(1e-13));
  }

  TEST_CASE("profile validation") {
    CHECK_THROWS_AS(profile({1, 2, 3}, 2).validate(), std::invalid_argument);
    CHECK_THROWS_AS(profile({1}, 2, 0.0).validate(), std::invalid_argument);
  }
}
