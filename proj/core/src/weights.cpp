#include "mma/weights.hpp"

#include "mma/errors.hpp"
#include "mma/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mma {

namespace {

void require_nested(const CandidateSet& set, const char* what) {
  if (!set.nested()) throw std::invalid_argument(std::string(what) + " requires a nested candidate set");
}

void require_fits(const SequenceView& view, const CandidateSet& set) {
  if (set.p != view.p()) {
    throw std::invalid_argument("candidate set dimension " + std::to_string(set.p) + " does not match p = " +
                                std::to_string(view.p()));
  }
}

void require_sigma2(double sigma2_hat) {
  if (!(sigma2_hat >= 0.0) || !std::isfinite(sigma2_hat)) {
    throw std::invalid_argument("variance estimate must be finite and nonnegative");
  }
}

/// sum_{l in group j} x_l y_l for every group of a nested set.
std::vector<double> group_inner(const CandidateSet& set, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  std::vector<double> s(set.sizes.size());
  std::size_t lo = 0;
  for (std::size_t j = 0; j < set.sizes.size(); ++j) {
    CompensatedSum acc;
    for (std::size_t l = lo; l < set.sizes[j]; ++l) {
      acc += x[static_cast<Eigen::Index>(l)] * y[static_cast<Eigen::Index>(l)];
    }
    s[j] = acc.value();
    lo = set.sizes[j];
  }
  return s;
}

}  // namespace

CumulativeWeights gamma_from_w(const WeightVector& w) {
  const auto M = w.w.size();
  CumulativeWeights g{Eigen::VectorXd(M)};
  CompensatedSum acc;
  for (Eigen::Index m = M - 1; m >= 0; --m) {
    acc += w.w[m];
    g.gamma[m] = acc.value();
  }
  return g;
}

WeightVector w_from_gamma(const CumulativeWeights& gamma) {
  const auto M = gamma.gamma.size();
  WeightVector w{Eigen::VectorXd(M)};
  for (Eigen::Index m = 0; m < M; ++m) w.w[m] = gamma.gamma[m] - (m + 1 < M ? gamma.gamma[m + 1] : 0.0);
  return w;
}

void check_cumulative(const CumulativeWeights& gamma) {
  const auto& g = gamma.gamma;
  if (g.size() == 0) throw std::invalid_argument("cumulative weights are empty");
  if (std::abs(g[0] - 1.0) > 1e-12) throw std::invalid_argument("cumulative weights must start at 1");
  for (Eigen::Index j = 1; j < g.size(); ++j) {
    if (g[j] > g[j - 1]) throw std::invalid_argument("cumulative weights must be nonincreasing");
  }
  if (g[g.size() - 1] < 0.0) throw std::invalid_argument("cumulative weights must be nonnegative");
}

WeightVector sanitize_simplex(Eigen::VectorXd w) {
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    if (w[m] < -1e-12) {
      throw NumericalError("weight " + std::to_string(m + 1) + " is negative (" + std::to_string(w[m]) + ")");
    }
    if (w[m] < 0.0) w[m] = 0.0;
  }
  const double total = compensated_sum(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
  if (std::abs(total - 1.0) > 1e-9) throw NumericalError("weights sum to " + std::to_string(total) + ", not 1");
  if (total != 1.0) w /= total;
  return WeightVector{std::move(w)};
}

Eigen::VectorXd expand_gamma(const CandidateSet& set, const CumulativeWeights& gamma) {
  require_nested(set, "expand_gamma");
  if (static_cast<std::size_t>(gamma.gamma.size()) != set.size()) {
    throw std::invalid_argument("cumulative weight length does not match candidate set size");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(set.p));
  std::size_t lo = 0;
  for (std::size_t j = 0; j < set.sizes.size(); ++j) {
    for (std::size_t l = lo; l < set.sizes[j]; ++l) c[static_cast<Eigen::Index>(l)] = gamma.gamma[static_cast<Eigen::Index>(j)];
    lo = set.sizes[j];
  }
  return c;
}

Eigen::VectorXd coordinate_multipliers(const CandidateSet& set, const WeightVector& w) {
  if (static_cast<std::size_t>(w.w.size()) != set.size()) {
    throw std::invalid_argument("weight length does not match candidate set size");
  }
  if (set.nested()) return expand_gamma(set, gamma_from_w(w));
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(set.p));
  for (std::size_t m = 0; m < set.index_sets.size(); ++m) {
    for (std::size_t l : set.index_sets[m]) c[static_cast<Eigen::Index>(l - 1)] += w.w[static_cast<Eigen::Index>(m)];
  }
  return c;
}

Eigen::VectorXd averaged_fit(const SequenceView& view, const Eigen::VectorXd& multipliers) {
  return view.synthesize(view.theta_hat().cwiseProduct(multipliers));
}

namespace {

/// sum_l (1 - c_l)^2 theta_hat_l^2 + rss/n + (2 sigma2_hat / n) sum_l c_l.
double criterion_from_multipliers(const SequenceView& view, const Eigen::VectorXd& c, double sigma2_hat) {
  const auto& th = view.theta_hat();
  const double n = static_cast<double>(view.n());
  CompensatedSum fit;
  CompensatedSum dof;
  for (Eigen::Index l = 0; l < th.size(); ++l) {
    const double r = (1.0 - c[l]) * th[l];
    fit += r * r;
    dof += c[l];
  }
  fit += view.residual_ss() / n;
  fit += 2.0 * sigma2_hat * dof.value() / n;
  return fit.value();
}

}  // namespace

double mma_criterion(const SequenceView& view, const CandidateSet& set, const CumulativeWeights& gamma,
                     double sigma2_hat) {
  require_nested(set, "mma_criterion");
  require_fits(view, set);
  require_sigma2(sigma2_hat);
  return criterion_from_multipliers(view, expand_gamma(set, gamma), sigma2_hat);
}

double mma_criterion(const SequenceView& view, const CandidateSet& set, const WeightVector& w, double sigma2_hat) {
  require_fits(view, set);
  require_sigma2(sigma2_hat);
  return criterion_from_multipliers(view, coordinate_multipliers(set, w), sigma2_hat);
}

double ma_loss(const SequenceView& view, const Eigen::VectorXd& multipliers) {
  if (!view.theta_true()) throw std::invalid_argument("loss requires the true coefficients");
  const auto& th = view.theta_hat();
  const auto& tt = *view.theta_true();
  if (multipliers.size() != th.size()) throw std::invalid_argument("multiplier length must equal p");
  CompensatedSum s;
  for (Eigen::Index l = 0; l < th.size(); ++l) {
    const double d = multipliers[l] * th[l] - tt[l];
    s += d * d;
  }
  s += view.mean_residual_ss() / static_cast<double>(view.n());
  return s.value();
}

double ma_loss(const SequenceView& view, const CandidateSet& set, const CumulativeWeights& gamma) {
  require_fits(view, set);
  return ma_loss(view, expand_gamma(set, gamma));
}

CriterionQuadratic criterion_quadratic(const SequenceView& view, const CandidateSet& set, double sigma2_hat) {
  require_fits(view, set);
  require_sigma2(sigma2_hat);
  const auto M = static_cast<Eigen::Index>(set.size());
  const auto& th = view.theta_hat();
  const double n = static_cast<double>(view.n());
  CriterionQuadratic q;
  q.Q.resize(M, M);
  q.b.resize(M);
  q.constant = view.mean_square_response();

  if (set.nested()) {
    std::vector<double> cum(set.p + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t l = 0; l < set.p; ++l) {
      acc += th[static_cast<Eigen::Index>(l)] * th[static_cast<Eigen::Index>(l)];
      cum[l + 1] = acc.value();
    }
    for (Eigen::Index m = 0; m < M; ++m) {
      const std::size_t km = set.sizes[static_cast<std::size_t>(m)];
      for (Eigen::Index r = 0; r < M; ++r) q.Q(m, r) = cum[std::min(km, set.sizes[static_cast<std::size_t>(r)])];
      q.b[m] = -2.0 * cum[km] + 2.0 * sigma2_hat * static_cast<double>(km) / n;
    }
    return q;
  }

  const auto p = static_cast<Eigen::Index>(set.p);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, p);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (std::size_t l : set.index_sets[static_cast<std::size_t>(m)]) A(m, static_cast<Eigen::Index>(l - 1)) = 1.0;
  }
  const Eigen::VectorXd th2 = th.array().square();
  q.Q = A * th2.asDiagonal() * A.transpose();
  for (Eigen::Index m = 0; m < M; ++m) {
    const double k = static_cast<double>(set.index_sets[static_cast<std::size_t>(m)].size());
    q.b[m] = -2.0 * A.row(m).dot(th2) + 2.0 * sigma2_hat * k / n;
  }
  return q;
}

std::vector<double> isotonic_box_minimize(const std::vector<BlockQuadratic>& blocks) {
  struct Pool {
    double a;
    double b;
    std::size_t count;
    double value;
  };
  const auto minimizer = [](double a, double b) {
    if (a <= 0.0) return b > 0.0 ? 0.0 : 1.0;
    return std::clamp(-b / (2.0 * a), 0.0, 1.0);
  };

  std::vector<Pool> stack;
  stack.reserve(blocks.size());
  for (const auto& blk : blocks) {
    if (blk.a < 0.0) throw std::invalid_argument("block quadratic must be convex (a >= 0)");
    stack.push_back({blk.a, blk.b, 1, minimizer(blk.a, blk.b)});
    while (stack.size() >= 2 && stack.back().value > stack[stack.size() - 2].value) {
      Pool top = stack.back();
      stack.pop_back();
      Pool& prev = stack.back();
      prev.a += top.a;
      prev.b += top.b;
      prev.count += top.count;
      prev.value = minimizer(prev.a, prev.b);
    }
  }

  std::vector<double> g;
  g.reserve(blocks.size());
  for (const auto& pool : stack) g.insert(g.end(), pool.count, pool.value);
  return g;
}

std::vector<std::size_t> monotone_lattice_minimize(const std::vector<BlockQuadratic>& blocks, std::size_t N) {
  if (N == 0) throw std::invalid_argument("discrete weight resolution N must be positive");
  const std::size_t K = blocks.size();
  if (K == 0) return {};

  // Lexicographic (value, sum of t) ordering gives the tie-break.
  struct Entry {
    double value;
    std::size_t tsum;
  };
  const auto better = [](const Entry& x, const Entry& y) {
    return x.value < y.value || (x.value == y.value && x.tsum < y.tsum);
  };
  const auto q = [N](const BlockQuadratic& blk, std::size_t t) {
    return blk(static_cast<double>(t) / static_cast<double>(N));
  };

  std::vector<Entry> prev(N + 1);
  std::vector<Entry> cur(N + 1);
  std::vector<std::size_t> choice((K - 1) * (N + 1));
  for (std::size_t t = 0; t <= N; ++t) prev[t] = {q(blocks[0], t), t};

  for (std::size_t j = 1; j < K; ++j) {
    std::size_t best = N;
    for (std::size_t t = N + 1; t-- > 0;) {
      if (better(prev[t], prev[best])) best = t;
      cur[t] = {q(blocks[j], t) + prev[best].value, t + prev[best].tsum};
      choice[(j - 1) * (N + 1) + t] = best;
    }
    std::swap(prev, cur);
  }

  std::size_t best = 0;
  for (std::size_t t = 1; t <= N; ++t) {
    if (better(prev[t], prev[best])) best = t;
  }
  std::vector<std::size_t> ts(K);
  ts[K - 1] = best;
  for (std::size_t j = K - 1; j > 0; --j) ts[j - 1] = choice[(j - 1) * (N + 1) + ts[j]];
  return ts;
}

namespace {

/// Criterion blocks for groups 2..M: S_j (1-g)^2 + 2 g d_j sigma2_hat / n, constant dropped.
std::vector<BlockQuadratic> criterion_blocks(const SequenceView& view, const CandidateSet& set, double sigma2_hat) {
  const auto& th = view.theta_hat();
  const auto S = group_inner(set, th, th);
  const auto d = set.group_sizes();
  const double n = static_cast<double>(view.n());
  std::vector<BlockQuadratic> blocks;
  for (std::size_t j = 1; j < S.size(); ++j) {
    blocks.push_back({S[j], 2.0 * (static_cast<double>(d[j]) * sigma2_hat / n - S[j])});
  }
  return blocks;
}

CumulativeWeights pinned_first(const std::vector<double>& rest) {
  CumulativeWeights g{Eigen::VectorXd(static_cast<Eigen::Index>(rest.size() + 1))};
  g.gamma[0] = 1.0;
  for (std::size_t j = 0; j < rest.size(); ++j) g.gamma[static_cast<Eigen::Index>(j + 1)] = rest[j];
  return g;
}

}  // namespace

CumulativeWeights solve_nested(const SequenceView& view, const CandidateSet& set, double sigma2_hat) {
  require_nested(set, "solve_nested");
  require_fits(view, set);
  require_sigma2(sigma2_hat);
  return pinned_first(isotonic_box_minimize(criterion_blocks(view, set, sigma2_hat)));
}

WeightVector solve_qp(const SequenceView& view, const CandidateSet& set, double sigma2_hat) {
  if (set.size() > 2000) throw std::invalid_argument("solve_qp supports at most 2000 candidate models");
  const auto q = criterion_quadratic(view, set, sigma2_hat);
  return sanitize_simplex(simplex_qp(q.Q, q.b).w);
}

CumulativeWeights solve_discrete(const SequenceView& view, const CandidateSet& set, double sigma2_hat,
                                 DiscreteWeightSpec spec) {
  require_nested(set, "solve_discrete");
  require_fits(view, set);
  require_sigma2(sigma2_hat);
  const auto t = monotone_lattice_minimize(criterion_blocks(view, set, sigma2_hat), spec.N);
  std::vector<double> rest(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) rest[j] = static_cast<double>(t[j]) / static_cast<double>(spec.N);
  return pinned_first(rest);
}

CumulativeWeights solve_loss_oracle(const SequenceView& view, const CandidateSet& set) {
  require_nested(set, "solve_loss_oracle");
  require_fits(view, set);
  if (!view.theta_true()) throw std::invalid_argument("the loss oracle requires the true coefficients");
  const auto& th = view.theta_hat();
  const auto S = group_inner(set, th, th);
  const auto C = group_inner(set, th, *view.theta_true());
  std::vector<BlockQuadratic> blocks;
  for (std::size_t j = 1; j < S.size(); ++j) blocks.push_back({S[j], -2.0 * C[j]});
  return pinned_first(isotonic_box_minimize(blocks));
}

}  // namespace mma
