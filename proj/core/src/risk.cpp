#include "mma/risk.hpp"

#include "mma/errors.hpp"
#include "mma/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mma {

void CoefficientProfile::validate() const {
  if (theta.size() == 0) throw std::invalid_argument("coefficient profile is empty");
  if (!theta.allFinite()) throw std::invalid_argument("coefficient profile contains non-finite values");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw std::invalid_argument("sigma2 must be positive and finite");
  if (n == 0 || p() > n) throw std::invalid_argument("profile requires 1 <= p <= n");
}

namespace {

CoefficientProfile make_profile(std::size_t p, std::size_t n, double sigma2, const std::function<double(double)>& f) {
  CoefficientProfile prof;
  prof.theta.resize(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) prof.theta[static_cast<Eigen::Index>(j)] = f(static_cast<double>(j + 1));
  prof.sigma2 = sigma2;
  prof.n = n;
  prof.validate();
  return prof;
}

void require_nested_fit(const CoefficientProfile& profile, const CandidateSet& set) {
  if (!set.nested()) throw std::invalid_argument("risk calculators require a nested candidate set");
  if (set.p != profile.p()) throw std::invalid_argument("candidate set dimension does not match the profile");
}

/// S_j = sum of theta_l^2 over group j of a nested set.
std::vector<double> group_signal(const CoefficientProfile& profile, const CandidateSet& set) {
  std::vector<double> S(set.sizes.size());
  std::size_t lo = 0;
  for (std::size_t j = 0; j < set.sizes.size(); ++j) {
    CompensatedSum acc;
    for (std::size_t l = lo; l < set.sizes[j]; ++l) {
      const double t = profile.theta[static_cast<Eigen::Index>(l)];
      acc += t * t;
    }
    S[j] = acc.value();
    lo = set.sizes[j];
  }
  return S;
}

std::vector<BlockQuadratic> risk_blocks(const CoefficientProfile& profile, const CandidateSet& set) {
  const auto S = group_signal(profile, set);
  const auto d = set.group_sizes();
  std::vector<BlockQuadratic> blocks;
  for (std::size_t j = 1; j < S.size(); ++j) {
    blocks.push_back({S[j] + static_cast<double>(d[j]) * profile.noise(), -2.0 * S[j]});
  }
  return blocks;
}

/// argmin over m of m * noise + sum_{j>m} sq_j, ties toward the smaller m.
MsChoice best_prefix(const std::vector<double>& sq, double noise) {
  const std::size_t p = sq.size();
  std::vector<double> tail(p + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t j = p; j-- > 0;) {
    acc += sq[j];
    tail[j] = acc.value();
  }
  MsChoice best{0, tail[0]};
  for (std::size_t m = 1; m <= p; ++m) {
    const double r = static_cast<double>(m) * noise + tail[m];
    if (r < best.risk) best = {m, r};
  }
  return best;
}

CumulativeWeights pinned(const std::vector<double>& rest) {
  CumulativeWeights g{Eigen::VectorXd(static_cast<Eigen::Index>(rest.size() + 1))};
  g.gamma[0] = 1.0;
  for (std::size_t j = 0; j < rest.size(); ++j) g.gamma[static_cast<Eigen::Index>(j + 1)] = rest[j];
  return g;
}

}  // namespace

CoefficientProfile poly_profile(double alpha, std::size_t p, std::size_t n, double sigma2) {
  if (!(alpha > 0.0)) throw std::invalid_argument("polynomial decay requires alpha > 0");
  return make_profile(p, n, sigma2, [alpha](double j) { return std::pow(j, -alpha); });
}

CoefficientProfile exp_profile(double alpha, std::size_t p, std::size_t n, double sigma2) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponential decay requires alpha > 0");
  return make_profile(p, n, sigma2, [alpha](double j) { return std::exp(-std::pow(j, alpha)); });
}

double ms_risk(const CoefficientProfile& profile, std::size_t m) {
  profile.validate();
  if (m > profile.p()) throw std::out_of_range("model size " + std::to_string(m) + " exceeds p");
  CompensatedSum s;
  s += static_cast<double>(m) * profile.noise();
  for (std::size_t j = m; j < profile.p(); ++j) {
    const double t = profile.theta[static_cast<Eigen::Index>(j)];
    s += t * t;
  }
  return s.value();
}

MsChoice best_ms(const CoefficientProfile& profile) {
  profile.validate();
  std::vector<double> sq(profile.p());
  for (std::size_t j = 0; j < sq.size(); ++j) {
    const double t = profile.theta[static_cast<Eigen::Index>(j)];
    sq[j] = t * t;
  }
  return best_prefix(sq, profile.noise());
}

MsChoice best_in_set(const CoefficientProfile& profile, const CandidateSet& set) {
  require_nested_fit(profile, set);
  MsChoice best{set.sizes.front(), ms_risk(profile, set.sizes.front())};
  for (std::size_t k : set.sizes) {
    const double r = ms_risk(profile, k);
    if (r < best.risk) best = {k, r};
  }
  return best;
}

double ma_risk(const CoefficientProfile& profile, const CandidateSet& set, const CumulativeWeights& gamma) {
  profile.validate();
  require_nested_fit(profile, set);
  if (static_cast<std::size_t>(gamma.gamma.size()) != set.size()) {
    throw std::invalid_argument("cumulative weight length does not match candidate set size");
  }
  const double noise = profile.noise();
  CompensatedSum s;
  std::size_t lo = 0;
  for (std::size_t j = 0; j < set.sizes.size(); ++j) {
    const double g = gamma.gamma[static_cast<Eigen::Index>(j)];
    for (std::size_t l = lo; l < set.sizes[j]; ++l) {
      const double t = profile.theta[static_cast<Eigen::Index>(l)];
      s += (1.0 - g) * (1.0 - g) * t * t;
      s += g * g * noise;
    }
    lo = set.sizes[j];
  }
  for (std::size_t l = lo; l < profile.p(); ++l) {
    const double t = profile.theta[static_cast<Eigen::Index>(l)];
    s += t * t;
  }
  return s.value();
}

OracleWeights oracle_nested(const CoefficientProfile& profile) {
  profile.validate();
  const double noise = profile.noise();
  const auto p = static_cast<Eigen::Index>(profile.p());
  OracleWeights out;
  out.gamma.gamma.resize(p);
  out.gamma.gamma[0] = 1.0;
  CompensatedSum risk;
  risk += noise;
  for (Eigen::Index j = 1; j < p; ++j) {
    const double t2 = profile.theta[j] * profile.theta[j];
    out.gamma.gamma[j] = t2 / (t2 + noise);
    risk += t2 * profile.sigma2 / (static_cast<double>(profile.n) * t2 + profile.sigma2);
    if (out.gamma.gamma[j] > out.gamma.gamma[j - 1]) out.monotone = false;
  }
  out.risk = risk.value();
  return out;
}

OracleWeights oracle_grouped(const CoefficientProfile& profile, const CandidateSet& set) {
  profile.validate();
  require_nested_fit(profile, set);
  OracleWeights out;
  out.gamma = pinned(isotonic_box_minimize(risk_blocks(profile, set)));
  out.risk = ma_risk(profile, set, out.gamma);
  return out;
}

OracleWeights oracle_discrete(const CoefficientProfile& profile, const CandidateSet& set, std::size_t N) {
  profile.validate();
  require_nested_fit(profile, set);
  const auto t = monotone_lattice_minimize(risk_blocks(profile, set), N);
  std::vector<double> rest(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) rest[j] = static_cast<double>(t[j]) / static_cast<double>(N);
  OracleWeights out;
  out.gamma = pinned(rest);
  out.risk = ma_risk(profile, set, out.gamma);
  return out;
}

double ideal_subset_ms_risk(const CoefficientProfile& profile) {
  profile.validate();
  std::vector<double> sq(profile.p());
  for (std::size_t j = 0; j < sq.size(); ++j) {
    const double t = profile.theta[static_cast<Eigen::Index>(j)];
    sq[j] = t * t;
  }
  std::sort(sq.begin(), sq.end(), std::greater<>());
  return best_prefix(sq, profile.noise()).risk;
}

double ideal_subset_ma_risk(const CoefficientProfile& profile, SubsetHull hull) {
  profile.validate();
  const double n = static_cast<double>(profile.n);
  Eigen::Index largest = 0;
  CompensatedSum s;
  for (Eigen::Index j = 0; j < profile.theta.size(); ++j) {
    const double t2 = profile.theta[j] * profile.theta[j];
    s += t2 * profile.sigma2 / (n * t2 + profile.sigma2);
    if (std::abs(profile.theta[j]) > std::abs(profile.theta[largest])) largest = j;
  }
  if (hull == SubsetHull::first_pinned) {
    // Multiplier 1 instead of the shrinkage optimum on the pinned coordinate.
    const double t2 = profile.theta[largest] * profile.theta[largest];
    s += profile.sigma2 * profile.sigma2 / (n * n * t2 + n * profile.sigma2);
  }
  return s.value();
}

double psi(const CoefficientProfile& profile, const CandidateSet& set) {
  profile.validate();
  require_nested_fit(profile, set);
  const std::size_t M = set.size();
  const auto& k = set.sizes;
  const std::size_t kM = k.back();

  // S[j] for j = 0..M, with k_0 = 0.
  std::vector<double> S(M + 1, 0.0);
  {
    std::vector<double> tail(kM + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t l = kM; l-- > 0;) {
      const double t = profile.theta[static_cast<Eigen::Index>(l)];
      acc += t * t;
      tail[l] = acc.value();
    }
    S[0] = tail[0];
    for (std::size_t j = 1; j <= M; ++j) S[j] = tail[k[j - 1]];
  }
  std::size_t Mprime = M;
  for (std::size_t j = 1; j <= M; ++j) {
    if (S[j] == 0.0) {
      Mprime = j;
      break;
    }
  }

  CompensatedSum inner;
  inner += 1.0;
  for (std::size_t j = 1; j < M; ++j) {
    inner += static_cast<double>(k[j] - k[j - 1]) / (4.0 * static_cast<double>(k[j - 1]));
  }
  for (std::size_t j = 1; j < Mprime; ++j) {
    inner += (S[j - 1] - S[j]) / (4.0 * S[j]);
  }
  const double logM = 1.0 + std::log(static_cast<double>(M));
  return std::min(static_cast<double>(M), inner.value()) * logM * logM;
}

PinskerResult pinsker_oracle(double alpha, double R, double sigma2, std::size_t n, std::size_t p) {
  if (!(alpha > 0.0)) throw std::invalid_argument("pinsker_oracle requires alpha > 0");
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("pinsker_oracle requires R > 0");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("pinsker_oracle requires sigma2 > 0");
  if (n == 0 || p == 0) throw std::invalid_argument("pinsker_oracle requires n, p >= 1");

  const double noise = sigma2 / static_cast<double>(n);
  std::vector<double> ja(p);
  for (std::size_t j = 0; j < p; ++j) ja[j] = std::pow(static_cast<double>(j + 1), alpha);

  // h(kappa) = (sigma^2/n) sum_j j^a (1 - kappa j^a)_+ - kappa R is decreasing,
  // positive at 0 and equal to -R at 1.
  const auto h = [&](double kappa) {
    CompensatedSum s;
    for (double a : ja) s += a * std::max(0.0, 1.0 - kappa * a);
    return noise * s.value() - kappa * R;
  };
  double lo = 0.0;
  double hi = 1.0;
  if (!(h(lo) > 0.0) || !(h(hi) < 0.0)) {
    throw NumericalError("pinsker_oracle: no sign change of the ellipsoid equation on [0, 1]");
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
  }

  PinskerResult out;
  out.kappa = 0.5 * (lo + hi);
  out.gamma.resize(static_cast<Eigen::Index>(p));
  CompensatedSum variance;
  double worst_bias = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const double g = std::max(0.0, 1.0 - out.kappa * ja[j]);
    out.gamma[static_cast<Eigen::Index>(j)] = g;
    variance += g * g * noise;
    // sup over the ellipsoid of sum (1-g_j)^2 theta_j^2 puts all mass on one coordinate.
    worst_bias = std::max(worst_bias, (1.0 - g) * (1.0 - g) / (ja[j] * ja[j]));
  }
  out.risk = variance.value() + R * worst_bias;
  return out;
}

double hyperrect_minimax_risk(double c, double q, double sigma2, std::size_t n) {
  if (!(c > 0.0)) throw std::invalid_argument("hyperrectangle side c must be positive");
  if (!(q > 0.5)) throw std::invalid_argument("hyperrectangle decay q must exceed 1/2");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  if (n == 0) throw std::invalid_argument("n must be positive");
  const double nn = static_cast<double>(n);
  CompensatedSum s;
  for (std::size_t j = 1; j <= n; ++j) {
    const double a2 = c * c * std::pow(static_cast<double>(j), -2.0 * q);
    s += a2 * sigma2 / (nn * a2 + sigma2);
  }
  return s.value();
}

}  // namespace mma
