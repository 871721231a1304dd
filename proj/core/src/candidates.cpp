#include "mma/candidates.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mma {

std::vector<std::size_t> CandidateSet::group_sizes() const {
  if (!nested()) throw std::logic_error("group sizes are defined for nested sets only");
  std::vector<std::size_t> d(sizes.size());
  std::size_t prev = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    d[j] = sizes[j] - prev;
    prev = sizes[j];
  }
  return d;
}

std::size_t CandidateSet::model_size(std::size_t m) const {
  return nested() ? sizes.at(m) : index_sets.at(m).size();
}

void CandidateSet::validate() const {
  if (size() == 0) throw std::invalid_argument("candidate set is empty");
  if (nested()) {
    if (sizes.front() < 1) throw std::invalid_argument("nested sizes must start at 1 or more");
    for (std::size_t j = 1; j < sizes.size(); ++j) {
      if (sizes[j] <= sizes[j - 1]) throw std::invalid_argument("nested sizes must be strictly increasing");
    }
    if (sizes.back() > p) throw std::invalid_argument("largest nested size exceeds p");
    return;
  }
  std::set<std::vector<std::size_t>> seen;
  for (const auto& s : index_sets) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] < 1 || s[j] > p) throw std::invalid_argument("subset index outside 1..p");
      if (j > 0 && s[j] <= s[j - 1]) throw std::invalid_argument("subset indices must be sorted and distinct");
    }
    if (!seen.insert(s).second) throw std::invalid_argument("duplicate subset in candidate set");
  }
}

CandidateSet CandidateSet::from_sizes(std::vector<std::size_t> sizes, std::size_t p) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  CandidateSet s;
  s.kind = CandidateKind::nested;
  s.p = p;
  s.sizes = std::move(sizes);
  s.validate();
  return s;
}

CandidateSet CandidateSet::from_index_sets(std::vector<std::vector<std::size_t>> sets, std::size_t p) {
  for (auto& s : sets) std::sort(s.begin(), s.end());
  CandidateSet c;
  c.kind = CandidateKind::subsets;
  c.p = p;
  c.index_sets = std::move(sets);
  c.validate();
  return c;
}

CandidateSet all_nested(std::size_t p) {
  if (p == 0) throw std::invalid_argument("all_nested requires p >= 1");
  return successive(p, p);
}

CandidateSet successive(std::size_t M, std::size_t p) {
  if (M == 0) throw std::invalid_argument("successive set requires M >= 1");
  if (M > p) throw std::invalid_argument("successive set size M exceeds p");
  std::vector<std::size_t> sizes(M);
  for (std::size_t j = 0; j < M; ++j) sizes[j] = j + 1;
  return CandidateSet::from_sizes(std::move(sizes), p);
}

namespace {

double log_n(std::size_t n) {
  if (n < 2) throw std::invalid_argument("log(n)-based candidate sets require n >= 2");
  return std::log(static_cast<double>(n));
}

CandidateSet degenerate_full(std::size_t p) {
  auto s = CandidateSet::from_sizes({p}, p);
  s.degenerate = true;
  return s;
}

}  // namespace

CandidateSet grouped_geometric(std::size_t p, std::size_t n, double t1, double t2) {
  if (p == 0) throw std::invalid_argument("grouped_geometric requires p >= 1");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw std::invalid_argument("grouped_geometric requires t1 > 0 and t2 > 0");
  const double zeta = t1 / std::pow(log_n(n), t2);
  const auto k1 = static_cast<std::size_t>(std::ceil(1.0 / zeta));
  if (k1 >= p) return degenerate_full(p);

  std::vector<std::size_t> sizes{k1};
  double growth = 1.0 + zeta;
  for (;;) {
    const auto step = static_cast<std::size_t>(std::floor(static_cast<double>(k1) * growth));
    const std::size_t next = sizes.back() + step;
    if (next >= p) break;
    sizes.push_back(next);
    growth *= 1.0 + zeta;
  }
  sizes.push_back(p);
  return CandidateSet::from_sizes(std::move(sizes), p);
}

CandidateSet grouped_equal(std::size_t p, std::size_t n, double t) {
  if (p == 0) throw std::invalid_argument("grouped_equal requires p >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("grouped_equal requires t > 0");
  const auto k1 = static_cast<std::size_t>(std::ceil(std::pow(log_n(n), t)));
  if (k1 >= p) return degenerate_full(p);
  std::vector<std::size_t> sizes;
  for (std::size_t k = k1; k < p; k += k1) sizes.push_back(k);
  sizes.push_back(p);
  return CandidateSet::from_sizes(std::move(sizes), p);
}

CandidateSet ms_centered(std::size_t m_hat, double kappa_l, double kappa_u, std::size_t p) {
  if (m_hat < 1 || m_hat > p) throw std::invalid_argument("ms_centered requires 1 <= m_hat <= p");
  if (!(kappa_l > 1.0) || !(kappa_u > 1.0)) throw std::invalid_argument("ms_centered requires kappa_l, kappa_u > 1");
  const double m = static_cast<double>(m_hat);
  const auto lower = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(m / kappa_l)));
  const auto upper = std::min<std::size_t>(p, static_cast<std::size_t>(std::floor(kappa_u * m)));
  std::vector<std::size_t> sizes;
  for (std::size_t k = lower; k <= upper; ++k) sizes.push_back(k);
  return CandidateSet::from_sizes(std::move(sizes), p);
}

CandidateSet ms_window(std::size_t m_hat, std::size_t half_width, std::size_t p) {
  if (m_hat < 1 || m_hat > p) throw std::invalid_argument("ms_window requires 1 <= m_hat <= p");
  const std::size_t lower = m_hat > half_width ? m_hat - half_width : 1;
  const std::size_t upper = std::min(p, m_hat + half_width);
  std::vector<std::size_t> sizes;
  for (std::size_t k = std::max<std::size_t>(lower, 1); k <= upper; ++k) sizes.push_back(k);
  return CandidateSet::from_sizes(std::move(sizes), p);
}

CandidateSet all_subsets(std::size_t p) {
  if (p == 0) throw std::invalid_argument("all_subsets requires p >= 1");
  if (p > kMaxSubsetDimension) {
    throw std::invalid_argument("all_subsets is limited to p <= " + std::to_string(kMaxSubsetDimension));
  }
  const std::size_t count = std::size_t{1} << p;
  std::vector<std::vector<std::size_t>> sets(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (std::size_t j = 0; j < p; ++j) {
      if (mask & (std::size_t{1} << j)) sets[mask].push_back(j + 1);
    }
  }
  return CandidateSet::from_index_sets(std::move(sets), p);
}

std::string to_json(const CandidateSet& set) {
  nlohmann::ordered_json j;
  j["kind"] = set.nested() ? "nested" : "subsets";
  j["p"] = set.p;
  if (set.nested()) {
    j["sizes"] = set.sizes;
  } else {
    j["index_sets"] = set.index_sets;
  }
  if (set.degenerate) j["degenerate"] = true;
  return j.dump();
}

}  // namespace mma
