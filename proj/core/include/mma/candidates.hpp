#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mma {

enum class CandidateKind { nested, subsets };

/// An ordered list of candidate models.
///
/// Nested sets are described by their sizes k_1 < ... < k_M (model m uses the
/// first k_m regressors). Subset sets carry explicit 1-based index sets and are
/// used by the ideal-risk oracles.
struct CandidateSet {
  CandidateKind kind = CandidateKind::nested;
  std::size_t p = 0;
  std::vector<std::size_t> sizes;
  std::vector<std::vector<std::size_t>> index_sets;
  /// Set when a (log n)-based constructor collapsed to the single model {p}.
  bool degenerate = false;

  std::size_t size() const noexcept { return kind == CandidateKind::nested ? sizes.size() : index_sets.size(); }
  bool nested() const noexcept { return kind == CandidateKind::nested; }

  /// Group sizes d_j = k_j - k_{j-1} with k_0 = 0.
  std::vector<std::size_t> group_sizes() const;

  /// Number of regressors of model m (0-based), for either kind.
  std::size_t model_size(std::size_t m) const;

  /// Throws std::invalid_argument if the invariants are violated.
  void validate() const;

  static CandidateSet from_sizes(std::vector<std::size_t> sizes, std::size_t p);
  static CandidateSet from_index_sets(std::vector<std::vector<std::size_t>> sets, std::size_t p);
};

/// Sizes 1..p.
CandidateSet all_nested(std::size_t p);

/// Sizes 1..M.
CandidateSet successive(std::size_t M, std::size_t p);

/// Weakly geometric groups: zeta = t1 / (log n)^t2, k_1 = ceil(1/zeta),
/// k_m = k_{m-1} + floor(k_1 (1+zeta)^{m-1}) while below p, last size p.
CandidateSet grouped_geometric(std::size_t p, std::size_t n, double t1 = 1.0, double t2 = 1.0);

/// Equal groups of k_1 = ceil((log n)^t) regressors, last size p.
CandidateSet grouped_equal(std::size_t p, std::size_t n, double t = 1.0);

/// Sizes max(1, floor(m_hat/kappa_l)) .. min(p, floor(kappa_u m_hat)).
CandidateSet ms_centered(std::size_t m_hat, double kappa_l, double kappa_u, std::size_t p);

/// Sizes max(1, m_hat - half_width) .. min(p, m_hat + half_width).
CandidateSet ms_window(std::size_t m_hat, std::size_t half_width, std::size_t p);

/// Largest p accepted by all_subsets().
inline constexpr std::size_t kMaxSubsetDimension = 12;

/// All 2^p subsets of {1..p}, the empty set first, in bitmask order.
CandidateSet all_subsets(std::size_t p);

/// {"kind": "nested"|"subsets", "p": p, "sizes": [...]} (or "index_sets").
std::string to_json(const CandidateSet& set);

}  // namespace mma
