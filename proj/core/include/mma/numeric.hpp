#pragma once

#include <cstdint>
#include <span>

namespace mma {

/// Neumaier's compensated summation. Tail sums such as sum_{j>m} j^{-2a} over
/// 1e5 terms lose several digits with naive accumulation.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs) noexcept;

/// Sum of squares with compensation.
double compensated_sum_squares(std::span<const double> xs) noexcept;

/// SplitMix64 finalizer; used to derive independent RNG streams from
/// (master_seed, replication index).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

}  // namespace mma
