#include "mma/numeric.hpp"

#include "mma/errors.hpp"

#include <sstream>

namespace mma {

namespace {

std::string rank_message(std::size_t column, double pivot, double largest) {
  std::ostringstream os;
  os << "design matrix is rank deficient: column " << (column + 1)
     << " (1-based) is in the span of the preceding columns (|R_jj| = " << pivot
     << ", largest |R_jj| = " << largest << ")";
  return os.str();
}

}  // namespace

RankDeficientError::RankDeficientError(std::size_t column, double pivot, double largest)
    : NumericalError(rank_message(column, pivot, largest)), column_(column) {}

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

double compensated_sum_squares(std::span<const double> xs) noexcept {
  CompensatedSum s;
  for (double x : xs) s += x * x;
  return s.value();
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

}  // namespace mma
