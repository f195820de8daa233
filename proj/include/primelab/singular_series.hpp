#pragma once

#include <cstdint>

#include "primelab/tuple_lab.hpp"

namespace primelab {

inline constexpr std::uint64_t kDefaultTruncation = 1'000'000;

// Truncated Hardy-Littlewood product over primes p <= truncation_prime.
// The true value lies in [value - tail_bound, value].
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  std::uint64_t truncation_prime = 0;
};

// Requires P >= diameter and P >= k. The product is taken up to max(P, 2k) so
// that every omitted factor obeys the tail estimate.
SeriesValue singular_series(const KTuple& tuple, std::uint64_t P = kDefaultTruncation);

// Mean over h = 1..hmax of S(H u {h}) / S(H), both products truncated at P.
// Offsets already in H are skipped but still counted in the denominator.
// H must be admissible.
double gallagher_average(const KTuple& tuple, std::uint64_t hmax, std::uint64_t P = kDefaultTruncation);

}  // namespace primelab
