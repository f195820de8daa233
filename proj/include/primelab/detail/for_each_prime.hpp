#pragma once

#include <algorithm>

#include "primelab/config.hpp"
#include "primelab/errors.hpp"

namespace primelab {

template <class Fn>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) {
  lo = std::max<std::uint64_t>(lo, 2);
  if (lo >= hi) return;
  require_in_range(hi, "prime enumeration bound");
  const std::uint64_t step = segment_size();
  for (std::uint64_t a = lo; a < hi; a = (hi - a > step) ? a + step : hi) {
    const std::uint64_t b = (hi - a > step) ? a + step : hi;
    sieve_segment(a, b).for_each_prime(fn);
  }
}

}  // namespace primelab
