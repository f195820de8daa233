#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace primelab {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  bool operator==(const PrimePower&) const = default;
};

// Primality over [lo, hi), odd-only packed. Dense tables built from zero also
// carry smallest-prime-factor and Moebius values. Immutable once built.
class SieveTables {
 public:
  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }

  // m must lie in [lo, hi).
  bool is_prime(std::uint64_t m) const;

  std::uint64_t prime_count() const { return count_primes(lo_, hi_); }
  // Primes in [a, b), clamped to the table.
  std::uint64_t count_primes(std::uint64_t a, std::uint64_t b) const;

  std::vector<std::uint64_t> primes() const;

  template <class Fn>
  void for_each_prime(Fn&& fn) const {
    if (lo_ <= 2 && 2 < hi_) fn(std::uint64_t{2});
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int b = __builtin_ctzll(bits);
        bits &= bits - 1;
        fn(odd_base_ + 2 * (64 * static_cast<std::uint64_t>(w) + static_cast<std::uint64_t>(b)));
      }
    }
  }

  bool has_spf() const { return !spf_.empty(); }
  // Smallest prime factor of m, 2 <= m < hi. Requires has_spf().
  std::uint32_t spf(std::uint64_t m) const;

  bool has_mobius() const { return !mobius_.empty(); }
  int mobius(std::uint64_t m) const;

 private:
  friend SieveTables sieve_segment(std::uint64_t, std::uint64_t);
  friend SieveTables dense_tables(std::uint64_t, bool);

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::uint64_t odd_base_ = 1;          // smallest odd number >= lo
  std::vector<std::uint64_t> words_;    // bit i <-> odd_base_ + 2i
  std::vector<std::uint64_t> rank_;     // popcount of words_[0..w)
  std::vector<std::uint32_t> spf_;
  std::vector<std::int8_t> mobius_;

  std::uint64_t odd_rank(std::uint64_t bit) const;
  void build_rank();
};

// Primality bitset for [lo, hi). Requires 2 <= lo < hi.
SieveTables sieve_segment(std::uint64_t lo, std::uint64_t hi);

// Tables over [0, hi) with spf and, optionally, Moebius values.
SieveTables dense_tables(std::uint64_t hi, bool with_mobius = true);

// All primes <= x, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t x);

// Calls fn(p) for each prime p in [lo, hi), ascending, one segment at a time.
template <class Fn>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn);

// Shared table of primes <= limit (at least). Safe to call concurrently.
std::shared_ptr<const std::vector<std::uint32_t>> base_primes(std::uint64_t limit);

bool is_prime(std::uint64_t n);

// Least prime p <= bound dividing m, or nullopt when P-(m) > bound.
std::optional<std::uint64_t> smallest_prime_factor_bounded(std::uint64_t m, std::uint64_t bound);

// Ascending prime factorization. factorize(1) is empty.
std::vector<PrimePower> factorize(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t q);

// Largest n supported by factorize() and friends (base primes up to 2^24).
inline constexpr std::uint64_t kFactorLimit = std::uint64_t{1} << 48;

std::uint64_t isqrt(std::uint64_t n);

}  // namespace primelab

#include "primelab/detail/for_each_prime.hpp"
