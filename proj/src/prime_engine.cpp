#include "primelab/prime_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <string>

#include "primelab/config.hpp"
#include "primelab/errors.hpp"

namespace primelab {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e != 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic for all 64-bit n with these bases.
bool miller_rabin(u64 n) {
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (a % n == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct BaseCache {
  std::mutex mutex;
  u64 limit = 0;
  std::shared_ptr<const std::vector<std::uint32_t>> primes =
      std::make_shared<const std::vector<std::uint32_t>>();
};

BaseCache& base_cache() {
  static BaseCache cache;
  return cache;
}

std::vector<std::uint32_t> simple_odd_sieve(u64 limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  const u64 half = (limit - 1) / 2;  // bit i <-> 2i + 3
  std::vector<bool> composite(half, false);
  for (u64 i = 0; i < half; ++i) {
    if (composite[i]) continue;
    const u64 p = 2 * i + 3;
    out.push_back(static_cast<std::uint32_t>(p));
    for (u64 j = (p * p - 3) / 2; j < half; j += p) composite[j] = true;
  }
  return out;
}

}  // namespace

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::shared_ptr<const std::vector<std::uint32_t>> base_primes(std::uint64_t limit) {
  auto& cache = base_cache();
  std::lock_guard lock(cache.mutex);
  if (cache.limit >= limit) return cache.primes;
  if (limit > (u64{1} << 32)) throw ResourceError("base prime table above 2^32 is not supported");
  u64 target = std::max<u64>({limit, 2 * cache.limit, u64{1} << 16});
  target = std::min<u64>(target, u64{1} << 32);
  require_budget(target / 16 + target / 4, "base prime table");
  cache.primes = std::make_shared<const std::vector<std::uint32_t>>(simple_odd_sieve(target));
  cache.limit = target;
  return cache.primes;
}

bool SieveTables::is_prime(std::uint64_t m) const {
  if (m < lo_ || m >= hi_) {
    throw ArgumentError("value " + std::to_string(m) + " outside sieve table [" +
                        std::to_string(lo_) + ", " + std::to_string(hi_) + ")");
  }
  if (m == 2) return true;
  if ((m & 1) == 0) return false;
  const u64 bit = (m - odd_base_) / 2;
  return (words_[bit / 64] >> (bit % 64)) & 1;
}

std::uint64_t SieveTables::odd_rank(std::uint64_t bit) const {
  const u64 w = bit / 64;
  const u64 r = bit % 64;
  u64 c = rank_[w];
  if (r != 0) c += std::popcount(words_[w] & ((u64{1} << r) - 1));
  return c;
}

std::uint64_t SieveTables::count_primes(std::uint64_t a, std::uint64_t b) const {
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (a >= b) return 0;
  u64 c = (a <= 2 && 2 < b) ? 1 : 0;
  auto bit_of = [&](u64 m) {  // odd numbers below m
    return m <= odd_base_ ? u64{0} : (m - odd_base_ + 1) / 2;
  };
  return c + odd_rank(bit_of(b)) - odd_rank(bit_of(a));
}

std::vector<std::uint64_t> SieveTables::primes() const {
  std::vector<std::uint64_t> out;
  out.reserve(prime_count());
  for_each_prime([&](u64 p) { out.push_back(p); });
  return out;
}

std::uint32_t SieveTables::spf(std::uint64_t m) const {
  if (!has_spf()) throw ArgumentError("smallest-prime-factor table not built for this segment");
  if (m < 2 || m >= hi_) throw ArgumentError("spf argument out of table range");
  return spf_[m];
}

int SieveTables::mobius(std::uint64_t m) const {
  if (!has_mobius()) throw ArgumentError("Moebius table not built for this segment");
  if (m < 1 || m >= hi_) throw ArgumentError("Moebius argument out of table range");
  return mobius_[m];
}

void SieveTables::build_rank() {
  rank_.assign(words_.size() + 1, 0);
  for (std::size_t w = 0; w < words_.size(); ++w) rank_[w + 1] = rank_[w] + std::popcount(words_[w]);
}

SieveTables sieve_segment(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2) throw ArgumentError("sieve_segment requires lo >= 2");
  if (lo >= hi) {
    throw ArgumentError("sieve_segment requires lo < hi (got lo=" + std::to_string(lo) +
                        ", hi=" + std::to_string(hi) + ")");
  }
  require_in_range(hi - 1, "segment end");
  require_budget((hi - lo) / 8 + 64, "sieve segment");

  SieveTables t;
  t.lo_ = lo;
  t.hi_ = hi;
  t.odd_base_ = lo | 1;
  const u64 nbits = hi > t.odd_base_ ? (hi - t.odd_base_ + 1) / 2 : 0;
  t.words_.assign((nbits + 63) / 64, ~u64{0});
  if (nbits % 64 != 0) t.words_.back() = (u64{1} << (nbits % 64)) - 1;

  const u64 root = isqrt(hi - 1);
  const auto base = base_primes(root);

  // Cross off in cache-sized chunks of bit positions.
  std::vector<u64> next;
  std::vector<u64> step;
  for (std::uint32_t p32 : *base) {
    const u64 p = p32;
    if (p > root) break;
    if (p == 2) continue;
    u64 first = std::max(p * p, (t.odd_base_ + p - 1) / p * p);
    if ((first & 1) == 0) first += p;
    next.push_back((first - t.odd_base_) / 2);
    step.push_back(p);
  }
  const u64 chunk = std::max<u64>(segment_size() / 2, 64);
  for (u64 c0 = 0; c0 < nbits; c0 += chunk) {
    const u64 c1 = std::min(nbits, c0 + chunk);
    for (std::size_t i = 0; i < next.size(); ++i) {
      u64 j = next[i];
      const u64 p = step[i];
      for (; j < c1; j += p) t.words_[j / 64] &= ~(u64{1} << (j % 64));
      next[i] = j;
    }
  }
  t.build_rank();
  return t;
}

SieveTables dense_tables(std::uint64_t hi, bool with_mobius) {
  if (hi < 2) throw ArgumentError("dense_tables requires hi >= 2");
  if (hi > (u64{1} << 32)) throw ResourceError("dense tables above 2^32 are not supported");
  require_budget(hi * (4 + (with_mobius ? 1 : 0)) + hi / 8, "dense spf/Moebius table");

  SieveTables t;
  t.lo_ = 0;
  t.hi_ = hi;
  t.odd_base_ = 1;
  t.spf_.assign(hi, 0);
  std::vector<std::uint32_t> primes;
  for (u64 m = 2; m < hi; ++m) {
    if (t.spf_[m] == 0) {
      t.spf_[m] = static_cast<std::uint32_t>(m);
      primes.push_back(static_cast<std::uint32_t>(m));
    }
    for (std::uint32_t p : primes) {
      const u64 mp = m * p;
      if (p > t.spf_[m] || mp >= hi) break;
      t.spf_[mp] = p;
    }
  }
  const u64 nbits = hi / 2;  // odd numbers below hi
  t.words_.assign((nbits + 63) / 64, 0);
  for (u64 i = 0; i < nbits; ++i) {
    const u64 m = 2 * i + 1;
    if (m >= 3 && t.spf_[m] == m) t.words_[i / 64] |= u64{1} << (i % 64);
  }
  t.build_rank();
  if (with_mobius) {
    t.mobius_.assign(hi, 0);
    if (hi > 1) t.mobius_[1] = 1;
    for (u64 m = 2; m < hi; ++m) {
      const u64 p = t.spf_[m];
      const u64 q = m / p;
      t.mobius_[m] = (q % p == 0) ? 0 : static_cast<std::int8_t>(-t.mobius_[q]);
    }
  }
  return t;
}

constexpr u64 kCachedListLimit = u64{1} << 20;

std::vector<std::uint64_t> primes_up_to(std::uint64_t x) {
  std::vector<u64> out;
  if (x < 2) return out;
  require_in_range(x, "primes_up_to bound");
  if (x <= kCachedListLimit) {
    // Small bounds are a prefix of the shared base table.
    const auto base = base_primes(x);
    const auto end = std::upper_bound(base->begin(), base->end(), x);
    return std::vector<u64>(base->begin(), end);
  }
  const double est = x < 100 ? 30.0 : 1.26 * static_cast<double>(x) / std::log(static_cast<double>(x));
  require_budget(static_cast<u64>(est) * 8 + segment_size() / 8, "prime list");
  out.reserve(static_cast<std::size_t>(est));
  for_each_prime(2, x + 1, [&](u64 p) { out.push_back(p); });
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  return miller_rabin(n);
}

std::optional<std::uint64_t> smallest_prime_factor_bounded(std::uint64_t m, std::uint64_t bound) {
  if (m < 2) throw ArgumentError("smallest_prime_factor_bounded requires m >= 2");
  if (bound < 2) throw ArgumentError("smallest_prime_factor_bounded requires bound >= 2");
  require_in_range(m, "m");
  const u64 root = isqrt(m);
  const u64 trial = std::min(bound, root);
  if (trial > (u64{1} << 24) && !is_prime(m)) {
    throw ResourceError("smallest prime factor search beyond 2^24 is not supported");
  }
  if (trial <= (u64{1} << 24)) {
    const auto base = base_primes(trial);
    for (std::uint32_t p : *base) {
      if (p > trial) break;
      if (m % p == 0) return p;
    }
    if (trial < root) return std::nullopt;
  }
  // No factor up to sqrt(m): m is prime.
  if (m <= bound) return m;
  return std::nullopt;
}

std::vector<PrimePower> factorize(std::uint64_t n) {
  if (n == 0) throw ArgumentError("factorize requires n >= 1");
  if (n > kFactorLimit) {
    throw ResourceError("factorize supports n <= 2^48 (got " + std::to_string(n) + ")");
  }
  std::vector<PrimePower> out;
  const auto base = base_primes(isqrt(n));
  for (std::uint32_t p32 : *base) {
    const u64 p = p32;
    if (p * p > n) break;
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::uint64_t euler_phi(std::uint64_t q) {
  if (q == 0) throw ArgumentError("euler_phi requires q >= 1");
  u64 phi = q;
  for (const auto& f : factorize(q)) phi = phi / f.prime * (f.prime - 1);
  return phi;
}

}  // namespace primelab
