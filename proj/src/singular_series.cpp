#include "primelab/singular_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "primelab/errors.hpp"
#include "primelab/prime_engine.hpp"

namespace primelab {
namespace {

using u64 = std::uint64_t;

// pi(t) < 1.25506 t / ln t (Rosser-Schoenfeld), so sum_{p > x} 1/p^2 < 2.51012 / (x ln x).
constexpr double kPrimeSquareTail = 2.51012;
constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

// log((1 - nu/p) (1 - 1/p)^-k); -inf when nu == p.
double log_factor(u64 nu, u64 p, u64 k) {
  const double pd = static_cast<double>(p);
  return std::log1p(-static_cast<double>(nu) / pd) - static_cast<double>(k) * std::log1p(-1.0 / pd);
}

u64 nu_mod(const std::vector<u64>& offsets, u64 p, std::vector<char>& scratch) {
  scratch.assign(p, 0);
  u64 count = 0;
  for (u64 h : offsets) {
    char& s = scratch[h % p];
    if (s == 0) {
      s = 1;
      ++count;
    }
  }
  return count;
}

}  // namespace

SeriesValue singular_series(const KTuple& tuple, std::uint64_t P) {
  const u64 k = tuple.size();
  const u64 diam = tuple.diameter();
  if (P < diam || P < k) {
    throw ArgumentError("singular_series: truncation " + std::to_string(P) +
                        " must be at least the diameter (" + std::to_string(diam) + ") and k (" +
                        std::to_string(k) + ")");
  }
  require_in_range(P, "truncation prime");
  const u64 bound = std::max<u64>(P, 2 * k);

  SeriesValue out;
  out.truncation_prime = bound;
  if (!is_admissible(tuple).admissible) return out;

  // Sum log-factors smallest prime first; track the magnitude for a rounding allowance.
  double log_sum = 0.0;
  double magnitude = 0.0;
  u64 terms = 0;
  std::vector<char> scratch;
  const auto& offsets = tuple.offsets();
  for_each_prime(2, bound + 1, [&](u64 p) {
    const u64 nu = p > diam ? k : nu_mod(offsets, p, scratch);
    const double lf = log_factor(nu, p, k);
    log_sum += lf;
    magnitude += std::fabs(lf);
    ++terms;
  });
  out.value = std::exp(log_sum);

  // Omitted primes all exceed max(2k, diameter), where
  // |log f_p| <= (k^2 - k) / p^2.
  const double bd = static_cast<double>(bound);
  const double kk = static_cast<double>(k);
  const double tail_log = kPrimeSquareTail * (kk * kk - kk) / (bd * std::log(bd));
  const double rounding = (static_cast<double>(terms) + 4.0) * 4.0 * kUnitRoundoff * magnitude +
                          (magnitude > 0 ? 4.0 * kUnitRoundoff : 0.0);
  out.tail_bound = out.value * (-std::expm1(-tail_log)) + out.value * rounding;
  return out;
}

double gallagher_average(const KTuple& tuple, std::uint64_t hmax, std::uint64_t P) {
  if (!is_admissible(tuple).admissible) throw ArgumentError("gallagher_average requires an admissible tuple");
  if (hmax == 0) throw ArgumentError("gallagher_average requires hmax >= 1");
  if (P < 2) throw ArgumentError("gallagher_average requires a truncation of at least 2");
  require_in_range(hmax, "hmax");
  require_in_range(P, "truncation prime");

  const u64 k = tuple.size();
  const auto abs = tuple.absolute();
  const u64 max_diff = std::max(hmax, abs.back());
  if (max_diff >= (u64{1} << 32)) throw ResourceError("gallagher_average supports offsets below 2^32");

  // Adding a fresh residue class mod p turns nu into nu + 1; a collision with an
  // existing class leaves nu alone. Both relative to f_p(H).
  const u64 delta_limit = std::min(P, max_diff);
  require_budget(8 * (delta_limit + 1) + 5 * (max_diff + 1), "Gallagher average tables");
  std::vector<double> collision_delta(delta_limit + 1, 0.0);
  std::vector<u64> zero_primes;  // nu_p(H) + 1 == p: a fresh class kills the term
  std::vector<std::vector<char>> zero_classes;
  double log_base = 0.0;
  std::vector<char> scratch;
  for_each_prime(2, P + 1, [&](u64 p) {
    const u64 nu = p > tuple.diameter() ? k : nu_mod(tuple.offsets(), p, scratch);
    const double pd = static_cast<double>(p);
    const double log_collide = -std::log1p(-1.0 / pd);
    if (nu + 1 == p) {
      zero_primes.push_back(p);
      std::vector<char> cls(p, 0);
      for (u64 h : abs) cls[h % p] = 1;
      zero_classes.push_back(std::move(cls));
      if (p <= delta_limit) collision_delta[p] = log_collide;
      return;
    }
    const double log_fresh = std::log1p(-static_cast<double>(nu + 1) / pd) -
                             std::log1p(-static_cast<double>(nu) / pd) + log_collide;
    log_base += log_fresh;
    if (p <= delta_limit) collision_delta[p] = log_collide - log_fresh;
  });

  const auto spf = dense_tables(max_diff + 1, false);

  constexpr u64 kBlock = 4096;
  const u64 blocks = (hmax + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  detail::parallel_for_blocks(blocks, [&](std::size_t b) {
    std::vector<u64> coll;
    double acc = 0.0;
    const u64 h0 = 1 + b * kBlock;
    const u64 h1 = std::min(hmax, h0 + kBlock - 1);
    for (u64 h = h0; h <= h1; ++h) {
      if (tuple.contains_absolute(h)) continue;
      coll.clear();
      for (u64 a : abs) {
        u64 diff = h > a ? h - a : a - h;
        while (diff > 1) {
          const u64 p = spf.spf(diff);
          if (p <= P) coll.push_back(p);
          while (diff % p == 0) diff /= p;
        }
      }
      std::sort(coll.begin(), coll.end());
      coll.erase(std::unique(coll.begin(), coll.end()), coll.end());
      bool zero = false;
      for (std::size_t z = 0; z < zero_primes.size() && !zero; ++z) {
        zero = !zero_classes[z][h % zero_primes[z]];
      }
      if (zero) continue;
      double lt = log_base;
      for (u64 p : coll) lt += collision_delta[p];
      acc += std::exp(lt);
    }
    partial[b] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total / static_cast<double>(hmax);
}

}  // namespace primelab
