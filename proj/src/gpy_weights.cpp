#include "primelab/gpy_weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parallel.hpp"
#include "primelab/config.hpp"
#include "primelab/errors.hpp"
#include "primelab/prime_engine.hpp"
#include "primelab/singular_series.hpp"

namespace primelab {
namespace {

using u64 = std::uint64_t;

constexpr u64 kBlock = 1 << 14;

u64 floor_of(double R) {
  if (!(R < static_cast<double>(kMaxInput))) throw ArgumentError("R exceeds the supported range");
  return static_cast<u64>(std::floor(R));
}

double inverse_factorial(unsigned j) {
  if (j <= 20) {
    double f = 1.0;
    for (unsigned i = 2; i <= j; ++i) f *= i;
    return 1.0 / f;
  }
  return std::exp(-std::lgamma(static_cast<double>(j) + 1.0));
}

bool admitted(u64 p, u64 floorR, const std::optional<DivisorWindow>& window) {
  if (p > floorR) return false;
  return !window || (p >= window->pmin && p <= window->pmax);
}

// Preorder depth-first sum over squarefree products of `primes` not exceeding floorR.
class DivisorSum {
 public:
  DivisorSum(double R, u64 floorR, unsigned order) : R_(R), floorR_(floorR), order_(order) {}

  // Extended precision: the terms reach (log R)^(k+ell) while the sum can cancel to
  // a few units of 1e-4, so double accumulation would lose about ten bits.
  double operator()(std::span<const u64> primes) const {
    long double sum = 0.0L;
    visit(primes, 0, 1, 1, sum);
    return static_cast<double>(sum);
  }

 private:
  void visit(std::span<const u64> primes, std::size_t from, u64 d, int mu, long double& sum) const {
    sum += mu * std::pow(std::log(R_ / static_cast<long double>(d)), static_cast<int>(order_));
    for (std::size_t i = from; i < primes.size(); ++i) {
      if (d > floorR_ / primes[i]) break;
      visit(primes, i + 1, d * primes[i], -mu, sum);
    }
  }

  long double R_;
  u64 floorR_;
  unsigned order_;
};

void check_window(u64 N, const WeightParams& params) {
  params.validate();
  if (N == 0) return;
  require_in_range(N, "N");
  const u64 top = 2 * N + params.tuple.absolute(params.k() - 1);
  if (top > kFactorLimit) throw ResourceError("window [N, 2N) + H exceeds the factorization range 2^48");
  require_budget(8 * N + 16 * kBlock * params.k(), "weight array");
}

u64 distinct_neg_residues(const std::vector<u64>& abs, u64 p, std::vector<u64>& out) {
  out.clear();
  for (u64 h : abs) out.push_back((p - h % p) % p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out.size();
}

double ordered_sum_of_squares(const std::vector<double>& w) {
  const u64 blocks = (w.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  detail::parallel_for_blocks(blocks, [&](std::size_t b) {
    double acc = 0.0;
    const std::size_t end = std::min<std::size_t>(w.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) acc += w[i] * w[i];
    partial[b] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

RatioReport make_report(double sum, double restricted, double bound) {
  if (!(sum > 0.0)) throw DegenerateInputError("full weighted sum is zero; ratio undefined");
  RatioReport r;
  r.sum = sum;
  r.restricted_sum = restricted;
  r.ratio = restricted / sum;
  r.bound = bound;
  r.constant = bound > 0.0 ? r.ratio / bound : 0.0;
  return r;
}

}  // namespace

void WeightParams::validate() const {
  if (ell > k()) throw ArgumentError("ell must satisfy 0 <= ell <= k");
  if (!(R > 1.0) || !std::isfinite(R)) throw ArgumentError("R must be a finite real > 1");
  if (window && window->pmin > window->pmax) throw ArgumentError("divisor window needs pmin <= pmax");
}

double lambda_R(std::uint64_t n, const WeightParams& params) {
  params.validate();
  if (n == 0) throw ArgumentError("lambda_R requires n >= 1");
  const u64 floorR = floor_of(params.R);
  std::vector<u64> primes;
  for (u64 h : params.tuple.absolute()) {
    const u64 m = n + h;
    if (m > kFactorLimit || m < n) throw ResourceError("n + h exceeds the factorization range 2^48");
    for (const auto& f : factorize(m)) {
      if (admitted(f.prime, floorR, params.window)) primes.push_back(f.prime);
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  const DivisorSum sum(params.R, floorR, params.order());
  return sum(primes) * inverse_factorial(params.order());
}

std::vector<double> weights(std::uint64_t N, const WeightParams& params) {
  check_window(N, params);
  std::vector<double> out(N, 0.0);
  if (N == 0) return out;
  const u64 floorR = floor_of(params.R);
  const auto abs = params.tuple.absolute();
  std::vector<u64> sieve_primes;
  if (floorR >= 2) {
    for_each_prime(2, std::min(floorR, 2 * N + abs.back()) + 1, [&](u64 p) {
      if (admitted(p, floorR, params.window)) sieve_primes.push_back(p);
    });
  }
  const DivisorSum sum(params.R, floorR, params.order());
  const double scale = inverse_factorial(params.order());

  const u64 blocks = (N + kBlock - 1) / kBlock;
  detail::parallel_for_blocks(blocks, [&](std::size_t b) {
    const u64 n0 = N + b * kBlock;
    const u64 n1 = std::min(2 * N, n0 + kBlock);
    const u64 len = n1 - n0;
    // CSR lists of admitted primes dividing P_H(n), ascending per n.
    std::vector<std::uint32_t> start(len + 1, 0);
    std::vector<u64> residues;
    auto for_each_hit = [&](auto&& fn) {
      for (u64 p : sieve_primes) {
        distinct_neg_residues(abs, p, residues);
        for (u64 r : residues) {
          u64 first = n0 + ((r + p - n0 % p) % p);
          for (u64 n = first; n < n1; n += p) fn(n - n0, p);
        }
      }
    };
    for_each_hit([&](u64 i, u64) { ++start[i + 1]; });
    for (u64 i = 0; i < len; ++i) start[i + 1] += start[i];
    std::vector<u64> flat(start[len]);
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for_each_hit([&](u64 i, u64 p) { flat[fill[i]++] = p; });
    for (u64 i = 0; i < len; ++i) {
      std::span<const u64> primes(flat.data() + start[i], start[i + 1] - start[i]);
      out[n0 - N + i] = sum(primes) * scale;
    }
  });
  return out;
}

double weighted_sum(std::uint64_t N, const WeightParams& params) {
  if (N == 0) {
    params.validate();
    return 0.0;
  }
  return ordered_sum_of_squares(weights(N, params));
}

std::vector<RatioReport> lemma1_sweep(std::uint64_t N, const WeightParams& params,
                                      std::span<const std::uint64_t> primes) {
  for (u64 p : primes) {
    if (!is_prime(p)) throw ArgumentError("lemma1_ratio: " + std::to_string(p) + " is not prime");
  }
  const auto w = weights(N, params);
  const double full = ordered_sum_of_squares(w);
  const auto abs = params.tuple.absolute();
  const double logR = std::log(params.R);
  std::vector<RatioReport> out;
  out.reserve(primes.size());
  for (u64 p : primes) {
    double restricted = 0.0;
    for (u64 i = 0; i < w.size(); ++i) {
      const u64 n = N + i;
      const bool hit = std::any_of(abs.begin(), abs.end(), [&](u64 h) { return (n + h) % p == 0; });
      if (hit) restricted += w[i] * w[i];
    }
    const double pd = static_cast<double>(p);
    out.push_back(make_report(full, restricted, std::log(pd) / (pd * logR)));
  }
  return out;
}

RatioReport lemma1_ratio(std::uint64_t N, const WeightParams& params, std::uint64_t p) {
  const u64 one[] = {p};
  return lemma1_sweep(N, params, one).front();
}

RatioReport rough_sum_report(std::uint64_t N, const WeightParams& params, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw ArgumentError("eta must lie in (0, 1)");
  const auto w = weights(N, params);
  const double full = ordered_sum_of_squares(w);
  // P- < R^eta  <=>  P- <= ceil(R^eta) - 1
  const double threshold = std::pow(params.R, eta);
  const double b = std::ceil(threshold) - 1.0;
  double restricted = 0.0;
  if (b >= 2.0) {
    const u64 bound = static_cast<u64>(b);
    const auto abs = params.tuple.absolute();
    for (u64 i = 0; i < w.size(); ++i) {
      const u64 n = N + i;
      const bool rough = std::any_of(abs.begin(), abs.end(), [&](u64 h) {
        return n + h >= 2 && smallest_prime_factor_bounded(n + h, bound).has_value();
      });
      if (rough) restricted += w[i] * w[i];
    }
  }
  return make_report(full, restricted, eta);
}

double rough_sum_fraction(std::uint64_t N, const WeightParams& params, double eta) {
  return rough_sum_report(N, params, eta).ratio;
}

SurvivorCount selberg_survivor_count(std::uint64_t N, const KTuple& tuple, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw ArgumentError("alpha must lie in (0, 1/2)");
  if (N == 0) throw ArgumentError("selberg_survivor_count requires N >= 1");
  require_in_range(2 * N + tuple.absolute(tuple.size() - 1), "2N + max(H)");
  const u64 z = static_cast<u64>(std::floor(std::pow(static_cast<double>(N), alpha)));
  const auto abs = tuple.absolute();
  std::vector<u64> small;
  if (z >= 2) for_each_prime(2, z + 1, [&](u64 p) { small.push_back(p); });

  const u64 blocks = (N + kBlock - 1) / kBlock;
  std::vector<u64> partial(blocks, 0);
  detail::parallel_for_blocks(blocks, [&](std::size_t b) {
    const u64 n0 = N + b * kBlock;
    const u64 n1 = std::min(2 * N, n0 + kBlock);
    std::vector<char> dead(n1 - n0, 0);
    std::vector<u64> residues;
    for (u64 p : small) {
      distinct_neg_residues(abs, p, residues);
      for (u64 r : residues) {
        for (u64 n = n0 + ((r + p - n0 % p) % p); n < n1; n += p) dead[n - n0] = 1;
      }
    }
    partial[b] = static_cast<u64>(std::count(dead.begin(), dead.end(), 0));
  });
  SurvivorCount out;
  for (u64 c : partial) out.count += c;

  const double k = static_cast<double>(tuple.size());
  const double logN = std::log(static_cast<double>(N));
  const u64 trunc = std::max<u64>(kDefaultTruncation, tuple.diameter());
  const double series = singular_series(tuple, trunc).value;
  out.paper_bound_scale = static_cast<double>(N) * std::pow(alpha, -k) * series / std::pow(logN, k);
  if (out.paper_bound_scale > 0.0) out.ratio = static_cast<double>(out.count) / out.paper_bound_scale;
  return out;
}

}  // namespace primelab
