#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "primelab/tuple_lab.hpp"

namespace primelab {

// Admits d only when every prime factor of d lies in [pmin, pmax].
struct DivisorWindow {
  std::uint64_t pmin = 2;
  std::uint64_t pmax = 2;
};

struct WeightParams {
  KTuple tuple;
  unsigned ell = 0;  // 0 <= ell <= k
  double R = 2.0;    // sieve cutoff, > 1
  std::optional<DivisorWindow> window;

  std::size_t k() const { return tuple.size(); }
  unsigned order() const { return static_cast<unsigned>(k()) + ell; }
  void validate() const;
};

// Lambda_R(n; H, k + ell) = 1/(k+ell)! sum_{d <= R, d | P_H(n)} mu(d) log(R/d)^(k+ell).
// Factors each n + h_i and enumerates squarefree d depth-first.
double lambda_R(std::uint64_t n, const WeightParams& params);

// Lambda_R(n) for n in [N, 2N), computed by sieving the primes <= R over the
// window. Bit-identical to lambda_R.
std::vector<double> weights(std::uint64_t N, const WeightParams& params);

// Sum over n in [N, 2N) of Lambda_R(n)^2. Zero when the range is empty.
double weighted_sum(std::uint64_t N, const WeightParams& params);

// restricted / full compared against a reference bound; constant = ratio / bound.
struct RatioReport {
  double sum = 0.0;
  double restricted_sum = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  double constant = 0.0;
};

// Restriction p | P_H(n); bound = log p / (p log R).
RatioReport lemma1_ratio(std::uint64_t N, const WeightParams& params, std::uint64_t p);
// Same for several primes with one pass over the weights.
std::vector<RatioReport> lemma1_sweep(std::uint64_t N, const WeightParams& params,
                                      std::span<const std::uint64_t> primes);

// Restriction P-(P_H(n)) < R^eta; bound = eta.
RatioReport rough_sum_report(std::uint64_t N, const WeightParams& params, double eta);
double rough_sum_fraction(std::uint64_t N, const WeightParams& params, double eta);

struct SurvivorCount {
  std::uint64_t count = 0;
  double paper_bound_scale = 0.0;  // N alpha^-k S(H) / log^k N
  std::optional<double> ratio;     // count / scale, absent when the scale is zero
};

// #{n in [N, 2N) : P-(P_H(n)) > N^alpha}, by exact sieving. 0 < alpha < 1/2.
SurvivorCount selberg_survivor_count(std::uint64_t N, const KTuple& tuple, double alpha);

}  // namespace primelab
