#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace primelab {

struct GapRecord {
  std::uint64_t index = 0;  // n
  std::uint64_t prime = 0;  // p_n
  std::uint64_t gap = 0;    // d_n = p_{n+1} - p_n
  bool operator==(const GapRecord&) const = default;
};

// Calls fn for every record with p_{n+1} <= limit. limit >= 3.
void for_each_gap(std::uint64_t limit, const std::function<void(const GapRecord&)>& fn);
std::vector<GapRecord> gap_stream(std::uint64_t limit);

enum class GapNormalization { LogPrime, LogIndex };

// (1/M) sum d_n / log p_n (or / log n, skipping n = 1). limit >= 10.
double mean_normalized_gap(std::uint64_t limit, GapNormalization norm = GapNormalization::LogPrime);

enum class TestFunctionTag { Log, GpyHalf, Pintz37, Custom };

struct TestFunction {
  TestFunctionTag tag = TestFunctionTag::Log;
  std::string name = "log";
  std::function<double(std::uint64_t)> eval;

  double operator()(std::uint64_t n) const { return eval(n); }

  static TestFunction log();
  // (log n)^(1/2) (log log n)^2
  static TestFunction gpy_half();
  // (log n)^(3/7) (log log n)^(4/7)
  static TestFunction pintz_3_7();
  static TestFunction custom(std::string name, std::function<double(std::uint64_t)> eval);
  // "log", "gpy-half", "pintz-3/7", "power:a" (n^a), "const:c".
  static TestFunction parse(std::string_view spec);
};

struct OscillationReport {
  bool passes = false;                              // every block from threshold on passes
  std::optional<std::uint64_t> threshold;           // N(eps): first block start after the last violation
  std::optional<std::uint64_t> first_violation;    // start N of the first failing block
  std::optional<std::uint64_t> last_violation;
  std::uint64_t blocks_checked = 0;
};

// Checks (1 - eps) f(N) <= f(n) <= (1 + eps) f(N) on dyadic blocks [N, 2N],
// N = 4, 8, ..., up to Nmax, sampling each block densely.
OscillationReport slow_oscillation_check(const TestFunction& f, std::uint64_t Nmax, double eps);

struct Histogram {
  double range_hi = 0.0;
  std::vector<std::uint64_t> counts;  // half-open equal-width bins over [0, range_hi)
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;
  std::uint64_t invalid = 0;          // records where f(p_n) was not positive and finite
  std::uint64_t total = 0;            // valid records; excludes invalid
  std::optional<double> min_value;
  std::optional<GapRecord> argmin;
  double bin_width() const;
};

// d_n / f(p_n) over the gap stream.
Histogram limit_point_histogram(std::uint64_t limit, const TestFunction& f, std::size_t bins, double range_hi);

struct RatioWitness {
  std::uint64_t index = 0;   // n; the ratio is d_{n+1} / d_n
  std::uint64_t prime = 0;   // p_n
  std::uint64_t gap = 0;     // d_n
  std::uint64_t next_gap = 0;
  double value = 0.0;
};

struct RatioExtremes {
  RatioWitness min_ratio;
  RatioWitness max_ratio;
  RatioWitness min_ratio_scaled;  // (d_{n+1}/d_n) log p_n
  RatioWitness max_ratio_scaled;  // (d_{n+1}/d_n) / log p_n
  std::uint64_t pairs = 0;
};

// Over all n with p_{n+2} <= limit. Needs at least two gaps.
RatioExtremes ratio_extremes(std::uint64_t limit);

// counts[g/2 - 1] for even g = 2, 4, ..., max_even; larger gaps go to overflow.
struct PolignacCensus {
  std::uint64_t max_even = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t overflow = 0;
  std::uint64_t count(std::uint64_t even) const;
};

// Number of n with d_n = 2k and p_{n+1} <= limit.
PolignacCensus strong_polignac_census(std::uint64_t limit, std::uint64_t max_even);
// Number of prime pairs q < p <= limit with p - q = 2k. No overflow bucket.
PolignacCensus weak_polignac_census(std::uint64_t limit, std::uint64_t max_even);

// (1/(k(k-1))) prod_{p <= k} (1 - 1/p) with its comparator e^-gamma / (k^2 log k).
struct PolignacDensity {
  std::uint64_t k = 0;
  std::optional<std::string> numerator;  // reduced, decimal
  std::optional<std::string> denominator;
  double value = 0.0;
  double asymptote = 0.0;
};

PolignacDensity polignac_density_lower(std::uint64_t k, bool exact);

}  // namespace primelab
