#include "primelab/gap_observatory.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "primelab/config.hpp"
#include "primelab/errors.hpp"
#include "primelab/prime_engine.hpp"

namespace primelab {
namespace {

using u64 = std::uint64_t;

constexpr double kEulerGamma = 0.57721566490153286061;

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

void require_even(u64 max_even) {
  if (max_even < 2 || max_even % 2 != 0) {
    throw ArgumentError("max_even must be an even number >= 2 (got " + std::to_string(max_even) + ")");
  }
}

mpz_class product_tree(const std::vector<u64>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return 1;
  if (hi - lo <= 16) {
    mpz_class acc = 1;
    for (std::size_t i = lo; i < hi; ++i) {
      mpz_class t;
      mpz_set_ui(t.get_mpz_t(), static_cast<unsigned long>(v[i]));
      acc *= t;
    }
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return product_tree(v, lo, mid) * product_tree(v, mid, hi);
}

}  // namespace

void for_each_gap(std::uint64_t limit, const std::function<void(const GapRecord&)>& fn) {
  if (limit < 3) throw ArgumentError("gap stream requires limit >= 3");
  require_in_range(limit, "limit");
  u64 prev = 0;
  u64 index = 0;
  for_each_prime(2, limit + 1, [&](u64 p) {
    if (prev != 0) fn(GapRecord{++index, prev, p - prev});
    prev = p;
  });
}

std::vector<GapRecord> gap_stream(std::uint64_t limit) {
  std::vector<GapRecord> out;
  for_each_gap(limit, [&](const GapRecord& r) { out.push_back(r); });
  return out;
}

double mean_normalized_gap(std::uint64_t limit, GapNormalization norm) {
  if (limit < 10) throw DegenerateInputError("mean_normalized_gap requires limit >= 10");
  double sum = 0.0;
  u64 terms = 0;
  for_each_gap(limit, [&](const GapRecord& r) {
    if (norm == GapNormalization::LogIndex) {
      if (r.index < 2) return;
      sum += static_cast<double>(r.gap) / std::log(static_cast<double>(r.index));
    } else {
      sum += static_cast<double>(r.gap) / std::log(static_cast<double>(r.prime));
    }
    ++terms;
  });
  if (terms == 0) throw DegenerateInputError("no gaps below limit");
  return sum / static_cast<double>(terms);
}

TestFunction TestFunction::log() {
  return {TestFunctionTag::Log, "log", [](u64 n) { return std::log(static_cast<double>(n)); }};
}

TestFunction TestFunction::gpy_half() {
  return {TestFunctionTag::GpyHalf, "gpy-half", [](u64 n) {
            const double l = std::log(static_cast<double>(n));
            const double ll = std::log(l);
            return std::sqrt(l) * ll * ll;
          }};
}

TestFunction TestFunction::pintz_3_7() {
  return {TestFunctionTag::Pintz37, "pintz-3/7", [](u64 n) {
            const double l = std::log(static_cast<double>(n));
            return std::pow(l, 3.0 / 7.0) * std::pow(std::log(l), 4.0 / 7.0);
          }};
}

TestFunction TestFunction::custom(std::string name, std::function<double(std::uint64_t)> eval) {
  return {TestFunctionTag::Custom, std::move(name), std::move(eval)};
}

TestFunction TestFunction::parse(std::string_view spec) {
  if (spec == "log") return log();
  if (spec == "gpy-half") return gpy_half();
  if (spec == "pintz-3/7") return pintz_3_7();
  if (spec.starts_with("power:")) {
    const double a = parse_double(spec.substr(6), "power exponent");
    return custom(std::string(spec), [a](u64 n) { return std::pow(static_cast<double>(n), a); });
  }
  if (spec.starts_with("const:")) {
    const double c = parse_double(spec.substr(6), "constant");
    return custom(std::string(spec), [c](u64) { return c; });
  }
  throw ArgumentError("unknown test function '" + std::string(spec) +
                      "' (expected log, gpy-half, pintz-3/7, power:a, const:c)");
}

OscillationReport slow_oscillation_check(const TestFunction& f, std::uint64_t Nmax, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
  if (Nmax < 4) throw ArgumentError("slow_oscillation_check requires Nmax >= 4");
  require_in_range(2 * Nmax, "2 Nmax");
  constexpr u64 kSamples = 2048;
  OscillationReport rep;
  u64 last_block = 0;
  for (u64 N = 4; N <= Nmax; N *= 2) {
    last_block = N;
    ++rep.blocks_checked;
    const double fN = f(N);
    bool ok = fN > 0.0 && std::isfinite(fN);
    const double lo = (1.0 - eps) * fN;
    const double hi = (1.0 + eps) * fN;
    auto check = [&](u64 n) {
      const double v = f(n);
      if (!(v >= lo && v <= hi)) ok = false;
    };
    if (N + 1 <= kSamples) {
      for (u64 n = N; n <= 2 * N && ok; ++n) check(n);
    } else {
      for (u64 s = 0; s <= kSamples && ok; ++s) check(N + (N * s) / kSamples);
    }
    if (!ok) {
      if (!rep.first_violation) rep.first_violation = N;
      rep.last_violation = N;
    }
  }
  rep.passes = !rep.last_violation || *rep.last_violation < last_block;
  if (rep.passes) rep.threshold = rep.last_violation ? 2 * *rep.last_violation : 4;
  return rep;
}

double Histogram::bin_width() const { return counts.empty() ? 0.0 : range_hi / static_cast<double>(counts.size()); }

Histogram limit_point_histogram(std::uint64_t limit, const TestFunction& f, std::size_t bins, double range_hi) {
  if (bins == 0) throw ArgumentError("histogram needs at least one bin");
  if (!(range_hi > 0.0)) throw ArgumentError("range_hi must be positive");
  Histogram h;
  h.range_hi = range_hi;
  h.counts.assign(bins, 0);
  const double width = h.bin_width();
  for_each_gap(limit, [&](const GapRecord& r) {
    const double fv = f(r.prime);
    if (!(fv > 0.0) || !std::isfinite(fv)) {
      ++h.invalid;
      return;
    }
    const double v = static_cast<double>(r.gap) / fv;
    ++h.total;
    if (!h.min_value || v < *h.min_value) {
      h.min_value = v;
      h.argmin = r;
    }
    if (v < 0.0) {
      ++h.underflow;
    } else if (v >= range_hi) {
      ++h.overflow;
    } else {
      const auto b = static_cast<std::size_t>(v / width);
      ++h.counts[std::min(b, bins - 1)];
    }
  });
  return h;
}

RatioExtremes ratio_extremes(std::uint64_t limit) {
  RatioExtremes out;
  std::optional<GapRecord> prev;
  const double inf = std::numeric_limits<double>::infinity();
  out.min_ratio.value = inf;
  out.min_ratio_scaled.value = inf;
  out.max_ratio.value = -inf;
  out.max_ratio_scaled.value = -inf;
  for_each_gap(limit, [&](const GapRecord& r) {
    if (prev) {
      const double ratio = static_cast<double>(r.gap) / static_cast<double>(prev->gap);
      const double lp = std::log(static_cast<double>(prev->prime));
      const RatioWitness w{prev->index, prev->prime, prev->gap, r.gap, ratio};
      auto take = [&](RatioWitness& slot, double v, bool smaller) {
        if (smaller ? v < slot.value : v > slot.value) {
          slot = w;
          slot.value = v;
        }
      };
      take(out.min_ratio, ratio, true);
      take(out.max_ratio, ratio, false);
      take(out.min_ratio_scaled, ratio * lp, true);
      take(out.max_ratio_scaled, ratio / lp, false);
      ++out.pairs;
    }
    prev = r;
  });
  if (out.pairs == 0) throw DegenerateInputError("ratio_extremes needs at least two gaps below the limit");
  return out;
}

std::uint64_t PolignacCensus::count(std::uint64_t even) const {
  if (even < 2 || even % 2 != 0) throw ArgumentError("census is indexed by even numbers >= 2");
  if (even > max_even) throw ArgumentError("even value above the census range");
  return counts[even / 2 - 1];
}

PolignacCensus strong_polignac_census(std::uint64_t limit, std::uint64_t max_even) {
  require_even(max_even);
  PolignacCensus c;
  c.max_even = max_even;
  c.counts.assign(max_even / 2, 0);
  for_each_gap(limit, [&](const GapRecord& r) {
    if (r.gap % 2 != 0) return;
    if (r.gap > max_even) {
      ++c.overflow;
    } else {
      ++c.counts[r.gap / 2 - 1];
    }
  });
  return c;
}

PolignacCensus weak_polignac_census(std::uint64_t limit, std::uint64_t max_even) {
  require_even(max_even);
  if (limit < 3) throw ArgumentError("weak census requires limit >= 3");
  require_in_range(limit, "limit");
  PolignacCensus c;
  c.max_even = max_even;
  c.counts.assign(max_even / 2, 0);
  const auto table = sieve_segment(2, limit + 1);
  const auto primes = table.primes();
  for (u64 g = 2; g <= max_even && g < limit; g += 2) {
    u64 count = 0;
    for (u64 q : primes) {
      if (q + g > limit) break;
      if (table.is_prime(q + g)) ++count;
    }
    c.counts[g / 2 - 1] = count;
  }
  return c;
}

PolignacDensity polignac_density_lower(std::uint64_t k, bool exact) {
  if (k < 2) throw ArgumentError("polignac_density_lower requires k >= 2");
  require_in_range(k, "k");
  PolignacDensity d;
  d.k = k;
  const double kd = static_cast<double>(k);
  double log_value = -std::log(kd) - std::log(kd - 1.0);
  std::vector<u64> primes;
  for_each_prime(2, k + 1, [&](u64 p) {
    log_value += std::log1p(-1.0 / static_cast<double>(p));
    if (exact) primes.push_back(p);
  });
  d.value = std::exp(log_value);
  d.asymptote = std::exp(-kEulerGamma) / (kd * kd * std::log(kd));
  if (exact) {
    std::vector<u64> minus_one(primes);
    for (auto& p : minus_one) p -= 1;
    mpz_class kk;
    mpz_set_ui(kk.get_mpz_t(), static_cast<unsigned long>(k));
    mpz_class km1 = kk - 1;
    mpq_class q(product_tree(minus_one, 0, minus_one.size()), product_tree(primes, 0, primes.size()) * kk * km1);
    q.canonicalize();
    d.numerator = q.get_num().get_str();
    d.denominator = q.get_den().get_str();
  }
  return d;
}

}  // namespace primelab
