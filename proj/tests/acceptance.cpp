// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "primelab/constellation_search.hpp"
#include "primelab/gap_observatory.hpp"
#include "primelab/gpy_weights.hpp"
#include "primelab/prime_engine.hpp"
#include "primelab/singular_series.hpp"
#include "primelab/tuple_lab.hpp"

using namespace primelab;
using u64 = std::uint64_t;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = "failed: " + what;
    }
  }
  void note(const std::string& s) {
    if (ok) detail += (detail.empty() ? "" : "; ") + s;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

// Criterion 1 ---------------------------------------------------------------

void sieve_exactness(Outcome& o) {
  constexpr u64 kMax = 100'000;
  std::vector<char> flag(kMax + 1, 0);
  std::vector<u64> expected;
  for (u64 m = 0; m <= kMax; ++m) {
    flag[m] = oracle::is_prime_trial(m);
    if (flag[m]) expected.push_back(m);
  }
  o.require(primes_up_to(kMax) == expected, "primes_up_to(1e5) list");
  // Every x: count and largest prime, which pin down the prefix given the full list above.
  std::size_t pi = 0;
  for (u64 x = 0; x <= kMax && o.ok; ++x) {
    if (flag[x]) ++pi;
    const auto got = primes_up_to(x);
    o.require(got.size() == pi, "pi(x) at x = " + std::to_string(x));
    if (pi) o.require(got.back() == expected[pi - 1], "largest prime <= " + std::to_string(x));
  }
  // Segments: every [lo, lo + 1), and random windows compared elementwise.
  const auto whole = sieve_segment(2, kMax + 1);
  for (u64 m = 2; m <= kMax; ++m) o.require(whole.is_prime(m) == static_cast<bool>(flag[m]), "segment bit");
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1500 && o.ok; ++i) {
    u64 lo = 2 + rng() % (kMax - 1), hi = 2 + rng() % kMax;
    if (lo > hi) std::swap(lo, hi);
    if (lo == hi) ++hi;
    const auto seg = sieve_segment(lo, hi);
    std::vector<u64> want;
    for (u64 m = lo; m < hi; ++m) {
      if (flag[m]) want.push_back(m);
    }
    o.require(seg.primes() == want, "sieve_segment(" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  const u64 pi6 = primes_up_to(1'000'000).size();
  o.require(pi6 == 78498, "pi(10^6) = 78498");
  o.note("pi(1e6) = " + std::to_string(pi6));
}

// Criterion 2 ---------------------------------------------------------------

void mean_gap(Outcome& o) {
  const double m = mean_normalized_gap(10'000'000);
  o.require(m >= 0.94 && m <= 1.06, "mean in [0.94, 1.06], got " + fmt(m));
  o.note("mean = " + fmt(m));
}

// Criterion 3 ---------------------------------------------------------------

void twin_series(Outcome& o) {
  const auto primes = oracle::primes_from(oracle::byte_sieve(100'000'000));
  const long double direct = oracle::series_direct({0, 2}, primes, 100'000'000);
  const auto s = singular_series(KTuple({0, 2}), 10'000'000);
  const double diff = std::fabs(static_cast<double>(s.value - direct));
  o.require(diff <= s.tail_bound, "|S - oracle| = " + fmt(diff) + " > tail " + fmt(s.tail_bound));
  o.require(s.tail_bound < 1e-6, "tail_bound < 1e-6");
  o.note("S = " + fmt(s.value) + ", |diff| = " + fmt(diff) + ", tail = " + fmt(s.tail_bound));
}

// Criterion 4 ---------------------------------------------------------------

void constellations(Outcome& o) {
  for (const auto& h : std::vector<std::vector<u64>>{{0, 2}, {0, 2, 6}, {0, 4, 6}}) {
    const auto c = count_constellations(KTuple(h), 1'000'000);
    const double r = static_cast<double>(c.count) / c.integral_prediction;
    o.require(std::fabs(r - 1.0) < 0.1, "integral ratio " + fmt(r) + " for " + KTuple(h).to_string());
    o.note(KTuple(h).to_string() + ": " + std::to_string(c.count) + " (ratio " + fmt(r) + ")");
  }
  o.require(count_constellations(KTuple({0, 2}), 100).count == 8, "count({0,2}, 100) = 8");
}

// Criterion 5 ---------------------------------------------------------------

void lambda_oracle(Outcome& o) {
  constexpr double kRel = 1e-12;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int instances = 0;
  int zeros = 0;
  while (instances < 10'000) {
    const std::size_t k = 1 + rng() % 3;
    std::set<u64> s{0};
    while (s.size() < k) s.insert(1 + rng() % 40);
    std::vector<u64> h(s.begin(), s.end());
    const u64 base = rng() % 5;
    for (u64& x : h) x += base;
    const unsigned ell = static_cast<unsigned>(rng() % (k + 1));
    const double R = 1.0 + std::uniform_real_distribution<double>(0.0, 99.0)(rng) + 1e-9;
    const u64 n = 1 + rng() % 1'000'000'000'000ULL;
    WeightParams params{KTuple(h), ell, R, std::nullopt};
    const double got = lambda_R(n, params);
    const auto want = oracle::lambda_loop(n, h, ell, R);
    ++instances;
    if (oracle::lambda_exact_zero(n, h, ell, R)) {
      // Relative error is undefined at an exact zero; both sides must be rounding noise.
      ++zeros;
      o.require(std::fabs(got) <= kRel, "identically zero sum gave " + fmt(got) + " at n = " + std::to_string(n));
      continue;
    }
    const double rel = static_cast<double>(std::fabs((got - want.value) / want.value));
    worst = std::max(worst, rel);
    o.require(rel <= kRel, "relative error " + fmt(rel) + " at n = " + std::to_string(n) + ", R = " + fmt(R));
  }
  o.note("worst relative error " + fmt(worst) + " over " + std::to_string(instances - zeros) +
         " nonzero instances; " + std::to_string(zeros) + " identically zero");
}

// Criteria 6 and 7 share their weights.

WeightParams lemma_params() { return {KTuple({0, 2, 6}), 1, std::pow(1e5, 0.2), std::nullopt}; }

void lemma1(Outcome& o) {
  auto params = lemma_params();
  params.R = 10.0;  // 10^5^(1/5) up to rounding
  std::vector<u64> ps;
  for (u64 p : primes_up_to(1000)) {
    if (p >= 5) ps.push_back(p);
  }
  const auto reps = lemma1_sweep(100'000, params, ps);
  double worst = 0.0;
  u64 at = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (reps[i].constant > worst) {
      worst = reps[i].constant;
      at = ps[i];
    }
  }
  o.require(worst <= 100.0, "scaled ratio " + fmt(worst) + " at p = " + std::to_string(at));
  o.note("max scaled ratio " + fmt(worst) + " at p = " + std::to_string(at) + " over " + std::to_string(ps.size()) +
         " primes");
}

void lemma2(Outcome& o) {
  auto params = lemma_params();
  params.R = 10.0;
  double prev = -1.0;
  std::string series;
  for (double eta : {0.05, 0.1, 0.2, 0.4}) {
    const double f = rough_sum_fraction(100'000, params, eta);
    o.require(f >= prev, "nondecreasing at eta = " + fmt(eta));
    o.require(f <= 5.0 * eta, "fraction " + fmt(f) + " > 5 eta at eta = " + fmt(eta));
    prev = f;
    series += (series.empty() ? "" : ", ") + fmt(f);
  }
  o.note("fractions " + series);
}

// Criterion 8 ---------------------------------------------------------------

void lemma3(Outcome& o) {
  for (double alpha : {0.05, 0.1, 0.2}) {
    const auto s = selberg_survivor_count(1'000'000, KTuple({0, 2}), alpha);
    o.require(s.ratio.has_value(), "ratio defined");
    const double r = s.ratio.value_or(0.0);
    o.require(r > 0.0 && r <= 10.0, "ratio " + fmt(r) + " at alpha = " + fmt(alpha));
    o.note("alpha " + fmt(alpha) + ": " + fmt(r));
  }
}

// Criterion 9 ---------------------------------------------------------------

void gallagher(Outcome& o) {
  const double g = gallagher_average(KTuple({0}), 100'000, 10'000);
  o.require(g >= 0.9 && g <= 1.1, "average " + fmt(g));
  o.note("average = " + fmt(g));
}

// Criterion 10 --------------------------------------------------------------

void polignac(Outcome& o) {
  constexpr u64 kMaxEven = 200;  // exceeds every gap below 10^6
  const auto strong = strong_polignac_census(1'000'000, kMaxEven);
  const auto weak = weak_polignac_census(1'000'000, kMaxEven);
  o.require(strong.overflow == 0, "no strong overflow");
  for (u64 e = 2; e <= kMaxEven; e += 2) {
    o.require(weak.count(e) >= strong.count(e), "weak >= strong at " + std::to_string(e));
  }
  const auto weak3 = weak_polignac_census(1000, 100);
  for (u64 e = 2; e <= 100; e += 2) o.require(weak3.count(e) >= 1, "weak(" + std::to_string(e) + ") >= 1 at 10^3");
  o.require(strong_polignac_census(100, 2).count(2) == 8, "strong(2) = 8 at 100");
  o.note("twin pairs below 10^6: strong " + std::to_string(strong.count(2)) + ", weak " + std::to_string(weak.count(2)));
}

// Criterion 11 --------------------------------------------------------------

void density(Outcome& o) {
  const auto d5 = polignac_density_lower(5, true);
  o.require(d5.numerator == "1" && d5.denominator == "75", "density(5) = 1/75");
  const auto big = polignac_density_lower(3'500'000, false);
  const double r = big.value / big.asymptote;
  o.require(r >= 1.0 / 3.0 && r <= 3.0, "ratio to e^-gamma/(k^2 log k) = " + fmt(r));
  o.note("density(5) = " + d5.numerator.value_or("?") + "/" + d5.denominator.value_or("?") + ", ratio " + fmt(r));
}

// Criterion 12 --------------------------------------------------------------

bool revalidate(const RatioWitness& w) {
  if (!oracle::is_prime_trial(w.prime)) return false;
  const u64 q = oracle::next_prime_after(w.prime);
  const u64 r = oracle::next_prime_after(q);
  return q - w.prime == w.gap && r - q == w.next_gap &&
         w.value == static_cast<double>(w.next_gap) / static_cast<double>(w.gap);
}

void ratio_extremes_check(Outcome& o) {
  const auto e = ratio_extremes(10'000'000);
  o.require(e.min_ratio.value <= 0.05, "min ratio " + fmt(e.min_ratio.value));
  o.require(e.max_ratio.value >= 20.0, "max ratio " + fmt(e.max_ratio.value));
  o.require(revalidate(e.min_ratio), "min witness re-validates");
  o.require(revalidate(e.max_ratio), "max witness re-validates");
  o.note("min " + fmt(e.min_ratio.value) + " at p = " + std::to_string(e.min_ratio.prime) + ", max " +
         fmt(e.max_ratio.value) + " at p = " + std::to_string(e.max_ratio.prime));
}

// Criterion 13 --------------------------------------------------------------

void twin_ap(Outcome& o) {
  const auto aps = twin_ap_search(2, 3, 100, true);
  o.require(std::find(aps.begin(), aps.end(), TwinAP{5, 6, 3}) != aps.end(), "5, 11, 17 present");
  o.note(std::to_string(aps.size()) + " progressions");
}

// Criterion 14 --------------------------------------------------------------

void conservation(Outcome& o) {
  const auto rep = bv_discrepancy(10'000, 50);
  o.require(rep.per_q.size() == 50, "50 moduli");
  for (const auto& r : rep.per_q) {
    o.require(r.coprime_mass + r.non_coprime_mass == rep.theta, "exact reconstruction at q = " + std::to_string(r.q));
  }
  const auto primes = oracle::primes_from(oracle::byte_sieve(10'000));
  const long double theta = oracle::theta_table(primes, 10'000, 1)[0];
  const double err = std::fabs(theta_to_double(rep.theta) - static_cast<double>(theta));
  o.require(err < 1e-9, "theta(10^4) matches the oracle sum");
  o.note("theta(10^4) = " + fmt(theta_to_double(rep.theta)));
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "sieve exactness", 1.0, sieve_exactness},
      {2, "mean normalized gap", 30.0, mean_gap},
      {3, "twin singular series", 60.0, twin_series},
      {4, "constellation counts", 20.0, constellations},
      {5, "lambda_R oracle equivalence", 10.0, lambda_oracle},
      {6, "divisible weight share", 300.0, lemma1},
      {7, "rough weight share", 300.0, lemma2},
      {8, "sieve survivor ratio", 30.0, lemma3},
      {9, "Gallagher average", 600.0, gallagher},
      {10, "Polignac censuses", 30.0, polignac},
      {11, "Polignac density", 1.0, density},
      {12, "gap ratio extremes", 30.0, ratio_extremes_check},
      {13, "twin prime progression", 1.0, twin_ap},
      {14, "theta mass conservation", 5.0, conservation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs > c.budget_seconds) {
      o.ok = false;
      o.detail = "over time budget of " + fmt(c.budget_seconds) + " s";
    }
    failures += !o.ok;
    std::printf("%s  %2d  %-30s %8.2f s  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
