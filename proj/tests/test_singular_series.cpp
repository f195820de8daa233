#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "primelab/config.hpp"
#include "primelab/errors.hpp"
#include "primelab/singular_series.hpp"

using namespace primelab;
using u64 = std::uint64_t;

namespace {

const std::vector<u64>& small_primes() {
  static const auto p = oracle::primes_from(oracle::byte_sieve(2'000'000));
  return p;
}

std::vector<u64> random_admissible(std::mt19937_64& rng, std::size_t max_k, u64 max_diam) {
  while (true) {
    const std::size_t k = 1 + rng() % max_k;
    std::set<u64> s{0};
    while (s.size() < k) s.insert(rng() % (max_diam + 1));
    std::vector<u64> h(s.begin(), s.end());
    if (oracle::obstruction(h) == 0) return h;
  }
}

}  // namespace

TEST_CASE("singleton tuple has series exactly one") {
  for (u64 P : {2u, 10u, 1000u, 1000000u}) {
    const auto v = singular_series(KTuple({0}), P);
    CHECK(v.value == 1.0);
    CHECK(v.tail_bound == 0.0);
  }
}

TEST_CASE("inadmissible tuple gives zero") {
  const auto v = singular_series(KTuple({0, 2, 4}), 5);
  CHECK(v.value == 0.0);
  CHECK(v.tail_bound == 0.0);
  CHECK(singular_series(KTuple({0, 1}), 10).value == 0.0);
}

TEST_CASE("truncation below the diameter is rejected") {
  CHECK_THROWS_AS(singular_series(KTuple({0, 2, 6}), 5), ArgumentError);
  CHECK_THROWS_AS(singular_series(KTuple({0, 1, 2, 3}), 3), ArgumentError);
  CHECK_NOTHROW(singular_series(KTuple({0, 2, 6}), 6));
}

TEST_CASE("twin series against a direct product") {
  const auto v = singular_series(KTuple({0, 2}), 1'000'000);
  const long double direct = oracle::series_direct({0, 2}, small_primes(), 1'000'000);
  CHECK(std::fabs(static_cast<long double>(v.value) - direct) <= 1e-12L);
  CHECK(v.value == doctest::Approx(1.3203236).epsilon(1e-6));
  CHECK(v.tail_bound < 1e-5);
  CHECK(v.tail_bound > 0.0);
  const long double longer = oracle::series_direct({0, 2}, small_primes(), 2'000'000);
  CHECK(static_cast<long double>(v.value) - longer >= -1e-15L);
  CHECK(static_cast<long double>(v.value) - longer <= static_cast<long double>(v.tail_bound));
}

TEST_CASE("series matches the direct product for random tuples") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const auto h = random_admissible(rng, 6, 50);
    const auto v = singular_series(KTuple(h), 10'000);
    const long double direct = oracle::series_direct(h, small_primes(), v.truncation_prime);
    REQUIRE(std::fabs(static_cast<long double>(v.value) - direct) <= 1e-12L * direct);
  }
}

TEST_CASE("monotone truncation: later values stay within the tail bound") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const auto h = random_admissible(rng, 6, 50);
    const KTuple t(h);
    const auto coarse = singular_series(t, 1000);
    for (u64 fine : {10'000u, 100'000u}) {
      const auto f = singular_series(t, fine);
      REQUIRE(std::fabs(f.value - coarse.value) <= coarse.tail_bound);
      REQUIRE(f.tail_bound <= coarse.tail_bound);
    }
  }
}

TEST_CASE("translation invariance and positivity") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    std::set<u64> s{0};
    const std::size_t k = 1 + rng() % 5;
    while (s.size() < k) s.insert(rng() % 21);
    const KTuple t(std::vector<u64>(s.begin(), s.end()));
    const auto v = singular_series(t, 1000);
    REQUIRE((v.value > 0.0) == is_admissible(t).admissible);
    REQUIRE(singular_series(t.shifted(1 + rng() % 1000), 1000).value == v.value);
  }
}

TEST_CASE("gallagher_average, Hmax = 2") {
  // S({0,1}) vanishes (both classes mod 2) and S({0,2}) is 2 prod_{p>2} (1 - 1/(p-1)^2).
  CHECK(singular_series(KTuple({0, 1}), 1'000'000).value == 0.0);
  long double twin = 2.0L;
  for (u64 p : small_primes()) {
    if (p == 2) continue;
    if (p > 1'000'000) break;
    const long double q = static_cast<long double>(p - 1);
    twin *= 1.0L - 1.0L / (q * q);
  }
  CHECK(static_cast<double>(twin) == doctest::Approx(singular_series(KTuple({0, 2}), 1'000'000).value).epsilon(1e-12));
  const double g = gallagher_average(KTuple({0}), 2, 1'000'000);
  CHECK(g == doctest::Approx(static_cast<double>(twin / 2)).epsilon(1e-12));
  CHECK(g == doctest::Approx(0.660).epsilon(1e-3));
}

TEST_CASE("gallagher_average equals direct summation") {
  for (const auto& h : std::vector<std::vector<u64>>{{0}, {0, 2}, {0, 4, 6}, {0, 2, 6, 8}, {3, 5}}) {
    for (u64 P : {50u, 997u}) {
      const u64 hmax = 300;
      long double sum = 0.0L;
      std::vector<u64> base;
      for (u64 x : h) base.push_back(x);
      const long double denom = oracle::series_direct(base, small_primes(), P);
      for (u64 add = 1; add <= hmax; ++add) {
        if (std::find(base.begin(), base.end(), add) != base.end()) continue;
        auto ext = base;
        ext.push_back(add);
        sum += oracle::series_direct(ext, small_primes(), P) / denom;
      }
      const double expected = static_cast<double>(sum / hmax);
      REQUIRE(gallagher_average(KTuple(h), hmax, P) == doctest::Approx(expected).epsilon(1e-11));
    }
  }
}

TEST_CASE("gallagher_average tends to one") {
  CHECK(std::fabs(gallagher_average(KTuple({0}), 100'000, 100'000) - 1.0) < 0.1);
  const KTuple t({0, 4, 6});
  double last_err = 1e9;
  for (u64 hmax : {1'000u, 10'000u, 100'000u}) {
    const double err = std::fabs(gallagher_average(t, hmax, 100'000) - 1.0);
    CAPTURE(hmax);
    CHECK(err < last_err + 0.05);
    last_err = err;
  }
  CHECK(last_err < 0.15);
}

TEST_CASE("gallagher_average is independent of the thread count") {
  const KTuple t({0, 2, 6});
  set_thread_count(1);
  const double one = gallagher_average(t, 50'000, 10'000);
  set_thread_count(4);
  const double four = gallagher_average(t, 50'000, 10'000);
  set_thread_count(0);
  CHECK(one == four);
}

TEST_CASE("gallagher_average preconditions") {
  CHECK_THROWS_AS(gallagher_average(KTuple({0, 2, 4}), 10, 100), ArgumentError);
  CHECK_THROWS_AS(gallagher_average(KTuple({0}), 0, 100), ArgumentError);
}
