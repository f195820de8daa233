#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "primelab/config.hpp"
#include "primelab/errors.hpp"
#include "primelab/prime_engine.hpp"

using namespace primelab;
using u64 = std::uint64_t;

TEST_CASE("primes_up_to small cases") {
  CHECK(primes_up_to(10) == std::vector<u64>{2, 3, 5, 7});
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(0).empty());
  CHECK(primes_up_to(2) == std::vector<u64>{2});
  CHECK(primes_up_to(3) == std::vector<u64>{2, 3});
}

TEST_CASE("primes_up_to matches a byte sieve to 10^6") {
  const auto flags = oracle::byte_sieve(1'000'000);
  const auto expected = oracle::primes_from(flags);
  const auto got = primes_up_to(1'000'000);
  CHECK(got.size() == 78498);
  CHECK(got == expected);
}

TEST_CASE("primes_up_to agrees across the cached-table boundary") {
  const u64 edge = u64{1} << 20;
  const auto expected = oracle::primes_from(oracle::byte_sieve(edge + 5000));
  for (u64 x : {edge - 3000, edge - 1, edge, edge + 1, edge + 5000}) {
    CAPTURE(x);
    const auto got = primes_up_to(x);
    const auto end = std::upper_bound(expected.begin(), expected.end(), x);
    REQUIRE(got == std::vector<u64>(expected.begin(), end));
  }
}

TEST_CASE("every prefix up to 2000 matches trial division") {
  std::vector<u64> expected;
  for (u64 x = 0; x <= 2000; ++x) {
    if (oracle::is_prime_trial(x)) expected.push_back(x);
    REQUIRE(primes_up_to(x) == expected);
  }
}

TEST_CASE("sieve_segment examples") {
  const auto s = sieve_segment(100, 110);
  CHECK(s.primes() == std::vector<u64>{101, 103, 107, 109});
  for (u64 m = 100; m < 110; ++m) CHECK(s.is_prime(m) == oracle::is_prime_trial(m));

  const auto two = sieve_segment(2, 3);
  CHECK(two.is_prime(2));
  CHECK(two.prime_count() == 1);

  const auto big = sieve_segment(10'000'000, 10'100'000);
  u64 expected = 0;
  for (u64 m = 10'000'000; m < 10'100'000; ++m) expected += oracle::is_prime_trial(m);
  CHECK(big.prime_count() == expected);
}

TEST_CASE("sieve_segment rejects empty or low ranges") {
  CHECK_THROWS_AS(sieve_segment(10, 10), ArgumentError);
  CHECK_THROWS_AS(sieve_segment(20, 10), ArgumentError);
  CHECK_THROWS_AS(sieve_segment(0, 10), ArgumentError);
  CHECK_THROWS_AS(sieve_segment(100, 110).is_prime(99), ArgumentError);
}

TEST_CASE("segments stitch") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const u64 a = 2 + rng() % 50'000;
    const u64 b = a + 1 + rng() % 20'000;
    const u64 c = b + 1 + rng() % 20'000;
    auto left = sieve_segment(a, b).primes();
    const auto right = sieve_segment(b, c).primes();
    left.insert(left.end(), right.begin(), right.end());
    REQUIRE(left == sieve_segment(a, c).primes());
  }
}

TEST_CASE("segment size does not change results") {
  const u64 saved = segment_size();
  const auto reference = primes_up_to(300'000);
  for (u64 size : {128u, 1000u, 65536u}) {
    set_segment_size(size);
    CHECK(primes_up_to(300'000) == reference);
    CHECK(sieve_segment(123'457, 299'999).primes() == sieve_segment(123'457, 299'999).primes());
  }
  set_segment_size(saved);
  CHECK_THROWS_AS(set_segment_size(10), ArgumentError);
}

TEST_CASE("count_primes over subranges") {
  const auto s = sieve_segment(1000, 5000);
  const auto flags = oracle::byte_sieve(5000);
  for (u64 a : {1000u, 1001u, 1234u, 4000u}) {
    for (u64 b : {1000u, 2000u, 4999u, 5000u, 9000u}) {
      u64 expected = 0;
      for (u64 m = a; m < std::min<u64>(b, 5000); ++m) expected += flags[m];
      CHECK(s.count_primes(a, b) == expected);
    }
  }
}

TEST_CASE("dense tables carry spf and Moebius") {
  const auto t = dense_tables(100'000);
  REQUIRE(t.has_spf());
  REQUIRE(t.has_mobius());
  u64 squarefree = 0;
  for (u64 m = 2; m < 100'000; ++m) {
    const auto f = oracle::factor_trial(m);
    REQUIRE(t.spf(m) == f.front().first);
    REQUIRE(t.mobius(m) == oracle::mobius_trial(m));
  }
  for (u64 m = 1; m < 100'000; ++m) squarefree += t.mobius(m) != 0;
  const double density = static_cast<double>(squarefree) / 1e5;
  CHECK(density >= 0.55);
  CHECK(density <= 0.65);
  CHECK(t.mobius(1) == 1);
  CHECK_FALSE(sieve_segment(10, 20).has_spf());
  CHECK_THROWS_AS(sieve_segment(10, 20).spf(12), ArgumentError);
}

TEST_CASE("smallest_prime_factor_bounded") {
  CHECK(smallest_prime_factor_bounded(91, 10) == u64{7});
  CHECK_FALSE(smallest_prime_factor_bounded(97, 10).has_value());
  CHECK(smallest_prime_factor_bounded(16 * 31, 5) == u64{2});
  CHECK(smallest_prime_factor_bounded(97, 97) == u64{97});
  CHECK_THROWS_AS(smallest_prime_factor_bounded(1, 10), ArgumentError);
  CHECK_THROWS_AS(smallest_prime_factor_bounded(10, 1), ArgumentError);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const u64 m = 2 + rng() % 10'000'000;
    const u64 bound = 2 + rng() % 3000;
    const u64 p = oracle::least_factor(m);
    const auto got = smallest_prime_factor_bounded(m, bound);
    if (p <= bound) {
      REQUIRE(got == p);
    } else {
      REQUIRE_FALSE(got.has_value());
    }
  }
}

TEST_CASE("factorize") {
  CHECK(factorize(12) == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(1).empty());
  CHECK(factorize(999983) == std::vector<PrimePower>{{999983, 1}});
  CHECK_THROWS_AS(factorize(0), ArgumentError);
  CHECK_THROWS_AS(factorize(kFactorLimit + 1), ResourceError);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const u64 n = 1 + rng() % (u64{1} << 40);
    const auto f = factorize(n);
    u64 prod = 1;
    u64 last = 1;
    for (const auto& pp : f) {
      REQUIRE(pp.prime > last);
      REQUIRE(is_prime(pp.prime));
      for (unsigned e = 0; e < pp.exponent; ++e) prod *= pp.prime;
      last = pp.prime;
    }
    REQUIRE(prod == n);
  }
}

TEST_CASE("euler_phi") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(10) == 4);
  CHECK(euler_phi(97) == 96);
  for (u64 q = 1; q <= 2000; ++q) REQUIRE(euler_phi(q) == oracle::phi_gcd(q));
  CHECK_THROWS_AS(euler_phi(0), ArgumentError);
}

TEST_CASE("is_prime agrees with the sieve and known large values") {
  const auto flags = oracle::byte_sieve(200'000);
  for (u64 m = 0; m <= 200'000; ++m) REQUIRE(is_prime(m) == static_cast<bool>(flags[m]));
  CHECK(is_prime((u64{1} << 61) - 1));
  CHECK_FALSE(is_prime(3215031751ULL));            // strong pseudoprime to bases 2, 3, 5, 7
  CHECK_FALSE(is_prime(3825123056546413051ULL));   // strong pseudoprime to the first nine prime bases
  CHECK(is_prime(18446744073709551557ULL));        // largest 64-bit prime
}

TEST_CASE("memory budget is enforced") {
  const u64 saved = memory_budget();
  set_memory_budget(1024);
  try {
    (void)primes_up_to(100'000'000);
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("1024") != std::string::npos);
    CHECK(msg.find(std::string(kMemoryBudgetEnv)) != std::string::npos);
  }
  set_memory_budget(saved);
}

TEST_CASE("inputs above 2^62 are rejected") {
  CHECK_THROWS_AS(require_in_range(kMaxInput + 1, "x"), ArgumentError);
  CHECK_NOTHROW(require_in_range(kMaxInput, "x"));
}
