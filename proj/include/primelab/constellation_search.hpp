#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "primelab/tuple_lab.hpp"

namespace primelab {

struct ConstellationCount {
  std::uint64_t count = 0;          // #{1 <= n <= x : n + h_i prime for all i}
  double series = 0.0;              // S(H)
  double hl_prediction = 0.0;       // S(H) x / log^k x
  double integral_prediction = 0.0; // S(H) * integral_2^x dt / log^k t
};

ConstellationCount count_constellations(const KTuple& tuple, std::uint64_t x);

// integral_2^x dt / log^k t
double log_power_integral(double x, unsigned k);

struct DHLWitness {
  std::uint64_t n = 0;
  std::uint64_t prime_mask = 0;  // bit i-1 set iff n + h_i is prime
  std::optional<std::pair<unsigned, unsigned>> consecutive_pair;  // 1-based (i, j)
  bool almost_prime = false;     // P-(P_H(n)) > n^c1
  bool operator==(const DHLWitness&) const = default;
};

// Every n in [N, 2N) with at least two primes among n + h_i. k <= 64, 0 < c1 < 1/2.
void for_each_dhl_witness(const KTuple& tuple, std::uint64_t N, double c1,
                          const std::function<void(const DHLWitness&)>& fn);
std::vector<DHLWitness> dhl_witnesses(const KTuple& tuple, std::uint64_t N, double c1);

// |B(i, j, N)| restricted to n where n + h_i and n + h_j are consecutive primes.
// Indices are 1-based, 1 <= i < j <= k.
std::uint64_t consecutive_pair_count(const KTuple& tuple, std::size_t i, std::size_t j, std::uint64_t N, double c1);

struct TwinAP {
  std::uint64_t start = 0;
  std::uint64_t step = 0;
  unsigned length = 0;
  bool operator==(const TwinAP&) const = default;
};

// All L-term progressions q = start + j step <= limit with q and q + d prime
// (and q + d the next prime after q when require_consecutive). Ordered by (start, step).
std::vector<TwinAP> twin_ap_search(std::uint64_t d, unsigned L, std::uint64_t limit, bool require_consecutive);

// Sums of log p are accumulated in fixed point with this many fractional bits,
// so residue-class masses add up exactly.
inline constexpr int kThetaFractionBits = 50;
using ThetaRaw = unsigned __int128;
double theta_to_double(ThetaRaw raw);

struct ResidueDiscrepancy {
  std::uint64_t q = 0;
  std::uint64_t worst_residue = 0;
  double discrepancy = 0.0;     // max_a |theta(X; q, a) - X / phi(q)|
  ThetaRaw coprime_mass = 0;    // sum over gcd(a, q) = 1 of theta(X; q, a)
  ThetaRaw non_coprime_mass = 0;  // sum of log p over primes p | q
};

struct DiscrepancyReport {
  std::uint64_t X = 0;
  std::uint64_t Q = 0;
  std::vector<ResidueDiscrepancy> per_q;
  double total = 0.0;
  double theta_exponent = 0.0;  // log Q / log X
  ThetaRaw theta = 0;           // theta(X), summed independently of the residue tables
};

// X >= 100, 1 <= Q <= X.
DiscrepancyReport bv_discrepancy(std::uint64_t X, std::uint64_t Q);

// theta(X; q, a) for a = 0..q-1.
std::vector<double> theta_residues(std::uint64_t X, std::uint64_t q);

}  // namespace primelab
