#include "primelab/constellation_search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "parallel.hpp"
#include "primelab/config.hpp"
#include "primelab/errors.hpp"
#include "primelab/prime_engine.hpp"
#include "primelab/singular_series.hpp"

namespace primelab {
namespace {

using u64 = std::uint64_t;

void require_c1(double c1) {
  if (!(c1 > 0.0 && c1 < 0.5)) throw ArgumentError("c1 must lie in (0, 1/2)");
}

// P-(P_H(n)) > n^c1, ignoring components equal to 1.
bool almost_prime(u64 n, const std::vector<u64>& abs, double c1) {
  const u64 b = static_cast<u64>(std::floor(std::pow(static_cast<double>(n), c1)));
  if (b < 2) return true;
  for (u64 h : abs) {
    if (n + h >= 2 && smallest_prime_factor_bounded(n + h, b)) return false;
  }
  return true;
}

ThetaRaw raw_log(u64 p) {
  return static_cast<ThetaRaw>(std::llround(std::ldexp(std::log(static_cast<double>(p)), kThetaFractionBits)));
}

}  // namespace

double theta_to_double(ThetaRaw raw) {
  return std::ldexp(static_cast<double>(raw), -kThetaFractionBits);
}

double log_power_integral(double x, unsigned k) {
  if (!(x > 2.0)) return 0.0;
  // u = log t: integral of e^u / u^k over [log 2, log x], composite Simpson.
  const double a = std::log(2.0);
  const double b = std::log(x);
  constexpr int kPanels = 1 << 16;
  const double h = (b - a) / kPanels;
  auto f = [k](double u) { return std::exp(u) / std::pow(u, static_cast<int>(k)); };
  double s = f(a) + f(b);
  for (int i = 1; i < kPanels; ++i) s += f(a + i * h) * ((i & 1) ? 4.0 : 2.0);
  return s * h / 3.0;
}

ConstellationCount count_constellations(const KTuple& tuple, std::uint64_t x) {
  if (x < 2) throw ArgumentError("count_constellations requires x >= 2");
  const auto abs = tuple.absolute();
  require_in_range(x + abs.back(), "x + max(H)");
  const auto table = sieve_segment(2, x + abs.back() + 1);
  ConstellationCount out;
  table.for_each_prime([&](u64 p) {
    if (p < abs[0] + 1) return;
    const u64 n = p - abs[0];
    if (n > x) return;
    for (std::size_t i = 1; i < abs.size(); ++i) {
      if (!table.is_prime(n + abs[i])) return;
    }
    ++out.count;
  });
  out.series = singular_series(tuple, std::max(kDefaultTruncation, tuple.diameter())).value;
  const double xd = static_cast<double>(x);
  const auto k = static_cast<unsigned>(tuple.size());
  out.hl_prediction = out.series * xd / std::pow(std::log(xd), static_cast<int>(k));
  out.integral_prediction = out.series * log_power_integral(xd, k);
  return out;
}

void for_each_dhl_witness(const KTuple& tuple, std::uint64_t N, double c1,
                          const std::function<void(const DHLWitness&)>& fn) {
  require_c1(c1);
  if (N == 0) throw ArgumentError("dhl_witnesses requires N >= 1");
  if (tuple.size() > 64) throw ArgumentError("dhl_witnesses supports k <= 64");
  const auto abs = tuple.absolute();
  require_in_range(2 * N + abs.back(), "2N + max(H)");
  const u64 lo = std::max<u64>(2, N + abs[0]);
  const auto table = sieve_segment(lo, 2 * N + abs.back());
  auto prime_at = [&](u64 m) { return m >= lo && table.is_prime(m); };

  std::vector<unsigned> marked;
  for (u64 n = N; n < 2 * N; ++n) {
    DHLWitness w;
    w.n = n;
    marked.clear();
    for (std::size_t i = 0; i < abs.size(); ++i) {
      if (prime_at(n + abs[i])) {
        w.prime_mask |= u64{1} << i;
        marked.push_back(static_cast<unsigned>(i));
      }
    }
    if (marked.size() < 2) continue;
    for (std::size_t t = 0; t + 1 < marked.size(); ++t) {
      const u64 a = n + abs[marked[t]];
      const u64 b = n + abs[marked[t + 1]];
      if (table.count_primes(a + 1, b) == 0) {
        w.consecutive_pair = std::make_pair(marked[t] + 1, marked[t + 1] + 1);
        break;
      }
    }
    w.almost_prime = almost_prime(n, abs, c1);
    fn(w);
  }
}

std::vector<DHLWitness> dhl_witnesses(const KTuple& tuple, std::uint64_t N, double c1) {
  std::vector<DHLWitness> out;
  for_each_dhl_witness(tuple, N, c1, [&](const DHLWitness& w) { out.push_back(w); });
  return out;
}

std::uint64_t consecutive_pair_count(const KTuple& tuple, std::size_t i, std::size_t j, std::uint64_t N,
                                     double c1) {
  if (!(i >= 1 && i < j && j <= tuple.size())) {
    throw ArgumentError("indices must satisfy 1 <= i < j <= k (k = " + std::to_string(tuple.size()) + ")");
  }
  require_c1(c1);
  if (N == 0) return 0;
  const auto abs = tuple.absolute();
  require_in_range(N + abs.back(), "N + max(H)");
  const auto table = sieve_segment(2, N + abs.back() + 1);
  const u64 hi_off = abs[i - 1];
  const u64 hj_off = abs[j - 1];
  u64 count = 0;
  for (u64 n = 1; n <= N; ++n) {
    const u64 a = n + hi_off;
    const u64 b = n + hj_off;
    if (a < 2 || !table.is_prime(a) || !table.is_prime(b)) continue;
    if (table.count_primes(a + 1, b) != 0) continue;
    if (!almost_prime(n, abs, c1)) continue;
    ++count;
  }
  return count;
}

std::vector<TwinAP> twin_ap_search(std::uint64_t d, unsigned L, std::uint64_t limit, bool require_consecutive) {
  if (d < 2 || d % 2 != 0) throw ArgumentError("d must be an even number >= 2");
  if (L < 3) throw ArgumentError("L must be at least 3");
  require_in_range(limit + d, "limit + d");
  std::vector<TwinAP> out;
  if (limit < 2) return out;
  const auto table = sieve_segment(2, limit + d + 1);
  std::vector<u64> qualified;
  std::vector<char> member(limit + 1, 0);
  table.for_each_prime([&](u64 q) {
    if (q > limit || !table.is_prime(q + d)) return;
    if (require_consecutive && table.count_primes(q + 1, q + d) != 0) return;
    qualified.push_back(q);
    member[q] = 1;
  });
  for (std::size_t ia = 0; ia < qualified.size(); ++ia) {
    const u64 a = qualified[ia];
    for (std::size_t ib = ia + 1; ib < qualified.size(); ++ib) {
      const u64 m = qualified[ib] - a;
      if ((limit - a) / (L - 1) < m) break;
      bool ok = true;
      for (unsigned t = 2; t < L && ok; ++t) ok = member[a + t * m] != 0;
      if (ok) out.push_back({a, m, L});
    }
  }
  return out;
}

DiscrepancyReport bv_discrepancy(std::uint64_t X, std::uint64_t Q) {
  if (X < 100) throw ArgumentError("bv_discrepancy requires X >= 100");
  if (Q < 1 || Q > X) throw ArgumentError("bv_discrepancy requires 1 <= Q <= X");
  require_in_range(X, "X");
  const double accum_bytes = 8.0 * static_cast<double>(Q) * static_cast<double>(Q + 1);
  if (accum_bytes > static_cast<double>(memory_budget())) {
    throw ResourceError("bv_discrepancy: " + std::to_string(static_cast<u64>(accum_bytes)) +
                        " bytes of residue accumulators exceed the memory budget of " +
                        std::to_string(memory_budget()) + " bytes; use a smaller Q");
  }
  const auto primes = primes_up_to(X);
  std::vector<ThetaRaw> logs(primes.size());
  DiscrepancyReport rep;
  rep.X = X;
  rep.Q = Q;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    logs[i] = raw_log(primes[i]);
    rep.theta += logs[i];
  }
  rep.per_q.resize(Q);
  const double xd = static_cast<double>(X);
  detail::parallel_for_blocks(Q, [&](std::size_t idx) {
    const u64 q = idx + 1;
    std::vector<ThetaRaw> acc(q, 0);
    for (std::size_t i = 0; i < primes.size(); ++i) acc[primes[i] % q] += logs[i];
    ResidueDiscrepancy r;
    r.q = q;
    const double main_term = xd / static_cast<double>(euler_phi(q));
    r.discrepancy = -1.0;
    for (u64 a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      r.coprime_mass += acc[a];
      const double dev = std::fabs(theta_to_double(acc[a]) - main_term);
      if (dev > r.discrepancy) {
        r.discrepancy = dev;
        r.worst_residue = a;
      }
    }
    for (const auto& f : factorize(q)) r.non_coprime_mass += raw_log(f.prime);
    rep.per_q[idx] = r;
  });
  for (const auto& r : rep.per_q) rep.total += r.discrepancy;
  rep.theta_exponent = std::log(static_cast<double>(Q)) / std::log(xd);
  return rep;
}

std::vector<double> theta_residues(std::uint64_t X, std::uint64_t q) {
  if (q == 0) throw ArgumentError("theta_residues requires q >= 1");
  std::vector<ThetaRaw> acc(q, 0);
  for_each_prime(2, X + 1, [&](u64 p) { acc[p % q] += raw_log(p); });
  std::vector<double> out(q);
  for (u64 a = 0; a < q; ++a) out[a] = theta_to_double(acc[a]);
  return out;
}

}  // namespace primelab
