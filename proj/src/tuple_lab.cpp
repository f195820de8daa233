#include "primelab/tuple_lab.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "primelab/config.hpp"
#include "primelab/errors.hpp"
#include "primelab/prime_engine.hpp"

namespace primelab {
namespace {

using u64 = std::uint64_t;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

u64 parse_u64(std::string_view tok, std::string_view what) {
  tok = trim(tok);
  u64 v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ArgumentError("malformed " + std::string(what) + ": '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

std::vector<u64> primes_through(u64 k) {
  std::vector<u64> out;
  if (k < 2) return out;
  const auto base = base_primes(k);
  for (std::uint32_t p : *base) {
    if (p > k) break;
    out.push_back(p);
  }
  return out;
}

KTuple greedy_sieve(std::size_t k) {
  const auto small = primes_through(k);
  for (u64 x = std::max<u64>(2 * k, 8);; x *= 2) {
    std::vector<u64> survivors(x + 1);
    for (u64 m = 0; m <= x; ++m) survivors[m] = m;
    for (u64 p : small) {
      std::vector<u64> counts(p, 0);
      for (u64 m : survivors) ++counts[m % p];
      const u64 drop = static_cast<u64>(std::min_element(counts.begin(), counts.end()) - counts.begin());
      std::erase_if(survivors, [&](u64 m) { return m % p == drop; });
    }
    if (survivors.size() >= k) {
      survivors.resize(k);
      const u64 first = survivors.front();
      for (auto& h : survivors) h -= first;
      return KTuple(std::move(survivors));
    }
  }
}

KTuple primes_past_k(std::size_t k) {
  std::vector<u64> offsets;
  u64 p = 2 * static_cast<u64>(k) + 1;
  while (offsets.size() < k) {
    if (is_prime(p)) offsets.push_back(p);
    ++p;
  }
  const u64 first = offsets.front();
  for (auto& h : offsets) h -= first;
  return KTuple(std::move(offsets));
}

// Removes 1 mod p for p <= sqrt(k) and 0 mod p for sqrt(k) < p <= k, then
// picks the narrowest window of k consecutive survivors starting below `shifts`.
KTuple shifted_schinzel(std::size_t k) {
  const auto small = primes_through(k);
  const u64 y = isqrt(k);
  const u64 shifts = std::max<u64>(64, 4 * static_cast<u64>(k));
  for (u64 x = shifts + 4 * static_cast<u64>(k) + 64;; x *= 2) {
    std::vector<u64> survivors;
    for (u64 m = 0; m <= x; ++m) {
      bool keep = true;
      for (u64 p : small) {
        if (m % p == (p <= y ? 1u : 0u)) {
          keep = false;
          break;
        }
      }
      if (keep) survivors.push_back(m);
    }
    std::size_t starts = 0;
    while (starts < survivors.size() && survivors[starts] < shifts) ++starts;
    if (starts == 0 || survivors.size() < starts - 1 + k) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < starts; ++i) {
      if (survivors[i + k - 1] - survivors[i] < survivors[best + k - 1] - survivors[best]) best = i;
    }
    std::vector<u64> offsets(survivors.begin() + static_cast<std::ptrdiff_t>(best),
                             survivors.begin() + static_cast<std::ptrdiff_t>(best + k));
    const u64 first = offsets.front();
    for (auto& h : offsets) h -= first;
    return KTuple(std::move(offsets));
  }
}

}  // namespace

KTuple::KTuple(std::vector<std::uint64_t> offsets) {
  if (offsets.empty()) throw ArgumentError("a tuple needs at least one offset");
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    if (offsets[i] <= offsets[i - 1]) {
      throw ArgumentError("tuple offsets must be distinct and strictly ascending");
    }
  }
  require_in_range(offsets.back(), "tuple offset");
  base_ = offsets.front();
  for (auto& h : offsets) h -= base_;
  offsets_ = std::move(offsets);
}

KTuple KTuple::normalized_from(std::vector<std::uint64_t> offsets) {
  std::sort(offsets.begin(), offsets.end());
  return KTuple(std::move(offsets));
}

KTuple KTuple::parse(std::string_view text, bool normalize) {
  text = trim(text);
  if (text.empty()) throw ArgumentError("empty tuple");
  std::vector<u64> offsets;
  for (auto tok : split(text, ',')) offsets.push_back(parse_u64(tok, "tuple offset"));
  if (normalize) return normalized_from(std::move(offsets));
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    if (offsets[i] <= offsets[i - 1]) {
      throw ArgumentError("tuple offsets must be distinct and strictly ascending: '" + std::string(text) +
                          "' (pass --normalize to sort)");
    }
  }
  return KTuple(std::move(offsets));
}

std::vector<std::uint64_t> KTuple::absolute() const {
  std::vector<u64> out(offsets_);
  for (auto& h : out) h += base_;
  return out;
}

bool KTuple::contains_absolute(std::uint64_t h) const {
  return h >= base_ && std::binary_search(offsets_.begin(), offsets_.end(), h - base_);
}

std::string KTuple::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    if (i != 0) out += ',';
    out += std::to_string(base_ + offsets_[i]);
  }
  return out;
}

KTuple KTuple::shifted(std::uint64_t c) const {
  require_in_range(base_ + c + diameter(), "shifted tuple offset");
  KTuple t = *this;
  t.base_ += c;
  return t;
}

KTuple KTuple::with(std::uint64_t h) const {
  if (contains_absolute(h)) throw ArgumentError("offset " + std::to_string(h) + " already in tuple");
  auto abs = absolute();
  abs.insert(std::upper_bound(abs.begin(), abs.end(), h), h);
  return KTuple(std::move(abs));
}

std::uint64_t residues_covered(const KTuple& tuple, std::uint64_t p) {
  if (!is_prime(p)) throw ArgumentError("residues_covered: " + std::to_string(p) + " is not prime");
  if (p > tuple.diameter()) return tuple.size();
  std::vector<char> seen(p, 0);
  u64 count = 0;
  for (u64 h : tuple.offsets()) {
    char& s = seen[h % p];
    if (s == 0) {
      s = 1;
      ++count;
    }
  }
  return count;
}

Admissibility is_admissible(const KTuple& tuple) {
  for (u64 p : primes_through(tuple.size())) {
    if (residues_covered(tuple, p) == p) return {false, p};
  }
  return {};
}

std::optional<NarrowStrategy> parse_strategy(std::string_view name) {
  if (name == "greedy-sieve") return NarrowStrategy::GreedySieve;
  if (name == "primes-past-k") return NarrowStrategy::PrimesPastK;
  if (name == "shifted-schinzel") return NarrowStrategy::ShiftedSchinzel;
  return std::nullopt;
}

std::string_view strategy_name(NarrowStrategy s) {
  switch (s) {
    case NarrowStrategy::GreedySieve: return "greedy-sieve";
    case NarrowStrategy::PrimesPastK: return "primes-past-k";
    case NarrowStrategy::ShiftedSchinzel: return "shifted-schinzel";
  }
  return "unknown";
}

KTuple narrow_admissible_tuple(std::size_t k, NarrowStrategy strategy) {
  if (k == 0) throw ArgumentError("narrow_admissible_tuple requires k >= 1");
  if (k > 100000) throw ResourceError("narrow_admissible_tuple supports k <= 100000");
  switch (strategy) {
    case NarrowStrategy::GreedySieve: return greedy_sieve(k);
    case NarrowStrategy::PrimesPastK: return primes_past_k(k);
    case NarrowStrategy::ShiftedSchinzel: return shifted_schinzel(k);
  }
  throw ArgumentError("unknown strategy");
}

IntervalChain::IntervalChain(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw ArgumentError("interval chain is empty");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (intervals_[i].length > kMaxInput || intervals_[i].start > kMaxInput - intervals_[i].length) {
      throw ArgumentError("interval exceeds the supported range");
    }
    if (i > 0 && intervals_[i].start <= intervals_[i - 1].end()) {
      throw ArgumentError("intervals must be increasing and pairwise disjoint");
    }
  }
}

IntervalChain IntervalChain::parse(std::string_view text) {
  std::vector<Interval> out;
  for (auto tok : split(trim(text), ',')) {
    const auto parts = split(trim(tok), '-');
    if (parts.size() != 2) throw ArgumentError("malformed interval '" + std::string(tok) + "', expected lo-hi");
    const u64 lo = parse_u64(parts[0], "interval start");
    const u64 hi = parse_u64(parts[1], "interval end");
    if (hi < lo) throw ArgumentError("interval end below start in '" + std::string(tok) + "'");
    out.push_back({lo, hi - lo});
  }
  return IntervalChain(std::move(out));
}

bool IntervalChain::satisfies_growth() const {
  for (std::size_t v = 1; v < intervals_.size(); ++v) {
    const auto& cur = intervals_[v];
    const u64 prev = intervals_[v - 1].start;
    if (!(cur.start > cur.length)) return false;
    if (prev > (kMaxInput / 4) || !(cur.length > 4 * prev)) return false;
  }
  return true;
}

IntervalTuple tuple_in_intervals(const IntervalChain& chain) {
  const std::size_t k = chain.size();
  const auto small = primes_through(k);
  const u64 margin = 2 * static_cast<u64>(k) * small.size();
  for (std::size_t v = 0; v < k; ++v) {
    if (chain[v].length < margin) {
      throw ArgumentError("insufficient interval length: interval " + std::to_string(v + 1) + " has length " +
                          std::to_string(chain[v].length) + ", need at least " + std::to_string(margin));
    }
  }

  // covered[i][r]: residue r mod small[i] already used.
  std::vector<std::vector<char>> covered(small.size());
  std::vector<u64> used(small.size(), 0);
  for (std::size_t i = 0; i < small.size(); ++i) covered[i].assign(small[i], 0);

  auto compatible = [&](u64 h) {
    for (std::size_t i = 0; i < small.size(); ++i) {
      if (!covered[i][h % small[i]] && used[i] + 1 == small[i]) return false;
    }
    return true;
  };
  auto place = [&](u64 h, int sign) {
    for (std::size_t i = 0; i < small.size(); ++i) {
      char& c = covered[i][h % small[i]];
      if (sign > 0) {
        if (c++ == 0) ++used[i];
      } else {
        if (--c == 0) --used[i];
      }
    }
  };
  auto upper_start = [&](std::size_t v) { return chain[v].start + (chain[v].length + 1) / 2; };
  auto scan = [&](std::size_t v, u64 from) -> std::optional<u64> {
    for (u64 h = from; h <= chain[v].end(); ++h) {
      if (compatible(h)) return h;
    }
    return std::nullopt;
  };

  std::vector<u64> chosen;
  std::vector<char> backtracked(k, 0);
  while (chosen.size() < k) {
    const std::size_t v = chosen.size();
    if (auto h = scan(v, upper_start(v))) {
      place(*h, +1);
      chosen.push_back(*h);
      continue;
    }
    if (v == 0 || backtracked[v - 1]) {
      throw ArgumentError("insufficient interval length: no admissible offset in the upper half of interval " +
                          std::to_string(v + 1));
    }
    backtracked[v - 1] = 1;
    const u64 prev = chosen.back();
    chosen.pop_back();
    place(prev, -1);
    auto alt = scan(v - 1, prev + 1);
    if (!alt) {
      throw ArgumentError("insufficient interval length: backtracking exhausted interval " + std::to_string(v));
    }
    place(*alt, +1);
    chosen.push_back(*alt);
  }

  IntervalTuple out{KTuple(chosen), true, chain.satisfies_growth()};
  for (std::size_t mu = 1; mu < k && out.differences_contained; ++mu) {
    for (std::size_t nu = 0; nu < mu; ++nu) {
      const u64 diff = chosen[mu] - chosen[nu];
      if (diff < chain[mu].start || diff > chain[mu].end()) {
        out.differences_contained = false;
        break;
      }
    }
  }
  return out;
}

}  // namespace primelab
