#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace primelab {

// A k-tuple of distinct non-negative offsets. Stored normalized (first offset
// zero) together with the base it was shifted by, so interval placements and
// user-supplied absolute offsets survive.
class KTuple {
 public:
  // Offsets must be strictly increasing; throws ArgumentError otherwise.
  explicit KTuple(std::vector<std::uint64_t> offsets);

  // Sorts first; duplicates are still an error.
  static KTuple normalized_from(std::vector<std::uint64_t> offsets);

  // Parses the "0,2,6" exchange format. With normalize=false unsorted input is an error.
  static KTuple parse(std::string_view text, bool normalize = false);

  std::size_t size() const { return offsets_.size(); }
  std::uint64_t base() const { return base_; }
  const std::vector<std::uint64_t>& offsets() const { return offsets_; }
  std::vector<std::uint64_t> absolute() const;
  std::uint64_t absolute(std::size_t i) const { return base_ + offsets_[i]; }
  std::uint64_t diameter() const { return offsets_.back(); }

  bool contains_absolute(std::uint64_t h) const;

  // Exchange format of the absolute offsets.
  std::string to_string() const;

  // Same shape, base moved by c.
  KTuple shifted(std::uint64_t c) const;
  // Tuple with absolute offset h added; h must not already be present.
  KTuple with(std::uint64_t h) const;

  bool operator==(const KTuple&) const = default;

 private:
  KTuple() = default;
  std::uint64_t base_ = 0;
  std::vector<std::uint64_t> offsets_;
};

// Number of residue classes mod p occupied by the tuple. p must be prime.
std::uint64_t residues_covered(const KTuple& tuple, std::uint64_t p);

struct Admissibility {
  bool admissible = true;
  std::optional<std::uint64_t> witness;  // least prime p with nu_p = p
};

// Only primes p <= k can be fully covered.
Admissibility is_admissible(const KTuple& tuple);

enum class NarrowStrategy { GreedySieve, PrimesPastK, ShiftedSchinzel };

std::optional<NarrowStrategy> parse_strategy(std::string_view name);
std::string_view strategy_name(NarrowStrategy s);

// Deterministic admissible k-tuple, normalized to start at zero.
KTuple narrow_admissible_tuple(std::size_t k, NarrowStrategy strategy);

struct Interval {
  std::uint64_t start;   // M
  std::uint64_t length;  // C; the interval is [M, M + C]
  std::uint64_t end() const { return start + length; }
};

class IntervalChain {
 public:
  // Intervals must be increasing and pairwise disjoint.
  explicit IntervalChain(std::vector<Interval> intervals);
  // "10-20,100-200": inclusive endpoints.
  static IntervalChain parse(std::string_view text);

  std::size_t size() const { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  const std::vector<Interval>& intervals() const { return intervals_; }

  // M_v > C_v > 4 M_{v-1} for every v >= 2.
  bool satisfies_growth() const;

 private:
  std::vector<Interval> intervals_;
};

struct IntervalTuple {
  KTuple tuple;                      // base = first chosen offset
  bool differences_contained = false;  // h_mu - h_nu in I_mu for all nu < mu
  bool growth_condition = false;
};

// One offset per interval, taken from the upper half [M + C/2, M + C].
// Throws ArgumentError("insufficient interval length ...") when no admissible
// choice exists.
IntervalTuple tuple_in_intervals(const IntervalChain& chain);

}  // namespace primelab
