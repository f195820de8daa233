#include "primelab/primelab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "primelab/config.hpp"
#include "primelab/constellation_search.hpp"
#include "primelab/errors.hpp"
#include "primelab/gap_observatory.hpp"
#include "primelab/gpy_weights.hpp"
#include "primelab/prime_engine.hpp"
#include "primelab/singular_series.hpp"
#include "primelab/tuple_lab.hpp"

struct pl_u64_array {
  std::vector<std::uint64_t> v;
};
struct pl_sieve {
  primelab::SieveTables t;
};
struct pl_tuple {
  primelab::KTuple t;
};
struct pl_test_function {
  primelab::TestFunction f;
};
struct pl_histogram {
  primelab::Histogram h;
};
struct pl_census {
  primelab::PolignacCensus c;
};
struct pl_discrepancy {
  primelab::DiscrepancyReport r;
};

namespace {

thread_local std::string last_error;

// Thrown from inside a streaming callback wrapper when the C callback asks to stop.
struct StopStream {};

pl_status fail(pl_status s, const char* what) {
  last_error = what;
  return s;
}

template <class Fn>
pl_status guarded(Fn&& fn) {
  try {
    fn();
    return PL_OK;
  } catch (const StopStream&) {
    return PL_OK;
  } catch (const primelab::DegenerateInputError& e) {
    return fail(PL_ERR_DEGENERATE, e.what());
  } catch (const primelab::ArgumentError& e) {
    return fail(PL_ERR_ARGUMENT, e.what());
  } catch (const primelab::ResourceError& e) {
    return fail(PL_ERR_RESOURCE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PL_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(PL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PL_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) throw primelab::ArgumentError(std::string(name) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

primelab::WeightParams to_params(const pl_weight_params* p) {
  need(p, "params");
  need(p->tuple, "params->tuple");
  primelab::WeightParams w{p->tuple->t, p->ell, p->R, std::nullopt};
  if (p->has_window) w.window = primelab::DivisorWindow{p->window_min, p->window_max};
  return w;
}

pl_ratio_report to_c(const primelab::RatioReport& r) {
  return {r.sum, r.restricted_sum, r.ratio, r.bound, r.constant};
}

pl_gap_record to_c(const primelab::GapRecord& g) { return {g.index, g.prime, g.gap}; }

pl_ratio_witness to_c(const primelab::RatioWitness& w) {
  return {w.index, w.prime, w.gap, w.next_gap, w.value};
}

pl_residue_discrepancy to_c(const primelab::ResidueDiscrepancy& r, primelab::ThetaRaw theta) {
  return {r.q,
          r.worst_residue,
          r.discrepancy,
          primelab::theta_to_double(r.coprime_mass),
          primelab::theta_to_double(r.non_coprime_mass),
          r.coprime_mass + r.non_coprime_mass == theta ? 1 : 0};
}

}  // namespace

extern "C" {

const char* pl_version(void) { return PRIMELAB_VERSION; }
const char* pl_last_error(void) { return last_error.c_str(); }

const char* pl_status_name(pl_status status) {
  switch (status) {
    case PL_OK: return "ok";
    case PL_ERR_ARGUMENT: return "argument";
    case PL_ERR_DEGENERATE: return "degenerate";
    case PL_ERR_RESOURCE: return "resource";
    case PL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void pl_free_string(char* s) { std::free(s); }

void pl_set_memory_budget(uint64_t bytes) { primelab::set_memory_budget(bytes); }
uint64_t pl_memory_budget(void) { return primelab::memory_budget(); }
void pl_set_threads(unsigned n) { primelab::set_thread_count(n); }
pl_status pl_set_segment_size(uint64_t entries) {
  return guarded([&] { primelab::set_segment_size(entries); });
}

// ---- prime engine

size_t pl_u64_array_size(const pl_u64_array* a) { return a ? a->v.size() : 0; }
const uint64_t* pl_u64_array_data(const pl_u64_array* a) { return a ? a->v.data() : nullptr; }
void pl_u64_array_free(pl_u64_array* a) { delete a; }

pl_status pl_primes_up_to(uint64_t x, pl_u64_array** out) {
  return guarded([&] {
    need(out, "out");
    *out = new pl_u64_array{primelab::primes_up_to(x)};
  });
}

pl_status pl_sieve_segment(uint64_t lo, uint64_t hi, pl_sieve** out) {
  return guarded([&] {
    need(out, "out");
    *out = new pl_sieve{primelab::sieve_segment(lo, hi)};
  });
}

pl_status pl_dense_tables(uint64_t hi, pl_sieve** out) {
  return guarded([&] {
    need(out, "out");
    *out = new pl_sieve{primelab::dense_tables(hi, true)};
  });
}

uint64_t pl_sieve_lo(const pl_sieve* s) { return s ? s->t.lo() : 0; }
uint64_t pl_sieve_hi(const pl_sieve* s) { return s ? s->t.hi() : 0; }
uint64_t pl_sieve_count(const pl_sieve* s) { return s ? s->t.prime_count() : 0; }

pl_status pl_sieve_is_prime(const pl_sieve* s, uint64_t m, int* out) {
  return guarded([&] {
    need(s, "sieve");
    need(out, "out");
    *out = s->t.is_prime(m) ? 1 : 0;
  });
}

pl_status pl_sieve_primes(const pl_sieve* s, pl_u64_array** out) {
  return guarded([&] {
    need(s, "sieve");
    need(out, "out");
    *out = new pl_u64_array{s->t.primes()};
  });
}

pl_status pl_sieve_spf(const pl_sieve* s, uint64_t m, uint64_t* out) {
  return guarded([&] {
    need(s, "sieve");
    need(out, "out");
    *out = s->t.spf(m);
  });
}

pl_status pl_sieve_mobius(const pl_sieve* s, uint64_t m, int* out) {
  return guarded([&] {
    need(s, "sieve");
    need(out, "out");
    *out = s->t.mobius(m);
  });
}

void pl_sieve_free(pl_sieve* s) { delete s; }

int pl_is_prime(uint64_t n) { return primelab::is_prime(n) ? 1 : 0; }

pl_status pl_smallest_prime_factor_bounded(uint64_t m, uint64_t bound, uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = primelab::smallest_prime_factor_bounded(m, bound).value_or(0);
  });
}

pl_status pl_factorize(uint64_t n, pl_prime_power* out, size_t capacity, size_t* count) {
  return guarded([&] {
    need(count, "count");
    const auto f = primelab::factorize(n);
    *count = f.size();
    if (f.size() > capacity) throw primelab::ArgumentError("factor buffer too small");
    if (!f.empty()) need(out, "out");
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = {f[i].prime, f[i].exponent};
  });
}

pl_status pl_euler_phi(uint64_t q, uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = primelab::euler_phi(q);
  });
}

// ---- tuples

pl_status pl_tuple_parse(const char* text, int normalize, pl_tuple** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new pl_tuple{primelab::KTuple::parse(text, normalize != 0)};
  });
}

pl_status pl_tuple_from_offsets(const uint64_t* offsets, size_t k, pl_tuple** out) {
  return guarded([&] {
    need(out, "out");
    if (k > 0) need(offsets, "offsets");
    *out = new pl_tuple{primelab::KTuple(std::vector<std::uint64_t>(offsets, offsets + k))};
  });
}

size_t pl_tuple_size(const pl_tuple* t) { return t ? t->t.size() : 0; }
uint64_t pl_tuple_base(const pl_tuple* t) { return t ? t->t.base() : 0; }
uint64_t pl_tuple_diameter(const pl_tuple* t) { return t ? t->t.diameter() : 0; }
uint64_t pl_tuple_offset(const pl_tuple* t, size_t i) {
  return t && i < t->t.size() ? t->t.absolute(i) : 0;
}

pl_status pl_tuple_to_string(const pl_tuple* t, char** out) {
  return guarded([&] {
    need(t, "tuple");
    need(out, "out");
    *out = dup_string(t->t.to_string());
  });
}

void pl_tuple_free(pl_tuple* t) { delete t; }

pl_status pl_residues_covered(const pl_tuple* t, uint64_t p, uint64_t* out) {
  return guarded([&] {
    need(t, "tuple");
    need(out, "out");
    *out = primelab::residues_covered(t->t, p);
  });
}

pl_status pl_is_admissible(const pl_tuple* t, int* admissible, uint64_t* witness) {
  return guarded([&] {
    need(t, "tuple");
    need(admissible, "admissible");
    const auto a = primelab::is_admissible(t->t);
    *admissible = a.admissible ? 1 : 0;
    if (witness) *witness = a.witness.value_or(0);
  });
}

pl_status pl_strategy_parse(const char* name, pl_strategy* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    const auto s = primelab::parse_strategy(name);
    if (!s) {
      throw primelab::ArgumentError(std::string("unknown strategy '") + name +
                                    "' (expected greedy-sieve, primes-past-k or shifted-schinzel)");
    }
    *out = static_cast<pl_strategy>(*s);
  });
}

pl_status pl_narrow_admissible_tuple(size_t k, pl_strategy strategy, pl_tuple** out) {
  return guarded([&] {
    need(out, "out");
    if (strategy < PL_STRATEGY_GREEDY_SIEVE || strategy > PL_STRATEGY_SHIFTED_SCHINZEL) {
      throw primelab::ArgumentError("unknown strategy");
    }
    *out = new pl_tuple{primelab::narrow_admissible_tuple(k, static_cast<primelab::NarrowStrategy>(strategy))};
  });
}

pl_status pl_intervals_parse(const char* text, pl_interval* out, size_t capacity, size_t* count) {
  return guarded([&] {
    need(text, "text");
    need(count, "count");
    const auto chain = primelab::IntervalChain::parse(text);
    *count = chain.size();
    if (chain.size() > capacity) throw primelab::ArgumentError("interval buffer too small");
    need(out, "out");
    for (std::size_t i = 0; i < chain.size(); ++i) out[i] = {chain[i].start, chain[i].length};
  });
}

pl_status pl_tuple_in_intervals(const pl_interval* chain, size_t n, pl_tuple** out, int* differences_contained,
                                int* growth_condition) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(chain, "chain");
    std::vector<primelab::Interval> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back({chain[i].start, chain[i].length});
    auto r = primelab::tuple_in_intervals(primelab::IntervalChain(std::move(v)));
    if (differences_contained) *differences_contained = r.differences_contained ? 1 : 0;
    if (growth_condition) *growth_condition = r.growth_condition ? 1 : 0;
    *out = new pl_tuple{std::move(r.tuple)};
  });
}

// ---- singular series

pl_status pl_singular_series(const pl_tuple* t, uint64_t P, pl_series_value* out) {
  return guarded([&] {
    need(t, "tuple");
    need(out, "out");
    const auto s = primelab::singular_series(t->t, P);
    *out = {s.value, s.tail_bound, s.truncation_prime};
  });
}

pl_status pl_gallagher_average(const pl_tuple* t, uint64_t hmax, uint64_t P, double* out) {
  return guarded([&] {
    need(t, "tuple");
    need(out, "out");
    *out = primelab::gallagher_average(t->t, hmax, P);
  });
}

// ---- sieve weights

pl_status pl_lambda_R(uint64_t n, const pl_weight_params* params, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = primelab::lambda_R(n, to_params(params));
  });
}

pl_status pl_weighted_sum(uint64_t N, const pl_weight_params* params, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = primelab::weighted_sum(N, to_params(params));
  });
}

pl_status pl_lemma1_ratio(uint64_t N, const pl_weight_params* params, uint64_t p, pl_ratio_report* out) {
  return guarded([&] {
    need(out, "out");
    *out = to_c(primelab::lemma1_ratio(N, to_params(params), p));
  });
}

pl_status pl_lemma1_sweep(uint64_t N, const pl_weight_params* params, const uint64_t* primes, size_t count,
                          pl_ratio_report* out) {
  return guarded([&] {
    if (count > 0) {
      need(primes, "primes");
      need(out, "out");
    }
    const auto r = primelab::lemma1_sweep(N, to_params(params), std::span<const std::uint64_t>(primes, count));
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = to_c(r[i]);
  });
}

pl_status pl_rough_sum_fraction(uint64_t N, const pl_weight_params* params, double eta, pl_ratio_report* out) {
  return guarded([&] {
    need(out, "out");
    *out = to_c(primelab::rough_sum_report(N, to_params(params), eta));
  });
}

pl_status pl_selberg_survivor_count(uint64_t N, const pl_tuple* t, double alpha, pl_survivor_count* out) {
  return guarded([&] {
    need(t, "tuple");
    need(out, "out");
    const auto s = primelab::selberg_survivor_count(N, t->t, alpha);
    *out = {s.count, s.paper_bound_scale, s.ratio ? 1 : 0, s.ratio.value_or(0.0)};
  });
}

// ---- gap statistics

pl_status pl_gap_stream(uint64_t limit, pl_gap_callback fn, void* user) {
  return guarded([&] {
    need(reinterpret_cast<const void*>(fn), "callback");
    primelab::for_each_gap(limit, [&](const primelab::GapRecord& g) {
      const pl_gap_record r = to_c(g);
      if (fn(&r, user) != 0) throw StopStream{};
    });
  });
}

pl_status pl_mean_normalized_gap(uint64_t limit, pl_gap_normalization norm, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = primelab::mean_normalized_gap(
        limit, norm == PL_NORM_LOG_INDEX ? primelab::GapNormalization::LogIndex : primelab::GapNormalization::LogPrime);
  });
}

pl_status pl_test_function_parse(const char* spec, pl_test_function** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new pl_test_function{primelab::TestFunction::parse(spec)};
  });
}

pl_status pl_test_function_custom(const char* name, pl_eval_fn fn, void* user, pl_test_function** out) {
  return guarded([&] {
    need(name, "name");
    need(reinterpret_cast<const void*>(fn), "fn");
    need(out, "out");
    *out = new pl_test_function{primelab::TestFunction::custom(name, [fn, user](std::uint64_t n) { return fn(n, user); })};
  });
}

void pl_test_function_free(pl_test_function* f) { delete f; }

pl_status pl_slow_oscillation_check(const pl_test_function* f, uint64_t Nmax, double eps, pl_oscillation_report* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    const auto r = primelab::slow_oscillation_check(f->f, Nmax, eps);
    *out = {r.passes ? 1 : 0,
            r.threshold ? 1 : 0,
            r.threshold.value_or(0),
            r.first_violation ? 1 : 0,
            r.first_violation.value_or(0),
            r.last_violation ? 1 : 0,
            r.last_violation.value_or(0),
            r.blocks_checked};
  });
}

pl_status pl_limit_point_histogram(uint64_t limit, const pl_test_function* f, size_t bins, double range_hi,
                                   pl_histogram** out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = new pl_histogram{primelab::limit_point_histogram(limit, f->f, bins, range_hi)};
  });
}

size_t pl_histogram_bins(const pl_histogram* h) { return h ? h->h.counts.size() : 0; }
const uint64_t* pl_histogram_counts(const pl_histogram* h) { return h ? h->h.counts.data() : nullptr; }

void pl_histogram_summary_get(const pl_histogram* h, pl_histogram_summary* out) {
  if (!h || !out) return;
  *out = {h->h.range_hi, h->h.underflow, h->h.overflow, h->h.invalid, h->h.total,
          h->h.min_value ? 1 : 0, h->h.min_value.value_or(0.0), to_c(h->h.argmin.value_or(primelab::GapRecord{}))};
}

void pl_histogram_free(pl_histogram* h) { delete h; }

pl_status pl_ratio_extremes_compute(uint64_t limit, pl_ratio_extremes* out) {
  return guarded([&] {
    need(out, "out");
    const auto r = primelab::ratio_extremes(limit);
    *out = {to_c(r.min_ratio), to_c(r.max_ratio), to_c(r.min_ratio_scaled), to_c(r.max_ratio_scaled), r.pairs};
  });
}

pl_status pl_polignac_census(uint64_t limit, uint64_t max_even, pl_census_kind kind, pl_census** out) {
  return guarded([&] {
    need(out, "out");
    *out = new pl_census{kind == PL_CENSUS_WEAK ? primelab::weak_polignac_census(limit, max_even)
                                                : primelab::strong_polignac_census(limit, max_even)};
  });
}

uint64_t pl_census_max_even(const pl_census* c) { return c ? c->c.max_even : 0; }

pl_status pl_census_count(const pl_census* c, uint64_t even, uint64_t* out) {
  return guarded([&] {
    need(c, "census");
    need(out, "out");
    *out = c->c.count(even);
  });
}

uint64_t pl_census_overflow(const pl_census* c) { return c ? c->c.overflow : 0; }
void pl_census_free(pl_census* c) { delete c; }

pl_status pl_polignac_density_lower(uint64_t k, int exact, pl_polignac_density* out) {
  return guarded([&] {
    need(out, "out");
    const auto d = primelab::polignac_density_lower(k, exact != 0);
    char* num = d.numerator ? dup_string(*d.numerator) : nullptr;
    char* den = nullptr;
    try {
      den = d.denominator ? dup_string(*d.denominator) : nullptr;
    } catch (...) {
      std::free(num);
      throw;
    }
    *out = {d.k, d.value, d.asymptote, num, den};
  });
}

void pl_polignac_density_release(pl_polignac_density* d) {
  if (!d) return;
  std::free(d->numerator);
  std::free(d->denominator);
  d->numerator = d->denominator = nullptr;
}

// ---- constellations

pl_status pl_count_constellations(const pl_tuple* t, uint64_t x, pl_constellation_count* out) {
  return guarded([&] {
    need(t, "tuple");
    need(out, "out");
    const auto c = primelab::count_constellations(t->t, x);
    *out = {c.count, c.series, c.hl_prediction, c.integral_prediction};
  });
}

pl_status pl_dhl_witnesses(const pl_tuple* t, uint64_t N, double c1, pl_dhl_callback fn, void* user) {
  return guarded([&] {
    need(t, "tuple");
    need(reinterpret_cast<const void*>(fn), "callback");
    primelab::for_each_dhl_witness(t->t, N, c1, [&](const primelab::DHLWitness& w) {
      const pl_dhl_witness c{w.n,
                             w.prime_mask,
                             w.consecutive_pair ? 1 : 0,
                             w.consecutive_pair ? w.consecutive_pair->first : 0u,
                             w.consecutive_pair ? w.consecutive_pair->second : 0u,
                             w.almost_prime ? 1 : 0};
      if (fn(&c, user) != 0) throw StopStream{};
    });
  });
}

pl_status pl_consecutive_pair_count(const pl_tuple* t, size_t i, size_t j, uint64_t N, double c1, uint64_t* out) {
  return guarded([&] {
    need(t, "tuple");
    need(out, "out");
    *out = primelab::consecutive_pair_count(t->t, i, j, N, c1);
  });
}

pl_status pl_twin_ap_search(uint64_t d, unsigned L, uint64_t limit, int require_consecutive, pl_ap_callback fn,
                            void* user) {
  return guarded([&] {
    need(reinterpret_cast<const void*>(fn), "callback");
    for (const auto& ap : primelab::twin_ap_search(d, L, limit, require_consecutive != 0)) {
      const pl_twin_ap c{ap.start, ap.step, ap.length};
      if (fn(&c, user) != 0) break;
    }
  });
}

pl_status pl_bv_discrepancy(uint64_t X, uint64_t Q, pl_discrepancy** out) {
  return guarded([&] {
    need(out, "out");
    *out = new pl_discrepancy{primelab::bv_discrepancy(X, Q)};
  });
}

size_t pl_discrepancy_size(const pl_discrepancy* d) { return d ? d->r.per_q.size() : 0; }

pl_status pl_discrepancy_entry(const pl_discrepancy* d, size_t i, pl_residue_discrepancy* out) {
  return guarded([&] {
    need(d, "report");
    need(out, "out");
    if (i >= d->r.per_q.size()) throw primelab::ArgumentError("entry index out of range");
    *out = to_c(d->r.per_q[i], d->r.theta);
  });
}

void pl_discrepancy_summary_get(const pl_discrepancy* d, pl_discrepancy_summary* out) {
  if (!d || !out) return;
  bool conserved = true;
  for (const auto& r : d->r.per_q) conserved = conserved && r.coprime_mass + r.non_coprime_mass == d->r.theta;
  *out = {d->r.X, d->r.Q, d->r.total, d->r.theta_exponent, primelab::theta_to_double(d->r.theta), conserved ? 1 : 0};
}

void pl_discrepancy_free(pl_discrepancy* d) { delete d; }

}  // extern "C"
