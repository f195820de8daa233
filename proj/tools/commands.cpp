#include "commands.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <string>

namespace cli {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

Json optional_u64(std::uint64_t v, bool present) { return present ? Json(v) : Json(nullptr); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

// Options shared by the weight experiments.
struct WeightOptions {
  std::string tuple = "0,2,6";
  bool normalize = false;
  unsigned ell = 1;
  Count N{100000};
  std::optional<double> R;
  double R_exponent = 0.2;
  std::string window;

  void add(CLI::App* app) {
    app->add_option("--tuple", tuple, "Offsets, ascending and comma-separated")->capture_default_str();
    app->add_flag("--normalize", normalize, "Sort the tuple instead of rejecting unsorted input");
    app->add_option("--ell", ell, "Extra smoothing power ell (0 <= ell <= k)")->capture_default_str();
    app->add_option("--N", N, "Range start; n runs over [N, 2N)")->capture_default_str();
    auto* r = app->add_option("--R", R, "Sieve cutoff R > 1");
    app->add_option("--R-exponent", R_exponent, "R = N^e when --R is absent")->capture_default_str()->excludes(r);
    app->add_option("--window", window, "Admit only d whose prime factors lie in pmin:pmax");
  }

  struct Resolved {
    TuplePtr tuple;
    pl_weight_params params;
    Json json;
  };

  Resolved resolve() const {
    Resolved r{parse_tuple(tuple, normalize), {}, {}};
    double cutoff = R ? *R : std::pow(static_cast<double>(N.value), R_exponent);
    // N^e lands a few ulps off an integer for exact powers; floor(R) must not drop below it.
    if (!R && std::abs(cutoff - std::round(cutoff)) <= 1e-9 * cutoff) cutoff = std::round(cutoff);
    r.params = pl_weight_params{r.tuple.get(), ell, cutoff, 0, 0, 0};
    Json win = nullptr;
    if (!window.empty()) {
      const auto parts = split(window, ':');
      if (parts.size() != 2) throw UsageError("--window expects pmin:pmax, got '" + window + "'");
      r.params.has_window = 1;
      r.params.window_min = parse_count(parts[0]);
      r.params.window_max = parse_count(parts[1]);
      win = Json::array({r.params.window_min, r.params.window_max});
    }
    r.json = Json{{"tuple", tuple_json(r.tuple.get())},
                  {"k", pl_tuple_size(r.tuple.get())},
                  {"ell", ell},
                  {"N", N.value},
                  {"R", cutoff},
                  {"window", win}};
    return r;
  }
};

Json ratio_json(const Json& params, const char* key, Json key_value, const pl_ratio_report& r) {
  return Json{{"params", params},         {key, std::move(key_value)}, {"sum", r.sum},
              {"restricted_sum", r.restricted_sum}, {"ratio", r.ratio},     {"bound", r.bound},
              {"constant", number(r.constant)}};
}

Json gap_json(const pl_gap_record& g) { return Json{{"index", g.index}, {"prime", g.prime}, {"gap", g.gap}}; }

Json witness_json(const pl_ratio_witness& w) {
  return Json{{"index", w.index}, {"prime", w.prime}, {"gap", w.gap}, {"next_gap", w.next_gap}, {"value", w.value}};
}

FunctionPtr parse_function(const std::string& spec) {
  pl_test_function* f = nullptr;
  check(pl_test_function_parse(spec.c_str(), &f));
  return FunctionPtr(f);
}

// ---- sieve

Command sieve_command(CLI::App& app) {
  auto* sub = app.add_subcommand("sieve", "List, count or factor with the prime sieve");
  struct Opts {
    std::optional<Count> limit, lo, hi, factor, spf;
    Count bound{0};
    bool count = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--limit", o->limit, "Primes <= limit");
  sub->add_option("--lo", o->lo, "Segment start (inclusive)");
  sub->add_option("--hi", o->hi, "Segment end (exclusive)");
  sub->add_flag("--count", o->count, "Report only the number of primes");
  sub->add_option("--factor", o->factor, "Factor this integer");
  sub->add_option("--spf", o->spf, "Smallest prime factor of this integer, up to --bound");
  sub->add_option("--bound", o->bound, "Bound for --spf");
  return {sub, [o](Emitter& out) {
            if (o->factor) {
              pl_prime_power f[PL_MAX_FACTORS];
              std::size_t n = 0;
              check(pl_factorize(*o->factor, f, PL_MAX_FACTORS, &n));
              std::uint64_t phi = 0;
              check(pl_euler_phi(std::max<std::uint64_t>(*o->factor, 1), &phi));
              Json primes = Json::array(), exps = Json::array();
              for (std::size_t i = 0; i < n; ++i) {
                primes.push_back(f[i].prime);
                exps.push_back(f[i].exponent);
              }
              out.emit({{"n", o->factor->value}, {"primes", primes}, {"exponents", exps}, {"phi", phi}});
              return;
            }
            if (o->spf) {
              std::uint64_t p = 0;
              check(pl_smallest_prime_factor_bounded(*o->spf, o->bound, &p));
              out.emit({{"m", o->spf->value}, {"bound", o->bound.value}, {"spf", optional_u64(p, p != 0)}});
              return;
            }
            ArrayPtr primes;
            Json range;
            if (o->lo || o->hi) {
              if (!o->lo || !o->hi) throw UsageError("--lo and --hi go together");
              pl_sieve* s = nullptr;
              check(pl_sieve_segment(*o->lo, *o->hi, &s));
              SievePtr sieve(s);
              if (o->count) {
                out.emit({{"lo", o->lo->value}, {"hi", o->hi->value}, {"count", pl_sieve_count(s)}});
                return;
              }
              pl_u64_array* a = nullptr;
              check(pl_sieve_primes(s, &a));
              primes.reset(a);
            } else {
              if (!o->limit) throw UsageError("sieve needs --limit, --lo/--hi, --factor or --spf");
              pl_u64_array* a = nullptr;
              check(pl_primes_up_to(*o->limit, &a));
              primes.reset(a);
              if (o->count) {
                out.emit({{"limit", o->limit->value}, {"count", pl_u64_array_size(a)}});
                return;
              }
            }
            const std::uint64_t* p = pl_u64_array_data(primes.get());
            for (std::size_t i = 0; i < pl_u64_array_size(primes.get()); ++i) out.emit({{"prime", p[i]}});
          }};
}

// ---- tuple

Command tuple_command(CLI::App& app) {
  auto* sub = app.add_subcommand("tuple", "Check, construct or place admissible tuples");
  struct Opts {
    std::string check, intervals, strategy = "greedy-sieve";
    std::optional<Count> narrow, prime;
    bool normalize = false;
  };
  auto o = std::make_shared<Opts>();
  auto* c = sub->add_option("--check", o->check, "Tuple to test for admissibility");
  auto* n = sub->add_option("--narrow", o->narrow, "Build an admissible tuple of this size");
  auto* iv = sub->add_option("--intervals", o->intervals, "One offset per interval, e.g. 10-20,100-200");
  c->excludes(n)->excludes(iv);
  n->excludes(iv);
  sub->add_option("--strategy", o->strategy, "greedy-sieve | primes-past-k | shifted-schinzel")->capture_default_str();
  sub->add_option("--prime", o->prime, "Also report residues covered mod this prime (with --check)");
  sub->add_flag("--normalize", o->normalize, "Sort the tuple instead of rejecting unsorted input");
  return {sub, [o](Emitter& out) {
            auto describe = [](const pl_tuple* t) {
              int adm = 0;
              std::uint64_t witness = 0;
              check(pl_is_admissible(t, &adm, &witness));
              return Json{{"tuple", tuple_json(t)},
                          {"k", pl_tuple_size(t)},
                          {"diameter", pl_tuple_diameter(t)},
                          {"admissible", adm != 0},
                          {"witness", optional_u64(witness, adm == 0)}};
            };
            if (!o->check.empty()) {
              auto t = parse_tuple(o->check, o->normalize);
              Json r = describe(t.get());
              if (o->prime) {
                std::uint64_t nu = 0;
                check(pl_residues_covered(t.get(), *o->prime, &nu));
                r["prime"] = o->prime->value;
                r["residues_covered"] = nu;
              }
              out.emit(r);
            } else if (o->narrow) {
              pl_strategy s{};
              check(pl_strategy_parse(o->strategy.c_str(), &s));
              pl_tuple* t = nullptr;
              check(pl_narrow_admissible_tuple(*o->narrow, s, &t));
              TuplePtr tp(t);
              Json r{{"strategy", o->strategy}};
              r.update(describe(t));
              out.emit(r);
            } else if (!o->intervals.empty()) {
              std::vector<pl_interval> chain(split(o->intervals, ',').size());
              std::size_t count = 0;
              check(pl_intervals_parse(o->intervals.c_str(), chain.data(), chain.size(), &count));
              chain.resize(count);
              pl_tuple* t = nullptr;
              int contained = 0, growth = 0;
              check(pl_tuple_in_intervals(chain.data(), chain.size(), &t, &contained, &growth));
              TuplePtr tp(t);
              Json ivs = Json::array();
              for (const auto& i : chain) ivs.push_back(std::to_string(i.start) + "-" + std::to_string(i.start + i.length));
              Json r{{"intervals", ivs}};
              r.update(describe(t));
              r["differences_contained"] = contained != 0;
              r["growth_condition"] = growth != 0;
              out.emit(r);
            } else {
              throw UsageError("tuple needs --check, --narrow or --intervals");
            }
          }};
}

// ---- singular series

Command series_command(CLI::App& app) {
  auto* sub = app.add_subcommand("series", "Truncated singular series with a rigorous tail bound");
  struct Opts {
    std::string tuple;
    Count trunc{1000000};
    bool normalize = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--tuple", o->tuple, "Offsets")->required();
  sub->add_option("--trunc", o->trunc, "Truncation prime P")->capture_default_str();
  sub->add_flag("--normalize", o->normalize, "Sort the tuple instead of rejecting unsorted input");
  return {sub, [o](Emitter& out) {
            auto t = parse_tuple(o->tuple, o->normalize);
            pl_series_value v{};
            check(pl_singular_series(t.get(), o->trunc, &v));
            out.emit({{"tuple", tuple_json(t.get())},
                      {"k", pl_tuple_size(t.get())},
                      {"truncation_prime", v.truncation_prime},
                      {"value", v.value},
                      {"tail_bound", v.tail_bound}});
          }};
}

Command gallagher_command(CLI::App& app) {
  auto* sub = app.add_subcommand("gallagher", "Mean of S(H u {h}) / S(H) over h = 1..hmax");
  struct Opts {
    std::string tuple = "0";
    Count hmax{0};
    Count trunc{1000000};
    bool normalize = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--tuple", o->tuple, "Admissible base tuple")->capture_default_str();
  sub->add_option("--hmax", o->hmax, "Largest added offset")->required();
  sub->add_option("--trunc", o->trunc, "Truncation prime P for every term")->capture_default_str();
  sub->add_flag("--normalize", o->normalize, "Sort the tuple instead of rejecting unsorted input");
  return {sub, [o](Emitter& out) {
            auto t = parse_tuple(o->tuple, o->normalize);
            double avg = 0.0;
            check(pl_gallagher_average(t.get(), o->hmax, o->trunc, &avg));
            out.emit({{"tuple", tuple_json(t.get())},
                      {"hmax", o->hmax.value},
                      {"truncation_prime", o->trunc.value},
                      {"average", avg}});
          }};
}

// ---- sieve weights

Command weights_command(CLI::App& app) {
  auto* sub = app.add_subcommand("weights", "Sieve weight Lambda_R at one n, or its square sum over [N, 2N)");
  struct Opts {
    WeightOptions w;
    std::optional<Count> n;
  };
  auto o = std::make_shared<Opts>();
  o->w.add(sub);
  sub->add_option("--n", o->n, "Evaluate Lambda_R at this n only");
  return {sub, [o](Emitter& out) {
            auto r = o->w.resolve();
            if (o->n) {
              double v = 0.0;
              check(pl_lambda_R(*o->n, &r.params, &v));
              out.emit({{"params", r.json}, {"n", o->n->value}, {"lambda", v}});
            } else {
              double s = 0.0;
              check(pl_weighted_sum(o->w.N, &r.params, &s));
              out.emit({{"params", r.json}, {"sum", s}});
            }
          }};
}

Command lemma1_command(CLI::App& app) {
  auto* sub = app.add_subcommand("lemma1", "Share of the weight mass on n with p | P_H(n)");
  struct Opts {
    WeightOptions w;
    std::vector<Count> primes;
    std::optional<Count> pmin, pmax;
  };
  auto o = std::make_shared<Opts>();
  o->w.add(sub);
  auto* p = sub->add_option("--p", o->primes, "Primes to test, comma-separated")->delimiter(',');
  sub->add_option("--pmin", o->pmin, "Sweep all primes in [pmin, pmax]")->excludes(p);
  sub->add_option("--pmax", o->pmax, "Sweep all primes in [pmin, pmax]")->excludes(p);
  return {sub, [o](Emitter& out) {
            auto r = o->w.resolve();
            std::vector<std::uint64_t> primes;
            if (o->pmax) {
              pl_u64_array* a = nullptr;
              check(pl_primes_up_to(*o->pmax, &a));
              ArrayPtr arr(a);
              const std::uint64_t lo = o->pmin ? o->pmin->value : 2;
              for (std::size_t i = 0; i < pl_u64_array_size(a); ++i) {
                if (pl_u64_array_data(a)[i] >= lo) primes.push_back(pl_u64_array_data(a)[i]);
              }
            } else if (o->primes.empty()) {
              primes.push_back(11);
            } else {
              for (const auto& c : o->primes) primes.push_back(c);
            }
            std::vector<pl_ratio_report> reports(primes.size());
            check(pl_lemma1_sweep(o->w.N, &r.params, primes.data(), primes.size(), reports.data()));
            for (std::size_t i = 0; i < primes.size(); ++i) out.emit(ratio_json(r.json, "p", primes[i], reports[i]));
          }};
}

Command lemma2_command(CLI::App& app) {
  auto* sub = app.add_subcommand("lemma2", "Share of the weight mass on n with P-(P_H(n)) < R^eta");
  struct Opts {
    WeightOptions w;
    std::vector<double> eta{0.05, 0.1, 0.2, 0.4};
  };
  auto o = std::make_shared<Opts>();
  o->w.add(sub);
  sub->add_option("--eta", o->eta, "Exponents in (0, 1), comma-separated")->delimiter(',')->capture_default_str();
  return {sub, [o](Emitter& out) {
            auto r = o->w.resolve();
            for (double eta : o->eta) {
              pl_ratio_report rep{};
              check(pl_rough_sum_fraction(o->w.N, &r.params, eta, &rep));
              out.emit(ratio_json(r.json, "eta", eta, rep));
            }
          }};
}

Command lemma3_command(CLI::App& app) {
  auto* sub = app.add_subcommand("lemma3", "Count n in [N, 2N) with P-(P_H(n)) > N^alpha against its scale");
  struct Opts {
    std::string tuple = "0,2";
    bool normalize = false;
    Count N{1000000};
    std::vector<double> alpha{0.05, 0.1, 0.2};
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--tuple", o->tuple, "Offsets")->capture_default_str();
  sub->add_flag("--normalize", o->normalize, "Sort the tuple instead of rejecting unsorted input");
  sub->add_option("--N", o->N, "Range start; n runs over [N, 2N)")->capture_default_str();
  sub->add_option("--alpha", o->alpha, "Exponents in (0, 1/2), comma-separated")->delimiter(',')->capture_default_str();
  return {sub, [o](Emitter& out) {
            auto t = parse_tuple(o->tuple, o->normalize);
            for (double a : o->alpha) {
              pl_survivor_count c{};
              check(pl_selberg_survivor_count(o->N, t.get(), a, &c));
              out.emit({{"tuple", tuple_json(t.get())},
                        {"N", o->N.value},
                        {"alpha", a},
                        {"count", c.count},
                        {"paper_bound_scale", c.paper_bound_scale},
                        {"ratio", c.has_ratio ? Json(c.ratio) : Json(nullptr)}});
            }
          }};
}

// ---- gap statistics

Command gaps_command(CLI::App& app) {
  auto* sub = app.add_subcommand("gaps", "Prime gap stream and its summary statistics");
  struct Opts {
    Count limit{0};
    std::string stat = "list", norm = "log-prime", function = "log";
    double eps = 0.1;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--limit", o->limit, "Gaps with p_{n+1} <= limit (Nmax for oscillation)")->required();
  sub->add_option("--stat", o->stat, "list | mean | max | oscillation")
      ->check(CLI::IsMember({"list", "mean", "max", "oscillation"}))
      ->capture_default_str();
  sub->add_option("--norm", o->norm, "Mean normalizer: log-prime | log-index")
      ->check(CLI::IsMember({"log-prime", "log-index"}))
      ->capture_default_str();
  sub->add_option("--function", o->function, "Test function for oscillation")->capture_default_str();
  sub->add_option("--eps", o->eps, "Oscillation tolerance")->capture_default_str();
  return {sub, [o](Emitter& out) {
            if (o->stat == "list") {
              auto cb = [](const pl_gap_record* g, void* user) {
                static_cast<Emitter*>(user)->emit(gap_json(*g));
                return 0;
              };
              check(pl_gap_stream(o->limit, cb, &out));
            } else if (o->stat == "mean") {
              const bool by_index = o->norm == "log-index";
              double mean = 0.0;
              check(pl_mean_normalized_gap(o->limit, by_index ? PL_NORM_LOG_INDEX : PL_NORM_LOG_PRIME, &mean));
              std::uint64_t records = 0;
              auto cb = [](const pl_gap_record*, void* user) {
                ++*static_cast<std::uint64_t*>(user);
                return 0;
              };
              check(pl_gap_stream(o->limit, cb, &records));
              out.emit({{"limit", o->limit.value},
                        {"statistic", "mean"},
                        {"normalization", o->norm},
                        {"value", mean},
                        {"witnesses", by_index ? records - 1 : records}});
            } else if (o->stat == "max") {
              struct Acc {
                std::uint64_t best = 0;
                std::vector<std::uint64_t> at;
              } acc;
              auto cb = [](const pl_gap_record* g, void* user) {
                auto* a = static_cast<Acc*>(user);
                if (g->gap > a->best) {
                  a->best = g->gap;
                  a->at.clear();
                }
                if (g->gap == a->best) a->at.push_back(g->prime);
                return 0;
              };
              check(pl_gap_stream(o->limit, cb, &acc));
              out.emit({{"limit", o->limit.value}, {"statistic", "max"}, {"value", acc.best}, {"witnesses", acc.at}});
            } else {
              auto f = parse_function(o->function);
              pl_oscillation_report r{};
              check(pl_slow_oscillation_check(f.get(), o->limit, o->eps, &r));
              out.emit({{"limit", o->limit.value},
                        {"statistic", "oscillation"},
                        {"function", o->function},
                        {"eps", o->eps},
                        {"value", r.passes != 0},
                        {"witnesses", r.blocks_checked},
                        {"threshold", optional_u64(r.threshold, r.has_threshold)},
                        {"first_violation", optional_u64(r.first_violation, r.has_first_violation)},
                        {"last_violation", optional_u64(r.last_violation, r.has_last_violation)}});
            }
          }};
}

Command histogram_command(CLI::App& app) {
  auto* sub = app.add_subcommand("histogram", "Histogram of d_n / f(p_n)");
  struct Opts {
    Count limit{0};
    std::string function = "log";
    std::size_t bins = 40;
    double range_hi = 4.0;
    bool summary = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--limit", o->limit, "Gaps with p_{n+1} <= limit")->required();
  sub->add_option("--function", o->function, "log | gpy-half | pintz-3/7 | power:a | const:c")->capture_default_str();
  sub->add_option("--bins", o->bins, "Number of equal-width bins")->capture_default_str();
  sub->add_option("--range-hi", o->range_hi, "Upper end of the binned range (inf allowed)")->capture_default_str();
  sub->add_flag("--summary", o->summary, "Emit one summary record instead of one record per bin");
  return {sub, [o](Emitter& out) {
            auto f = parse_function(o->function);
            pl_histogram* h = nullptr;
            check(pl_limit_point_histogram(o->limit, f.get(), o->bins, o->range_hi, &h));
            HistogramPtr hp(h);
            pl_histogram_summary s{};
            pl_histogram_summary_get(h, &s);
            const std::size_t bins = pl_histogram_bins(h);
            const std::uint64_t* counts = pl_histogram_counts(h);
            if (!o->summary) {
              const double width = s.range_hi / static_cast<double>(bins);
              for (std::size_t i = 0; i < bins; ++i) {
                const double lo = std::isinf(width) ? 0.0 : width * static_cast<double>(i);
                const double hi = i + 1 == bins ? s.range_hi : width * static_cast<double>(i + 1);
                out.emit({{"bin", i}, {"lo", number(lo)}, {"hi", number(hi)}, {"count", counts[i]}});
              }
              return;
            }
            out.emit({{"limit", o->limit.value},
                      {"statistic", "histogram"},
                      {"function", o->function},
                      {"value", s.has_min ? number(s.min_value) : Json(nullptr)},
                      {"witnesses", s.has_min ? gap_json(s.argmin) : Json(nullptr)},
                      {"range_hi", number(s.range_hi)},
                      {"counts", std::vector<std::uint64_t>(counts, counts + bins)},
                      {"underflow", s.underflow},
                      {"overflow", s.overflow},
                      {"invalid", s.invalid},
                      {"total", s.total}});
          }};
}

Command ratios_command(CLI::App& app) {
  auto* sub = app.add_subcommand("ratios", "Extremes of d_{n+1} / d_n with witnesses");
  auto limit = std::make_shared<Count>();
  sub->add_option("--limit", *limit, "Pairs with p_{n+2} <= limit")->required();
  return {sub, [limit](Emitter& out) {
            pl_ratio_extremes r{};
            check(pl_ratio_extremes_compute(*limit, &r));
            out.emit({{"limit", limit->value},
                      {"pairs", r.pairs},
                      {"min_ratio", witness_json(r.min_ratio)},
                      {"max_ratio", witness_json(r.max_ratio)},
                      {"min_ratio_scaled", witness_json(r.min_ratio_scaled)},
                      {"max_ratio_scaled", witness_json(r.max_ratio_scaled)}});
          }};
}

Command polignac_command(CLI::App& app) {
  auto* sub = app.add_subcommand("polignac", "Counts of each even gap (strong) and prime difference (weak)");
  struct Opts {
    Count limit{0};
    Count max_even{100};
    std::string kind = "both";
    bool summary = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--limit", o->limit, "Primes <= limit")->required();
  sub->add_option("--max-even", o->max_even, "Largest even value tabulated")->capture_default_str();
  sub->add_option("--kind", o->kind, "strong | weak | both")
      ->check(CLI::IsMember({"strong", "weak", "both"}))
      ->capture_default_str();
  sub->add_flag("--summary", o->summary, "Emit observed even values instead of per-value rows");
  return {sub, [o](Emitter& out) {
            CensusPtr strong, weak;
            if (o->kind != "weak") {
              pl_census* c = nullptr;
              check(pl_polignac_census(o->limit, o->max_even, PL_CENSUS_STRONG, &c));
              strong.reset(c);
            }
            if (o->kind != "strong") {
              pl_census* c = nullptr;
              check(pl_polignac_census(o->limit, o->max_even, PL_CENSUS_WEAK, &c));
              weak.reset(c);
            }
            auto count = [](const CensusPtr& c, std::uint64_t even) -> Json {
              if (!c) return nullptr;
              std::uint64_t v = 0;
              check(pl_census_count(c.get(), even, &v));
              return v;
            };
            if (!o->summary) {
              for (std::uint64_t e = 2; e <= o->max_even; e += 2) {
                out.emit({{"even", e}, {"strong", count(strong, e)}, {"weak", count(weak, e)}});
              }
              return;
            }
            if (o->kind == "both") throw UsageError("--summary needs --kind strong or --kind weak");
            const CensusPtr& c = strong ? strong : weak;
            std::vector<std::uint64_t> seen;
            std::uint64_t spacing = 0;
            for (std::uint64_t e = 2; e <= o->max_even; e += 2) {
              if (count(c, e).get<std::uint64_t>() == 0) continue;
              if (!seen.empty()) spacing = std::max(spacing, e - seen.back());
              seen.push_back(e);
            }
            out.emit({{"limit", o->limit.value},
                      {"statistic", o->kind},
                      {"value", seen.size()},
                      {"witnesses", seen},
                      {"largest_spacing", spacing},
                      {"overflow", strong ? Json(pl_census_overflow(c.get())) : Json(nullptr)}});
          }};
}

Command density_command(CLI::App& app) {
  auto* sub = app.add_subcommand("density", "Lower density of Polignac numbers from admissible k-tuples");
  struct Opts {
    Count k{0};
    std::string exact = "auto";
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--k", o->k, "Tuple size k >= 2")->required();
  sub->add_option("--exact", o->exact, "Exact rational: auto (k <= 10^5) | yes | no")
      ->check(CLI::IsMember({"auto", "yes", "no"}))
      ->capture_default_str();
  return {sub, [o](Emitter& out) {
            const bool exact = o->exact == "yes" || (o->exact == "auto" && o->k.value <= 100000);
            pl_polignac_density d{};
            check(pl_polignac_density_lower(o->k, exact ? 1 : 0, &d));
            Json r{{"k", d.k},
                   {"numerator", d.numerator ? Json(d.numerator) : Json(nullptr)},
                   {"denominator", d.denominator ? Json(d.denominator) : Json(nullptr)},
                   {"value", d.value},
                   {"asymptote", d.asymptote},
                   {"ratio", number(d.value / d.asymptote)},
                   {"euler_gamma", kEulerGamma}};
            pl_polignac_density_release(&d);
            out.emit(r);
          }};
}

// ---- constellations

Command constellations_command(CLI::App& app) {
  auto* sub = app.add_subcommand("constellations", "Count n <= x with every n + h_i prime, against predictions");
  struct Opts {
    std::vector<std::string> tuples;
    std::vector<Count> limits;
    bool normalize = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--tuple", o->tuples, "Offsets; repeat for several tuples")->required();
  sub->add_option("--limit", o->limits, "x values, comma-separated")->delimiter(',')->required();
  sub->add_flag("--normalize", o->normalize, "Sort tuples instead of rejecting unsorted input");
  return {sub, [o](Emitter& out) {
            for (const auto& text : o->tuples) {
              auto t = parse_tuple(text, o->normalize);
              for (const auto& x : o->limits) {
                pl_constellation_count c{};
                check(pl_count_constellations(t.get(), x, &c));
                const double count = static_cast<double>(c.count);
                out.emit({{"tuple", tuple_json(t.get())},
                          {"x", x.value},
                          {"count", c.count},
                          {"series", c.series},
                          {"hl_prediction", c.hl_prediction},
                          {"integral_prediction", c.integral_prediction},
                          {"ratio_hl", number(count / c.hl_prediction)},
                          {"ratio_integral", number(count / c.integral_prediction)}});
              }
            }
          }};
}

Command dhl_command(CLI::App& app) {
  auto* sub = app.add_subcommand("dhl", "n in [N, 2N) with two or more primes among n + h_i");
  struct Opts {
    std::string tuple = "0,2,6";
    bool normalize = false;
    Count N{0};
    double c1 = 0.05;
    bool summary = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--tuple", o->tuple, "Offsets")->capture_default_str();
  sub->add_flag("--normalize", o->normalize, "Sort the tuple instead of rejecting unsorted input");
  sub->add_option("--N", o->N, "Range start; n runs over [N, 2N)")->required();
  sub->add_option("--c1", o->c1, "Almost-prime exponent, 0 < c1 < 1/2")->capture_default_str();
  sub->add_flag("--summary", o->summary, "Emit counts and the density constant instead of witnesses");
  return {sub, [o](Emitter& out) {
            auto t = parse_tuple(o->tuple, o->normalize);
            struct Ctx {
              Emitter* out;
              const pl_tuple* t;
              bool summary;
              std::uint64_t total = 0, consecutive = 0, almost = 0, both = 0;
            } ctx{&out, t.get(), o->summary};
            auto cb = [](const pl_dhl_witness* w, void* user) {
              auto* c = static_cast<Ctx*>(user);
              ++c->total;
              c->consecutive += w->has_pair ? 1 : 0;
              c->almost += w->almost_prime ? 1 : 0;
              c->both += w->has_pair && w->almost_prime ? 1 : 0;
              if (c->summary) return 0;
              Json idx = Json::array(), vals = Json::array();
              for (std::size_t i = 0; i < pl_tuple_size(c->t); ++i) {
                if (w->prime_mask >> i & 1) {
                  idx.push_back(i + 1);
                  vals.push_back(w->n + pl_tuple_offset(c->t, i));
                }
              }
              c->out->emit({{"n", w->n},
                            {"prime_indices", idx},
                            {"primes", vals},
                            {"consecutive_pair", w->has_pair ? Json::array({w->pair_i, w->pair_j}) : Json(nullptr)},
                            {"almost_prime", w->almost_prime != 0}});
              return 0;
            };
            check(pl_dhl_witnesses(t.get(), o->N, o->c1, cb, &ctx));
            if (!o->summary) return;
            pl_series_value s{};
            const std::uint64_t P = std::max<std::uint64_t>(1000000, pl_tuple_diameter(t.get()));
            check(pl_singular_series(t.get(), P, &s));
            const double N = static_cast<double>(o->N.value);
            const double scale = s.value * N / std::pow(std::log(N), static_cast<double>(pl_tuple_size(t.get())));
            out.emit({{"tuple", tuple_json(t.get())},
                      {"N", o->N.value},
                      {"c1", o->c1},
                      {"witnesses", ctx.total},
                      {"consecutive", ctx.consecutive},
                      {"almost_prime", ctx.almost},
                      {"consecutive_almost_prime", ctx.both},
                      {"series", s.value},
                      {"scale", scale},
                      {"constant", number(static_cast<double>(ctx.total) / scale)}});
          }};
}

Command consecutive_command(CLI::App& app) {
  auto* sub = app.add_subcommand("consecutive", "Count n <= N where n + h_i, n + h_j are consecutive rough-tuple primes");
  struct Opts {
    std::string tuple;
    bool normalize = false;
    std::size_t i = 1, j = 2;
    Count N{0};
    double c1 = 0.05;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--tuple", o->tuple, "Offsets")->required();
  sub->add_flag("--normalize", o->normalize, "Sort the tuple instead of rejecting unsorted input");
  sub->add_option("--i", o->i, "First index, 1-based")->capture_default_str();
  sub->add_option("--j", o->j, "Second index, 1-based, > i")->capture_default_str();
  sub->add_option("--N", o->N, "n runs over [1, N]")->required();
  sub->add_option("--c1", o->c1, "Almost-prime exponent, 0 < c1 < 1/2")->capture_default_str();
  return {sub, [o](Emitter& out) {
            auto t = parse_tuple(o->tuple, o->normalize);
            std::uint64_t count = 0;
            check(pl_consecutive_pair_count(t.get(), o->i, o->j, o->N, o->c1, &count));
            out.emit({{"tuple", tuple_json(t.get())},
                      {"i", o->i},
                      {"j", o->j},
                      {"N", o->N.value},
                      {"c1", o->c1},
                      {"count", count}});
          }};
}

Command ap_command(CLI::App& app) {
  auto* sub = app.add_subcommand("ap-search", "Arithmetic progressions of primes q with q + d prime");
  struct Opts {
    Count d{2};
    unsigned L = 3;
    Count limit{0};
    bool consecutive = true;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--d", o->d, "Even twin distance")->capture_default_str();
  sub->add_option("--L", o->L, "Progression length >= 3")->capture_default_str();
  sub->add_option("--limit", o->limit, "Largest progression term")->required();
  sub->add_flag("--consecutive,!--any", o->consecutive, "Require q + d to be the next prime (default) or not")
      ->default_str("true");
  return {sub, [o](Emitter& out) {
            auto cb = [](const pl_twin_ap* ap, void* user) {
              Json terms = Json::array();
              for (std::uint32_t i = 0; i < ap->length; ++i) terms.push_back(ap->start + i * ap->step);
              static_cast<Emitter*>(user)->emit(
                  {{"start", ap->start}, {"step", ap->step}, {"length", ap->length}, {"terms", terms}});
              return 0;
            };
            check(pl_twin_ap_search(o->d, o->L, o->limit, o->consecutive ? 1 : 0, cb, &out));
          }};
}

Command bv_command(CLI::App& app) {
  auto* sub = app.add_subcommand("bv", "Worst-residue discrepancy of theta(X; q, a) for q <= Q");
  struct Opts {
    Count X{0};
    std::optional<Count> Q;
    double Q_exponent = 0.5;
    bool summary = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--X", o->X, "Sum primes p <= X")->required();
  auto* q = sub->add_option("--Q", o->Q, "Largest modulus");
  sub->add_option("--Q-exponent", o->Q_exponent, "Q = floor(X^e) when --Q is absent")->capture_default_str()->excludes(q);
  sub->add_flag("--summary", o->summary, "Emit totals instead of one record per modulus");
  return {sub, [o](Emitter& out) {
            const std::uint64_t Q =
                o->Q ? o->Q->value
                     : static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(o->X.value), o->Q_exponent)));
            pl_discrepancy* d = nullptr;
            check(pl_bv_discrepancy(o->X, Q, &d));
            DiscrepancyPtr dp(d);
            if (!o->summary) {
              for (std::size_t i = 0; i < pl_discrepancy_size(d); ++i) {
                pl_residue_discrepancy r{};
                check(pl_discrepancy_entry(d, i, &r));
                out.emit({{"q", r.q},
                          {"worst_residue", r.worst_residue},
                          {"discrepancy", r.discrepancy},
                          {"coprime_mass", r.coprime_mass},
                          {"non_coprime_mass", r.non_coprime_mass},
                          {"conserved", r.conserved != 0}});
              }
              return;
            }
            pl_discrepancy_summary s{};
            pl_discrepancy_summary_get(d, &s);
            const double X = static_cast<double>(s.X);
            out.emit({{"X", s.X},
                      {"Q", s.Q},
                      {"theta_exponent", s.theta_exponent},
                      {"total", s.total},
                      {"reference", X / std::log(X)},
                      {"theta", s.theta},
                      {"conserved", s.conserved != 0}});
          }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  return {sieve_command(app),         tuple_command(app),     series_command(app),    gallagher_command(app),
          weights_command(app),       lemma1_command(app),    lemma2_command(app),    lemma3_command(app),
          gaps_command(app),          histogram_command(app), ratios_command(app),    polignac_command(app),
          density_command(app),       constellations_command(app), dhl_command(app), consecutive_command(app),
          ap_command(app),            bv_command(app)};
}

}  // namespace cli
