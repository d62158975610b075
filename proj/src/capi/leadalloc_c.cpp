#include "leadalloc/leadalloc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>

#include "leadalloc/allocation.hpp"
#include "leadalloc/error.hpp"
#include "leadalloc/evaluation.hpp"
#include "leadalloc/ingest.hpp"
#include "leadalloc/names.hpp"
#include "leadalloc/scoring.hpp"
#include "leadalloc/serialize.hpp"
#include "leadalloc/stats.hpp"

using namespace leadalloc;

struct la_aliases {
  AliasTable value;
};
struct la_dataset {
  CityDataset value;
};
struct la_correlations {
  std::string city;
  Estimator estimator;
  std::vector<CorrelationResult> value;
};
struct la_ranking {
  PriorityRanking value;
};
struct la_plan {
  AllocationPlan value;
};
struct la_runs {
  std::vector<ModelRun> value;
};
struct la_targets {
  TargetSet value;
  std::vector<std::string> cities;
};
struct la_report {
  AccuracyReport value;
};

namespace {

struct CallState {
  std::string message;
  std::vector<Diagnostic> diagnostics;
};

CallState& state() {
  thread_local CallState s;
  return s;
}

void reset() {
  state().message.clear();
  state().diagnostics.clear();
}

void note(const ValidationReport& report) {
  auto& d = state().diagnostics;
  d.insert(d.end(), report.entries().begin(), report.entries().end());
}

void note_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) state().diagnostics.push_back({Severity::Warning, std::nullopt, {}, w});
}

la_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return LA_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidName: return LA_ERR_INVALID_NAME;
    case ErrorCode::Validation: return LA_ERR_VALIDATION;
    case ErrorCode::Io: return LA_ERR_IO;
    case ErrorCode::UndefinedCorrelation: return LA_ERR_UNDEFINED_CORRELATION;
    case ErrorCode::UnknownFactor: return LA_ERR_UNKNOWN_FACTOR;
    case ErrorCode::InsufficientData: return LA_ERR_INSUFFICIENT_DATA;
  }
  return LA_ERR_INTERNAL;
}

template <class F>
la_status guarded(F&& body) {
  reset();
  try {
    body();
    return LA_OK;
  } catch (const Error& e) {
    state().message = e.what();
    note(e.report());
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    state().message = "out of memory";
    return LA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    state().message = e.what();
    return LA_ERR_INTERNAL;
  } catch (...) {
    state().message = "unknown internal error";
    return LA_ERR_INTERNAL;
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, message);
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

IngestOptions ingest_options(const la_ingest_options* o) {
  IngestOptions out;
  if (o) {
    out.strict = o->strict != 0;
    out.aliases = o->aliases ? &o->aliases->value : nullptr;
  }
  return out;
}

la_weights to_c(const WeightConfig& w) {
  return {w.base_alpha(),
          w.alpha(),
          w.beta(),
          w.gamma(),
          w.source_correlation(),
          w.variant() == WeightVariant::Algorithm ? LA_VARIANT_ALGORITHM : LA_VARIANT_TEXT,
          w.correlation_clamped() ? 1 : 0,
          w.normalized() ? 1 : 0};
}

std::optional<WeightVariant> from_c(la_weight_variant v) {
  switch (v) {
    case LA_VARIANT_TEXT: return WeightVariant::Text;
    case LA_VARIANT_ALGORITHM: return WeightVariant::Algorithm;
  }
  return std::nullopt;
}

const Diagnostic* diagnostic(size_t i) {
  const auto& d = state().diagnostics;
  return i < d.size() ? &d[i] : nullptr;
}

}  // namespace

extern "C" {

const char* la_version(void) { return "1.0.0"; }

const char* la_status_name(la_status status) {
  switch (status) {
    case LA_OK: return "ok";
    case LA_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case LA_ERR_VALIDATION: return "validation";
    case LA_ERR_IO: return "io";
    case LA_ERR_UNDEFINED_CORRELATION: return "undefined-correlation";
    case LA_ERR_UNKNOWN_FACTOR: return "unknown-factor";
    case LA_ERR_INSUFFICIENT_DATA: return "insufficient-data";
    case LA_ERR_INVALID_NAME: return "invalid-name";
    case LA_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* la_last_error_message(void) { return state().message.c_str(); }
size_t la_diagnostic_count(void) { return state().diagnostics.size(); }

la_severity la_diagnostic_severity(size_t i) {
  const auto* d = diagnostic(i);
  return d && d->severity == Severity::Warning ? LA_SEVERITY_WARNING : LA_SEVERITY_ERROR;
}

int64_t la_diagnostic_row(size_t i) {
  const auto* d = diagnostic(i);
  return d && d->row ? static_cast<int64_t>(*d->row) : -1;
}

const char* la_diagnostic_location(size_t i) {
  const auto* d = diagnostic(i);
  return d ? d->location.c_str() : "";
}

const char* la_diagnostic_message(size_t i) {
  const auto* d = diagnostic(i);
  return d ? d->message.c_str() : "";
}

void la_string_free(char* s) { std::free(s); }

la_status la_aliases_load(const char* path, la_aliases** out) {
  return guarded([&] {
    require(path && out, "la_aliases_load: null argument");
    *out = new la_aliases{AliasTable::load(path)};
  });
}

la_status la_aliases_parse(const char* json, size_t len, la_aliases** out) {
  return guarded([&] {
    require(json && out, "la_aliases_parse: null argument");
    *out = new la_aliases{AliasTable::parse({json, len})};
  });
}

void la_aliases_free(la_aliases* aliases) { delete aliases; }

la_status la_canonicalize(const la_aliases* aliases, const char* raw, char** out) {
  return guarded([&] {
    require(raw && out, "la_canonicalize: null argument");
    *out = dup_string(canonicalize_name(raw, aliases ? aliases->value : AliasTable::identity()));
  });
}

la_status la_dataset_load(const char* path, const char* city, const la_ingest_options* options,
                          la_dataset** out) {
  return guarded([&] {
    require(path && city && out, "la_dataset_load: null argument");
    auto parsed = parse_city_dataset(path, city, ingest_options(options));
    note(parsed.report);
    *out = new la_dataset{std::move(parsed.value)};
  });
}

la_status la_dataset_parse(const char* csv, size_t len, const char* city,
                           const la_ingest_options* options, la_dataset** out) {
  return guarded([&] {
    require(csv && city && out, "la_dataset_parse: null argument");
    auto parsed = parse_city_dataset_text({csv, len}, city, ingest_options(options));
    note(parsed.report);
    *out = new la_dataset{std::move(parsed.value)};
  });
}

void la_dataset_free(la_dataset* dataset) { delete dataset; }
size_t la_dataset_size(const la_dataset* d) { return d ? d->value.size() : 0; }
const char* la_dataset_city(const la_dataset* d) { return d ? d->value.city().id.c_str() : ""; }
double la_dataset_bll_threshold(const la_dataset* d) {
  return d ? d->value.city().bll_threshold_ug_dl : 0.0;
}

const char* la_dataset_name(const la_dataset* d, size_t i) {
  return d && i < d->value.size() ? d->value.records()[i].name().c_str() : nullptr;
}

la_status la_dataset_metrics(const la_dataset* d, size_t i, double* prevalence,
                             double* untested_pct, double* public_coverage_pct) {
  return guarded([&] {
    require(d && i < d->value.size(), "la_dataset_metrics: index out of range");
    const auto& r = d->value.records()[i];
    if (prevalence) *prevalence = r.prevalence();
    if (untested_pct) *untested_pct = r.untested_pct();
    if (public_coverage_pct) *public_coverage_pct = r.public_coverage_pct();
  });
}

la_status la_dataset_to_csv(const la_dataset* d, char** out) {
  return guarded([&] {
    require(d && out, "la_dataset_to_csv: null argument");
    *out = dup_string(write_city_dataset_csv(d->value));
  });
}

la_status la_runs_load(const char* path, const la_ingest_options* options, la_runs** out) {
  return guarded([&] {
    require(path && out, "la_runs_load: null argument");
    auto parsed = parse_model_runs(path, ingest_options(options));
    note(parsed.report);
    *out = new la_runs{std::move(parsed.value)};
  });
}

la_status la_runs_parse(const char* json, size_t len, const la_ingest_options* options, la_runs** out) {
  return guarded([&] {
    require(json && out, "la_runs_parse: null argument");
    auto parsed = parse_model_runs_text({json, len}, ingest_options(options));
    note(parsed.report);
    *out = new la_runs{std::move(parsed.value)};
  });
}

void la_runs_free(la_runs* runs) { delete runs; }
size_t la_runs_size(const la_runs* r) { return r ? r->value.size() : 0; }
const char* la_runs_model(const la_runs* r, size_t i) {
  return r && i < r->value.size() ? r->value[i].model.c_str() : nullptr;
}
const char* la_runs_mode(const la_runs* r, size_t i) {
  return r && i < r->value.size() ? r->value[i].mode.c_str() : nullptr;
}

namespace {
la_targets* make_targets(Parsed<TargetSet> parsed) {
  note(parsed.report);
  std::vector<std::string> cities;
  for (const auto& [c, _] : parsed.value.per_city()) cities.push_back(c);
  return new la_targets{std::move(parsed.value), std::move(cities)};
}
}  // namespace

la_status la_targets_load(const char* path, const la_ingest_options* options, la_targets** out) {
  return guarded([&] {
    require(path && out, "la_targets_load: null argument");
    *out = make_targets(parse_targets(path, ingest_options(options)));
  });
}

la_status la_targets_parse(const char* json, size_t len, const la_ingest_options* options,
                           la_targets** out) {
  return guarded([&] {
    require(json && out, "la_targets_parse: null argument");
    *out = make_targets(parse_targets_text({json, len}, ingest_options(options)));
  });
}

void la_targets_free(la_targets* targets) { delete targets; }
size_t la_targets_city_count(const la_targets* t) { return t ? t->cities.size() : 0; }
const char* la_targets_city(const la_targets* t, size_t i) {
  return t && i < t->cities.size() ? t->cities[i].c_str() : nullptr;
}

la_status la_pearson(const double* x, const double* y, size_t n, double* r) {
  return guarded([&] {
    require(x && y && r, "la_pearson: null argument");
    *r = pearson({x, n}, {y, n});
  });
}

la_status la_correlate(const la_dataset* dataset, const char* const* factors, size_t n_factors,
                       la_estimator estimator, la_correlations** out) {
  return guarded([&] {
    require(dataset && out, "la_correlate: null argument");
    require(n_factors == 0 || factors, "la_correlate: null factor list");
    require(estimator == LA_ESTIMATOR_PEARSON || estimator == LA_ESTIMATOR_SPEARMAN,
            "la_correlate: unknown estimator");
    std::vector<std::string> names;
    if (n_factors == 0) {
      names = {std::string(kUntestedColumn), std::string(kCoverageColumn)};
      for (auto& f : dataset->value.factor_names()) names.push_back(std::move(f));
    } else {
      for (size_t i = 0; i < n_factors; ++i) {
        require(factors[i] != nullptr, "la_correlate: null factor name");
        names.emplace_back(factors[i]);
      }
    }
    const auto est = estimator == LA_ESTIMATOR_SPEARMAN ? Estimator::Spearman : Estimator::Pearson;
    *out = new la_correlations{dataset->value.city().id, est,
                               correlate_factors(dataset->value, names, est)};
  });
}

void la_correlations_free(la_correlations* c) { delete c; }
size_t la_correlations_size(const la_correlations* c) { return c ? c->value.size() : 0; }
const char* la_correlations_factor(const la_correlations* c, size_t i) {
  return c && i < c->value.size() ? c->value[i].factor.c_str() : nullptr;
}
double la_correlations_r(const la_correlations* c, size_t i) {
  return c && i < c->value.size() ? c->value[i].r : 0.0;
}
size_t la_correlations_n(const la_correlations* c, size_t i) {
  return c && i < c->value.size() ? c->value[i].n : 0;
}

la_status la_correlations_to_json(const la_correlations* c, char** out) {
  return guarded([&] {
    require(c && out, "la_correlations_to_json: null argument");
    *out = dup_string(correlations_to_json(c->city, c->estimator, c->value));
  });
}

la_status la_derive_weights(double r, double alpha, la_weight_variant variant, int normalize,
                            la_weights* out) {
  return guarded([&] {
    require(out != nullptr, "la_derive_weights: null argument");
    const auto v = from_c(variant);
    require(v.has_value(), "la_derive_weights: unknown variant");
    *out = to_c(derive_weights(r, alpha, *v, normalize != 0));
  });
}

void la_score_options_init(la_score_options* o) {
  if (!o) return;
  o->alpha = kDefaultAlpha;
  o->variant = LA_VARIANT_TEXT;
  o->has_r_override = 0;
  o->r_override = 0.0;
  o->normalize_weights = 0;
}

la_status la_score(const la_dataset* dataset, const la_score_options* options, la_ranking** out) {
  return guarded([&] {
    require(dataset && out, "la_score: null argument");
    ScoringOptions opts;
    if (options) {
      const auto v = from_c(options->variant);
      require(v.has_value(), "la_score: unknown variant");
      opts.alpha = options->alpha;
      opts.variant = *v;
      if (options->has_r_override) opts.r_override = options->r_override;
      opts.normalize_weights = options->normalize_weights != 0;
    }
    auto ranking = score_city(dataset->value, opts);
    note_warnings(ranking.warnings());
    *out = new la_ranking{std::move(ranking)};
  });
}

la_status la_ranking_load(const char* path, la_ranking** out) {
  return guarded([&] {
    require(path && out, "la_ranking_load: null argument");
    *out = new la_ranking{ranking_from_json(read_file(path))};
  });
}

la_status la_ranking_parse(const char* json, size_t len, la_ranking** out) {
  return guarded([&] {
    require(json && out, "la_ranking_parse: null argument");
    *out = new la_ranking{ranking_from_json({json, len})};
  });
}

void la_ranking_free(la_ranking* ranking) { delete ranking; }
size_t la_ranking_size(const la_ranking* r) { return r ? r->value.size() : 0; }
const char* la_ranking_city(const la_ranking* r) { return r ? r->value.city().c_str() : ""; }

la_status la_ranking_entry(const la_ranking* r, size_t i, la_ranked_entry* out) {
  return guarded([&] {
    require(r && out && i < r->value.size(), "la_ranking_entry: index out of range");
    const auto& e = r->value.entries()[i];
    *out = {e.name.c_str(), e.display_name.c_str(), e.raw_score, e.scaled_score,
            e.prevalence, e.untested_pct, e.public_coverage_pct};
  });
}

la_status la_ranking_weights(const la_ranking* r, la_weights* out) {
  return guarded([&] {
    require(r && out, "la_ranking_weights: null argument");
    *out = to_c(r->value.weights());
  });
}

size_t la_ranking_warning_count(const la_ranking* r) { return r ? r->value.warnings().size() : 0; }
const char* la_ranking_warning(const la_ranking* r, size_t i) {
  return r && i < r->value.warnings().size() ? r->value.warnings()[i].c_str() : nullptr;
}

la_status la_ranking_to_json(const la_ranking* r, char** out) {
  return guarded([&] {
    require(r && out, "la_ranking_to_json: null argument");
    *out = dup_string(ranking_to_json(r->value));
  });
}

la_status la_ranking_top_k(const la_ranking* r, size_t k, const char** names, size_t capacity,
                           size_t* count) {
  return guarded([&] {
    require(r && count, "la_ranking_top_k: null argument");
    require(capacity == 0 || names, "la_ranking_top_k: null output array");
    const auto top = top_k(r->value, k);
    *count = top.size();
    for (size_t i = 0; i < top.size() && i < capacity; ++i) names[i] = r->value.entries()[i].name.c_str();
  });
}

void la_allocation_params_init(la_allocation_params* p) {
  if (!p) return;
  p->k = 3;
  p->floor = 0;
}

la_status la_allocate(const la_ranking* ranking, int64_t total_kits, la_strategy strategy,
                      const la_allocation_params* params, la_plan** out) {
  return guarded([&] {
    require(ranking && out, "la_allocate: null argument");
    AllocationStrategy s;
    switch (strategy) {
      case LA_STRATEGY_PROPORTIONAL: s = AllocationStrategy::Proportional; break;
      case LA_STRATEGY_TOP_K_EQUAL: s = AllocationStrategy::TopKEqual; break;
      case LA_STRATEGY_RANK_WEIGHTED: s = AllocationStrategy::RankWeighted; break;
      default: throw Error(ErrorCode::InvalidArgument, "la_allocate: unknown strategy");
    }
    AllocationParams p;
    if (params) {
      p.k = params->k;
      p.floor = params->floor;
    }
    auto plan = allocate(ranking->value, total_kits, s, p);
    note_warnings(plan.warnings());
    *out = new la_plan{std::move(plan)};
  });
}

void la_plan_free(la_plan* plan) { delete plan; }
size_t la_plan_size(const la_plan* p) { return p ? p->value.allocations().size() : 0; }
int64_t la_plan_total(const la_plan* p) { return p ? p->value.total_kits() : 0; }
const char* la_plan_method(const la_plan* p) { return p ? p->value.method().c_str() : ""; }

la_status la_plan_entry(const la_plan* p, size_t i, const char** name, const char** display_name,
                        int64_t* kits) {
  return guarded([&] {
    require(p && i < p->value.allocations().size(), "la_plan_entry: index out of range");
    const auto& a = p->value.allocations()[i];
    if (name) *name = a.name.c_str();
    if (display_name) *display_name = a.display_name.c_str();
    if (kits) *kits = a.kits;
  });
}

size_t la_plan_warning_count(const la_plan* p) { return p ? p->value.warnings().size() : 0; }
const char* la_plan_warning(const la_plan* p, size_t i) {
  return p && i < p->value.warnings().size() ? p->value.warnings()[i].c_str() : nullptr;
}

la_status la_plan_to_json(const la_plan* p, char** out) {
  return guarded([&] {
    require(p && out, "la_plan_to_json: null argument");
    *out = dup_string(plan_to_json(p->value));
  });
}

la_status la_evaluate(const la_runs* runs, const la_targets* targets, size_t k, la_report** out) {
  return guarded([&] {
    require(runs && targets && out, "la_evaluate: null argument");
    *out = new la_report{build_report(runs->value, targets->value, k)};
  });
}

void la_report_free(la_report* report) { delete report; }
size_t la_report_size(const la_report* r) { return r ? r->value.per_run.size() : 0; }

la_status la_report_run(const la_report* r, size_t i, la_run_accuracy* out) {
  return guarded([&] {
    require(r && out && i < r->value.per_run.size(), "la_report_run: index out of range");
    const auto& run = r->value.per_run[i];
    *out = {run.model.c_str(), run.mode.c_str(), run.total_hits, run.denominator};
  });
}

la_status la_report_city_hits(const la_report* r, size_t i, const char* city, int64_t* hits) {
  return guarded([&] {
    require(r && city && hits && i < r->value.per_run.size(), "la_report_city_hits: bad argument");
    const auto& per_city = r->value.per_run[i].hits_per_city;
    auto it = per_city.find(city);
    require(it != per_city.end(), "la_report_city_hits: city not in target set");
    *hits = it->second;
  });
}

void la_report_pooled(const la_report* r, int64_t* num, int64_t* den) {
  if (!r) return;
  if (num) *num = r->value.pooled.num;
  if (den) *den = r->value.pooled.den;
}

void la_report_per_run_mean(const la_report* r, int64_t* num, int64_t* den) {
  if (!r) return;
  if (num) *num = r->value.per_run_mean.num;
  if (den) *den = r->value.per_run_mean.den;
}

la_status la_report_to_json(const la_report* r, char** out) {
  return guarded([&] {
    require(r && out, "la_report_to_json: null argument");
    *out = dup_string(report_to_json(r->value));
  });
}

la_status la_format_truncated(int64_t num, int64_t den, int digits, char** out) {
  return guarded([&] {
    require(out != nullptr, "la_format_truncated: null argument");
    require(digits >= 0 && digits <= 18, "la_format_truncated: digits out of range");
    *out = dup_string(truncate_decimal({num, den}, digits));
  });
}

}  // extern "C"
