// leadalloc command-line front end. Talks to the library only through the
// C API in leadalloc.h.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "leadalloc/leadalloc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Aliases = Handle<la_aliases, la_aliases_free>;
using Dataset = Handle<la_dataset, la_dataset_free>;
using Correlations = Handle<la_correlations, la_correlations_free>;
using Ranking = Handle<la_ranking, la_ranking_free>;
using Plan = Handle<la_plan, la_plan_free>;
using Runs = Handle<la_runs, la_runs_free>;
using Targets = Handle<la_targets, la_targets_free>;
using Report = Handle<la_report, la_report_free>;

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { la_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

// Thrown after a failed C call; carries the exit code.
struct Failure {
  int exit_code;
};

void print_diagnostics(bool include_errors) {
  for (size_t i = 0; i < la_diagnostic_count(); ++i) {
    const bool warning = la_diagnostic_severity(i) == LA_SEVERITY_WARNING;
    if (!warning && !include_errors) continue;
    std::string where;
    if (la_diagnostic_row(i) >= 0) where += fmt::format(" (row {})", la_diagnostic_row(i));
    if (*la_diagnostic_location(i)) where += fmt::format(" [{}]", la_diagnostic_location(i));
    fmt::print(stderr, "{}{}: {}\n", warning ? "warning" : "error", where, la_diagnostic_message(i));
  }
}

void check(la_status status) {
  if (status == LA_OK) {
    print_diagnostics(false);
    return;
  }
  // The message already lists error diagnostics; only warnings are added.
  fmt::print(stderr, "error: {}\n", la_last_error_message());
  print_diagnostics(false);
  throw Failure{status == LA_ERR_INTERNAL ? kExitInternal : kExitUsage};
}

void usage_error(const std::string& message) {
  fmt::print(stderr, "error: {}\n", message);
  throw Failure{kExitUsage};
}

Aliases load_aliases(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("LEADALLOC_ALIAS_FILE"); env && *env) path = env;
  }
  if (path.empty()) return nullptr;
  la_aliases* a = nullptr;
  check(la_aliases_load(path.c_str(), &a));
  return Aliases(a);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) usage_error("cannot write \"" + path + "\"");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

size_t name_width(size_t longest) { return std::max<size_t>(longest, 12); }

struct CommonInput {
  std::string aliases;
  bool strict = false;
  bool json = false;
};

struct CorrelateArgs {
  CommonInput common;
  std::string input;
  std::string city;
  std::string factors;
  std::string estimator = "pearson";
};

int run_correlate(const CorrelateArgs& a) {
  Aliases aliases = load_aliases(a.common.aliases);
  la_ingest_options opts{a.common.strict ? 1 : 0, aliases.get()};
  la_dataset* d = nullptr;
  check(la_dataset_load(a.input.c_str(), a.city.c_str(), &opts, &d));
  Dataset dataset(d);

  const auto names = split_csv(a.factors);
  std::vector<const char*> ptrs;
  for (const auto& n : names) ptrs.push_back(n.c_str());
  const la_estimator est = a.estimator == "spearman" ? LA_ESTIMATOR_SPEARMAN : LA_ESTIMATOR_PEARSON;
  la_correlations* c = nullptr;
  check(la_correlate(dataset.get(), ptrs.empty() ? nullptr : ptrs.data(), ptrs.size(), est, &c));
  Correlations corr(c);

  if (a.common.json) {
    OwnedString s;
    check(la_correlations_to_json(corr.get(), &s.p));
    fmt::print("{}", s.str());
    return kExitOk;
  }
  size_t longest = 6;
  for (size_t i = 0; i < la_correlations_size(corr.get()); ++i)
    longest = std::max(longest, std::string(la_correlations_factor(corr.get(), i)).size());
  const size_t w = name_width(longest);
  fmt::print("City: {}  estimator: {}  target: prevalence_per_1000\n", la_dataset_city(dataset.get()),
             a.estimator);
  fmt::print("{:<{}}  {:>6}  {:>4}\n", "Factor", w, "r", "n");
  for (size_t i = 0; i < la_correlations_size(corr.get()); ++i)
    fmt::print("{:<{}}  {:>6.2f}  {:>4}\n", la_correlations_factor(corr.get(), i), w,
               la_correlations_r(corr.get(), i), la_correlations_n(corr.get(), i));
  return kExitOk;
}

struct ScoreArgs {
  CommonInput common;
  std::string input;
  std::string city;
  double alpha = 0.5;
  std::string variant = "text";
  std::optional<double> r_override;
  bool normalize = false;
  std::string output;
};

void print_ranking(const la_ranking* ranking) {
  la_weights w{};
  check(la_ranking_weights(ranking, &w));
  fmt::print("City: {}  variant: {}  alpha={:.4f} beta={:.4f} gamma={:.4f}  r={:.4f}{}\n",
             la_ranking_city(ranking), w.variant == LA_VARIANT_ALGORITHM ? "algorithm" : "text", w.alpha,
             w.beta, w.gamma, w.source_correlation, w.normalized ? "  (normalized)" : "");
  const size_t n = la_ranking_size(ranking);
  size_t longest = 0;
  std::vector<la_ranked_entry> entries(n);
  for (size_t i = 0; i < n; ++i) {
    check(la_ranking_entry(ranking, i, &entries[i]));
    longest = std::max(longest, std::string(entries[i].display_name).size());
  }
  const size_t nw = name_width(longest);
  fmt::print("{:>4}  {:<{}}  {:>8}  {:>9}  {:>8}  {:>7}  {:>7}\n", "Rank", "Neighborhood", nw, "Raw PS",
             "Scaled PS", "P", "U", "H");
  for (size_t i = 0; i < n; ++i) {
    const auto& e = entries[i];
    fmt::print("{:>4}  {:<{}}  {:>8.4f}  {:>9.2f}  {:>8.2f}  {:>7.2f}  {:>7.2f}\n", i + 1, e.display_name,
               nw, e.raw_score, e.scaled_score, e.prevalence, e.untested_pct, e.public_coverage_pct);
  }
}

int run_score(const ScoreArgs& a) {
  Aliases aliases = load_aliases(a.common.aliases);
  la_ingest_options opts{a.common.strict ? 1 : 0, aliases.get()};
  la_dataset* d = nullptr;
  check(la_dataset_load(a.input.c_str(), a.city.c_str(), &opts, &d));
  Dataset dataset(d);

  la_score_options so;
  la_score_options_init(&so);
  so.alpha = a.alpha;
  so.variant = a.variant == "algorithm" ? LA_VARIANT_ALGORITHM : LA_VARIANT_TEXT;
  so.has_r_override = a.r_override.has_value() ? 1 : 0;
  so.r_override = a.r_override.value_or(0.0);
  so.normalize_weights = a.normalize ? 1 : 0;
  la_ranking* r = nullptr;
  check(la_score(dataset.get(), &so, &r));
  Ranking ranking(r);

  OwnedString json;
  check(la_ranking_to_json(ranking.get(), &json.p));
  if (!a.output.empty()) write_file(a.output, json.str());
  if (a.common.json)
    fmt::print("{}", json.str());
  else
    print_ranking(ranking.get());
  return kExitOk;
}

struct AllocateArgs {
  bool json = false;
  std::string ranking;
  long long kits = 1000;
  std::string strategy = "proportional";
  size_t k = 3;
  long long floor = 0;
  std::string output;
};

int run_allocate(const AllocateArgs& a) {
  la_ranking* r = nullptr;
  check(la_ranking_load(a.ranking.c_str(), &r));
  Ranking ranking(r);

  la_strategy strategy = LA_STRATEGY_PROPORTIONAL;
  if (a.strategy == "top_k_equal") strategy = LA_STRATEGY_TOP_K_EQUAL;
  else if (a.strategy == "rank_weighted") strategy = LA_STRATEGY_RANK_WEIGHTED;
  la_allocation_params params;
  la_allocation_params_init(&params);
  params.k = a.k;
  params.floor = a.floor;
  la_plan* p = nullptr;
  check(la_allocate(ranking.get(), a.kits, strategy, &params, &p));
  Plan plan(p);

  OwnedString json;
  check(la_plan_to_json(plan.get(), &json.p));
  if (!a.output.empty()) write_file(a.output, json.str());
  if (a.json) {
    fmt::print("{}", json.str());
    return kExitOk;
  }
  const size_t n = la_plan_size(plan.get());
  const int64_t total = la_plan_total(plan.get());
  size_t longest = 0;
  for (size_t i = 0; i < n; ++i) {
    const char* display = nullptr;
    check(la_plan_entry(plan.get(), i, nullptr, &display, nullptr));
    longest = std::max(longest, std::string(display).size());
  }
  const size_t nw = name_width(longest);
  fmt::print("City: {}  kits: {}  strategy: {}  method: {}\n", la_ranking_city(ranking.get()), total,
             a.strategy, la_plan_method(plan.get()));
  fmt::print("{:>4}  {:<{}}  {:>6}  {:>10}\n", "Rank", "Neighborhood", nw, "Kits", "Cumulative");
  int64_t cumulative = 0;
  for (size_t i = 0; i < n; ++i) {
    const char* display = nullptr;
    int64_t kits = 0;
    check(la_plan_entry(plan.get(), i, nullptr, &display, &kits));
    cumulative += kits;
    fmt::print("{:>4}  {:<{}}  {:>6}  {:>9.1f}%\n", i + 1, display, nw, kits,
               100.0 * static_cast<double>(cumulative) / static_cast<double>(total));
  }
  fmt::print("{:>4}  {:<{}}  {:>6}\n", "", "Total", nw, cumulative);
  return kExitOk;
}

struct EvaluateArgs {
  CommonInput common;
  std::string runs;
  std::string targets;
  size_t k = 3;
  std::string format = "table";
};

std::string truncated(int64_t num, int64_t den) {
  OwnedString s;
  check(la_format_truncated(num, den, 2, &s.p));
  return s.str();
}

int run_evaluate(const EvaluateArgs& a) {
  Aliases aliases = load_aliases(a.common.aliases);
  la_ingest_options opts{a.common.strict ? 1 : 0, aliases.get()};
  la_targets* t = nullptr;
  check(la_targets_load(a.targets.c_str(), &opts, &t));
  Targets targets(t);
  la_runs* r = nullptr;
  check(la_runs_load(a.runs.c_str(), &opts, &r));
  Runs runs(r);
  la_report* rep = nullptr;
  check(la_evaluate(runs.get(), targets.get(), a.k, &rep));
  Report report(rep);

  if (a.common.json || a.format == "json") {
    OwnedString s;
    check(la_report_to_json(report.get(), &s.p));
    fmt::print("{}", s.str());
    return kExitOk;
  }

  const size_t n = la_report_size(report.get());
  std::vector<la_run_accuracy> rows(n);
  std::vector<std::string> labels(n);
  size_t longest = 5;
  for (size_t i = 0; i < n; ++i) {
    check(la_report_run(report.get(), i, &rows[i]));
    labels[i] = *rows[i].mode ? fmt::format("{} ({})", rows[i].model, rows[i].mode) : rows[i].model;
    longest = std::max(longest, labels[i].size());
  }
  const size_t nw = std::max<size_t>(longest, 26);
  const size_t cities = la_targets_city_count(targets.get());

  fmt::print("Top-{} accuracy against target set\n", a.k);
  std::string header = fmt::format("{:<{}}", "Model", nw);
  for (size_t c = 0; c < cities; ++c) header += fmt::format("  {:>8}", la_targets_city(targets.get(), c));
  header += fmt::format("  {:>6}  {:>8}", "Hits", "Accuracy");
  fmt::print("{}\n", header);
  for (size_t i = 0; i < n; ++i) {
    std::string line = fmt::format("{:<{}}", labels[i], nw);
    for (size_t c = 0; c < cities; ++c) {
      int64_t hits = 0;
      check(la_report_city_hits(report.get(), i, la_targets_city(targets.get(), c), &hits));
      line += fmt::format("  {:>8}", hits);
    }
    line += fmt::format("  {:>6}  {:>8}", fmt::format("{}/{}", rows[i].total_hits, rows[i].denominator),
                        truncated(rows[i].total_hits, rows[i].denominator));
    fmt::print("{}\n", line);
  }
  int64_t num = 0;
  int64_t den = 1;
  la_report_pooled(report.get(), &num, &den);
  const size_t pad = nw + cities * 10;
  fmt::print("{:<{}}  {:>6}  {:>8}\n", "Overall (pooled)", pad, fmt::format("{}/{}", num, den),
             truncated(num, den));
  la_report_per_run_mean(report.get(), &num, &den);
  fmt::print("{:<{}}  {:>6}  {:>8}\n", "Mean of per-run accuracies", pad, fmt::format("{}/{}", num, den),
             truncated(num, den));
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonInput& c) {
  cmd->add_option("--aliases", c.aliases, "Alias table JSON (default: $LEADALLOC_ALIAS_FILE)");
  cmd->add_flag("--strict", c.strict, "Treat ingestion warnings as errors");
  cmd->add_flag("--json", c.json, "Emit machine-readable JSON");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighborhood lead-testing priority scores, kit allocation and recommendation audits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(la_version()));

  CorrelateArgs corr;
  auto* c = app.add_subcommand("correlate", "Correlate factor columns with lead prevalence");
  c->add_option("--input", corr.input, "City dataset CSV")->required();
  c->add_option("--city", corr.city, "City id (chicago, nyc, dc)")->required();
  c->add_option("--factors", corr.factors, "Comma-separated factor columns (default: all)");
  c->add_option("--estimator", corr.estimator, "pearson or spearman")
      ->check(CLI::IsMember({"pearson", "spearman"}));
  add_common(c, corr.common);

  ScoreArgs score;
  auto* s = app.add_subcommand("score", "Rank neighborhoods by Priority Score");
  s->add_option("--input", score.input, "City dataset CSV")->required();
  s->add_option("--city", score.city, "City id (chicago, nyc, dc)")->required();
  s->add_option("--alpha", score.alpha, "Prevalence weight in (0, 1)");
  s->add_option("--variant", score.variant, "Weight rule: text or algorithm")
      ->check(CLI::IsMember({"text", "algorithm"}));
  s->add_option("--r-override", score.r_override, "Use this coverage correlation instead of computing it");
  s->add_flag("--normalize-weights", score.normalize, "Rescale weights to sum to 1");
  s->add_option("--output", score.output, "Write the ranking JSON to this file");
  add_common(s, score.common);

  AllocateArgs alloc;
  auto* al = app.add_subcommand("allocate", "Apportion a kit budget over a ranking");
  al->add_option("--ranking", alloc.ranking, "Ranking JSON written by `score --output`")->required();
  al->add_option("--kits", alloc.kits, "Total kits");
  al->add_option("--strategy", alloc.strategy, "proportional, top_k_equal or rank_weighted")
      ->check(CLI::IsMember({"proportional", "top_k_equal", "rank_weighted"}));
  al->add_option("--k", alloc.k, "Neighborhoods served by top_k_equal");
  al->add_option("--floor", alloc.floor, "Kits guaranteed to every neighborhood");
  al->add_option("--output", alloc.output, "Write the plan JSON to this file");
  al->add_flag("--json", alloc.json, "Emit machine-readable JSON");

  EvaluateArgs eval;
  auto* e = app.add_subcommand("evaluate", "Score recorded model recommendations against targets");
  e->add_option("--runs", eval.runs, "Model-run JSON")->required();
  e->add_option("--targets", eval.targets, "Targets JSON")->required();
  e->add_option("--k", eval.k, "Evaluation depth");
  e->add_option("--format", eval.format, "table or json")->check(CLI::IsMember({"table", "json"}));
  add_common(e, eval.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (c->parsed()) return run_correlate(corr);
    if (s->parsed()) return run_score(score);
    if (al->parsed()) return run_allocate(alloc);
    if (e->parsed()) return run_evaluate(eval);
  } catch (const Failure& f) {
    return f.exit_code;
  } catch (const std::exception& ex) {
    fmt::print(stderr, "internal error: {}\n", ex.what());
    return kExitInternal;
  }
  return kExitInternal;
}
