#include "leadalloc/serialize.hpp"

#include "json.hpp"
#include "leadalloc/error.hpp"

namespace leadalloc {

namespace {

using ojson = nlohmann::ordered_json;

ojson strings(const std::vector<std::string>& v) {
  ojson out = ojson::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

std::string dump(const ojson& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string correlations_to_json(std::string_view city, Estimator estimator,
                                 std::span<const CorrelationResult> results) {
  ojson doc;
  doc["city"] = city;
  doc["estimator"] = to_string(estimator);
  doc["target"] = "prevalence_per_1000";
  ojson rows = ojson::array();
  for (const auto& r : results) rows.push_back({{"factor", r.factor}, {"r", r.r}, {"n", r.n}});
  doc["results"] = std::move(rows);
  return dump(doc);
}

std::string ranking_to_json(const PriorityRanking& ranking) {
  const auto& w = ranking.weights();
  ojson doc;
  doc["city"] = ranking.city();
  doc["weights"] = {{"variant", to_string(w.variant())},
                    {"base_alpha", w.base_alpha()},
                    {"alpha", w.alpha()},
                    {"beta", w.beta()},
                    {"gamma", w.gamma()},
                    {"source_correlation", w.source_correlation()},
                    {"correlation_clamped", w.correlation_clamped()},
                    {"normalized", w.normalized()}};
  ojson entries = ojson::array();
  std::size_t rank = 1;
  for (const auto& e : ranking.entries()) {
    entries.push_back({{"rank", rank++},
                       {"neighborhood", e.name},
                       {"display_name", e.display_name},
                       {"raw_score", e.raw_score},
                       {"scaled_score", e.scaled_score},
                       {"prevalence_per_1000", e.prevalence},
                       {"untested_pct", e.untested_pct},
                       {"public_coverage_pct", e.public_coverage_pct}});
  }
  doc["entries"] = std::move(entries);
  doc["warnings"] = strings(ranking.warnings());
  return dump(doc);
}

PriorityRanking ranking_from_json(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(ErrorCode::Validation, std::string("ranking file is not valid JSON: ") + e.what());
  }
  try {
    const auto& w = doc.at("weights");
    const auto variant = parse_weight_variant(w.at("variant").get<std::string>());
    if (!variant) throw Error(ErrorCode::Validation, "ranking file: unknown weight variant");
    const WeightConfig weights = WeightConfig::restore(
        w.at("base_alpha").get<double>(), *variant, w.at("source_correlation").get<double>(),
        w.at("normalized").get<bool>(), w.at("alpha").get<double>(), w.at("beta").get<double>(),
        w.at("gamma").get<double>());

    std::vector<RankedEntry> entries;
    for (const auto& e : doc.at("entries")) {
      RankedEntry r;
      r.name = e.at("neighborhood").get<std::string>();
      r.display_name = e.value("display_name", r.name);
      r.raw_score = e.at("raw_score").get<double>();
      r.scaled_score = e.at("scaled_score").get<double>();
      r.prevalence = e.value("prevalence_per_1000", 0.0);
      r.untested_pct = e.value("untested_pct", 0.0);
      r.public_coverage_pct = e.value("public_coverage_pct", 0.0);
      entries.push_back(std::move(r));
    }
    std::vector<std::string> warnings;
    if (doc.contains("warnings")) warnings = doc["warnings"].get<std::vector<std::string>>();
    return PriorityRanking(doc.at("city").get<std::string>(), weights, std::move(entries),
                           std::move(warnings));
  } catch (const ojson::exception& e) {
    throw Error(ErrorCode::Validation, std::string("ranking file: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::Validation, std::string("ranking file: ") + e.what());
  }
}

std::string plan_to_json(const AllocationPlan& plan) {
  ojson doc;
  doc["city"] = plan.city();
  doc["total_kits"] = plan.total_kits();
  doc["strategy"] = to_string(plan.strategy());
  doc["method"] = plan.method();
  ojson rows = ojson::array();
  for (const auto& a : plan.allocations())
    rows.push_back({{"neighborhood", a.name}, {"display_name", a.display_name}, {"kits", a.kits}});
  doc["allocations"] = std::move(rows);
  doc["warnings"] = strings(plan.warnings());
  return dump(doc);
}

std::string report_to_json(const AccuracyReport& report) {
  ojson doc;
  doc["k"] = report.depth;
  ojson runs = ojson::array();
  for (const auto& r : report.per_run) {
    ojson hits = ojson::object();
    for (const auto& [city, h] : r.hits_per_city) hits[city] = h;
    runs.push_back({{"model", r.model},
                    {"mode", r.mode},
                    {"hits_per_city", std::move(hits)},
                    {"total_hits", r.total_hits},
                    {"denominator", r.denominator},
                    {"accuracy_exact", r.accuracy().str()},
                    {"accuracy_display", r.display()}});
  }
  doc["runs"] = std::move(runs);
  doc["overall"] = {{"pooled_exact", report.pooled.str()},
                    {"pooled_display", truncate_decimal(report.pooled)},
                    {"per_run_mean_exact", report.per_run_mean.str()},
                    {"per_run_mean_display", truncate_decimal(report.per_run_mean)}};
  return dump(doc);
}

}  // namespace leadalloc
