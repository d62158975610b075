#include "leadalloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "leadalloc/error.hpp"
#include "leadalloc/ingest.hpp"

namespace leadalloc {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, message);
}

bool is_zip(std::string_view s) {
  return s.size() == 5 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_percentage(double v) { return std::isfinite(v) && v >= 0.0 && v <= 100.0; }

}  // namespace

std::string_view to_string(UnitKind kind) {
  return kind == UnitKind::ZipCode ? "zip_code" : "named_area";
}

CityRegistry CityRegistry::defaults() {
  CityRegistry r;
  r.add({"chicago", "Chicago", 5.0, UnitKind::NamedArea});
  r.add({"nyc", "New York City", 5.0, UnitKind::NamedArea});
  r.add({"dc", "Washington, D.C.", 3.5, UnitKind::ZipCode});
  return r;
}

void CityRegistry::add(CityInfo info) {
  require(!info.id.empty(), "city id must be non-empty");
  require(std::isfinite(info.bll_threshold_ug_dl) && info.bll_threshold_ug_dl > 0.0,
          "BLL threshold must be positive");
  const std::string id = info.id;
  cities_.insert_or_assign(id, std::move(info));
}

const CityInfo* CityRegistry::find(std::string_view id) const {
  auto it = cities_.find(id);
  return it == cities_.end() ? nullptr : &it->second;
}

const CityInfo& CityRegistry::at(std::string_view id) const {
  if (const auto* c = find(id)) return *c;
  std::string known;
  for (const auto& [k, _] : cities_) known += (known.empty() ? "" : ", ") + k;
  throw Error(ErrorCode::InvalidArgument,
              "unknown city \"" + std::string(id) + "\" (known: " + known + ")");
}

std::vector<std::string> CityRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : cities_) out.push_back(k);
  return out;
}

NeighborhoodRecord::NeighborhoodRecord(std::string name, std::string display_name,
                                       double prevalence, double untested_pct,
                                       double public_coverage_pct,
                                       std::map<std::string, double> extra_factors)
    : name_(std::move(name)),
      display_name_(std::move(display_name)),
      prevalence_(prevalence),
      untested_pct_(untested_pct),
      public_coverage_pct_(public_coverage_pct),
      extra_factors_(std::move(extra_factors)) {
  require(!name_.empty(), "neighborhood name must be non-empty");
  if (display_name_.empty()) display_name_ = name_;
  require(std::isfinite(prevalence_) && prevalence_ >= 0.0,
          "prevalence must be a non-negative number (" + name_ + ")");
  require(is_percentage(untested_pct_), "percentage out of range [0,100]: untested_pct (" + name_ + ")");
  require(is_percentage(public_coverage_pct_),
          "percentage out of range [0,100]: public_coverage_pct (" + name_ + ")");
  for (const auto& [k, v] : extra_factors_)
    require(std::isfinite(v), "factor " + k + " must be finite (" + name_ + ")");
}

std::optional<double> NeighborhoodRecord::factor(std::string_view column) const {
  if (column == kPrevalenceColumn) return prevalence_;
  if (column == kUntestedColumn) return untested_pct_;
  if (column == kCoverageColumn) return public_coverage_pct_;
  if (auto it = extra_factors_.find(std::string(column)); it != extra_factors_.end())
    return it->second;
  return std::nullopt;
}

CityDataset::CityDataset(CityInfo city, std::vector<NeighborhoodRecord> records)
    : city_(std::move(city)), records_(std::move(records)) {
  require(!records_.empty(), "dataset for " + city_.id + " has no records");
  std::set<std::string_view> seen;
  for (const auto& r : records_) {
    require(seen.insert(r.name()).second, "duplicate neighborhood \"" + r.name() + "\"");
    if (city_.unit_kind == UnitKind::ZipCode)
      require(is_zip(r.name()), "\"" + r.name() + "\" is not a 5-digit ZIP code");
  }
}

const NeighborhoodRecord* CityDataset::find(std::string_view canonical_name) const {
  for (const auto& r : records_)
    if (r.name() == canonical_name) return &r;
  return nullptr;
}

std::vector<std::string> CityDataset::factor_names() const {
  std::set<std::string> names;
  for (const auto& r : records_)
    for (const auto& [k, _] : r.extra_factors()) names.insert(k);
  return {names.begin(), names.end()};
}

std::string_view to_string(WeightVariant v) {
  return v == WeightVariant::Algorithm ? "algorithm" : "text";
}

std::optional<WeightVariant> parse_weight_variant(std::string_view s) {
  if (s == "text") return WeightVariant::Text;
  if (s == "algorithm") return WeightVariant::Algorithm;
  return std::nullopt;
}

bool ranks_before(const RankedEntry& a, const RankedEntry& b) {
  if (a.raw_score != b.raw_score) return a.raw_score > b.raw_score;
  return a.name < b.name;
}

PriorityRanking::PriorityRanking(std::string city, WeightConfig weights,
                                 std::vector<RankedEntry> entries, std::vector<std::string> warnings)
    : city_(std::move(city)),
      weights_(weights),
      entries_(std::move(entries)),
      warnings_(std::move(warnings)) {
  require(!entries_.empty(), "ranking has no entries");
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    require(!e.name.empty(), "ranking entry without a name");
    require(seen.insert(e.name).second, "duplicate ranking entry \"" + e.name + "\"");
    require(std::isfinite(e.raw_score) && e.raw_score >= 0.0,
            "raw score must be a non-negative number (" + e.name + ")");
    require(std::isfinite(e.scaled_score) && e.scaled_score >= 0.0 && e.scaled_score <= kScaleTop,
            "scaled score out of range [0,10] (" + e.name + ")");
    if (i > 0) {
      require(!ranks_before(e, entries_[i - 1]), "ranking is not sorted at \"" + e.name + "\"");
      require(e.scaled_score <= entries_[i - 1].scaled_score,
              "scaled order differs from raw order at \"" + e.name + "\"");
    }
  }
  if (entries_.front().raw_score > 0.0)
    require(entries_.front().scaled_score == kScaleTop, "top scaled score must be exactly 10");
  else
    require(std::all_of(entries_.begin(), entries_.end(),
                        [](const RankedEntry& e) { return e.scaled_score == 0.0; }),
            "all-zero ranking must have zero scaled scores");
}

std::string_view to_string(AllocationStrategy s) {
  switch (s) {
    case AllocationStrategy::Proportional: return "proportional";
    case AllocationStrategy::TopKEqual: return "top_k_equal";
    case AllocationStrategy::RankWeighted: return "rank_weighted";
  }
  return "proportional";
}

std::optional<AllocationStrategy> parse_allocation_strategy(std::string_view s) {
  if (s == "proportional") return AllocationStrategy::Proportional;
  if (s == "top_k_equal") return AllocationStrategy::TopKEqual;
  if (s == "rank_weighted") return AllocationStrategy::RankWeighted;
  return std::nullopt;
}

AllocationPlan::AllocationPlan(std::string city, std::int64_t total_kits,
                               AllocationStrategy strategy, std::string method,
                               std::vector<Allocation> allocations,
                               std::vector<std::string> warnings)
    : city_(std::move(city)),
      total_kits_(total_kits),
      strategy_(strategy),
      method_(std::move(method)),
      allocations_(std::move(allocations)),
      warnings_(std::move(warnings)) {
  require(total_kits_ >= 1, "total kits must be a positive integer");
  std::int64_t sum = 0;
  for (const auto& a : allocations_) {
    require(a.kits >= 0, "negative kit count for \"" + a.name + "\"");
    sum += a.kits;
  }
  require(sum == total_kits_, "allocations sum to " + std::to_string(sum) + ", expected " +
                                  std::to_string(total_kits_));
}

bool operator==(const AllocationPlan& a, const AllocationPlan& b) {
  if (a.city_ != b.city_ || a.total_kits_ != b.total_kits_ || a.strategy_ != b.strategy_ ||
      a.allocations_.size() != b.allocations_.size())
    return false;
  for (std::size_t i = 0; i < a.allocations_.size(); ++i)
    if (a.allocations_[i].name != b.allocations_[i].name ||
        a.allocations_[i].kits != b.allocations_[i].kits)
      return false;
  return true;
}

std::string ModelRun::label() const {
  return mode.empty() ? model : model + " (" + mode + ")";
}

TargetSet::TargetSet(std::map<std::string, std::set<std::string>> per_city)
    : per_city_(std::move(per_city)) {
  require(!per_city_.empty(), "target set has no cities");
  for (const auto& [city, names] : per_city_) {
    require(!city.empty(), "target city id must be non-empty");
    require(!names.empty(), "target set for " + city + " is empty");
    for (const auto& n : names) require(!n.empty(), "empty target name in " + city);
  }
}

std::size_t TargetSet::total_size() const noexcept {
  return std::accumulate(per_city_.begin(), per_city_.end(), std::size_t{0},
                         [](std::size_t acc, const auto& kv) { return acc + kv.second.size(); });
}

}  // namespace leadalloc
