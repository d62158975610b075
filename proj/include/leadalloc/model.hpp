#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace leadalloc {

enum class UnitKind { NamedArea, ZipCode };

std::string_view to_string(UnitKind kind);

struct CityInfo {
  std::string id;
  std::string label;
  double bll_threshold_ug_dl = 5.0;
  UnitKind unit_kind = UnitKind::NamedArea;
};

/// Known cities. Ships with chicago, nyc and dc; callers may register more.
class CityRegistry {
public:
  static CityRegistry defaults();

  void add(CityInfo info);
  [[nodiscard]] const CityInfo* find(std::string_view id) const;
  [[nodiscard]] const CityInfo& at(std::string_view id) const;  // throws InvalidArgument
  [[nodiscard]] std::vector<std::string> ids() const;

private:
  std::map<std::string, CityInfo, std::less<>> cities_;
};

/// One neighborhood's metrics. `name` is canonical; `display_name` keeps the
/// spelling from the source file for reports.
class NeighborhoodRecord {
public:
  NeighborhoodRecord(std::string name, std::string display_name, double prevalence,
                     double untested_pct, double public_coverage_pct,
                     std::map<std::string, double> extra_factors = {});

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::string& display_name() const noexcept { return display_name_; }
  [[nodiscard]] double prevalence() const noexcept { return prevalence_; }
  [[nodiscard]] double untested_pct() const noexcept { return untested_pct_; }
  [[nodiscard]] double public_coverage_pct() const noexcept { return public_coverage_pct_; }
  [[nodiscard]] const std::map<std::string, double>& extra_factors() const noexcept {
    return extra_factors_;
  }

  // Core columns by CSV header name, then extra factors. nullopt if absent.
  [[nodiscard]] std::optional<double> factor(std::string_view column) const;

  friend bool operator==(const NeighborhoodRecord&, const NeighborhoodRecord&) = default;

private:
  std::string name_;
  std::string display_name_;
  double prevalence_;
  double untested_pct_;
  double public_coverage_pct_;
  std::map<std::string, double> extra_factors_;
};

class CityDataset {
public:
  CityDataset(CityInfo city, std::vector<NeighborhoodRecord> records);

  [[nodiscard]] const CityInfo& city() const noexcept { return city_; }
  [[nodiscard]] const std::vector<NeighborhoodRecord>& records() const noexcept { return records_; }
  [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
  [[nodiscard]] const NeighborhoodRecord* find(std::string_view canonical_name) const;

  // Extra factor names seen on any record, sorted.
  [[nodiscard]] std::vector<std::string> factor_names() const;

  friend bool operator==(const CityDataset& a, const CityDataset& b) {
    return a.city_.id == b.city_.id && a.records_ == b.records_;
  }

private:
  CityInfo city_;
  std::vector<NeighborhoodRecord> records_;
};

enum class WeightVariant {
  Text,       // gamma = r * (1 - alpha)
  Algorithm,  // gamma = r
};

std::string_view to_string(WeightVariant v);
std::optional<WeightVariant> parse_weight_variant(std::string_view s);

/// Priority Score weights together with the correlation they came from.
/// Built only through derive_weights() or WeightConfig::restore().
class WeightConfig {
public:
  // Effective alpha; differs from base_alpha() only when normalized.
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double base_alpha() const noexcept { return base_alpha_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] WeightVariant variant() const noexcept { return variant_; }
  [[nodiscard]] double source_correlation() const noexcept { return source_r_; }
  [[nodiscard]] bool correlation_clamped() const noexcept { return clamped_; }
  [[nodiscard]] bool normalized() const noexcept { return normalized_; }

  // Rebuilds a config from stored values (ranking files): re-derives from
  // base alpha, variant and r, then checks the stored weights agree.
  static WeightConfig restore(double base_alpha, WeightVariant variant, double source_r,
                              bool normalized, double alpha, double beta, double gamma);

private:
  friend WeightConfig derive_weights(double r, double alpha, WeightVariant variant,
                                     bool normalize);
  WeightConfig() = default;

  double base_alpha_ = 0.5;
  double alpha_ = 0.5;
  double beta_ = 0.0;
  double gamma_ = 0.0;
  WeightVariant variant_ = WeightVariant::Text;
  double source_r_ = 0.0;
  bool clamped_ = false;
  bool normalized_ = false;
};

// Score given to the top neighborhood of every non-degenerate ranking.
inline constexpr double kScaleTop = 10.0;

struct RankedEntry {
  std::string name;
  std::string display_name;
  double raw_score = 0.0;
  double scaled_score = 0.0;
  double prevalence = 0.0;
  double untested_pct = 0.0;
  double public_coverage_pct = 0.0;
};

/// Neighborhoods in descending raw-score order, name ascending on ties.
/// Scaled scores are 10 * raw / max_raw.
class PriorityRanking {
public:
  PriorityRanking(std::string city, WeightConfig weights, std::vector<RankedEntry> entries,
                  std::vector<std::string> warnings = {});

  [[nodiscard]] const std::string& city() const noexcept { return city_; }
  [[nodiscard]] const WeightConfig& weights() const noexcept { return weights_; }
  [[nodiscard]] const std::vector<RankedEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

private:
  std::string city_;
  WeightConfig weights_;
  std::vector<RankedEntry> entries_;
  std::vector<std::string> warnings_;
};

// Strict weak order used everywhere a ranking is sorted.
bool ranks_before(const RankedEntry& a, const RankedEntry& b);

enum class AllocationStrategy { Proportional, TopKEqual, RankWeighted };

std::string_view to_string(AllocationStrategy s);
std::optional<AllocationStrategy> parse_allocation_strategy(std::string_view s);

struct Allocation {
  std::string name;
  std::string display_name;
  std::int64_t kits = 0;
};

class AllocationPlan {
public:
  AllocationPlan(std::string city, std::int64_t total_kits, AllocationStrategy strategy,
                 std::string method, std::vector<Allocation> allocations,
                 std::vector<std::string> warnings = {});

  [[nodiscard]] const std::string& city() const noexcept { return city_; }
  [[nodiscard]] std::int64_t total_kits() const noexcept { return total_kits_; }
  [[nodiscard]] AllocationStrategy strategy() const noexcept { return strategy_; }
  [[nodiscard]] const std::string& method() const noexcept { return method_; }
  [[nodiscard]] const std::vector<Allocation>& allocations() const noexcept { return allocations_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  friend bool operator==(const AllocationPlan& a, const AllocationPlan& b);

private:
  std::string city_;
  std::int64_t total_kits_;
  AllocationStrategy strategy_;
  std::string method_;
  std::vector<Allocation> allocations_;
  std::vector<std::string> warnings_;
};

struct Recommendation {
  std::string name;
  std::string display_name;
  std::int64_t kits = 0;
};

/// A recorded allocation recommendation from an external model.
struct ModelRun {
  std::string model;
  std::string mode;
  std::map<std::string, std::vector<Recommendation>> per_city;  // rank 1 first

  [[nodiscard]] std::string label() const;  // "model (mode)"
};

class TargetSet {
public:
  explicit TargetSet(std::map<std::string, std::set<std::string>> per_city);

  [[nodiscard]] const std::map<std::string, std::set<std::string>>& per_city() const noexcept {
    return per_city_;
  }
  [[nodiscard]] std::size_t total_size() const noexcept;

private:
  std::map<std::string, std::set<std::string>> per_city_;
};

}  // namespace leadalloc
