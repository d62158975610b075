#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "leadalloc/model.hpp"

namespace leadalloc {

inline constexpr std::size_t kDefaultDepth = 3;

/// Non-negative fraction kept as given (6/9 stays 6/9).
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  [[nodiscard]] Fraction reduced() const;
  [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  [[nodiscard]] std::string str() const;  // "6/9"
};

/// Decimal rendering truncated toward zero: 6/9 -> "0.66".
std::string truncate_decimal(Fraction f, int digits = 2);

struct RunAccuracy {
  std::string model;
  std::string mode;
  std::map<std::string, std::int64_t> hits_per_city;
  std::int64_t total_hits = 0;
  std::int64_t denominator = 0;

  [[nodiscard]] Fraction accuracy() const { return {total_hits, denominator}; }
  [[nodiscard]] std::string display() const { return truncate_decimal(accuracy()); }
};

struct AccuracyReport {
  std::size_t depth = kDefaultDepth;
  std::vector<RunAccuracy> per_run;
  Fraction pooled;       // sum hits / sum denominators
  Fraction per_run_mean; // arithmetic mean of per-run fractions, reduced
};

/// |first k recommendations ∩ targets|, duplicates counted once.
std::int64_t city_hits(std::span<const std::string> recommended, const std::set<std::string>& targets,
                       std::size_t k = kDefaultDepth);

RunAccuracy run_accuracy(const ModelRun& run, const TargetSet& targets, std::size_t k = kDefaultDepth);

AccuracyReport build_report(std::span<const ModelRun> runs, const TargetSet& targets,
                            std::size_t k = kDefaultDepth);

}  // namespace leadalloc
