#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leadalloc/model.hpp"

namespace leadalloc {

enum class Estimator { Pearson, Spearman };

std::string_view to_string(Estimator e);
std::optional<Estimator> parse_estimator(std::string_view s);

struct CorrelationResult {
  std::string factor;
  double r = 0.0;
  std::size_t n = 0;
};

/// Pearson product-moment correlation, two-pass.
/// Throws InvalidArgument on length mismatch or n < 2, and
/// UndefinedCorrelation when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson on average ranks. Diagnostic only.
double spearman(std::span<const double> x, std::span<const double> y);

/// Correlates each factor column with prevalence over the rows where the
/// factor is present. Throws UnknownFactor / InsufficientData.
std::vector<CorrelationResult> correlate_factors(const CityDataset& dataset,
                                                 std::span<const std::string> factors,
                                                 Estimator estimator = Estimator::Pearson);

struct Normalized {
  std::vector<double> values;
  bool degenerate = false;  // every input equal, all outputs 0
};

/// Affine map onto [0, 1]: min -> 0, max -> 1.
Normalized min_max_normalize(std::span<const double> values);

}  // namespace leadalloc
