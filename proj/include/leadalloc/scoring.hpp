#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "leadalloc/model.hpp"

namespace leadalloc {

inline constexpr double kDefaultAlpha = 0.5;

/// Derives beta and gamma from the coverage/prevalence correlation.
///
/// r is clamped to [0, 1] first. Text variant: gamma = r * (1 - alpha).
/// Algorithm variant: gamma = r. Both: beta = (1 - alpha) * (1 - gamma).
/// With `normalize`, all three weights are rescaled to sum to 1.
WeightConfig derive_weights(double r, double alpha, WeightVariant variant, bool normalize = false);

struct ScoringOptions {
  double alpha = kDefaultAlpha;
  WeightVariant variant = WeightVariant::Text;
  std::optional<double> r_override;
  bool normalize_weights = false;
};

/// Min-max normalizes P, U and H within the city, applies the weighted sum
/// and sorts. The coverage correlation is taken from the dataset unless
/// overridden.
PriorityRanking score_city(const CityDataset& dataset, const ScoringOptions& options = {});

std::vector<std::string> top_k(const PriorityRanking& ranking, std::size_t k);

}  // namespace leadalloc
