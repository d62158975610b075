#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "leadalloc/model.hpp"

namespace leadalloc {

struct AllocationParams {
  std::size_t k = 3;          // top_k_equal only
  std::int64_t floor = 0;     // kits guaranteed to every entry before division
};

/// Apportions `total_kits` over the ranking. Proportional and rank-weighted
/// shares are integerized with the largest-remainder (Hamilton) method.
AllocationPlan allocate(const PriorityRanking& ranking, std::int64_t total_kits,
                        AllocationStrategy strategy, const AllocationParams& params = {});

/// Largest-remainder integerization of `total` over `weights`.
/// Equal remainders go to the lower index, so callers pass weights in
/// tie-break order.
std::vector<std::int64_t> largest_remainder(std::span<const double> weights, std::int64_t total);

}  // namespace leadalloc
