#pragma once

#include <span>
#include <string>
#include <string_view>

#include "leadalloc/evaluation.hpp"
#include "leadalloc/model.hpp"
#include "leadalloc/stats.hpp"

// JSON documents emitted by the library and the CLI. Doubles are written in
// shortest round-trip form.
namespace leadalloc {

std::string correlations_to_json(std::string_view city, Estimator estimator,
                                 std::span<const CorrelationResult> results);

std::string ranking_to_json(const PriorityRanking& ranking);
PriorityRanking ranking_from_json(std::string_view text);

std::string plan_to_json(const AllocationPlan& plan);

std::string report_to_json(const AccuracyReport& report);

}  // namespace leadalloc
