#include "leadalloc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "leadalloc/error.hpp"

namespace leadalloc {

std::vector<std::int64_t> largest_remainder(std::span<const double> weights, std::int64_t total) {
  if (weights.empty()) throw Error(ErrorCode::InvalidArgument, "largest_remainder: no weights");
  if (total < 0) throw Error(ErrorCode::InvalidArgument, "largest_remainder: negative total");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw Error(ErrorCode::InvalidArgument, "largest_remainder: weights must be finite and >= 0");
    sum += w;
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::InvalidArgument, "largest_remainder: weights sum to zero");

  const std::size_t n = weights.size();
  const auto budget = static_cast<double>(total);
  std::vector<std::int64_t> seats(n, 0);
  // Remainders are compared on a 1e-9 grid so that shares which tie exactly
  // (equal weights, or rational weights like 2/7 and 4/14) are not split by
  // rounding noise; tied entries then fall back to index order.
  std::vector<std::int64_t> remainder(n, 0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double quota = budget * (weights[i] / sum);
    if (const double near = std::round(quota); std::abs(quota - near) < 1e-9) quota = near;
    const double whole = std::floor(quota);
    seats[i] = static_cast<std::int64_t>(whole);
    remainder[i] = std::llround((quota - whole) * 1e9);
    assigned += seats[i];
  }
  // Rounding in the quotas can overshoot by a unit; take it back from the
  // smallest remainders.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (auto it = order.rbegin(); assigned > total && it != order.rend(); ++it) {
    if (seats[*it] > 0) {
      --seats[*it];
      --assigned;
    }
  }
  for (std::size_t j = 0; assigned < total; j = (j + 1) % n) {
    ++seats[order[j]];
    ++assigned;
  }
  return seats;
}

AllocationPlan allocate(const PriorityRanking& ranking, std::int64_t total_kits,
                        AllocationStrategy strategy, const AllocationParams& params) {
  if (total_kits < 1) throw Error(ErrorCode::InvalidArgument, "total kits must be a positive integer");
  if (params.floor < 0) throw Error(ErrorCode::InvalidArgument, "floor must be non-negative");

  const auto& entries = ranking.entries();
  const auto n = static_cast<std::int64_t>(entries.size());
  if (params.floor > 0 && params.floor > total_kits / n)
    throw Error(ErrorCode::InvalidArgument,
                "floor of " + std::to_string(params.floor) + " kits for " + std::to_string(n) +
                    " neighborhoods exceeds the budget of " + std::to_string(total_kits));
  const std::int64_t divisible = total_kits - params.floor * n;

  std::vector<std::string> warnings;
  std::vector<std::int64_t> share(entries.size(), 0);
  std::string method;

  switch (strategy) {
    case AllocationStrategy::Proportional: {
      std::vector<double> scores;
      scores.reserve(entries.size());
      for (const auto& e : entries) scores.push_back(e.raw_score);
      if (std::all_of(scores.begin(), scores.end(), [](double s) { return s == 0.0; }))
        throw Error(ErrorCode::InvalidArgument,
                    "proportional allocation needs at least one positive priority score");
      share = largest_remainder(scores, divisible);
      method = "largest_remainder";
      break;
    }
    case AllocationStrategy::RankWeighted: {
      std::vector<double> w(entries.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / static_cast<double>(i + 1);
      share = largest_remainder(w, divisible);
      method = "largest_remainder";
      break;
    }
    case AllocationStrategy::TopKEqual: {
      if (params.k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
      std::size_t k = params.k;
      if (k > entries.size()) {
        warnings.push_back("k = " + std::to_string(k) + " exceeds the " +
                           std::to_string(entries.size()) + " ranked neighborhoods; truncated");
        k = entries.size();
      }
      const auto kk = static_cast<std::int64_t>(k);
      for (std::size_t i = 0; i < k; ++i)
        share[i] = divisible / kk + (static_cast<std::int64_t>(i) < divisible % kk ? 1 : 0);
      method = "even_split";
      break;
    }
  }
  if (params.floor > 0) method += "+floor:" + std::to_string(params.floor);

  std::vector<Allocation> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i)
    out.push_back({entries[i].name, entries[i].display_name, params.floor + share[i]});
  return AllocationPlan(ranking.city(), total_kits, strategy, std::move(method), std::move(out),
                        std::move(warnings));
}

}  // namespace leadalloc
