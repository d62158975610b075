#include "leadalloc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "leadalloc/error.hpp"
#include "leadalloc/ingest.hpp"

namespace leadalloc {

std::string_view to_string(Estimator e) { return e == Estimator::Spearman ? "spearman" : "pearson"; }

std::optional<Estimator> parse_estimator(std::string_view s) {
  if (s == "pearson") return Estimator::Pearson;
  if (s == "spearman") return Estimator::Spearman;
  return std::nullopt;
}

namespace {

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::InvalidArgument, "pearson: length mismatch (" + std::to_string(x.size()) +
                                                " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "pearson: need at least 2 samples");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw Error(ErrorCode::InvalidArgument, "pearson: non-finite input");
  if (constant(x) || constant(y))
    throw Error(ErrorCode::UndefinedCorrelation, "correlation undefined: zero variance");

  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::UndefinedCorrelation, "correlation undefined: zero variance");
  const double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  return std::clamp(r, -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

std::vector<CorrelationResult> correlate_factors(const CityDataset& dataset,
                                                 std::span<const std::string> factors,
                                                 Estimator estimator) {
  const auto extras = dataset.factor_names();
  std::vector<CorrelationResult> out;
  out.reserve(factors.size());
  for (const auto& f : factors) {
    const bool core = f == kPrevalenceColumn || f == kUntestedColumn || f == kCoverageColumn;
    if (!core && !std::binary_search(extras.begin(), extras.end(), f))
      throw Error(ErrorCode::UnknownFactor, "unknown factor \"" + f + "\"");

    std::vector<double> xs;
    std::vector<double> ps;
    for (const auto& rec : dataset.records()) {
      if (auto v = rec.factor(f)) {
        xs.push_back(*v);
        ps.push_back(rec.prevalence());
      }
    }
    if (xs.size() < 2)
      throw Error(ErrorCode::InsufficientData,
                  "factor \"" + f + "\" has fewer than 2 rows overlapping prevalence");
    double r = 0.0;
    try {
      r = estimator == Estimator::Spearman ? spearman(xs, ps) : pearson(xs, ps);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UndefinedCorrelation) throw;
      throw Error(ErrorCode::UndefinedCorrelation,
                  "correlation undefined for factor \"" + f + "\": zero variance");
    }
    out.push_back({f, r, xs.size()});
  }
  return out;
}

Normalized min_max_normalize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "min_max_normalize: empty input");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "min_max_normalize: non-finite input");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  Normalized out;
  out.values.resize(values.size(), 0.0);
  if (*lo == *hi) {
    out.degenerate = true;
    return out;
  }
  const double min = *lo;
  const double span = *hi - *lo;
  for (std::size_t i = 0; i < values.size(); ++i) out.values[i] = (values[i] - min) / span;
  return out;
}

}  // namespace leadalloc
