#include "leadalloc/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "leadalloc/error.hpp"
#include "leadalloc/stats.hpp"

namespace leadalloc {

namespace {

constexpr double kCorrelationSlack = 1e-12;
constexpr double kRestoreTolerance = 1e-12;

}  // namespace

WeightConfig derive_weights(double r, double alpha, WeightVariant variant, bool normalize) {
  if (!std::isfinite(alpha) || alpha <= 0.0 || alpha >= 1.0)
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in the open interval (0, 1)");
  if (!std::isfinite(r) || r < -1.0 - kCorrelationSlack || r > 1.0 + kCorrelationSlack)
    throw Error(ErrorCode::InvalidArgument, "correlation must lie in [-1, 1]");

  WeightConfig w;
  w.base_alpha_ = alpha;
  w.variant_ = variant;
  w.source_r_ = r;
  w.clamped_ = r < 0.0;
  const double rc = std::clamp(r, 0.0, 1.0);
  w.alpha_ = alpha;
  w.gamma_ = variant == WeightVariant::Text ? rc * (1.0 - alpha) : rc;
  w.beta_ = (1.0 - alpha) * (1.0 - w.gamma_);
  if (normalize) {
    const double sum = w.alpha_ + w.beta_ + w.gamma_;
    w.alpha_ /= sum;
    w.beta_ /= sum;
    w.gamma_ /= sum;
    w.normalized_ = true;
  }
  return w;
}

WeightConfig WeightConfig::restore(double base_alpha, WeightVariant variant, double source_r,
                                   bool normalized, double alpha, double beta, double gamma) {
  WeightConfig w = derive_weights(source_r, base_alpha, variant, normalized);
  auto close = [](double a, double b) { return std::abs(a - b) <= kRestoreTolerance; };
  if (!close(w.alpha_, alpha) || !close(w.beta_, beta) || !close(w.gamma_, gamma))
    throw Error(ErrorCode::Validation,
                "stored weights do not match the weights derived from alpha, variant and r");
  return w;
}

PriorityRanking score_city(const CityDataset& dataset, const ScoringOptions& options) {
  const auto& records = dataset.records();
  if (records.size() < 2)
    throw Error(ErrorCode::InsufficientData, "scoring needs at least 2 neighborhoods");

  const std::size_t n = records.size();
  std::vector<double> p(n);
  std::vector<double> u(n);
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = records[i].prevalence();
    u[i] = records[i].untested_pct();
    h[i] = records[i].public_coverage_pct();
  }

  std::vector<std::string> warnings;
  double r = 0.0;
  if (options.r_override) {
    r = *options.r_override;
  } else {
    try {
      r = pearson(h, p);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UndefinedCorrelation) throw;
      throw Error(ErrorCode::UndefinedCorrelation,
                  "correlation of public coverage with prevalence is undefined (zero variance); "
                  "supply an r override");
    }
  }

  const WeightConfig weights =
      derive_weights(r, options.alpha, options.variant, options.normalize_weights);
  if (weights.correlation_clamped())
    warnings.push_back("negative coverage correlation " + std::to_string(r) + " clamped to 0");

  const auto pn = min_max_normalize(p);
  const auto un = min_max_normalize(u);
  const auto hn = min_max_normalize(h);
  if (pn.degenerate) warnings.push_back("degenerate column prevalence_per_1000: all values equal");
  if (un.degenerate) warnings.push_back("degenerate column untested_pct: all values equal");
  if (hn.degenerate) warnings.push_back("degenerate column public_coverage_pct: all values equal");

  std::vector<RankedEntry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RankedEntry e;
    e.name = records[i].name();
    e.display_name = records[i].display_name();
    e.raw_score = weights.alpha() * pn.values[i] + weights.beta() * un.values[i] +
                  weights.gamma() * hn.values[i];
    e.prevalence = p[i];
    e.untested_pct = u[i];
    e.public_coverage_pct = h[i];
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(), ranks_before);

  const double max_raw = entries.front().raw_score;
  if (max_raw > 0.0) {
    for (auto& e : entries) e.scaled_score = kScaleTop * (e.raw_score / max_raw);
  } else {
    warnings.push_back("every priority score is zero; scaled scores left at 0");
  }
  return PriorityRanking(dataset.city().id, weights, std::move(entries), std::move(warnings));
}

std::vector<std::string> top_k(const PriorityRanking& ranking, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  const auto& entries = ranking.entries();
  const std::size_t m = std::min(k, entries.size());
  std::vector<std::string> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(entries[i].name);
  return out;
}

}  // namespace leadalloc
