#include "leadalloc/evaluation.hpp"

#include <algorithm>
#include <numeric>

#include <boost/rational.hpp>

#include "leadalloc/error.hpp"

namespace leadalloc {

Fraction Fraction::reduced() const {
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? *this : Fraction{num / g, den / g};
}

std::string Fraction::str() const { return std::to_string(num) + "/" + std::to_string(den); }

std::string truncate_decimal(Fraction f, int digits) {
  if (f.den <= 0 || f.num < 0)
    throw Error(ErrorCode::InvalidArgument, "truncate_decimal: expects a non-negative fraction");
  std::string out = std::to_string(f.num / f.den);
  std::int64_t rem = f.num % f.den;
  if (digits > 0) out.push_back('.');
  for (int i = 0; i < digits; ++i) {
    rem *= 10;
    out.push_back(static_cast<char>('0' + rem / f.den));
    rem %= f.den;
  }
  return out;
}

std::int64_t city_hits(std::span<const std::string> recommended, const std::set<std::string>& targets,
                       std::size_t k) {
  const std::size_t depth = std::min(k, recommended.size());
  std::set<std::string_view> hit;
  for (std::size_t i = 0; i < depth; ++i)
    if (targets.contains(recommended[i])) hit.insert(recommended[i]);
  return static_cast<std::int64_t>(hit.size());
}

RunAccuracy run_accuracy(const ModelRun& run, const TargetSet& targets, std::size_t k) {
  RunAccuracy acc;
  acc.model = run.model;
  acc.mode = run.mode;
  for (const auto& [city, names] : targets.per_city()) {
    std::int64_t hits = 0;
    if (auto it = run.per_city.find(city); it != run.per_city.end()) {
      std::vector<std::string> recommended;
      recommended.reserve(it->second.size());
      for (const auto& r : it->second) recommended.push_back(r.name);
      hits = city_hits(recommended, names, k);
    }
    acc.hits_per_city[city] = hits;
    acc.total_hits += hits;
    acc.denominator += static_cast<std::int64_t>(names.size());
  }
  return acc;
}

AccuracyReport build_report(std::span<const ModelRun> runs, const TargetSet& targets, std::size_t k) {
  if (runs.empty()) throw Error(ErrorCode::InvalidArgument, "no model runs to evaluate");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "evaluation depth k must be at least 1");

  AccuracyReport report;
  report.depth = k;
  std::int64_t hits = 0;
  std::int64_t denom = 0;
  boost::rational<std::int64_t> sum{0};
  for (const auto& run : runs) {
    auto acc = run_accuracy(run, targets, k);
    hits += acc.total_hits;
    denom += acc.denominator;
    sum += boost::rational<std::int64_t>(acc.total_hits, acc.denominator);
    report.per_run.push_back(std::move(acc));
  }
  report.pooled = {hits, denom};
  const auto mean = sum / static_cast<std::int64_t>(runs.size());
  report.per_run_mean = {mean.numerator(), mean.denominator()};
  return report;
}

}  // namespace leadalloc
