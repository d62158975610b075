#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "exact_oracle.hpp"
#include "leadalloc/error.hpp"
#include "leadalloc/stats.hpp"

using namespace leadalloc;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no leadalloc::Error thrown";
  return ErrorCode::InvalidArgument;
}

CityDataset dataset_from(const std::vector<double>& prevalence, const std::vector<double>& coverage,
                         std::map<std::string, std::vector<double>> extras = {}) {
  std::vector<NeighborhoodRecord> rows;
  for (std::size_t i = 0; i < prevalence.size(); ++i) {
    std::map<std::string, double> ex;
    for (const auto& [k, v] : extras) ex[k] = v[i];
    const std::string name = "area " + std::to_string(i);
    rows.emplace_back(name, name, prevalence[i], 10.0, coverage[i], ex);
  }
  return CityDataset(CityRegistry::defaults().at("chicago"), std::move(rows));
}

}  // namespace

TEST(Pearson, PerfectPositive) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_DOUBLE_EQ(pearson(x, x), 1.0);
}

TEST(Pearson, PerfectNegative) {
  const std::vector<double> x{1, 2, 3}, y{3, 2, 1};
  EXPECT_DOUBLE_EQ(pearson(x, y), -1.0);
}

TEST(Pearson, SmallExampleMatchesOracle) {
  const std::vector<double> x{1, 2, 3}, y{1, 2, 4};
  // Sxy = 3, Sxx = 2, Syy = 14/3  ->  r = 3 / sqrt(28/3)
  const double expected = oracle::pearson(x, y);
  EXPECT_NEAR(expected, 0.98198, 5e-6);
  EXPECT_NEAR(pearson(x, y), expected, 1e-15);
}

TEST(Pearson, RejectsBadInput) {
  const std::vector<double> a{1, 2, 3}, b{1, 2}, one{1}, flat{4, 4, 4};
  EXPECT_EQ(code_of([&] { (void)pearson(a, b); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { (void)pearson(one, one); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { (void)pearson(a, flat); }), ErrorCode::UndefinedCorrelation);
  EXPECT_EQ(code_of([&] { (void)pearson(flat, a); }), ErrorCode::UndefinedCorrelation);
}

TEST(Pearson, NearConstantStillComputes) {
  // Tiny but nonzero variance must not be mistaken for a constant column.
  const std::vector<double> x{1e8, 1e8 + 1, 1e8 + 2}, y{5, 6, 8};
  EXPECT_NEAR(pearson(x, y), oracle::pearson(x, y), 1e-12);
}

TEST(Pearson, RandomVectorsMatchOracle) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<std::size_t> len(2, 50);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = len(rng);
    const auto x = oracle::random_vector(rng, n);
    const auto y = oracle::random_vector(rng, n);
    const double r = pearson(x, y);
    worst = std::max(worst, std::abs(r - oracle::pearson(x, y)));
    ASSERT_LE(std::abs(r), 1.0);
    EXPECT_EQ(r, pearson(y, x));

    double a = coef(rng);
    if (a == 0.0) a = 1.0;
    const double b = coef(rng) * 10.0;
    std::vector<double> ax(n);
    for (std::size_t i = 0; i < n; ++i) ax[i] = a * x[i] + b;
    EXPECT_NEAR(pearson(ax, y), std::copysign(1.0, a) * r, 1e-12) << "trial " << trial;
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Spearman, UsesAverageRanks) {
  const std::vector<double> x{1, 2, 3, 4}, y{10, 20, 20, 40};
  // ranks y = 1, 2.5, 2.5, 4
  const std::vector<double> ry{1, 2.5, 2.5, 4};
  EXPECT_NEAR(spearman(x, y), oracle::pearson(x, ry), 1e-15);
  const std::vector<double> cubic{1, 8, 27, 64};
  EXPECT_DOUBLE_EQ(spearman(x, cubic), 1.0);
}

TEST(CorrelateFactors, RecoversConstructedCorrelation) {
  // y = r * x_hat + sqrt(1 - r^2) * z_hat with z orthogonal to x gives corr(x, y) = r exactly
  // in real arithmetic; the oracle confirms the rounded data.
  constexpr double target = 0.63;
  std::mt19937_64 rng(63);
  const std::size_t n = 40;
  auto x = oracle::random_vector(rng, n, 2.0, 30.0);
  auto z = oracle::random_vector(rng, n, -1.0, 1.0);
  auto center = [](std::vector<double>& v) {
    double m = 0;
    for (double e : v) m += e;
    m /= static_cast<double>(v.size());
    for (double& e : v) e -= m;
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  std::vector<double> xc = x;
  center(xc);
  center(z);
  const double proj = dot(z, xc) / dot(xc, xc);
  for (std::size_t i = 0; i < n; ++i) z[i] -= proj * xc[i];
  const double nx = std::sqrt(dot(xc, xc)), nz = std::sqrt(dot(z, z));
  std::vector<double> coverage(n);
  for (std::size_t i = 0; i < n; ++i)
    coverage[i] = 50.0 + 40.0 * (target * xc[i] / nx + std::sqrt(1 - target * target) * z[i] / nz);

  const auto data = dataset_from(x, coverage);
  const std::vector<std::string> factors{"public_coverage_pct"};
  const auto results = correlate_factors(data, factors);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].factor, "public_coverage_pct");
  EXPECT_EQ(results[0].n, n);
  EXPECT_NEAR(results[0].r, oracle::pearson(x, coverage), 1e-12);
  EXPECT_NEAR(results[0].r, target, 1e-9);
}

TEST(CorrelateFactors, PrevalenceWithItselfIsOne) {
  const std::vector<double> p{1, 4, 2, 8, 5};
  const auto data = dataset_from(p, {10, 20, 30, 40, 55});
  const std::vector<std::string> factors{"prevalence_per_1000"};
  EXPECT_NEAR(correlate_factors(data, factors)[0].r, 1.0, 1e-15);
}

TEST(CorrelateFactors, ConstantColumnIsUndefined) {
  const auto data = dataset_from({1, 2, 3}, {40, 40, 40});
  const std::vector<std::string> factors{"public_coverage_pct"};
  EXPECT_EQ(code_of([&] { (void)correlate_factors(data, factors); }), ErrorCode::UndefinedCorrelation);
}

TEST(CorrelateFactors, UnknownFactor) {
  const auto data = dataset_from({1, 2, 3}, {10, 40, 20});
  const std::vector<std::string> factors{"lead_service_lines"};
  EXPECT_EQ(code_of([&] { (void)correlate_factors(data, factors); }), ErrorCode::UnknownFactor);
}

TEST(CorrelateFactors, UsesOnlyRowsWithTheFactor) {
  auto data = dataset_from({1, 2, 3, 9}, {10, 20, 30, 40}, {{"housing_age", {1, 3, 2, 0}}});
  // Drop housing_age from the last row by rebuilding it without extras.
  std::vector<NeighborhoodRecord> rows = data.records();
  rows.back() = NeighborhoodRecord(rows.back().name(), rows.back().display_name(), 9, 10, 40);
  const CityDataset partial(data.city(), rows);
  const std::vector<std::string> factors{"housing_age"};
  const auto r = correlate_factors(partial, factors);
  const std::vector<double> px{1, 2, 3}, hx{1, 3, 2};
  EXPECT_EQ(r[0].n, 3u);
  EXPECT_NEAR(r[0].r, oracle::pearson(px, hx), 1e-15);
}

TEST(CorrelateFactors, InsufficientOverlap) {
  std::vector<NeighborhoodRecord> rows{
      NeighborhoodRecord("a", "a", 1, 10, 10, {{"f", 2.0}}),
      NeighborhoodRecord("b", "b", 2, 10, 20),
      NeighborhoodRecord("c", "c", 3, 10, 30),
  };
  const CityDataset data(CityRegistry::defaults().at("chicago"), rows);
  const std::vector<std::string> factors{"f"};
  EXPECT_EQ(code_of([&] { (void)correlate_factors(data, factors); }), ErrorCode::InsufficientData);
}

TEST(MinMax, Examples) {
  const std::vector<double> a{0, 5, 10};
  const auto na = min_max_normalize(a);
  EXPECT_FALSE(na.degenerate);
  EXPECT_EQ(na.values, (std::vector<double>{0.0, 0.5, 1.0}));

  const std::vector<double> flat{7, 7, 7};
  const auto nf = min_max_normalize(flat);
  EXPECT_TRUE(nf.degenerate);
  EXPECT_EQ(nf.values, (std::vector<double>{0.0, 0.0, 0.0}));

  const std::vector<double> b{2, 4, 8};
  const auto nb = min_max_normalize(b);
  EXPECT_EQ(nb.values[0], 0.0);
  EXPECT_NEAR(nb.values[1], 1.0 / 3.0, 1e-16);
  EXPECT_EQ(nb.values[2], 1.0);
}

TEST(MinMax, EmptyInputRejected) {
  const std::vector<double> none;
  EXPECT_THROW((void)min_max_normalize(none), Error);
}

TEST(MinMax, MatchesOracleAndIsAffineInvariant) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> len(2, 40);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_real_distribution<double> shift(-1000.0, 1000.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto v = oracle::random_vector(rng, len(rng), 0.0, 100.0);
    const auto got = min_max_normalize(v).values;
    const auto want = oracle::min_max(v);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-15);

    const double a = scale(rng), b = shift(rng);
    std::vector<double> t(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) t[i] = a * v[i] + b;
    const auto moved = min_max_normalize(t).values;
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(moved[i], got[i], 1e-12);
    EXPECT_EQ(*std::min_element(got.begin(), got.end()), 0.0);
    EXPECT_EQ(*std::max_element(got.begin(), got.end()), 1.0);
  }
}
