#pragma once

// Small builders shared by the unit tests.

#include <random>
#include <string>
#include <vector>

#include "leadalloc/error.hpp"
#include "leadalloc/model.hpp"

namespace fixtures {

struct Row {
  std::string name;
  double p;
  double u;
  double h;
};

inline leadalloc::CityDataset make_dataset(const std::vector<Row>& rows,
                                           const std::string& city = "chicago") {
  std::vector<leadalloc::NeighborhoodRecord> records;
  for (const auto& r : rows) records.emplace_back(r.name, r.name, r.p, r.u, r.h);
  return leadalloc::CityDataset(leadalloc::CityRegistry::defaults().at(city), std::move(records));
}

// Random named-area dataset with n rows; names are unique.
inline leadalloc::CityDataset random_dataset(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> p(0.0, 40.0);
  std::uniform_real_distribution<double> pct(0.0, 30.0);
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i)
    rows.push_back({"n" + std::to_string(1000 + i), p(rng), pct(rng), pct(rng)});
  return make_dataset(rows);
}

template <class Fn>
leadalloc::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const leadalloc::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected leadalloc::Error");
}

}  // namespace fixtures
