#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "leadalloc/error.hpp"
#include "leadalloc/model.hpp"
#include "leadalloc/names.hpp"

namespace leadalloc {

template <class T>
struct Parsed {
  T value;
  ValidationReport report;  // warnings only; errors are thrown
};

struct IngestOptions {
  bool strict = false;  // warnings become errors
  const AliasTable* aliases = nullptr;
  const CityRegistry* registry = nullptr;  // nullptr -> CityRegistry::defaults()
};

// Required CSV columns.
inline constexpr std::string_view kNeighborhoodColumn = "neighborhood";
inline constexpr std::string_view kPrevalenceColumn = "prevalence_per_1000";
inline constexpr std::string_view kUntestedColumn = "untested_pct";
inline constexpr std::string_view kCoverageColumn = "public_coverage_pct";

/// Parses a city dataset CSV.
///
/// Lines starting with '#' before the header are comments; a comment of the
/// form `# unit=fraction` declares percentage columns as 0-1 fractions, which
/// are converted to 0-100 on load. Rows with an empty required metric are
/// dropped with a warning. Any error throws Error(Validation) carrying the
/// full report with row numbers.
Parsed<CityDataset> parse_city_dataset_text(std::string_view text, std::string_view city,
                                            const IngestOptions& options = {});
Parsed<CityDataset> parse_city_dataset(const std::string& path, std::string_view city,
                                       const IngestOptions& options = {});

// Writes percentages in 0-100 form with round-trip precision.
std::string write_city_dataset_csv(const CityDataset& dataset);

Parsed<std::vector<ModelRun>> parse_model_runs_text(std::string_view text,
                                                    const IngestOptions& options = {});
Parsed<std::vector<ModelRun>> parse_model_runs(const std::string& path,
                                               const IngestOptions& options = {});

Parsed<TargetSet> parse_targets_text(std::string_view text, const IngestOptions& options = {});
Parsed<TargetSet> parse_targets(const std::string& path, const IngestOptions& options = {});

// Reads a whole file; throws Error(Io).
std::string read_file(const std::string& path);

}  // namespace leadalloc
