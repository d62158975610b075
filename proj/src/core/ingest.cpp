#include "leadalloc/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace leadalloc {

namespace {

using nlohmann::json;

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct CsvDocument {
  std::vector<std::string> directives;  // '#' lines before the header, without the '#'
  std::vector<CsvRow> rows;             // header first
};

std::string_view trim_view(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  auto b = std::find_if(s.begin(), s.end(), not_space);
  auto e = std::find_if(s.rbegin(), std::make_reverse_iterator(b), not_space).base();
  return {b, static_cast<std::size_t>(e - b)};
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

// RFC 4180 style reader: comma delimiter, double-quoted fields, "" escapes,
// quoted fields may span lines. Blank lines are skipped.
CsvDocument read_csv(std::string_view text, ValidationReport& report) {
  CsvDocument doc;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::size_t i = 0;
  std::size_t line = 1;
  bool header_seen = false;
  while (i < text.size()) {
    if (!header_seen && text[i] == '#') {
      const auto eol = text.find('\n', i);
      const auto end = eol == std::string_view::npos ? text.size() : eol;
      doc.directives.emplace_back(trim_view(text.substr(i + 1, end - i - 1)));
      i = end == text.size() ? end : end + 1;
      ++line;
      continue;
    }
    CsvRow row;
    row.line = line;
    std::string field;
    bool in_quotes = false;
    bool after_quote = false;
    bool done = false;
    bool bad = false;
    while (!done) {
      if (i >= text.size()) {
        if (in_quotes) {
          report.error("unterminated quoted field", row.line);
          bad = true;
        }
        row.fields.push_back(std::move(field));
        break;
      }
      const char c = text[i++];
      if (in_quotes) {
        if (c == '"') {
          if (i < text.size() && text[i] == '"') {
            field.push_back('"');
            ++i;
          } else {
            in_quotes = false;
            after_quote = true;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
        }
        continue;
      }
      switch (c) {
        case ',':
          row.fields.push_back(std::move(field));
          field.clear();
          after_quote = false;
          break;
        case '\n':
          ++line;
          row.fields.push_back(std::move(field));
          done = true;
          break;
        case '\r':
          break;
        case '"':
          if (!after_quote && std::all_of(field.begin(), field.end(), [](char ch) { return ch == ' '; })) {
            field.clear();
            in_quotes = true;
          } else {
            report.error("stray quote character in field", row.line);
            bad = true;
          }
          break;
        default:
          if (after_quote && c != ' ' && c != '\t') {
            report.error("unexpected text after closing quote", row.line);
            bad = true;
          }
          if (!after_quote) field.push_back(c);
          break;
      }
    }
    const bool blank = row.fields.size() == 1 && trim_view(row.fields[0]).empty();
    if (!blank && !bad) {
      doc.rows.push_back(std::move(row));
      header_seen = true;
    }
  }
  return doc;
}

enum class NumberStatus { Ok, Empty, Invalid };

NumberStatus parse_number(std::string_view cell, double& out) {
  cell = trim_view(cell);
  if (cell.empty()) return NumberStatus::Empty;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || !std::isfinite(out)) return NumberStatus::Invalid;
  return NumberStatus::Ok;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos && trim_view(s).size() == s.size())
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool is_zip(std::string_view s) {
  return s.size() == 5 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

[[noreturn]] void reject(const std::string& what, ValidationReport report) {
  throw Error(ErrorCode::Validation, what, std::move(report));
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    ValidationReport report;
    report.error(std::string("malformed JSON: ") + e.what(), std::nullopt,
                 "byte " + std::to_string(e.byte));
    reject(what, std::move(report));
  }
}

const AliasTable& aliases_of(const IngestOptions& o) {
  return o.aliases ? *o.aliases : AliasTable::identity();
}

std::string city_key(std::string_view raw) { return lower_ascii(trim_view(raw)); }

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "error reading \"" + path + "\"");
  return ss.str();
}

Parsed<CityDataset> parse_city_dataset_text(std::string_view text, std::string_view city,
                                            const IngestOptions& options) {
  const CityRegistry fallback = CityRegistry::defaults();
  const CityInfo& info = (options.registry ? *options.registry : fallback).at(city);
  const AliasTable& aliases = aliases_of(options);

  ValidationReport report;
  CsvDocument doc = read_csv(text, report);

  bool fraction_units = false;
  for (const auto& d : doc.directives) {
    std::istringstream tokens(d);
    std::string tok;
    while (tokens >> tok) {
      const auto key = lower_ascii(tok);
      if (key == "unit=fraction") fraction_units = true;
      else if (key == "unit=percent") fraction_units = false;
      else if (key.starts_with("unit=")) report.error("unknown unit declaration \"" + tok + "\"", std::nullopt, "header");
    }
  }

  if (doc.rows.empty()) {
    report.error("empty file: no header row", std::nullopt, "file");
    reject("invalid city dataset", std::move(report));
  }

  const CsvRow& header = doc.rows.front();
  std::map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.fields.size(); ++c) {
    auto name = lower_ascii(trim_view(header.fields[c]));
    if (name.empty()) {
      report.error("empty column name at position " + std::to_string(c + 1), header.line);
      continue;
    }
    if (!column.emplace(name, c).second) report.error("duplicate column \"" + name + "\"", header.line);
  }
  for (auto required : {kNeighborhoodColumn, kPrevalenceColumn, kUntestedColumn, kCoverageColumn})
    if (!column.contains(std::string(required)))
      report.error("missing required column \"" + std::string(required) + "\"", header.line);
  if (!report.accepted()) reject("invalid city dataset", std::move(report));

  if (doc.rows.size() == 1) report.error("empty file: no data rows", header.line);

  std::vector<std::pair<std::string, std::size_t>> extras;
  for (const auto& [name, idx] : column) {
    if (name == kNeighborhoodColumn || name == kPrevalenceColumn || name == kUntestedColumn ||
        name == kCoverageColumn)
      continue;
    extras.emplace_back(name, idx);
  }

  std::vector<NeighborhoodRecord> records;
  std::map<std::string, std::size_t> first_seen;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const CsvRow& row = doc.rows[r];
    if (row.fields.size() != header.fields.size()) {
      report.error("expected " + std::to_string(header.fields.size()) + " fields, found " +
                       std::to_string(row.fields.size()),
                   row.line);
      continue;
    }
    const auto cell = [&](std::string_view col) -> const std::string& {
      return row.fields[column.at(std::string(col))];
    };

    const std::string display = trim_name(cell(kNeighborhoodColumn));
    std::string canonical;
    try {
      canonical = canonicalize_name(display, aliases);
    } catch (const Error& e) {
      report.error(e.what(), row.line, std::string(kNeighborhoodColumn));
      continue;
    }
    if (info.unit_kind == UnitKind::ZipCode && !is_zip(canonical)) {
      report.error("\"" + display + "\" is not a 5-digit ZIP code", row.line, std::string(kNeighborhoodColumn));
      continue;
    }
    if (auto [it, inserted] = first_seen.emplace(canonical, row.line); !inserted) {
      report.error("duplicate neighborhood \"" + canonical + "\" (first seen at row " +
                       std::to_string(it->second) + ")",
                   row.line, std::string(kNeighborhoodColumn));
      continue;
    }

    bool row_ok = true;
    bool missing = false;
    double metric[3] = {0.0, 0.0, 0.0};
    const std::string_view metric_cols[3] = {kPrevalenceColumn, kUntestedColumn, kCoverageColumn};
    for (int m = 0; m < 3; ++m) {
      const auto col = std::string(metric_cols[m]);
      switch (parse_number(cell(col), metric[m])) {
        case NumberStatus::Empty:
          report.warning("missing value in column \"" + col + "\"; row excluded from scoring", row.line, col);
          missing = true;
          continue;
        case NumberStatus::Invalid:
          report.error("non-numeric value \"" + std::string(trim_view(cell(col))) + "\" in column \"" + col + "\"",
                       row.line, col);
          row_ok = false;
          continue;
        case NumberStatus::Ok:
          break;
      }
      if (m == 0) {
        if (metric[m] < 0.0) {
          report.error("prevalence must be non-negative", row.line, col);
          row_ok = false;
        }
      } else if (fraction_units) {
        if (metric[m] < 0.0 || metric[m] > 1.0) {
          report.error("percentage out of range [0,1] (unit=fraction)", row.line, col);
          row_ok = false;
        }
        metric[m] *= 100.0;
      } else if (metric[m] < 0.0 || metric[m] > 100.0) {
        report.error("percentage out of range [0,100]", row.line, col);
        row_ok = false;
      }
    }

    std::map<std::string, double> factors;
    for (const auto& [name, idx] : extras) {
      double v = 0.0;
      switch (parse_number(row.fields[idx], v)) {
        case NumberStatus::Empty:
          break;
        case NumberStatus::Invalid:
          report.error("non-numeric value \"" + std::string(trim_view(row.fields[idx])) + "\" in column \"" + name + "\"",
                       row.line, name);
          row_ok = false;
          break;
        case NumberStatus::Ok:
          factors.emplace(name, v);
          break;
      }
    }
    if (!row_ok || missing) continue;
    records.emplace_back(canonical, display, metric[0], metric[1], metric[2], std::move(factors));
  }

  if (options.strict) report.escalate_warnings();
  if (report.accepted() && records.empty())
    report.error("no usable records after excluding incomplete rows", std::nullopt, "file");
  if (!report.accepted()) reject("invalid city dataset", std::move(report));
  return {CityDataset(info, std::move(records)), std::move(report)};
}

Parsed<CityDataset> parse_city_dataset(const std::string& path, std::string_view city,
                                       const IngestOptions& options) {
  return parse_city_dataset_text(read_file(path), city, options);
}

std::string write_city_dataset_csv(const CityDataset& dataset) {
  const auto extras = dataset.factor_names();
  std::string out = "neighborhood,prevalence_per_1000,untested_pct,public_coverage_pct";
  for (const auto& e : extras) out += "," + csv_quote(e);
  out += "\n";
  for (const auto& r : dataset.records()) {
    out += csv_quote(r.display_name());
    out += "," + format_double(r.prevalence());
    out += "," + format_double(r.untested_pct());
    out += "," + format_double(r.public_coverage_pct());
    for (const auto& e : extras) {
      out += ",";
      if (auto it = r.extra_factors().find(e); it != r.extra_factors().end())
        out += format_double(it->second);
    }
    out += "\n";
  }
  return out;
}

Parsed<std::vector<ModelRun>> parse_model_runs_text(std::string_view text,
                                                    const IngestOptions& options) {
  const json doc = parse_json(text, "invalid model-run file");
  const AliasTable& aliases = aliases_of(options);
  ValidationReport report;

  if (!doc.is_object() || !doc.contains("runs") || !doc["runs"].is_array()) {
    report.error("document must be an object with a \"runs\" array", std::nullopt, "$");
    reject("invalid model-run file", std::move(report));
  }

  std::vector<ModelRun> runs;
  const auto& list = doc["runs"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = "runs[" + std::to_string(i) + "]";
    const auto& item = list[i];
    if (!item.is_object()) {
      report.error("run must be an object", std::nullopt, at);
      continue;
    }
    ModelRun run;
    bool ok = true;
    for (const char* field : {"model", "mode"}) {
      if (!item.contains(field) || !item[field].is_string()) {
        report.error(std::string("missing or non-string \"") + field + "\" field", std::nullopt, at);
        ok = false;
      }
    }
    if (ok) {
      run.model = std::string(trim_view(item["model"].get<std::string>()));
      run.mode = std::string(trim_view(item["mode"].get<std::string>()));
      if (run.model.empty()) {
        report.error("\"model\" must be non-empty", std::nullopt, at + ".model");
        ok = false;
      }
    }
    if (!item.contains("cities") || !item["cities"].is_object()) {
      report.error("missing \"cities\" object", std::nullopt, at);
      continue;
    }
    for (const auto& [raw_city, recs] : item["cities"].items()) {
      const std::string city = city_key(raw_city);
      const std::string cat = at + ".cities." + raw_city;
      if (city.empty()) {
        report.error("empty city id", std::nullopt, cat);
        ok = false;
        continue;
      }
      if (!recs.is_array()) {
        report.error("city recommendations must be an array", std::nullopt, cat);
        ok = false;
        continue;
      }
      if (recs.empty()) report.warning("no recommendations for city \"" + city + "\"", std::nullopt, cat);
      auto& out = run.per_city[city];
      for (std::size_t j = 0; j < recs.size(); ++j) {
        const std::string rat = cat + "[" + std::to_string(j) + "]";
        const auto& rec = recs[j];
        if (!rec.is_object() || !rec.contains("neighborhood") || !rec["neighborhood"].is_string()) {
          report.error("recommendation needs a string \"neighborhood\"", std::nullopt, rat);
          ok = false;
          continue;
        }
        if (!rec.contains("kits") || !rec["kits"].is_number_integer()) {
          report.error("recommendation needs an integer \"kits\"", std::nullopt, rat + ".kits");
          ok = false;
          continue;
        }
        const auto kits = rec["kits"].get<std::int64_t>();
        if (kits < 0) {
          report.error("negative kits (" + std::to_string(kits) + ")", std::nullopt, rat + ".kits");
          ok = false;
          continue;
        }
        const auto display = trim_name(rec["neighborhood"].get<std::string>());
        try {
          out.push_back({canonicalize_name(display, aliases), display, kits});
        } catch (const Error& e) {
          report.error(e.what(), std::nullopt, rat + ".neighborhood");
          ok = false;
        }
      }
    }
    if (ok) runs.push_back(std::move(run));
  }
  if (options.strict) report.escalate_warnings();
  if (!report.accepted()) reject("invalid model-run file", std::move(report));
  return {std::move(runs), std::move(report)};
}

Parsed<std::vector<ModelRun>> parse_model_runs(const std::string& path, const IngestOptions& options) {
  return parse_model_runs_text(read_file(path), options);
}

Parsed<TargetSet> parse_targets_text(std::string_view text, const IngestOptions& options) {
  const json doc = parse_json(text, "invalid targets file");
  const AliasTable& aliases = aliases_of(options);
  ValidationReport report;
  if (!doc.is_object() || doc.empty()) {
    report.error("targets must be a non-empty object of city -> names", std::nullopt, "$");
    reject("invalid targets file", std::move(report));
  }
  std::map<std::string, std::set<std::string>> per_city;
  for (const auto& [raw_city, list] : doc.items()) {
    const std::string city = city_key(raw_city);
    if (city.empty()) {
      report.error("empty city id", std::nullopt, raw_city);
      continue;
    }
    if (!list.is_array()) {
      report.error("target list must be an array", std::nullopt, raw_city);
      continue;
    }
    if (list.empty()) {
      report.error("empty target set for city \"" + city + "\"", std::nullopt, raw_city);
      continue;
    }
    if (per_city.contains(city)) {
      report.error("city \"" + city + "\" listed twice", std::nullopt, raw_city);
      continue;
    }
    auto& names = per_city[city];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = raw_city + "[" + std::to_string(i) + "]";
      if (!list[i].is_string()) {
        report.error("target must be a string", std::nullopt, at);
        continue;
      }
      try {
        auto name = canonicalize_name(list[i].get<std::string>(), aliases);
        if (!names.insert(name).second)
          report.error("duplicate target \"" + name + "\" for city \"" + city + "\"", std::nullopt, at);
      } catch (const Error& e) {
        report.error(e.what(), std::nullopt, at);
      }
    }
  }
  if (!report.accepted()) reject("invalid targets file", std::move(report));
  return {TargetSet(std::move(per_city)), std::move(report)};
}

Parsed<TargetSet> parse_targets(const std::string& path, const IngestOptions& options) {
  return parse_targets_text(read_file(path), options);
}

}  // namespace leadalloc
