#include "leadalloc/error.hpp"

#include <algorithm>

namespace leadalloc {

void ValidationReport::error(std::string message, std::optional<std::size_t> row,
                             std::string location) {
  entries_.push_back({Severity::Error, row, std::move(location), std::move(message)});
}

void ValidationReport::warning(std::string message, std::optional<std::size_t> row,
                               std::string location) {
  entries_.push_back({Severity::Warning, row, std::move(location), std::move(message)});
}

std::size_t ValidationReport::error_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const auto& d) {
    return d.severity == Severity::Error;
  }));
}

std::size_t ValidationReport::warning_count() const noexcept {
  return entries_.size() - error_count();
}

void ValidationReport::merge(const ValidationReport& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

void ValidationReport::escalate_warnings() {
  for (auto& d : entries_) d.severity = Severity::Error;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error" : "warning";
  if (d.row) out += " (row " + std::to_string(*d.row) + ")";
  if (!d.location.empty()) out += " [" + d.location + "]";
  out += ": ";
  out += d.message;
  return out;
}

namespace {

std::string summarize(const std::string& message, const ValidationReport& report) {
  std::string out = message;
  for (const auto& d : report.entries()) {
    if (d.severity != Severity::Error) continue;
    out += "\n  " + format_diagnostic(d);
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Error::Error(ErrorCode code, const std::string& message, ValidationReport report)
    : std::runtime_error(summarize(message, report)), code_(code), report_(std::move(report)) {}

}  // namespace leadalloc
