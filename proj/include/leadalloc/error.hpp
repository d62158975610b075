#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace leadalloc {

enum class ErrorCode {
  InvalidArgument,
  InvalidName,
  Validation,
  Io,
  UndefinedCorrelation,
  UnknownFactor,
  InsufficientData,
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::optional<std::size_t> row;  // 1-based line number for CSV input
  std::string location;            // JSON path or other locator, may be empty
  std::string message;
};

/// Ordered collection of errors and warnings gathered while validating input.
/// An input is accepted iff it carries no error-severity entries.
class ValidationReport {
public:
  void error(std::string message, std::optional<std::size_t> row = std::nullopt,
             std::string location = {});
  void warning(std::string message, std::optional<std::size_t> row = std::nullopt,
               std::string location = {});

  [[nodiscard]] bool accepted() const noexcept { return error_count() == 0; }
  [[nodiscard]] std::size_t error_count() const noexcept;
  [[nodiscard]] std::size_t warning_count() const noexcept;
  [[nodiscard]] const std::vector<Diagnostic>& entries() const noexcept { return entries_; }

  void merge(const ValidationReport& other);
  // Upgrades every warning to an error (strict mode).
  void escalate_warnings();

private:
  std::vector<Diagnostic> entries_;
};

std::string format_diagnostic(const Diagnostic& d);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);
  Error(ErrorCode code, const std::string& message, ValidationReport report);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

private:
  ErrorCode code_;
  ValidationReport report_;
};

}  // namespace leadalloc
