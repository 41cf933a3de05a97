#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "onticlab/config.hpp"

namespace onticlab {

inline constexpr const char* kVersion = "1.0.0";

using ReportCell = std::variant<long long, double, std::string>;

/// Tabular result of one experiment plus a metadata header.
struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<ReportCell>> rows;

  /// Value of a numeric cell (integers are widened).
  double number(std::size_t row, std::size_t col) const;
  std::size_t column(const std::string& name) const;
};

/// Runs the configured experiment. Throws ConfigError for invalid
/// configurations and NumericalError if a result is not finite.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// CSV: '#'-prefixed metadata lines, a header row, then data rows;
/// shortest round-trip decimals, LF endings. JSON: {metadata, columns, rows}.
std::string render(const ExperimentReport& report, OutputFormat format);

/// run_experiment, render, and write to cfg.output_path (stdout when empty).
/// Throws ConfigError(unwritable_path) if the file cannot be written.
ExperimentReport run(const ExperimentConfig& cfg);

} // namespace onticlab
