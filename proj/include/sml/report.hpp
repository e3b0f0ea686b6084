#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sml/experiment.hpp"

namespace sml {

enum class ReportFormat { kJson, kCsv };

ReportFormat parse_report_format(std::string_view name);

/// JSON object with one {mean, std} entry per metric, the configuration echo
/// and per-fold arrays. Reals are printed with 6 decimals.
std::string report_to_json(const ExperimentConfig& config, const ExperimentResult& result);

/// Header, one row per fold, then the mean and std rows.
std::string report_to_csv(const ExperimentResult& result);

void emit_report(const ExperimentConfig& config, const ExperimentResult& result,
                 const std::filesystem::path& path, ReportFormat format);

struct ParsedReport {
  ExperimentConfig config;
  ExperimentResult result;
};

/// Inverse of report_to_json; worker count is not part of the report.
ParsedReport parse_report_json(std::string_view text);

}  // namespace sml
