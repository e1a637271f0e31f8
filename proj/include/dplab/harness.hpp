#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dplab/config.hpp"
#include "dplab/verify.hpp"

namespace dplab {

struct GcResult {
  GcCurve curve;
  std::vector<Check> checks;
};

using ExperimentOutcome = std::variant<McSummary, GcResult, DensityStudy>;

struct ExperimentResult {
  ExperimentKind kind;
  ExperimentOutcome outcome;
  [[nodiscard]] bool pass() const;
};

struct RunReport {
  nlohmann::json config_echo;
  std::vector<ExperimentResult> results;
  double wall_clock_seconds = 0.0;
  std::vector<std::filesystem::path> manifest;

  [[nodiscard]] bool pass() const;
};

/// Runs the configured experiment family (or every family for `all`).
/// Deterministic given the config, independent of the thread count.
RunReport run_experiment(const ExperimentConfig& config);

enum class ReportFormat { kCsv, kJsonSummary };

/// Writes the report's tables and/or report.json into the configured
/// output directory and records every file in report.manifest.
void emit_report(RunReport& report, const std::filesystem::path& output_dir,
                 const std::vector<ReportFormat>& formats = {ReportFormat::kCsv,
                                                            ReportFormat::kJsonSummary});

nlohmann::json to_json(const RunReport& report);

}  // namespace dplab
