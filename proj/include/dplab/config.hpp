#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dplab/base_measure.hpp"
#include "dplab/borel_set.hpp"
#include "dplab/dp.hpp"
#include "dplab/limit.hpp"
#include "dplab/verify.hpp"

namespace dplab {

inline constexpr int kSchemaVersion = 1;

/// Config rejected before any sampling. `path()` is a JSON-pointer-like
/// location such as "$.base_measure.rate".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class ExperimentKind { kMoments, kFidi, kModulus, kGc, kQuantile, kDensity, kPosterior, kAll };

std::string to_string(ExperimentKind kind);
/// Families in run order for `all`.
const std::vector<ExperimentKind>& experiment_families();

struct GridSpec {
  double lower = -2.0;
  double upper = 2.0;
  std::size_t points = 11;
};

/// Parsed config. Unset optionals take per-experiment defaults at run time.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kMoments;
  std::optional<double> a;
  std::optional<std::vector<double>> a_values;
  std::optional<BaseFamily> base_measure;
  std::optional<std::vector<BorelSet>> sets;
  std::optional<std::vector<double>> t_points;
  std::optional<std::vector<double>> u_points;
  std::optional<GridSpec> grid;
  std::optional<double> l1;
  std::optional<double> l2;
  std::optional<std::vector<double>> data;
  std::optional<std::string> data_file;
  std::optional<std::size_t> replications;
  std::uint64_t seed = 42;
  TruncationPolicy truncation;
  QuadratureSpec quadrature;
  Tolerances tolerances;
  double rate_lower = -0.6;
  double rate_upper = -0.4;
  double density_tolerance = 1e-3;
  QuantileSampler quantile_sampler = QuantileSampler::kDyadic;
  std::filesystem::path output_dir = "dplab_out";
  /// Directory relative paths (data_file) resolve against.
  std::filesystem::path base_dir = ".";
};

/// Validates against the schema; unknown keys are errors.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON for a config; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace dplab
