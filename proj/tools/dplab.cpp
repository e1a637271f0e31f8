// dplab: run Dirichlet-process limit experiments from a JSON config.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <iostream>

#include "dplab/harness.hpp"
#include "dplab/parallel.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

void print_summary(const dplab::RunReport& report) {
  for (const auto& r : report.results) {
    fmt::print("{:<10} {}\n", dplab::to_string(r.kind), r.pass() ? "PASS" : "FAIL");
    if (const auto* s = std::get_if<dplab::McSummary>(&r.outcome)) {
      for (const auto& c : s->comparisons) {
        if (!c.pass) {
          fmt::print("  failed {}: estimate {:.6g} (se {:.3g}) target {:.6g}\n", c.name, c.estimate,
                     c.se, c.target);
        }
      }
      for (const auto& k : s->ks_checks) {
        if (!k.pass) fmt::print("  failed {}: p = {:.4g}\n", k.name, k.p_value);
      }
      for (const auto& ref : s->references) fmt::print("  {} = {:.6g}\n", ref.name, ref.value);
    } else if (const auto* g = std::get_if<dplab::GcResult>(&r.outcome)) {
      fmt::print("  fitted rate {:.4f}; inequality held on {}/{} samples\n", g->curve.fitted_rate,
                 g->curve.dl_samples - g->curve.dl_violations, g->curve.dl_samples);
    }
  }
  fmt::print("overall {} ({:.1f} s, {} threads)\n", report.pass() ? "PASS" : "FAIL",
             report.wall_clock_seconds, dplab::thread_count());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet process large-concentration experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  auto* run = app.add_subcommand("run", "Run an experiment and write CSV/JSON results");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_dir, "Override the output directory");

  auto* validate = app.add_subcommand("validate", "Check a config against the schema");
  validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* list = app.add_subcommand("list", "Print experiment families and the schema version");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    fmt::print("schema_version {}\n", dplab::kSchemaVersion);
    for (auto kind : dplab::experiment_families()) fmt::print("{}\n", dplab::to_string(kind));
    fmt::print("all\n");
    return EXIT_SUCCESS;
  }

  dplab::ExperimentConfig config;
  try {
    config = dplab::load_config(config_path);
  } catch (const dplab::ConfigError& e) {
    std::cerr << "config error at " << e.what() << '\n';
    return kExitConfig;
  }
  if (validate->parsed()) {
    fmt::print("ok: {} (schema {})\n", dplab::to_string(config.experiment), dplab::kSchemaVersion);
    return EXIT_SUCCESS;
  }

  if (seed) config.seed = *seed;
  if (out_dir) config.output_dir = *out_dir;

  dplab::RunReport report;
  try {
    report = dplab::run_experiment(config);
  } catch (const std::exception& e) {
    std::cerr << dplab::to_string(config.experiment) << ": " << e.what() << '\n';
    return kExitFail;
  }
  try {
    dplab::emit_report(report, config.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitIo;
  }
  print_summary(report);
  return report.pass() ? EXIT_SUCCESS : kExitFail;
}
