#include <fmt/format.h>

#include <fstream>
#include <system_error>

#include "dplab/harness.hpp"

namespace dplab {
namespace {

using nlohmann::json;

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& dir, const std::string& name, const std::string& header,
            std::vector<std::filesystem::path>& manifest)
      : path_(dir / name), out_(path_, std::ios::binary) {
    if (!out_) throw std::system_error(errno, std::generic_category(), "cannot write " + path_.string());
    out_ << header << '\n';
    manifest.push_back(path_);
  }

  void row(std::initializer_list<std::string> fields) {
    bool first = true;
    for (const auto& f : fields) {
      if (!first) out_ << ',';
      out_ << f;
      first = false;
    }
    out_ << '\n';
    if (!out_) throw std::system_error(errno, std::generic_category(), "write failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

const char* pass_str(bool pass) { return pass ? "true" : "false"; }

void write_checks(const std::vector<Check>& checks, const std::filesystem::path& dir,
                  const std::string& name, std::vector<std::filesystem::path>& manifest) {
  CsvWriter csv(dir, name, "name,observed,expected,pass", manifest);
  for (const auto& c : checks) csv.row({csv_field(c.name), num(c.observed), num(c.expected), pass_str(c.pass)});
}

void write_summary(const McSummary& s, const std::string& prefix, const std::filesystem::path& dir,
                   std::vector<std::filesystem::path>& manifest) {
  {
    CsvWriter csv(dir, prefix + "_summary.csv", "name,estimate,se,target,tolerance_se,kind,pass", manifest);
    for (const auto& c : s.comparisons) {
      csv.row({csv_field(c.name), num(c.estimate), num(c.se), num(c.target), num(c.tolerance_se),
               c.kind == Comparison::Kind::kUpperBound ? "upper_bound" : "two_sided", pass_str(c.pass)});
    }
  }
  if (!s.ks_checks.empty()) {
    CsvWriter csv(dir, prefix + "_ks.csv", "name,statistic,p_value,level,pass", manifest);
    for (const auto& k : s.ks_checks) {
      csv.row({csv_field(k.name), num(k.statistic), num(k.p_value), num(k.level), pass_str(k.pass)});
    }
  }
  if (!s.checks.empty()) write_checks(s.checks, dir, prefix + "_checks.csv", manifest);
  if (!s.references.empty()) {
    CsvWriter csv(dir, prefix + "_references.csv", "name,value", manifest);
    for (const auto& r : s.references) csv.row({csv_field(r.name), num(r.value)});
  }
}

void write_csv(const ExperimentResult& result, const std::filesystem::path& dir,
               std::vector<std::filesystem::path>& manifest) {
  const auto prefix = to_string(result.kind);
  if (const auto* s = std::get_if<McSummary>(&result.outcome)) {
    write_summary(*s, prefix, dir, manifest);
  } else if (const auto* g = std::get_if<GcResult>(&result.outcome)) {
    CsvWriter csv(dir, "gc_curve.csv", "a,mean_sup,se_sup,mean_cvm,se_cvm", manifest);
    const auto& c = g->curve;
    for (std::size_t i = 0; i < c.a_values.size(); ++i) {
      csv.row({num(c.a_values[i]), num(c.mean_sup[i]), num(c.se_sup[i]), num(c.mean_cvm[i]), num(c.se_cvm[i])});
    }
    write_checks(g->checks, dir, "gc_checks.csv", manifest);
  } else {
    const auto& d = std::get<DensityStudy>(result.outcome);
    CsvWriter csv(dir, "density_gap.csv", "a,max_gap,tv_distance,quad_error", manifest);
    for (const auto& r : d.rows) csv.row({num(r.a), num(r.max_gap), num(r.tv_distance), num(r.quad_error)});
    write_checks(d.checks, dir, "density_checks.csv", manifest);
  }
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"observed", c.observed}, {"expected", c.expected}, {"pass", c.pass}});
  }
  return out;
}

json outcome_json(const ExperimentResult& result) {
  json out{{"experiment", to_string(result.kind)}, {"pass", result.pass()}};
  if (const auto* s = std::get_if<McSummary>(&result.outcome)) {
    out["replications"] = s->replications;
    out["seed_info"] = {{"master_seed", s->seed_info.master_seed},
                        {"first_stream", s->seed_info.first_stream},
                        {"last_stream", s->seed_info.last_stream}};
    json estimates = json::object();
    for (const auto& e : s->estimates) estimates[e.name] = {{"value", e.estimate.value}, {"se", e.estimate.se}};
    out["estimates"] = estimates;
    json comps = json::array();
    for (const auto& c : s->comparisons) {
      comps.push_back({{"name", c.name}, {"estimate", c.estimate}, {"se", c.se}, {"target", c.target},
                       {"tolerance_se", c.tolerance_se},
                       {"kind", c.kind == Comparison::Kind::kUpperBound ? "upper_bound" : "two_sided"},
                       {"pass", c.pass}});
    }
    out["comparisons"] = comps;
    json ks = json::array();
    for (const auto& k : s->ks_checks) {
      ks.push_back({{"name", k.name}, {"statistic", k.statistic}, {"p_value", k.p_value},
                    {"level", k.level}, {"pass", k.pass}});
    }
    out["ks_checks"] = ks;
    out["checks"] = checks_json(s->checks);
    json refs = json::object();
    for (const auto& r : s->references) refs[r.name] = r.value;
    out["references"] = refs;
  } else if (const auto* g = std::get_if<GcResult>(&result.outcome)) {
    const auto& c = g->curve;
    out["a_values"] = c.a_values;
    out["mean_sup"] = c.mean_sup;
    out["se_sup"] = c.se_sup;
    out["mean_cvm"] = c.mean_cvm;
    out["se_cvm"] = c.se_cvm;
    out["fitted_rate"] = c.fitted_rate;
    out["dl_samples"] = c.dl_samples;
    out["dl_violations"] = c.dl_violations;
    out["printed_form_violations"] = c.printed_form_violations;
    out["checks"] = checks_json(g->checks);
  } else {
    const auto& d = std::get<DensityStudy>(result.outcome);
    out["l1"] = d.l1;
    out["l2"] = d.l2;
    out["limit_at_origin"] = d.limit_at_origin;
    out["limit_at_origin_target"] = d.limit_at_origin_target;
    json rows = json::array();
    for (const auto& r : d.rows) {
      rows.push_back({{"a", r.a}, {"max_gap", r.max_gap}, {"tv_distance", r.tv_distance},
                      {"quad_error", r.quad_error}, {"scaled_integral", r.scaled_integral},
                      {"scaled_integral_error", r.scaled_integral_error}});
    }
    out["rows"] = rows;
    out["checks"] = checks_json(d.checks);
  }
  return out;
}

}  // namespace

json to_json(const RunReport& report) {
  json experiments = json::array();
  for (const auto& r : report.results) experiments.push_back(outcome_json(r));
  json manifest = json::array();
  for (const auto& p : report.manifest) manifest.push_back(p.string());
  return {{"schema_version", kSchemaVersion},
          {"config", report.config_echo},
          {"pass", report.pass()},
          {"wall_clock_seconds", report.wall_clock_seconds},
          {"experiments", experiments},
          {"manifest", manifest}};
}

void emit_report(RunReport& report, const std::filesystem::path& output_dir,
                 const std::vector<ReportFormat>& formats) {
  std::filesystem::create_directories(output_dir);
  for (auto format : formats) {
    if (format == ReportFormat::kCsv) {
      for (const auto& r : report.results) write_csv(r, output_dir, report.manifest);
    }
  }
  for (auto format : formats) {
    if (format == ReportFormat::kJsonSummary) {
      const auto path = output_dir / "report.json";
      report.manifest.push_back(path);
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
      out << to_json(report).dump(2) << '\n';
    }
  }
}

}  // namespace dplab
