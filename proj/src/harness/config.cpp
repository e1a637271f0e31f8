#include "dplab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace dplab {
namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::pair<ExperimentKind, std::string>>& kind_names() {
  static const std::vector<std::pair<ExperimentKind, std::string>> names{
      {ExperimentKind::kMoments, "moments"}, {ExperimentKind::kFidi, "fidi"},
      {ExperimentKind::kModulus, "modulus"}, {ExperimentKind::kGc, "gc"},
      {ExperimentKind::kQuantile, "quantile"}, {ExperimentKind::kDensity, "density"},
      {ExperimentKind::kPosterior, "posterior"}, {ExperimentKind::kAll, "all"}};
  return names;
}

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(path + "." + key, "unknown field");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) throw ConfigError(path, "must be positive");
  return x;
}

std::size_t count(const json& v, const std::string& path, std::size_t min) {
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
    throw ConfigError(path, "expected an integer >= " + std::to_string(min));
  }
  return v.get<std::size_t>();
}

// Interval endpoints may be "inf" / "-inf" since JSON has no infinity.
double bound(const json& v, const std::string& path) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    throw ConfigError(path, "expected a number, \"inf\" or \"-inf\"");
  }
  return number(v, path);
}

json bound_to_json(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  return x;
}

std::vector<double> number_array(const json& v, const std::string& path, std::size_t min_len) {
  if (!v.is_array() || v.size() < min_len) {
    throw ConfigError(path, "expected an array of at least " + std::to_string(min_len) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

BaseFamily parse_base(const json& v, const std::string& path) {
  if (!v.is_object() || !v.contains("family") || !v["family"].is_string()) {
    throw ConfigError(path + ".family", "expected one of uniform, exponential, normal");
  }
  const auto family = v["family"].get<std::string>();
  if (family == "uniform") {
    require_keys(v, path, {"family", "lower", "upper"});
    UniformFamily f;
    if (v.contains("lower")) f.lower = number(v["lower"], path + ".lower");
    if (v.contains("upper")) f.upper = number(v["upper"], path + ".upper");
    if (!(f.lower < f.upper)) throw ConfigError(path, "uniform needs lower < upper");
    return f;
  }
  if (family == "exponential") {
    require_keys(v, path, {"family", "rate"});
    ExponentialFamily f;
    if (v.contains("rate")) f.rate = positive(v["rate"], path + ".rate");
    return f;
  }
  if (family == "normal") {
    require_keys(v, path, {"family", "mu", "sigma"});
    NormalFamily f;
    if (v.contains("mu")) f.mu = number(v["mu"], path + ".mu");
    if (v.contains("sigma")) f.sigma = positive(v["sigma"], path + ".sigma");
    return f;
  }
  throw ConfigError(path + ".family", "unknown family '" + family + "'");
}

json base_to_json(const BaseFamily& family) {
  if (const auto* u = std::get_if<UniformFamily>(&family)) {
    return {{"family", "uniform"}, {"lower", u->lower}, {"upper", u->upper}};
  }
  if (const auto* e = std::get_if<ExponentialFamily>(&family)) {
    return {{"family", "exponential"}, {"rate", e->rate}};
  }
  const auto& n = std::get<NormalFamily>(family);
  return {{"family", "normal"}, {"mu", n.mu}, {"sigma", n.sigma}};
}

std::vector<BorelSet> parse_sets(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array of sets");
  std::vector<BorelSet> sets;
  for (std::size_t s = 0; s < v.size(); ++s) {
    const auto spath = path + "[" + std::to_string(s) + "]";
    if (!v[s].is_array() || v[s].empty()) throw ConfigError(spath, "expected an array of [lower, upper] pairs");
    std::vector<Interval> ivs;
    for (std::size_t i = 0; i < v[s].size(); ++i) {
      const auto ipath = spath + "[" + std::to_string(i) + "]";
      const auto& pair = v[s][i];
      if (!pair.is_array() || pair.size() != 2) throw ConfigError(ipath, "expected [lower, upper]");
      ivs.push_back({bound(pair[0], ipath + "[0]"), bound(pair[1], ipath + "[1]")});
    }
    try {
      sets.emplace_back(std::move(ivs));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(spath, e.what());
    }
  }
  return sets;
}

json sets_to_json(const std::vector<BorelSet>& sets) {
  json out = json::array();
  for (const auto& s : sets) {
    json ivs = json::array();
    for (const auto& iv : s.intervals()) ivs.push_back({bound_to_json(iv.lower), bound_to_json(iv.upper)});
    out.push_back(ivs);
  }
  return out;
}

std::vector<double> read_data_file(const std::filesystem::path& file, const std::string& path) {
  std::ifstream in(file);
  if (!in) throw ConfigError(path, "cannot read data file " + file.string());
  std::vector<double> data;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      const double x = std::stod(token, &used);
      if (used != token.size() || !std::isfinite(x)) throw std::invalid_argument(token);
      data.push_back(x);
    } catch (const std::exception&) {
      throw ConfigError(path, "data file holds a non-numeric token '" + token + "'");
    }
  }
  return data;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kind_names()) {
    if (k == kind) return name;
  }
  return "unknown";
}

const std::vector<ExperimentKind>& experiment_families() {
  static const std::vector<ExperimentKind> families{
      ExperimentKind::kMoments, ExperimentKind::kFidi,     ExperimentKind::kModulus,
      ExperimentKind::kGc,      ExperimentKind::kQuantile, ExperimentKind::kDensity,
      ExperimentKind::kPosterior};
  return families;
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  require_keys(doc, "$",
               {"schema_version", "experiment", "a", "a_values", "base_measure", "sets", "t_points",
                "u_points", "grid", "l1", "l2", "data", "data_file", "replications", "seed",
                "truncation", "quadrature", "tolerances", "quantile_sampler", "output_dir"});
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kSchemaVersion) {
    throw ConfigError("$.schema_version", "must be " + std::to_string(kSchemaVersion));
  }
  if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
    throw ConfigError("$.experiment", "required string");
  }

  ExperimentConfig c;
  c.base_dir = base_dir;
  const auto exp = doc["experiment"].get<std::string>();
  bool known = false;
  for (const auto& [k, name] : kind_names()) {
    if (name == exp) {
      c.experiment = k;
      known = true;
    }
  }
  if (!known) throw ConfigError("$.experiment", "unknown experiment '" + exp + "'");

  if (doc.contains("a")) c.a = positive(doc["a"], "$.a");
  if (doc.contains("a_values")) {
    auto values = number_array(doc["a_values"], "$.a_values", 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto p = "$.a_values[" + std::to_string(i) + "]";
      if (!(values[i] > 0.0)) throw ConfigError(p, "must be positive");
      if (i > 0 && !(values[i] > values[i - 1])) throw ConfigError(p, "a_values must be strictly increasing");
    }
    c.a_values = std::move(values);
  }
  if (doc.contains("base_measure")) c.base_measure = parse_base(doc["base_measure"], "$.base_measure");
  if (doc.contains("sets")) c.sets = parse_sets(doc["sets"], "$.sets");
  if (doc.contains("t_points")) {
    auto t = number_array(doc["t_points"], "$.t_points", 3);
    if (t.size() != 3 || !(0.0 <= t[0] && t[0] <= t[1] && t[1] <= t[2] && t[2] <= 1.0)) {
      throw ConfigError("$.t_points", "expected [t1, t, t2] with 0 <= t1 <= t <= t2 <= 1");
    }
    c.t_points = std::move(t);
  }
  if (doc.contains("u_points")) {
    auto u = number_array(doc["u_points"], "$.u_points", 1);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!(u[i] > 0.0 && u[i] < 1.0)) throw ConfigError("$.u_points[" + std::to_string(i) + "]", "must lie in (0,1)");
    }
    c.u_points = std::move(u);
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    require_keys(g, "$.grid", {"lower", "upper", "points"});
    GridSpec spec;
    if (g.contains("lower")) spec.lower = number(g["lower"], "$.grid.lower");
    if (g.contains("upper")) spec.upper = number(g["upper"], "$.grid.upper");
    if (g.contains("points")) spec.points = count(g["points"], "$.grid.points", 2);
    if (!(spec.lower < spec.upper)) throw ConfigError("$.grid", "needs lower < upper");
    c.grid = spec;
  }
  if (doc.contains("l1")) c.l1 = positive(doc["l1"], "$.l1");
  if (doc.contains("l2")) c.l2 = positive(doc["l2"], "$.l2");
  if (c.l1.value_or(1.0 / 3.0) + c.l2.value_or(1.0 / 3.0) >= 1.0) {
    throw ConfigError("$.l2", "l1 + l2 must be below 1");
  }
  if (doc.contains("data") && doc.contains("data_file")) {
    throw ConfigError("$.data_file", "give either data or data_file, not both");
  }
  if (doc.contains("data")) c.data = number_array(doc["data"], "$.data", 0);
  if (doc.contains("data_file")) {
    if (!doc["data_file"].is_string()) throw ConfigError("$.data_file", "expected a path string");
    c.data_file = doc["data_file"].get<std::string>();
    std::filesystem::path file(*c.data_file);
    if (file.is_relative()) file = base_dir / file;
    c.data = read_data_file(file, "$.data_file");
  }
  if (doc.contains("replications")) c.replications = count(doc["replications"], "$.replications", 2);
  if (doc.contains("seed")) {
    const auto& seed = doc["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      throw ConfigError("$.seed", "expected a non-negative integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("truncation")) {
    const auto& t = doc["truncation"];
    require_keys(t, "$.truncation", {"epsilon", "max_atoms"});
    if (t.contains("epsilon")) {
      c.truncation.epsilon = number(t["epsilon"], "$.truncation.epsilon");
      if (!(c.truncation.epsilon < 1.0)) throw ConfigError("$.truncation.epsilon", "must be below 1");
    }
    if (t.contains("max_atoms")) c.truncation.max_atoms = count(t["max_atoms"], "$.truncation.max_atoms", 1);
    if (!(c.truncation.epsilon > 0.0) && !c.truncation.max_atoms) {
      throw ConfigError("$.truncation", "needs epsilon > 0 or max_atoms");
    }
  }
  if (doc.contains("quadrature")) {
    const auto& q = doc["quadrature"];
    require_keys(q, "$.quadrature", {"initial_intervals", "max_intervals", "tolerance", "half_width_sd"});
    auto& spec = c.quadrature;
    if (q.contains("initial_intervals")) spec.initial_intervals = count(q["initial_intervals"], "$.quadrature.initial_intervals", 2);
    if (q.contains("max_intervals")) spec.max_intervals = count(q["max_intervals"], "$.quadrature.max_intervals", 2);
    if (q.contains("tolerance")) spec.tolerance = positive(q["tolerance"], "$.quadrature.tolerance");
    if (q.contains("half_width_sd")) spec.half_width_sd = positive(q["half_width_sd"], "$.quadrature.half_width_sd");
    if (spec.initial_intervals % 2 != 0) throw ConfigError("$.quadrature.initial_intervals", "must be even");
    if (spec.max_intervals < spec.initial_intervals) throw ConfigError("$.quadrature.max_intervals", "below initial_intervals");
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    require_keys(t, "$.tolerances",
                 {"mean_se", "moment_se", "variance_se", "ks_level", "rate_lower", "rate_upper",
                  "density_tolerance"});
    if (t.contains("mean_se")) c.tolerances.mean_se = positive(t["mean_se"], "$.tolerances.mean_se");
    if (t.contains("moment_se")) c.tolerances.moment_se = positive(t["moment_se"], "$.tolerances.moment_se");
    if (t.contains("variance_se")) c.tolerances.variance_se = positive(t["variance_se"], "$.tolerances.variance_se");
    if (t.contains("ks_level")) {
      c.tolerances.ks_level = positive(t["ks_level"], "$.tolerances.ks_level");
      if (!(c.tolerances.ks_level < 1.0)) throw ConfigError("$.tolerances.ks_level", "must lie in (0,1)");
    }
    if (t.contains("rate_lower")) c.rate_lower = number(t["rate_lower"], "$.tolerances.rate_lower");
    if (t.contains("rate_upper")) c.rate_upper = number(t["rate_upper"], "$.tolerances.rate_upper");
    if (t.contains("density_tolerance")) c.density_tolerance = positive(t["density_tolerance"], "$.tolerances.density_tolerance");
    if (!(c.rate_lower < c.rate_upper)) throw ConfigError("$.tolerances.rate_upper", "must exceed rate_lower");
  }
  if (doc.contains("quantile_sampler")) {
    const auto& s = doc["quantile_sampler"];
    if (s == "dyadic") {
      c.quantile_sampler = QuantileSampler::kDyadic;
    } else if (s == "stick_breaking") {
      c.quantile_sampler = QuantileSampler::kStickBreaking;
    } else {
      throw ConfigError("$.quantile_sampler", "expected \"dyadic\" or \"stick_breaking\"");
    }
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty()) {
      throw ConfigError("$.output_dir", "expected a non-empty path string");
    }
    c.output_dir = doc["output_dir"].get<std::string>();
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path().empty() ? "." : path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["experiment"] = to_string(c.experiment);
  if (c.a) out["a"] = *c.a;
  if (c.a_values) out["a_values"] = *c.a_values;
  if (c.base_measure) out["base_measure"] = base_to_json(*c.base_measure);
  if (c.sets) out["sets"] = sets_to_json(*c.sets);
  if (c.t_points) out["t_points"] = *c.t_points;
  if (c.u_points) out["u_points"] = *c.u_points;
  if (c.grid) out["grid"] = {{"lower", c.grid->lower}, {"upper", c.grid->upper}, {"points", c.grid->points}};
  if (c.l1) out["l1"] = *c.l1;
  if (c.l2) out["l2"] = *c.l2;
  // Inline the data so the echo does not depend on the data file staying put.
  if (c.data) out["data"] = *c.data;
  if (c.replications) out["replications"] = *c.replications;
  out["seed"] = c.seed;
  out["truncation"] = {{"epsilon", c.truncation.epsilon}};
  if (c.truncation.max_atoms) out["truncation"]["max_atoms"] = *c.truncation.max_atoms;
  out["quadrature"] = {{"initial_intervals", c.quadrature.initial_intervals},
                       {"max_intervals", c.quadrature.max_intervals},
                       {"tolerance", c.quadrature.tolerance},
                       {"half_width_sd", c.quadrature.half_width_sd}};
  out["tolerances"] = {{"mean_se", c.tolerances.mean_se},
                       {"moment_se", c.tolerances.moment_se},
                       {"variance_se", c.tolerances.variance_se},
                       {"ks_level", c.tolerances.ks_level},
                       {"rate_lower", c.rate_lower},
                       {"rate_upper", c.rate_upper},
                       {"density_tolerance", c.density_tolerance}};
  out["quantile_sampler"] = c.quantile_sampler == QuantileSampler::kDyadic ? "dyadic" : "stick_breaking";
  out["output_dir"] = c.output_dir.string();
  return out;
}

}  // namespace dplab
