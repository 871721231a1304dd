#include "mma/config.hpp"

#include "mma/errors.hpp"
#include "toml_lite.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace mma {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {"reps",  "master_seed", "snr",     "sigma2_mode", "lsq_kappa", "fixed_design",
                                     "mstar", "methods",     "n",       "cases"};

std::uint64_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError("'" + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

DecayCase as_case(const json& v) {
  std::string name;
  if (v.is_number_integer()) {
    name = std::to_string(v.get<std::int64_t>());
  } else {
    name = as_string(v, "cases[].case");
  }
  const auto c = parse_case(name);
  if (!c) throw ConfigError("unknown case '" + name + "' (expected poly, exp, 1 or 2)");
  return *c;
}

ExperimentConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }
  ExperimentConfig c;
  if (j.contains("reps")) c.reps = as_count(j["reps"], "reps");
  if (j.contains("master_seed")) c.master_seed = as_count(j["master_seed"], "master_seed");
  if (j.contains("snr")) c.snr = as_real(j["snr"], "snr");
  if (j.contains("lsq_kappa")) c.lsq_kappa = as_real(j["lsq_kappa"], "lsq_kappa");
  if (j.contains("fixed_design")) {
    if (!j["fixed_design"].is_boolean()) throw ConfigError("'fixed_design' must be a boolean");
    c.fixed_design = j["fixed_design"].get<bool>();
  }
  if (j.contains("sigma2_mode")) {
    const auto m = as_string(j["sigma2_mode"], "sigma2_mode");
    if (m == "known") {
      c.sigma2_mode = VarianceMethod::known;
    } else if (m == "lsq") {
      c.sigma2_mode = VarianceMethod::lsq;
    } else if (m == "rice") {
      c.sigma2_mode = VarianceMethod::rice;
    } else {
      throw ConfigError("unknown sigma2_mode '" + m + "' (expected known, lsq or rice)");
    }
  }
  if (j.contains("mstar")) {
    const auto m = as_string(j["mstar"], "mstar");
    if (m == "population") {
      c.mstar = MstarSource::population;
    } else if (m == "replication") {
      c.mstar = MstarSource::replication;
    } else {
      throw ConfigError("unknown mstar source '" + m + "' (expected population or replication)");
    }
  }
  if (j.contains("methods")) {
    if (!j["methods"].is_array()) throw ConfigError("'methods' must be an array");
    for (const auto& m : j["methods"]) {
      const auto name = as_string(m, "methods[]");
      const auto id = parse_method(name);
      if (!id) throw ConfigError("unknown method '" + name + "'");
      c.methods.push_back(*id);
    }
  }
  if (j.contains("n")) {
    const auto& n = j["n"];
    if (n.is_array()) {
      for (const auto& v : n) c.n.push_back(as_count(v, "n[]"));
    } else {
      c.n.push_back(as_count(n, "n"));
    }
  }
  if (j.contains("cases")) {
    if (!j["cases"].is_array()) throw ConfigError("'cases' must be an array");
    for (const auto& e : j["cases"]) {
      if (!e.is_object() || !e.contains("case") || !e.contains("alpha")) {
        throw ConfigError("each entry of 'cases' needs 'case' and 'alpha'");
      }
      for (const auto& [key, _] : e.items()) {
        if (key != "case" && key != "alpha") throw ConfigError("unknown key '" + key + "' in 'cases'");
      }
      c.cases.push_back({as_case(e["case"]), as_real(e["alpha"], "cases[].alpha")});
    }
  }
  // Validate every cell up front so a bad grid fails before any work starts.
  (void)c.scenarios();
  return c;
}

}  // namespace

std::vector<ScenarioConfig> ExperimentConfig::scenarios() const {
  if (n.empty()) throw ConfigError("configuration needs at least one sample size 'n'");
  if (cases.empty()) throw ConfigError("configuration needs at least one entry in 'cases'");
  std::vector<ScenarioConfig> out;
  for (const auto& cs : cases) {
    for (std::size_t nn : n) {
      ScenarioConfig s;
      s.decay = cs.decay;
      s.alpha = cs.alpha;
      s.n = nn;
      s.snr = snr;
      s.reps = reps;
      s.master_seed = master_seed;
      s.methods = methods;
      s.sigma2_mode = sigma2_mode;
      s.lsq_kappa = lsq_kappa;
      s.fixed_design = fixed_design;
      s.mstar = mstar;
      s.validate();
      out.push_back(std::move(s));
    }
  }
  return out;
}

ExperimentConfig parse_experiment_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return from_json(j);
}

ExperimentConfig parse_experiment_toml(std::string_view text) { return from_json(detail::parse_toml_subset(text)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto ext = path.extension().string();
  try {
    if (ext == ".toml") return parse_experiment_toml(text);
    if (ext == ".json") return parse_experiment_json(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  throw ConfigError("unsupported configuration format '" + ext + "' (expected .json or .toml)");
}

std::string experiment_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["reps"] = c.reps;
  j["master_seed"] = c.master_seed;
  j["snr"] = c.snr;
  j["sigma2_mode"] = to_string(c.sigma2_mode);
  j["lsq_kappa"] = c.lsq_kappa;
  j["fixed_design"] = c.fixed_design;
  j["mstar"] = std::string(to_string(c.mstar));
  j["methods"] = nlohmann::ordered_json::array();
  for (MethodId id : c.methods) j["methods"].push_back(std::string(method_name(id)));
  j["n"] = c.n;
  j["cases"] = nlohmann::ordered_json::array();
  for (const auto& cs : c.cases) j["cases"].push_back({{"case", std::string(case_name(cs.decay))}, {"alpha", cs.alpha}});
  return j.dump(2);
}

}  // namespace mma
