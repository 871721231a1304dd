#include "mma_lab/cli.hpp"

#include "mma/candidates.hpp"
#include "mma/config.hpp"
#include "mma/csv.hpp"
#include "mma/errors.hpp"
#include "mma/report.hpp"
#include "mma/risk.hpp"
#include "mma/seqmodel.hpp"
#include "mma/sim.hpp"
#include "mma/variance.hpp"
#include "mma/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace mma::cli {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto r = std::from_chars(first, last, v);
  if (text.empty() || r.ec != std::errc{} || r.ptr != last) throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto r = std::from_chars(first, last, v);
  if (text.empty() || r.ec != std::errc{} || r.ptr != last) {
    throw ConfigError(what + ": '" + text + "' is not a nonnegative integer");
  }
  return v;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_unsigned(part, what));
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("MMA_LAB_SEED");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return parse_unsigned(v, "MMA_LAB_SEED");
}

struct Globals {
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
};

/// --seed beats MMA_LAB_SEED, which beats the configuration file.
void apply_seed(ExperimentConfig& config, const Globals& g) {
  if (auto e = env_seed()) config.master_seed = *e;
  if (g.seed) config.master_seed = *g.seed;
}

void emit(const std::string& text, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + output + "'");
  f << text;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json candidates_json(const CandidateSet& set) { return json::parse(to_json(set)); }

json report_header(std::string_view command, json config, std::optional<std::uint64_t> seed) {
  json j;
  j["tool"] = "mma-lab";
  j["version"] = std::string(library_version());
  j["command"] = std::string(command);
  j["config"] = std::move(config);
  j["seed"] = seed ? json(*seed) : json(nullptr);
  return j;
}

struct Sigma2Spec {
  VarianceMethod method = VarianceMethod::lsq;
  double known = 0.0;
  double kappa = 0.5;
  std::optional<std::size_t> column;
};

Sigma2Spec parse_sigma2(const std::string& text) {
  Sigma2Spec s;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "known") {
    s.method = VarianceMethod::known;
    s.known = parse_real(arg, "--sigma2 known");
    if (!(s.known >= 0.0)) throw ConfigError("--sigma2 known: value must be nonnegative");
  } else if (head == "lsq") {
    s.method = VarianceMethod::lsq;
    if (!arg.empty()) s.kappa = parse_real(arg, "--sigma2 lsq");
    if (!(s.kappa > 0.0 && s.kappa < 1.0)) throw ConfigError("--sigma2 lsq: kappa must lie in (0, 1)");
  } else if (head == "rice") {
    s.method = VarianceMethod::rice;
    if (!arg.empty()) s.column = parse_unsigned(arg, "--sigma2 rice");
  } else {
    throw ConfigError("--sigma2 must be known:<value>, lsq[:<kappa>] or rice[:<column>]");
  }
  return s;
}

/// all | successive:<M> | g1[:<t1>,<t2>] | g2[:<t>] | ms:<kl>,<ku> | sizes:<k1>,<k2>,...
/// `m_hat` is only consulted for ms sets.
CandidateSet build_candidates(const std::string& spec, std::size_t n, std::size_t p,
                              const std::function<std::size_t()>& m_hat) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto reals = [&](std::size_t count) {
    std::vector<double> v;
    for (const auto& part : split(arg, ',')) v.push_back(parse_real(part, "--candidates " + head));
    if (v.size() != count) throw ConfigError("--candidates " + head + " expects " + std::to_string(count) + " values");
    return v;
  };
  try {
    if (head == "all") return all_nested(p);
    if (head == "successive") return successive(parse_unsigned(arg, "--candidates successive"), p);
    if (head == "g1") {
      if (arg.empty()) return grouped_geometric(p, n);
      const auto t = reals(2);
      return grouped_geometric(p, n, t[0], t[1]);
    }
    if (head == "g2") return arg.empty() ? grouped_equal(p, n) : grouped_equal(p, n, reals(1)[0]);
    if (head == "ms") {
      const auto k = reals(2);
      return ms_centered(m_hat(), k[0], k[1], p);
    }
    if (head == "sizes") return CandidateSet::from_sizes(parse_size_list(arg, "--candidates sizes"), p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--candidates ") + spec + ": " + e.what());
  }
  throw ConfigError("unknown candidate set '" + spec + "' (expected all, successive:M, g1, g2, ms:kl,ku or sizes:list)");
}

/// poly:<alpha> | exp:<alpha> | file:<csv>
CoefficientProfile build_profile(const std::string& spec, std::size_t n, std::optional<std::size_t> p, double sigma2) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("--theta must be poly:<alpha>, exp:<alpha> or file:<csv>");
  const std::string head = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  try {
    if (head == "poly") return poly_profile(parse_real(arg, "--theta poly"), p.value_or(n), n, sigma2);
    if (head == "exp") return exp_profile(parse_real(arg, "--theta exp"), p.value_or(n), n, sigma2);
    if (head == "file") {
      const std::string text = read_text_file(arg);
      NumericCsv csv;
      try {
        csv = parse_numeric_csv(text, false, arg);
      } catch (const ConfigError&) {
        csv = parse_numeric_csv(text, true, arg);
      }
      if (csv.values.cols() != 1) throw ConfigError(arg + ": theta file must have exactly one column");
      CoefficientProfile prof{csv.values.col(0), sigma2, n};
      if (p && *p != prof.p()) throw ConfigError("--p does not match the length of the theta file");
      prof.validate();
      return prof;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--theta ") + spec + ": " + e.what());
  }
  throw ConfigError("unknown --theta kind '" + head + "'");
}

std::vector<MethodId> parse_methods(const std::string& text) {
  std::vector<MethodId> out;
  for (const auto& name : split(text, ',')) {
    const auto id = parse_method(name);
    if (!id) throw ConfigError("unknown method '" + name + "'");
    out.push_back(*id);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------- fit

struct FitOptions {
  std::string design;
  std::string response;
  bool header = false;
  std::string candidates = "all";
  std::string sigma2 = "lsq:0.5";
  std::size_t discrete = 0;
  std::string solver = "pava";
  std::string truth;
  std::string fitted;
  std::string output;
};

int cmd_fit(const FitOptions& o, std::ostream& out) {
  const auto X = read_numeric_csv(o.design, o.header);
  const auto y = read_numeric_csv(o.response, o.header);
  if (y.values.cols() != 1) throw ConfigError(o.response + ": response file must have exactly one column");
  if (y.values.rows() != X.values.rows()) {
    throw ConfigError("design has " + std::to_string(X.values.rows()) + " rows but response has " +
                      std::to_string(y.values.rows()));
  }
  RegressionData data;
  data.X = X.values;
  data.y = y.values.col(0);
  if (!o.truth.empty()) {
    const auto f = read_numeric_csv(o.truth, o.header);
    if (f.values.cols() != 1 || f.values.rows() != X.values.rows()) {
      throw ConfigError(o.truth + ": true mean must be one column with one row per observation");
    }
    data.f = f.values.col(0);
  }
  try {
    data.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const SequenceView view = orthogonalize(data);
  const std::size_t n = view.n();
  const std::size_t p = view.p();

  const Sigma2Spec s2 = parse_sigma2(o.sigma2);
  VarianceEstimate est;
  switch (s2.method) {
    case VarianceMethod::known:
      est = {s2.known, VarianceMethod::known, 0};
      break;
    case VarianceMethod::lsq:
      est = sigma2_lsq(view, lsq_model_size(n, p, s2.kappa));
      break;
    case VarianceMethod::rice:
      if (s2.column) {
        if (*s2.column < 1 || *s2.column > p) throw ConfigError("--sigma2 rice: column outside 1..p");
        est = sigma2_rice(data.y, data.X.col(static_cast<Eigen::Index>(*s2.column - 1)));
      } else {
        est = sigma2_rice(std::span<const double>(data.y.data(), n));
      }
      break;
  }

  const CandidateSet set = build_candidates(o.candidates, n, p, [&] {
    return std::max<std::size_t>(1, cp_select(view, est.value, p));
  });

  CumulativeWeights gamma;
  if (o.discrete > 0) {
    gamma = solve_discrete(view, set, est.value, {o.discrete});
  } else if (o.solver == "qp") {
    gamma = gamma_from_w(solve_qp(view, set, est.value));
  } else if (o.solver == "pava") {
    gamma = solve_nested(view, set, est.value);
  } else {
    throw ConfigError("--solver must be pava or qp");
  }
  const WeightVector w = w_from_gamma(gamma);
  const Eigen::VectorXd multipliers = expand_gamma(set, gamma);

  if (!o.fitted.empty()) {
    std::ofstream f(o.fitted, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + o.fitted + "'");
    write_numeric_csv(f, averaged_fit(view, multipliers), {"fitted"});
  }

  json config;
  config["design"] = o.design;
  config["response"] = o.response;
  config["header"] = o.header;
  config["candidates"] = o.candidates;
  config["sigma2"] = o.sigma2;
  config["discrete"] = o.discrete;
  config["solver"] = o.discrete > 0 ? "discrete" : o.solver;
  config["truth"] = o.truth.empty() ? json(nullptr) : json(o.truth);
  json j = report_header("fit", std::move(config), std::nullopt);
  j["n"] = n;
  j["p"] = p;
  j["candidate_set"] = candidates_json(set);
  j["sigma2_hat"] = est.value;
  j["sigma2_method"] = to_string(est.method);
  j["criterion"] = mma_criterion(view, set, gamma, est.value);
  j["weights"] = vector_json(w.w);
  j["gamma"] = vector_json(gamma.gamma);
  j["fitted"] = o.fitted.empty() ? json(nullptr) : json(o.fitted);
  j["loss"] = data.f ? json(ma_loss(view, multipliers)) : json(nullptr);
  emit(j.dump(2) + "\n", o.output, out);
  return 0;
}

// ---------------------------------------------------------- experiments

struct ExperimentOptions {
  std::string config;
  std::string methods;
  std::string format;
  std::string output;
  std::optional<std::size_t> dump_rep;
  std::size_t cell = 0;
  std::string dump_dir = ".";
};

ExperimentConfig load_config(const ExperimentOptions& o, const Globals& g) {
  ExperimentConfig c = load_experiment(o.config);
  if (!o.methods.empty()) c.methods = parse_methods(o.methods);
  apply_seed(c, g);
  return c;
}

void write_column(const std::filesystem::path& path, const Eigen::VectorXd& v, const std::string& name) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  write_numeric_csv(f, v, {name});
}

int dump_replication(const ExperimentConfig& config, const ExperimentOptions& o, std::ostream& out) {
  const auto cells = config.scenarios();
  if (o.cell >= cells.size()) throw ConfigError("--cell " + std::to_string(o.cell) + " is out of range");
  const ScenarioPlan plan = make_plan(cells[o.cell]);
  if (*o.dump_rep >= plan.config.reps) throw ConfigError("--dump-rep is beyond the configured replications");
  const RegressionData data = gen_replication(plan, *o.dump_rep);

  const std::filesystem::path dir(o.dump_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "X.csv", std::ios::binary);
    if (!f) throw ConfigError("cannot write into '" + dir.string() + "'");
    std::vector<std::string> names;
    for (Eigen::Index j = 1; j <= data.X.cols(); ++j) names.push_back("x" + std::to_string(j));
    write_numeric_csv(f, data.X, names);
  }
  write_column(dir / "y.csv", data.y, "y");
  write_column(dir / "f.csv", *data.f, "f");

  json meta;
  meta["case"] = std::string(case_name(plan.config.decay));
  meta["alpha"] = plan.config.alpha;
  meta["n"] = plan.config.n;
  meta["p"] = plan.p;
  meta["sigma2"] = plan.sigma2;
  meta["sigma2_text"] = format_double(plan.sigma2);
  meta["seed"] = plan.config.master_seed;
  meta["rep"] = *o.dump_rep;
  std::ofstream(dir / "meta.json", std::ios::binary) << meta.dump(2) << "\n";
  out << "wrote replication " << *o.dump_rep << " to " << dir.string() << "\n";
  return 0;
}

std::vector<ScenarioResult> run_cells(const ExperimentConfig& config, const Globals& g, bool riskratio) {
  std::vector<ScenarioResult> results;
  for (auto cell : config.scenarios()) {
    if (riskratio && cell.methods.empty()) cell.methods = {MethodId::M_ALL};
    results.push_back(run_scenario(cell, g.jobs));
  }
  return results;
}

int cmd_experiment(std::string_view command, const ExperimentOptions& o, const Globals& g, std::ostream& out) {
  const ExperimentConfig config = load_config(o, g);
  if (command == "simulate" && o.dump_rep) return dump_replication(config, o, out);

  const std::string default_format = command == "simulate" ? "json" : "csv";
  const std::string format = o.format.empty() ? default_format : o.format;
  if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");

  const auto start = std::chrono::steady_clock::now();
  const bool riskratio = command == "riskratio";
  const auto results = run_cells(config, g, riskratio);
  std::string text;
  if (format == "json") {
    text = scenario_report_json(command, config, results, seconds_since(start));
  } else {
    text = riskratio ? riskratio_csv(results) : table_csv(results);
  }
  emit(text, o.output, out);
  return 0;
}

// ------------------------------------------------------- oracle and psi

struct ProfileOptions {
  std::string theta;
  std::size_t n = 0;
  std::optional<std::size_t> p;
  double sigma2 = 1.0;
  std::string candidates = "all";
  std::string discrete = "2,5";
  std::string format = "json";
  std::string output;
};

json profile_config(const ProfileOptions& o) {
  json c;
  c["theta"] = o.theta;
  c["n"] = o.n;
  c["p"] = o.p ? json(*o.p) : json(nullptr);
  c["sigma2"] = o.sigma2;
  c["candidates"] = o.candidates;
  return c;
}

std::string named_values_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::ostringstream os;
  CsvWriter w(os);
  w.row({"name", "value"});
  for (const auto& [name, value] : rows) w.row({name, format_double(value)});
  return os.str();
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
}

int cmd_oracle(const ProfileOptions& o, std::ostream& out) {
  check_format(o.format);
  if (o.n == 0) throw ConfigError("--n must be positive");
  const CoefficientProfile prof = build_profile(o.theta, o.n, o.p, o.sigma2);
  const std::size_t p = prof.p();
  const CandidateSet set = build_candidates(o.candidates, o.n, p, [&] { return std::max<std::size_t>(1, best_ms(prof).m); });
  const auto Ns = parse_size_list(o.discrete, "--discrete");

  const MsChoice ms = best_ms(prof);
  const MsChoice in_set = best_in_set(prof, set);
  const OracleWeights nested = oracle_nested(prof);
  const OracleWeights grouped = oracle_grouped(prof, set);
  const double ideal_ms = ideal_subset_ms_risk(prof);
  const double ideal_ma = ideal_subset_ma_risk(prof);
  const double ideal_ma_pinned = ideal_subset_ma_risk(prof, SubsetHull::first_pinned);
  const double psi_value = psi(prof, set);

  std::vector<std::pair<std::string, double>> rows = {
      {"best_ms_m", static_cast<double>(ms.m)},
      {"best_ms_risk", ms.risk},
      {"best_in_set_m", static_cast<double>(in_set.m)},
      {"best_in_set_risk", in_set.risk},
      {"oracle_nested_risk", nested.risk},
      {"oracle_grouped_risk", grouped.risk},
      {"ideal_ms_risk", ideal_ms},
      {"ideal_ma_risk", ideal_ma},
      {"ideal_ma_pinned_risk", ideal_ma_pinned},
      {"psi", psi_value},
  };
  json discrete = json::array();
  for (std::size_t N : Ns) {
    if (N == 0) throw ConfigError("--discrete values must be positive");
    const double r = oracle_discrete(prof, set, N).risk;
    rows.emplace_back("oracle_discrete_N" + std::to_string(N) + "_risk", r);
    discrete.push_back({{"N", N}, {"risk", r}, {"ratio_to_grouped", r / grouped.risk}});
  }

  if (o.format == "csv") {
    emit(named_values_csv(rows), o.output, out);
    return 0;
  }
  json config = profile_config(o);
  config["discrete"] = o.discrete;
  json j = report_header("oracle", std::move(config), std::nullopt);
  j["profile"] = {{"n", prof.n}, {"p", p}, {"sigma2", prof.sigma2}, {"theta", vector_json(prof.theta)}};
  j["candidate_set"] = candidates_json(set);
  json risks;
  risks["best_ms"] = {{"m", ms.m}, {"risk", ms.risk}};
  risks["best_in_set"] = {{"m", in_set.m}, {"risk", in_set.risk}};
  risks["oracle_nested"] = {{"risk", nested.risk}, {"monotone", nested.monotone}};
  risks["oracle_grouped"] = {{"risk", grouped.risk}};
  risks["oracle_discrete"] = std::move(discrete);
  risks["ideal_ms"] = ideal_ms;
  risks["ideal_ma"] = ideal_ma;
  risks["ideal_ma_pinned"] = ideal_ma_pinned;
  risks["psi"] = psi_value;
  j["risks"] = std::move(risks);
  emit(j.dump(2) + "\n", o.output, out);
  return 0;
}

int cmd_psi(const ProfileOptions& o, std::ostream& out) {
  check_format(o.format);
  if (o.n == 0) throw ConfigError("--n must be positive");
  const CoefficientProfile prof = build_profile(o.theta, o.n, o.p, o.sigma2);
  const CandidateSet set = build_candidates(o.candidates, o.n, prof.p(), [&] { return std::max<std::size_t>(1, best_ms(prof).m); });
  const double value = psi(prof, set);
  if (o.format == "csv") {
    emit(named_values_csv({{"psi", value}, {"M", static_cast<double>(set.size())}}), o.output, out);
    return 0;
  }
  json j = report_header("psi", profile_config(o), std::nullopt);
  j["candidate_set"] = candidates_json(set);
  j["M"] = set.size();
  j["psi"] = value;
  emit(j.dump(2) + "\n", o.output, out);
  return 0;
}

void add_profile_options(CLI::App* sub, ProfileOptions& o) {
  sub->add_option("--theta", o.theta, "poly:<alpha>, exp:<alpha> or file:<csv>")->required();
  sub->add_option("--n", o.n, "Sample size")->required();
  sub->add_option("--p", o.p, "Number of coefficients (default n)");
  sub->add_option("--sigma2", o.sigma2, "Noise variance")->capture_default_str();
  sub->add_option("--candidates", o.candidates, "all | successive:M | g1 | g2 | ms:kl,ku | sizes:list")
      ->capture_default_str();
  sub->add_option("--format", o.format, "json or csv")->capture_default_str();
  sub->add_option("-o,--output", o.output, "Write the report here instead of stdout");
}

void add_experiment_options(CLI::App* sub, ExperimentOptions& o) {
  sub->add_option("config", o.config, "Experiment file (.json or .toml)")->required();
  sub->add_option("--methods", o.methods, "Comma-separated method ids, overriding the file");
  sub->add_option("--format", o.format, "csv or json");
  sub->add_option("-o,--output", o.output, "Write the report here instead of stdout");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mallows model averaging lab: fitting, oracle risks and Monte Carlo experiments", "mma-lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("-j,--jobs", g.jobs, "Worker threads for Monte Carlo runs (0 = all cores)")->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed; overrides MMA_LAB_SEED and the configuration file");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an MMA estimator to a design and response");
  fit_cmd->add_option("--design", fit.design, "Design matrix CSV (n rows, p columns)")->required();
  fit_cmd->add_option("--response", fit.response, "Response CSV (one column)")->required();
  fit_cmd->add_flag("--header", fit.header, "Input CSV files start with a header row");
  fit_cmd->add_option("--candidates", fit.candidates, "all | successive:M | g1[:t1,t2] | g2[:t] | ms:kl,ku | sizes:list")
      ->capture_default_str();
  fit_cmd->add_option("--sigma2", fit.sigma2, "known:<value> | lsq[:<kappa>] | rice[:<column>]")->capture_default_str();
  fit_cmd->add_option("--discrete", fit.discrete, "Restrict weights to multiples of 1/N");
  fit_cmd->add_option("--solver", fit.solver, "pava or qp")->capture_default_str();
  fit_cmd->add_option("--truth", fit.truth, "True mean CSV; adds the realized loss to the report");
  fit_cmd->add_option("--fitted", fit.fitted, "Write the fitted values to this CSV");
  fit_cmd->add_option("-o,--output", fit.output, "Write the JSON report here instead of stdout");

  ExperimentOptions simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the Monte Carlo cells of an experiment file");
  add_experiment_options(sim_cmd, simulate);
  sim_cmd->add_option("--dump-rep", simulate.dump_rep, "Write replication R as CSV files and exit");
  sim_cmd->add_option("--cell", simulate.cell, "Cell index used by --dump-rep")->capture_default_str();
  sim_cmd->add_option("--dump-dir", simulate.dump_dir, "Directory for --dump-rep output")->capture_default_str();

  ExperimentOptions table;
  auto* table_cmd = app.add_subcommand("table2", "Relative losses against M-ALL for each cell");
  add_experiment_options(table_cmd, table);

  ExperimentOptions ratio;
  auto* ratio_cmd = app.add_subcommand("riskratio", "Risk ratio against the per-replication oracle");
  add_experiment_options(ratio_cmd, ratio);

  ProfileOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Oracle and ideal risks for a coefficient profile");
  add_profile_options(oracle_cmd, oracle);
  oracle_cmd->add_option("--discrete", oracle.discrete, "Comma-separated N values for W(N) oracles")
      ->capture_default_str();

  ProfileOptions psi_opts;
  auto* psi_cmd = app.add_subcommand("psi", "Candidate-set complexity for a coefficient profile");
  add_profile_options(psi_cmd, psi_opts);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (sim_cmd->parsed()) return cmd_experiment("simulate", simulate, g, out);
    if (table_cmd->parsed()) return cmd_experiment("table2", table, g, out);
    if (ratio_cmd->parsed()) return cmd_experiment("riskratio", ratio, g, out);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle, out);
    if (psi_cmd->parsed()) return cmd_psi(psi_opts, out);
  } catch (const ConfigError& e) {
    err << "mma-lab: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "mma-lab: numerical error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    err << "mma-lab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "mma-lab: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mma::cli
