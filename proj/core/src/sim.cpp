#include "mma/sim.hpp"

#include "mma/errors.hpp"
#include "mma/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace mma {

namespace {

struct MethodEntry {
  MethodId id;
  std::string_view name;
};

constexpr MethodEntry kMethods[] = {
    {MethodId::WR1, "WR1"},     {MethodId::WR2, "WR2"},     {MethodId::MR1, "MR1"},
    {MethodId::MR2, "MR2"},     {MethodId::M_ALL, "M-ALL"}, {MethodId::M_G1, "M-G1"},
    {MethodId::M_G2, "M-G2"},   {MethodId::M_MS1, "M-MS1"}, {MethodId::M_MS2, "M-MS2"},
    {MethodId::ORACLE, "ORACLE"},
};

/// Replication index reserved for the shared design stream.
constexpr std::uint64_t kDesignStream = std::numeric_limits<std::uint64_t>::max();

void fill_regressors(Eigen::MatrixXd& X, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  X.col(0).setOnes();
  for (Eigen::Index j = 1; j < X.cols(); ++j) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, j) = z(rng);
  }
}

}  // namespace

std::string_view method_name(MethodId id) {
  for (const auto& m : kMethods) {
    if (m.id == id) return m.name;
  }
  return "?";
}

std::optional<MethodId> parse_method(std::string_view name) {
  for (const auto& m : kMethods) {
    if (m.name == name) return m.id;
  }
  return std::nullopt;
}

const std::vector<MethodId>& all_methods() {
  static const std::vector<MethodId> ids = [] {
    std::vector<MethodId> v;
    for (const auto& m : kMethods) v.push_back(m.id);
    return v;
  }();
  return ids;
}

std::string_view case_name(DecayCase c) { return c == DecayCase::poly ? "poly" : "exp"; }

std::optional<DecayCase> parse_case(std::string_view name) {
  if (name == "poly" || name == "1") return DecayCase::poly;
  if (name == "exp" || name == "2") return DecayCase::exp;
  return std::nullopt;
}

std::string_view to_string(MstarSource s) { return s == MstarSource::population ? "population" : "replication"; }

void ScenarioConfig::validate() const {
  if (n < 10) throw ConfigError("scenario requires n >= 10 (got " + std::to_string(n) + ")");
  if (reps < 1) throw ConfigError("scenario requires reps >= 1");
  if (!(snr > 0.0) || !std::isfinite(snr)) throw ConfigError("snr must be positive");
  if (decay == DecayCase::poly && !(alpha > 0.5)) throw ConfigError("polynomial decay requires alpha > 0.5");
  if (decay == DecayCase::exp && !(alpha > 0.0)) throw ConfigError("exponential decay requires alpha > 0");
  if (!(lsq_kappa > 0.0 && lsq_kappa < 1.0)) throw ConfigError("lsq_kappa must lie in (0, 1)");
}

ScenarioPlan make_plan(const ScenarioConfig& config) {
  config.validate();
  ScenarioPlan plan;
  plan.config = config;
  plan.p = config.p();
  plan.beta.resize(static_cast<Eigen::Index>(plan.p));
  for (std::size_t j = 0; j < plan.p; ++j) {
    const double jj = static_cast<double>(j + 1);
    plan.beta[static_cast<Eigen::Index>(j)] =
        config.decay == DecayCase::poly ? std::pow(jj, -config.alpha) : std::exp(-std::pow(jj, config.alpha));
  }
  CompensatedSum signal;
  for (std::size_t j = 1; j < plan.p; ++j) signal += plan.beta[static_cast<Eigen::Index>(j)] * plan.beta[static_cast<Eigen::Index>(j)];
  plan.sigma2 = signal.value() / config.snr;

  CoefficientProfile population{plan.beta, plan.sigma2, config.n};
  plan.mstar_population = best_ms(population).m;
  return plan;
}

RegressionData gen_replication(const ScenarioConfig& config, std::size_t rep) {
  return gen_replication(make_plan(config), rep);
}

RegressionData gen_replication(const ScenarioPlan& plan, std::size_t rep) {
  const auto n = static_cast<Eigen::Index>(plan.config.n);
  const auto p = static_cast<Eigen::Index>(plan.p);
  std::mt19937_64 rng(stream_seed(plan.config.master_seed, rep));

  RegressionData data;
  data.X.resize(n, p);
  if (plan.config.fixed_design) {
    std::mt19937_64 design_rng(stream_seed(plan.config.master_seed, kDesignStream));
    fill_regressors(data.X, design_rng);
  } else {
    fill_regressors(data.X, rng);
  }
  data.f = data.X * plan.beta;
  std::normal_distribution<double> noise(0.0, std::sqrt(plan.sigma2));
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) data.y[i] = (*data.f)[i] + noise(rng);
  data.sigma2 = plan.sigma2;
  return data;
}

namespace {

double estimate_sigma2(VarianceMethod mode, double lsq_kappa, const RegressionData& data, const SequenceView& view) {
  switch (mode) {
    case VarianceMethod::known:
      if (!data.sigma2) throw std::invalid_argument("known noise variance requested but not available");
      return *data.sigma2;
    case VarianceMethod::lsq:
      return sigma2_lsq(view, lsq_model_size(view.n(), view.p(), lsq_kappa)).value;
    case VarianceMethod::rice:
      // Responses are ordered by the first non-intercept regressor.
      if (data.X.cols() < 2) throw std::invalid_argument("the difference estimator needs a covariate column");
      return sigma2_rice(data.y, data.X.col(1)).value;
  }
  throw std::logic_error("unhandled variance method");
}

}  // namespace

double replication_sigma2(const ScenarioPlan& plan, const RegressionData& data, const SequenceView& view) {
  return estimate_sigma2(plan.config.sigma2_mode, plan.config.lsq_kappa, data, view);
}

std::size_t replication_mstar(const ScenarioPlan& plan, const SequenceView& view) {
  if (plan.config.mstar == MstarSource::population) return plan.mstar_population;
  return best_ms(CoefficientProfile{*view.theta_true(), plan.sigma2, view.n()}).m;
}

MethodFit fit_method(MethodId id, const SequenceView& view, double sigma2_hat, std::size_t mstar) {
  const std::size_t n = view.n();
  const std::size_t p = view.p();
  MethodFit fit;
  switch (id) {
    case MethodId::WR1:
    case MethodId::WR2:
      fit.set = all_nested(p);
      fit.gamma = solve_discrete(view, fit.set, sigma2_hat, {id == MethodId::WR1 ? std::size_t{2} : std::size_t{5}});
      break;
    case MethodId::MR1:
    case MethodId::MR2: {
      const std::size_t raw = id == MethodId::MR1 ? static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(mstar))))
                                                  : mstar / 2;
      fit.set = successive(std::min(std::max<std::size_t>(2, raw), p), p);
      fit.gamma = solve_nested(view, fit.set, sigma2_hat);
      break;
    }
    case MethodId::M_ALL:
      fit.set = all_nested(p);
      fit.gamma = solve_nested(view, fit.set, sigma2_hat);
      break;
    case MethodId::M_G1:
      fit.set = grouped_geometric(p, n, 1.0, 1.0);
      fit.gamma = solve_nested(view, fit.set, sigma2_hat);
      break;
    case MethodId::M_G2:
      fit.set = grouped_equal(p, n, 1.0);
      fit.gamma = solve_nested(view, fit.set, sigma2_hat);
      break;
    case MethodId::M_MS1:
    case MethodId::M_MS2: {
      const std::size_t m_hat = std::max<std::size_t>(1, cp_select(view, sigma2_hat, p));
      if (id == MethodId::M_MS1) {
        const double kappa = std::log(static_cast<double>(n));
        fit.set = ms_centered(m_hat, kappa, kappa, p);
      } else {
        fit.set = ms_window(m_hat, 5, p);
      }
      fit.gamma = solve_nested(view, fit.set, sigma2_hat);
      break;
    }
    case MethodId::ORACLE:
      fit.set = all_nested(p);
      fit.gamma = solve_loss_oracle(view, fit.set);
      break;
  }
  fit.loss = view.has_truth() ? ma_loss(view, fit.set, fit.gamma) : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

double run_method(MethodId id, const ScenarioPlan& plan, std::size_t rep) {
  const auto data = gen_replication(plan, rep);
  const auto view = orthogonalize(data);
  return fit_method(id, view, replication_sigma2(plan, data, view), replication_mstar(plan, view)).loss;
}

double run_method(MethodId id, const RegressionData& data, VarianceMethod sigma2_mode, double lsq_kappa) {
  if (!data.f || !data.sigma2) throw std::invalid_argument("run_method needs data carrying f and sigma2");
  const auto view = orthogonalize(data);
  const double sigma2_hat = estimate_sigma2(sigma2_mode, lsq_kappa, data, view);
  const std::size_t mstar = best_ms(CoefficientProfile{*view.theta_true(), *data.sigma2, view.n()}).m;
  return fit_method(id, view, sigma2_hat, mstar).loss;
}

std::vector<MethodId> evaluated_methods(const ScenarioConfig& config) {
  std::vector<MethodId> out = config.methods.empty() ? all_methods() : config.methods;
  for (MethodId must : {MethodId::M_ALL, MethodId::ORACLE}) {
    if (std::find(out.begin(), out.end(), must) == out.end()) out.push_back(must);
  }
  // Drop duplicates while keeping the first occurrence.
  std::vector<MethodId> unique;
  for (MethodId id : out) {
    if (std::find(unique.begin(), unique.end(), id) == unique.end()) unique.push_back(id);
  }
  return unique;
}

std::vector<std::vector<double>> replication_losses(const ScenarioConfig& config, std::size_t jobs) {
  const ScenarioPlan plan = make_plan(config);
  const auto methods = evaluated_methods(config);
  const std::size_t R = config.reps;
  std::vector<std::vector<double>> losses(R);
  std::vector<std::exception_ptr> errors(R);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t rep = next.fetch_add(1); rep < R; rep = next.fetch_add(1)) {
      try {
        const auto data = gen_replication(plan, rep);
        const auto view = orthogonalize(data);
        const double sigma2_hat = replication_sigma2(plan, data, view);
        const std::size_t mstar = replication_mstar(plan, view);
        std::vector<double> row;
        row.reserve(methods.size());
        for (MethodId id : methods) row.push_back(fit_method(id, view, sigma2_hat, mstar).loss);
        losses[rep] = std::move(row);
      } catch (...) {
        errors[rep] = std::current_exception();
      }
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, R);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Report the failure of the lowest replication index, independent of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return losses;
}

ScenarioResult run_scenario(const ScenarioConfig& config, std::size_t jobs) {
  const ScenarioPlan plan = make_plan(config);
  const auto methods = evaluated_methods(config);
  const auto losses = replication_losses(config, jobs);
  const std::size_t R = config.reps;
  const auto column = [&](MethodId id) {
    return static_cast<std::size_t>(std::find(methods.begin(), methods.end(), id) - methods.begin());
  };
  const std::size_t ref = column(MethodId::M_ALL);
  const std::size_t oracle = column(MethodId::ORACLE);

  ScenarioResult out;
  out.config = config;
  out.p = plan.p;
  out.sigma2 = plan.sigma2;
  out.mstar_population = plan.mstar_population;

  CompensatedSum oracle_total;
  for (std::size_t r = 0; r < R; ++r) oracle_total += losses[r][oracle];
  out.oracle_mean_loss = oracle_total.value() / static_cast<double>(R);

  const std::vector<MethodId> reported = config.methods.empty() ? all_methods() : config.methods;
  for (MethodId id : reported) {
    const std::size_t c = column(id);
    std::vector<double> ratio(R);
    CompensatedSum ratio_sum;
    CompensatedSum loss_sum;
    for (std::size_t r = 0; r < R; ++r) {
      ratio[r] = losses[r][c] / losses[r][ref];
      ratio_sum += ratio[r];
      loss_sum += losses[r][c];
    }
    const double mean = ratio_sum.value() / static_cast<double>(R);
    CompensatedSum dev;
    for (double x : ratio) dev += (x - mean) * (x - mean);
    MethodSummary s;
    s.method = id;
    s.mean_ratio = mean;
    s.se = R > 1 ? std::sqrt(dev.value() / static_cast<double>(R - 1)) / std::sqrt(static_cast<double>(R))
                 : std::numeric_limits<double>::quiet_NaN();
    s.mean_loss = loss_sum.value() / static_cast<double>(R);
    s.risk_ratio = loss_sum.value() / oracle_total.value();
    out.methods.push_back(s);
  }
  return out;
}

ScenarioResult table2(const ScenarioConfig& config, std::size_t jobs) { return run_scenario(config, jobs); }

std::vector<ScenarioResult> risk_ratio_curve(const ScenarioConfig& config, const std::vector<std::size_t>& n_grid,
                                             std::size_t jobs) {
  std::vector<ScenarioResult> out;
  for (std::size_t n : n_grid) {
    ScenarioConfig cell = config;
    cell.n = n;
    if (cell.methods.empty()) cell.methods = {MethodId::M_ALL};
    out.push_back(run_scenario(cell, jobs));
  }
  return out;
}

}  // namespace mma
