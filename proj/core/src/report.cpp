#include "mma/report.hpp"

#include "mma/csv.hpp"

#include <json.hpp>

#include <sstream>

namespace mma {

std::string_view library_version() { return "0.1.0"; }

std::string table_csv(const std::vector<ScenarioResult>& cells) {
  std::ostringstream os;
  CsvWriter w(os);
  w.row({"case", "alpha", "n", "method", "mean", "se", "R", "seed"});
  for (const auto& cell : cells) {
    for (const auto& m : cell.methods) {
      w.row({std::string(case_name(cell.config.decay)), format_double(cell.config.alpha), std::to_string(cell.config.n),
             std::string(method_name(m.method)), format_double(m.mean_ratio), format_double(m.se),
             std::to_string(cell.config.reps), std::to_string(cell.config.master_seed)});
    }
  }
  return os.str();
}

std::string riskratio_csv(const std::vector<ScenarioResult>& cells) {
  std::ostringstream os;
  CsvWriter w(os);
  w.row({"case", "alpha", "n", "method", "ratio", "mean_loss", "oracle_mean_loss", "R", "seed"});
  for (const auto& cell : cells) {
    for (const auto& m : cell.methods) {
      w.row({std::string(case_name(cell.config.decay)), format_double(cell.config.alpha), std::to_string(cell.config.n),
             std::string(method_name(m.method)), format_double(m.risk_ratio), format_double(m.mean_loss),
             format_double(cell.oracle_mean_loss), std::to_string(cell.config.reps),
             std::to_string(cell.config.master_seed)});
    }
  }
  return os.str();
}

std::string scenario_report_json(std::string_view command, const ExperimentConfig& config,
                                 const std::vector<ScenarioResult>& cells, double wall_seconds) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["tool"] = "mma-lab";
  j["version"] = std::string(library_version());
  j["command"] = std::string(command);
  j["config"] = ordered_json::parse(experiment_to_json(config));
  j["seed"] = config.master_seed;
  j["wall_time_seconds"] = wall_seconds;
  j["cells"] = ordered_json::array();
  for (const auto& cell : cells) {
    ordered_json c;
    c["case"] = std::string(case_name(cell.config.decay));
    c["alpha"] = cell.config.alpha;
    c["n"] = cell.config.n;
    c["p"] = cell.p;
    c["sigma2"] = cell.sigma2;
    c["mstar_population"] = cell.mstar_population;
    c["reps"] = cell.config.reps;
    c["oracle_mean_loss"] = cell.oracle_mean_loss;
    c["methods"] = ordered_json::array();
    for (const auto& m : cell.methods) {
      c["methods"].push_back({{"method", std::string(method_name(m.method))},
                              {"mean", m.mean_ratio},
                              {"se", m.se},
                              {"mean_loss", m.mean_loss},
                              {"risk_ratio", m.risk_ratio}});
    }
    j["cells"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

}  // namespace mma
