#pragma once

#include "mma/config.hpp"
#include "mma/sim.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mma {

/// Columns case,alpha,n,method,mean,se,R,seed; one row per method and cell.
std::string table_csv(const std::vector<ScenarioResult>& cells);

/// Columns case,alpha,n,method,ratio,mean_loss,oracle_mean_loss,R,seed.
std::string riskratio_csv(const std::vector<ScenarioResult>& cells);

/// JSON document with the resolved configuration, the master seed, the wall
/// time and every cell. Validates against schemas/mma-lab-report.schema.json.
std::string scenario_report_json(std::string_view command, const ExperimentConfig& config,
                                 const std::vector<ScenarioResult>& cells, double wall_seconds);

/// Version string embedded in reports.
std::string_view library_version();

}  // namespace mma
