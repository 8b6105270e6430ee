#pragma once

// Text, CSV and JSON renderings shared by the subcommands.

#include "calib/analysis.hpp"
#include "calib/metrics.hpp"

#include <json.hpp>

#include <string>

namespace calib::cli {

// Compact decimal for human-readable tables (10 significant digits).
std::string short_number(double v);

// CSV field, quoted when it contains a comma or quote.
std::string csv_field(const std::string& s);

nlohmann::json pools_json(const std::vector<PoolBins>& pools);
std::string pools_csv(const std::vector<PoolBins>& pools);

std::string sweep_cells_csv(const SweepResult& r);
std::string sweep_summary_csv(const SweepResult& r);
nlohmann::json sweep_metadata(const SweepResult& r, std::uint64_t seed, const std::string& source);

// Positions as rows, one column per config (metric index when on the grid).
std::string rank_table_csv(const RankTable& t);
std::string rank_scores_csv(const RankTable& t);

std::string noise_csv(const std::vector<NoiseLevelResult>& rows);

}  // namespace calib::cli
