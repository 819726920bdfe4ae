#pragma once

// Scenario files: one JSON config document plus one CSV of time series per
// representative day, all relative to a scenario root directory.
//
//   scenario.json          schema "mgplan-scenario/1"
//   days/<label>.csv       first line "# mgplan-timeseries/1", then a header
//
// CSV columns, in order:
//   interval, ambient_c, irradiance_wm2, price_per_kwh,
//   cf_<res name>...              one per renewable catalog entry
//   load_h<i>...                  non-HVAC load per house (kW)
//   shed_max_h<i>...              curtailment limit per house (kW)
//   tdes_h<i>...                  desired indoor temperature (degC)
//   band_h<i>...                  comfort band half-width (degC)

#include "mgplan/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

namespace mgplan::io {

inline constexpr const char* kScenarioSchema = "mgplan-scenario/1";
inline constexpr const char* kSeriesSchema = "# mgplan-timeseries/1";
inline constexpr const char* kConfigFile = "scenario.json";

/// Relative path -> file content.
struct ScenarioFileSet {
    std::map<std::string, std::string> files;

    bool operator==(const ScenarioFileSet&) const = default;
};

/// Error located in a scenario file. row/column are 1-based, 0 when unknown.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string kind, std::string file, int row, int column, const std::string& detail);

    const std::string& kind() const { return kind_; }  // missing-file | schema-mismatch | validation-failure
    const std::string& file() const { return file_; }
    int row() const { return row_; }
    int column() const { return column_; }

private:
    std::string kind_;
    std::string file_;
    int row_;
    int column_;
};

ScenarioFileSet to_file_set(const PlanningProblem& problem);
/// Parse and validate. Throws ScenarioError.
PlanningProblem from_file_set(const ScenarioFileSet& files);

void write_file_set(const ScenarioFileSet& files, const std::filesystem::path& root);
ScenarioFileSet read_file_set(const std::filesystem::path& root);

PlanningProblem load_scenario(const std::filesystem::path& root);
void save_scenario(const PlanningProblem& problem, const std::filesystem::path& root);

/// SHA-256 over every (path, content) pair in path order, hex encoded.
std::string digest(const ScenarioFileSet& files);

/// Desk-scale default study: 20 houses, winter/spring/summer days at
/// 15-minute resolution, the wind/PV/DE/MT/ES1/ES2 catalogs. Deterministic per seed.
ScenarioFileSet synthesize_default_scenario(std::uint64_t seed = 1);

/// RC parameters of the synthesized base house before perturbation.
RcParameters default_house_rc();

/// Population peak of non-HVAC load in the synthesized scenario (kW).
inline constexpr double kDefaultPopulationPeakKw = 213.47;

}  // namespace mgplan::io
