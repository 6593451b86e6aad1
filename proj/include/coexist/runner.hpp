#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coexist/config.hpp"

namespace coexist {

inline constexpr const char* kOutDirEnv = "COEXIST_NULL_OUT_DIR";

struct RunReport {
  std::vector<std::filesystem::path> files;  // in write order
  std::string summary;                       // contents of summary.txt
};

/// Runs cfg.scenario and writes into out_dir (created if missing):
///   results.csv   one row per sample (per grid point for the sweep)
///   cdf_<metric>_<lambda>.csv   value_db,cdf for multi-victim and antenna study
///   summary.txt   resolved config, seed, derived quantities, runtime
/// CSV files depend only on the config, never on the thread count.
/// Throws on invalid configs, scenario errors and I/O failures.
RunReport run_scenario(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// The --out flag when given, else the COEXIST_NULL_OUT_DIR value when set
/// and non-empty. Throws std::invalid_argument when neither is available.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag, const char* env_value);

/// `value_db,cdf` rows at every distinct sample value.
std::string cdf_csv(const EmpiricalCdf& cdf);

}  // namespace coexist
