#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <fcsplan/ce.hpp>
#include <fcsplan/io.hpp>

namespace fcsplan {

enum class RunMode { Ce, Enumerate, EvaluatePlacement };

/// One JSON document describes a whole experiment; command-line flags only
/// override seed, mode, output directory and worker count.
struct RunConfig {
    std::string network_path;
    FleetSpec fleet;
    ObjectiveSpec objective;  // base_load_kw filled from base_load_csv
    ce::CeConfig ce;
    RunMode mode = RunMode::Ce;
    std::string out_dir = "out";
    std::vector<NodeId> placement_nodes;  // evaluate-placement mode
    std::string base_load_csv;
    bool trace_objective = false;
    std::uint64_t max_enumeration = 10'000'000;  // enumerate mode budget

    /// Paths in the document resolve relative to its directory.
    static RunConfig from_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text, const std::string& base_dir);
};

// Exit codes of cmd_run / cmd_compare.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigUnreadable = 2;
inline constexpr int kExitValidationFailure = 3;
inline constexpr int kExitNotConverged = 4;

/// Runs the configured pipeline (load network, generate fleet, optimize or
/// evaluate) and writes result.json, fleet.csv, capture.csv and, in CE mode,
/// history.csv into out_dir. Byte-identical artifacts for identical configs.
int cmd_run(const RunConfig& config, std::string* error_message = nullptr);

/// Loads a config, applying the exit-code contract for unreadable or invalid
/// documents. On success delegates to cmd_run(config).
int cmd_run_file(const std::string& config_path, std::string* error_message = nullptr);

/// Evaluates every placement in the list file against the configured scenario
/// and writes compare.csv (sorted by S ascending) into out_dir.
int cmd_compare(const RunConfig& config, const std::string& placements_path,
                std::string* error_message = nullptr);

/// Placement as a bit vector from explicit station node ids.
Placement placement_from_nodes(const CoupledNetwork& net, const std::vector<NodeId>& nodes);
std::vector<NodeId> station_nodes(const CoupledNetwork& net, const Placement& placement);

}  // namespace fcsplan
