#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chirp/sim.hpp"

// JSON scenario loading and CSV metrics rendering. The JSON layout:
//
//   {
//     "capacity": 8,
//     "cycle": "identity" | {"seed": 7} | {"order": [..]} | {"file": "c.bin"},
//     "initial_nodes": "all" | [0, 1, 2] | {"first": 5},
//     "cycles": 4,
//     "rng_seed": 1,
//     "required_confirmations": 3,
//     "rogues": {"count": 10,
//                "strategy": "identity_cycle" | "uniform_random"
//                          | {"wrong_seed": 99}},
//     "events": [{"tick": 8, "node_loss": 5}, {"tick": 20, "node_entry": 5},
//                {"tick": 0, "rogue_attach": 2}, {"tick": 9, "rogue_detach": 1}]
//   }
//
// rng_seed, required_confirmations, rogues, and events are optional; every
// other key is required and unknown keys are rejected. Parse and validation
// failures throw ScenarioError naming the offending field.

namespace chirp {

/// Parse a scenario from JSON text. `base_dir` anchors a relative
/// {"file": ...} cycle reference.
SimScenario scenario_from_json(const std::string& text,
                               const std::filesystem::path& base_dir = ".");

/// Read and parse a scenario file; cycle file references resolve relative
/// to the scenario's directory.
SimScenario load_scenario(const std::filesystem::path& path);

/// Fixed-column CSV, one row per cycle, ce_loss_observed with six decimals.
/// Header:
///   cycle_index,edges_completed,expected_edges,ce_loss_observed,
///   rogue_attempts,rogue_accepted,joins_synchronized
std::string metrics_to_csv(const std::vector<CycleMetrics>& rows);

}  // namespace chirp
