#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chirp/pairing.hpp"
#include "chirp/permutation.hpp"
#include "chirp/sync.hpp"

// Discrete-round swarm simulator. One global tick per round; honest agents
// pair via the keyed rule, joiners listen until synchronized, rogue agents
// spoof index claims and are accepted only when the claim matches the
// victim's own computed partner. Everything is deterministic in the
// scenario seed.

namespace chirp {

/// How a rogue picks victims each round.
///  - IdentityCycle: runs the unkeyed protocol (assumes the monotone cycle).
///  - WrongSeed: runs the keyed protocol with a guessed seed; the guess is
///    re-drawn every cycle from (wrong_seed, rogue, cycle) since a locked-out
///    adversary has nothing to hold a stale guess for.
///  - UniformRandom: picks a live victim and a spoofed index at random.
enum class RogueStrategy { IdentityCycle, WrongSeed, UniformRandom };

struct RogueConfig {
    uint32_t count = 0;
    RogueStrategy strategy = RogueStrategy::UniformRandom;
    uint64_t wrong_seed = 0;  // read only by WrongSeed
};

/// Timeline entry. `value` carries the node index for loss/entry and the
/// rogue count delta for attach/detach. Events fire at the start of their
/// tick, before any pairing in that round.
struct SimEvent {
    enum class Kind { NodeLoss, NodeEntry, RogueAttach, RogueDetach };
    uint64_t tick = 0;
    Kind kind = Kind::NodeLoss;
    uint32_t value = 0;
};

std::string_view to_string(SimEvent::Kind kind);

/// Declarative description of one run: capacity, shared cycle, initial
/// population, churn/adversary timeline, and the seed every random draw
/// derives from.
struct SimScenario {
    NetworkParams params;
    CyclePermutation cycle;
    std::vector<NodeId> initial_nodes;
    std::vector<SimEvent> events;
    uint32_t cycles_to_run = 1;
    std::optional<RogueConfig> rogues;
    uint64_t rng_seed = 0;
    uint32_t required_confirmations = SyncState::kDefaultConfirmations;
};

/// Per-cycle accounting.
///  - edges_completed: unordered pairs that exchanged in both directions.
///  - expected_edges: pairs among agents active when the cycle started.
///  - ce_loss_observed: wasted pairing slots (live source, missing partner)
///    over all live pairing slots; equals (cnt-actual)/cnt when losses sit
///    on cycle boundaries.
///  - joins_synchronized: joiners whose round inference completed this cycle.
struct CycleMetrics {
    uint32_t cycle_index = 0;
    uint64_t edges_completed = 0;
    uint64_t expected_edges = 0;
    double ce_loss_observed = 0.0;
    uint64_t rogue_attempts = 0;
    uint64_t rogue_accepted = 0;
    uint32_t joins_synchronized = 0;
};

/// Scenario validation or timeline failure, naming the tick and event.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Run the full scenario, one metrics row per cycle. Identical scenarios
/// (seed included) produce identical output.
std::vector<CycleMetrics> run_scenario(const SimScenario& scenario);

/// Pooled rogue_accepted / rogue_attempts over the whole run. Requires a
/// rogue config with count >= 1; throws ScenarioError when the run produced
/// zero attempts.
double measure_rogue_acceptance(const SimScenario& scenario);

/// Render the full pairing matrix for a cycle, one row per round, sources
/// as columns, "-" marking self-loops. Formats: "text", "csv", "markdown".
std::string dump_schedule(const NetworkParams& params, const CyclePermutation& cycle,
                          std::string_view format);
std::string dump_schedule(const SimScenario& scenario, std::string_view format);

}  // namespace chirp
