#include "chirp/sim.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "chirp/rng.hpp"

namespace chirp {

namespace {

std::string describe(const SimEvent& event) {
    std::ostringstream os;
    os << to_string(event.kind) << "(" << event.value << ") at tick " << event.tick;
    return os.str();
}

[[noreturn]] void fail_event(const SimEvent& event, const std::string& why) {
    throw ScenarioError(describe(event) + ": " + why);
}

uint64_t pairs_of(uint64_t k) { return k * (k - 1) / 2; }

// Mutable world state while a scenario runs. Joiners hold a round tracker
// each; once it confirms they wait in `pending` for the next cycle boundary.
struct World {
    std::set<uint32_t> active;
    std::map<uint32_t, SyncState> joining;
    std::set<uint32_t> pending;
    uint32_t rogue_cnt = 0;

    bool present(uint32_t idx) const {
        return active.contains(idx) || joining.contains(idx) || pending.contains(idx);
    }

    std::set<NodeId> occupied() const {
        std::set<NodeId> ids;
        for (uint32_t idx : active) ids.insert(NodeId{idx});
        for (const auto& [idx, st] : joining) ids.insert(NodeId{idx});
        for (uint32_t idx : pending) ids.insert(NodeId{idx});
        return ids;
    }
};

}  // namespace

std::string_view to_string(SimEvent::Kind kind) {
    switch (kind) {
        case SimEvent::Kind::NodeLoss: return "node_loss";
        case SimEvent::Kind::NodeEntry: return "node_entry";
        case SimEvent::Kind::RogueAttach: return "rogue_attach";
        case SimEvent::Kind::RogueDetach: return "rogue_detach";
    }
    return "unknown_event";
}

std::vector<CycleMetrics> run_scenario(const SimScenario& scenario) {
    const uint32_t n = scenario.params.node_cnt;
    if (scenario.cycle.node_cnt() != n)
        throw ScenarioError("cycle capacity " + std::to_string(scenario.cycle.node_cnt()) +
                            " does not match network capacity " + std::to_string(n));
    if (scenario.cycles_to_run == 0)
        throw ScenarioError("cycles_to_run is 0: nothing to run");
    if (scenario.required_confirmations == 0)
        throw ScenarioError("required_confirmations must be at least 1");

    const uint64_t total_ticks = uint64_t(n) * scenario.cycles_to_run;
    for (size_t i = 0; i < scenario.events.size(); ++i) {
        const SimEvent& event = scenario.events[i];
        if (i > 0 && event.tick < scenario.events[i - 1].tick)
            fail_event(event, "events must be ordered by tick");
        if (event.tick >= total_ticks)
            fail_event(event, "tick is past the end of the run (" +
                                  std::to_string(total_ticks) + " ticks)");
    }

    World world;
    {
        std::set<NodeId> occupied;
        for (NodeId id : scenario.initial_nodes) {
            if (id.value >= n)
                throw ScenarioError("initial node index " + std::to_string(id.value) +
                                    " is outside capacity " + std::to_string(n));
            switch (check_admission(scenario.params, occupied, id)) {
                case AdmissionVerdict::Admit: break;
                case AdmissionVerdict::Full:
                    throw ScenarioError("initial_nodes exceed network capacity " +
                                        std::to_string(n));
                case AdmissionVerdict::IndexCollision:
                    throw ScenarioError("initial_nodes repeat index " +
                                        std::to_string(id.value));
            }
            occupied.insert(id);
            world.active.insert(id.value);
        }
    }

    if (scenario.rogues) world.rogue_cnt = scenario.rogues->count;

    const auto order = scenario.cycle.order();
    SplitMix64 rng(scenario.rng_seed);

    // Per-cycle guessed orders for seed-guessing rogues; rebuilt every cycle.
    std::vector<std::vector<uint32_t>> guesses;
    auto ensure_guesses = [&](uint32_t cycle_index) {
        if (!scenario.rogues || scenario.rogues->strategy != RogueStrategy::WrongSeed) return;
        while (guesses.size() < world.rogue_cnt) {
            uint32_t k = uint32_t(guesses.size());
            uint64_t seed = mix_seed(mix_seed(scenario.rogues->wrong_seed, k), cycle_index);
            auto guess = shuffle_fisher_yates(scenario.params, seed);
            guesses.emplace_back(guess.order().begin(), guess.order().end());
        }
    };

    std::vector<CycleMetrics> metrics;
    metrics.reserve(scenario.cycles_to_run);

    uint64_t edges = 0, wasted = 0, slots = 0, attempts = 0, accepted = 0;
    uint32_t joins = 0;
    uint64_t expected = 0;

    size_t next_event = 0;
    for (uint64_t tick = 0; tick < total_ticks; ++tick) {
        const uint32_t round = uint32_t(tick % n);
        const uint32_t cycle_index = uint32_t(tick / n);

        // Synchronized joiners start participating on a cycle boundary only,
        // so a cycle's edge count never mixes two population sizes upward.
        if (round == 0) {
            for (uint32_t idx : world.pending) world.active.insert(idx);
            world.pending.clear();
        }

        for (; next_event < scenario.events.size() &&
               scenario.events[next_event].tick == tick;
             ++next_event) {
            const SimEvent& event = scenario.events[next_event];
            switch (event.kind) {
                case SimEvent::Kind::NodeLoss: {
                    if (!world.present(event.value))
                        fail_event(event, "node is not present");
                    world.active.erase(event.value);
                    world.joining.erase(event.value);
                    world.pending.erase(event.value);
                    break;
                }
                case SimEvent::Kind::NodeEntry: {
                    if (event.value >= n)
                        fail_event(event, "index is outside capacity " + std::to_string(n));
                    switch (check_admission(scenario.params, world.occupied(),
                                            NodeId{event.value})) {
                        case AdmissionVerdict::Admit: break;
                        case AdmissionVerdict::Full:
                            fail_event(event, "network is full");
                        case AdmissionVerdict::IndexCollision:
                            fail_event(event, "index is already in use");
                    }
                    world.joining.try_emplace(event.value, scenario.params,
                                              NodeId{event.value}, scenario.cycle,
                                              scenario.required_confirmations);
                    break;
                }
                case SimEvent::Kind::RogueAttach: {
                    if (!scenario.rogues)
                        fail_event(event, "scenario has no rogue strategy configured");
                    if (event.value == 0) fail_event(event, "attach count is 0");
                    world.rogue_cnt += event.value;
                    ensure_guesses(cycle_index);
                    break;
                }
                case SimEvent::Kind::RogueDetach: {
                    if (event.value > world.rogue_cnt)
                        fail_event(event, "only " + std::to_string(world.rogue_cnt) +
                                              " rogue agents attached");
                    world.rogue_cnt -= event.value;
                    break;
                }
            }
        }

        if (round == 0) {
            edges = wasted = slots = attempts = accepted = 0;
            joins = 0;
            expected = pairs_of(world.active.size());
            guesses.clear();
            ensure_guesses(cycle_index);
        }

        const uint32_t value = order[round];
        auto partner_of = [&](uint32_t y) {
            return uint32_t((uint64_t(value) + n - y) % n);
        };

        for (uint32_t x : world.active) {
            const uint32_t target = partner_of(x);
            ++slots;
            if (target == x) continue;
            if (world.active.contains(target)) {
                if (x < target) ++edges;
            } else {
                ++wasted;
            }
        }

        // Each joiner hears at most one index per round: the unique live
        // source whose partner is the joiner's own slot.
        std::vector<uint32_t> now_synced;
        for (auto& [j, tracker] : world.joining) {
            const uint32_t sender = partner_of(j);
            SyncObservation obs{tick, std::nullopt};
            if (sender != j && world.active.contains(sender))
                obs.inbound = NodeId{sender};
            tracker.infer_round(obs);
            if (tracker.is_synchronized()) now_synced.push_back(j);
        }
        for (uint32_t j : now_synced) {
            world.joining.erase(j);
            world.pending.insert(j);
            ++joins;
        }

        if (world.rogue_cnt > 0 && scenario.rogues) {
            const RogueConfig& rogues = *scenario.rogues;
            auto try_claim = [&](uint32_t victim, uint32_t claim) {
                if (!world.active.contains(victim)) return;
                ++attempts;
                const uint32_t partner = partner_of(victim);
                if (partner != victim && partner == claim) ++accepted;
            };
            switch (rogues.strategy) {
                case RogueStrategy::IdentityCycle: {
                    for (uint32_t k = 0; k < world.rogue_cnt; ++k) {
                        const uint32_t claim = k % n;
                        const uint32_t target = uint32_t((uint64_t(round) + n - claim) % n);
                        if (target == claim) continue;  // believes it self-loops
                        try_claim(target, claim);
                    }
                    break;
                }
                case RogueStrategy::WrongSeed: {
                    for (uint32_t k = 0; k < world.rogue_cnt; ++k) {
                        const uint32_t claim = k % n;
                        const uint32_t guess_value = guesses[k][round];
                        const uint32_t target =
                            uint32_t((uint64_t(guess_value) + n - claim) % n);
                        if (target == claim) continue;
                        try_claim(target, claim);
                    }
                    break;
                }
                case RogueStrategy::UniformRandom: {
                    if (!world.active.empty()) {
                        const std::vector<uint32_t> pool(world.active.begin(),
                                                         world.active.end());
                        for (uint32_t k = 0; k < world.rogue_cnt; ++k) {
                            const uint32_t victim =
                                pool[size_t(rng.next() % pool.size())];
                            uint32_t claim = uint32_t(rng.next() % (n - 1));
                            if (claim >= victim) ++claim;
                            try_claim(victim, claim);
                        }
                    }
                    break;
                }
            }
        }

        if (round == n - 1) {
            CycleMetrics row;
            row.cycle_index = cycle_index;
            row.edges_completed = edges;
            row.expected_edges = expected;
            row.ce_loss_observed =
                slots > 0 ? double(wasted) / double(slots)
                          : communication_efficiency(n, uint32_t(world.active.size()))
                                .ce_loss;
            row.rogue_attempts = attempts;
            row.rogue_accepted = accepted;
            row.joins_synchronized = joins;
            metrics.push_back(row);
        }
    }
    return metrics;
}

double measure_rogue_acceptance(const SimScenario& scenario) {
    bool attaches = std::any_of(
        scenario.events.begin(), scenario.events.end(),
        [](const SimEvent& e) { return e.kind == SimEvent::Kind::RogueAttach; });
    if (!scenario.rogues || (scenario.rogues->count == 0 && !attaches))
        throw ScenarioError("scenario has no rogue agents");

    uint64_t attempts = 0, accepted = 0;
    for (const CycleMetrics& row : run_scenario(scenario)) {
        attempts += row.rogue_attempts;
        accepted += row.rogue_accepted;
    }
    if (attempts == 0) throw ScenarioError("rogue agents made no attempts");
    return double(accepted) / double(attempts);
}

std::string dump_schedule(const NetworkParams& params, const CyclePermutation& cycle,
                          std::string_view format) {
    const uint32_t n = params.node_cnt;
    if (cycle.node_cnt() != n)
        throw std::invalid_argument("cycle capacity does not match network capacity");
    const auto order = cycle.order();
    auto cell = [&](uint32_t r, uint32_t x) -> std::optional<uint32_t> {
        const uint32_t target = uint32_t((uint64_t(order[r]) + n - x) % n);
        if (target == x) return std::nullopt;
        return target;
    };

    std::ostringstream os;
    if (format == "text") {
        const int w = int(std::to_string(n - 1).size());
        os << std::setw(w) << "r" << ' ' << std::setw(w) << "v" << " |";
        for (uint32_t x = 0; x < n; ++x) os << ' ' << std::setw(w) << x;
        os << '\n';
        os << std::string(size_t(2 * w + 2), '-') << '+'
           << std::string(size_t(n) * size_t(w + 1), '-') << '\n';
        for (uint32_t r = 0; r < n; ++r) {
            os << std::setw(w) << r << ' ' << std::setw(w) << order[r] << " |";
            for (uint32_t x = 0; x < n; ++x) {
                os << ' ' << std::setw(w);
                if (auto t = cell(r, x)) os << *t;
                else os << "-";
            }
            os << '\n';
        }
    } else if (format == "csv") {
        os << "round,value";
        for (uint32_t x = 0; x < n; ++x) os << ',' << x;
        os << '\n';
        for (uint32_t r = 0; r < n; ++r) {
            os << r << ',' << order[r];
            for (uint32_t x = 0; x < n; ++x) {
                os << ',';
                if (auto t = cell(r, x)) os << *t;
                else os << '-';
            }
            os << '\n';
        }
    } else if (format == "markdown") {
        os << "| r | v |";
        for (uint32_t x = 0; x < n; ++x) os << ' ' << x << " |";
        os << '\n' << "|---|---|";
        for (uint32_t x = 0; x < n; ++x) os << "---|";
        os << '\n';
        for (uint32_t r = 0; r < n; ++r) {
            os << "| " << r << " | " << order[r] << " |";
            for (uint32_t x = 0; x < n; ++x) {
                os << ' ';
                if (auto t = cell(r, x)) os << *t;
                else os << '-';
                os << " |";
            }
            os << '\n';
        }
    } else {
        throw std::invalid_argument("unsupported schedule format \"" + std::string(format) +
                                    "\": expected text, csv, or markdown");
    }
    return os.str();
}

std::string dump_schedule(const SimScenario& scenario, std::string_view format) {
    return dump_schedule(scenario.params, scenario.cycle, format);
}

}  // namespace chirp
