#include "chirp/sim.hpp"

#include <cmath>
#include <vector>

#include "chirp/scenario_io.hpp"
#include "doctest.h"

using namespace chirp;

namespace {

std::vector<NodeId> all_nodes(uint32_t n) {
    std::vector<NodeId> nodes;
    for (uint32_t i = 0; i < n; ++i) nodes.push_back(NodeId{i});
    return nodes;
}

SimScenario base_scenario(uint32_t n, CyclePermutation cycle, uint32_t cycles) {
    return SimScenario{NetworkParams(n), std::move(cycle), all_nodes(n), {}, cycles,
                       std::nullopt, 0, SyncState::kDefaultConfirmations};
}

}  // namespace

TEST_CASE("a stable full swarm completes every edge each cycle") {
    const NetworkParams n8(8);
    for (const auto& cycle : {identity_cycle(n8), shuffle_fisher_yates(n8, 7)}) {
        const auto rows = run_scenario(base_scenario(8, cycle, 4));
        REQUIRE_EQ(rows.size(), 4);
        for (const CycleMetrics& row : rows) {
            CHECK_EQ(row.edges_completed, 28);
            CHECK_EQ(row.expected_edges, 28);
            CHECK_EQ(row.ce_loss_observed, 0.0);
            CHECK_EQ(row.rogue_attempts, 0);
            CHECK_EQ(row.joins_synchronized, 0);
        }
    }
}

TEST_CASE("losing and re-admitting a node follows the pinned metrics") {
    SimScenario scenario = base_scenario(8, identity_cycle(NetworkParams(8)), 4);
    scenario.events = {
        SimEvent{8, SimEvent::Kind::NodeLoss, 5},
        SimEvent{20, SimEvent::Kind::NodeEntry, 5},
    };
    const auto rows = run_scenario(scenario);
    REQUIRE_EQ(rows.size(), 4);

    CHECK_EQ(rows[0].edges_completed, 28);
    CHECK_EQ(rows[0].ce_loss_observed, 0.0);

    // seven nodes left: 21 edges, one wasted slot per round
    CHECK_EQ(rows[1].edges_completed, 21);
    CHECK_EQ(rows[1].expected_edges, 21);
    CHECK_EQ(rows[1].ce_loss_observed, 0.125);

    // the joiner listens through cycle 2 and confirms before it ends
    CHECK_EQ(rows[2].edges_completed, 21);
    CHECK_EQ(rows[2].expected_edges, 21);
    CHECK_EQ(rows[2].joins_synchronized, 1);

    // it participates again from the cycle 3 boundary
    CHECK_EQ(rows[3].edges_completed, 28);
    CHECK_EQ(rows[3].expected_edges, 28);
    CHECK_EQ(rows[3].ce_loss_observed, 0.0);
}

TEST_CASE("a mid-cycle loss wastes only the partners' later slots") {
    SimScenario scenario = base_scenario(8, identity_cycle(NetworkParams(8)), 1);
    scenario.events = {SimEvent{3, SimEvent::Kind::NodeLoss, 5}};
    const auto rows = run_scenario(scenario);
    REQUIRE_EQ(rows.size(), 1);

    // node 5 finished pairs {5,3} and {5,4} before vanishing (round 2 was its
    // self-loop), so five of its edges are missing
    CHECK_EQ(rows[0].expected_edges, 28);
    CHECK_EQ(rows[0].edges_completed, 23);
    // rounds 3..7: one live node per round targets the gone index
    CHECK_EQ(rows[0].ce_loss_observed, 5.0 / 59.0);
}

TEST_CASE("boundary losses reproduce the analytic ce_loss") {
    // drop ten more nodes at every cycle boundary: ce_loss climbs 0.0 .. 0.9
    SimScenario scenario = base_scenario(100, identity_cycle(NetworkParams(100)), 10);
    for (uint32_t c = 1; c < 10; ++c) {
        const uint32_t lo = 100 - 10 * c;
        for (uint32_t idx = lo; idx < lo + 10; ++idx)
            scenario.events.push_back(SimEvent{100ull * c, SimEvent::Kind::NodeLoss, idx});
    }
    const auto rows = run_scenario(scenario);
    REQUIRE_EQ(rows.size(), 10);
    for (uint32_t c = 0; c < 10; ++c) {
        const uint64_t live = 100 - 10ull * c;
        REQUIRE_EQ(rows[c].expected_edges, live * (live - 1) / 2);
        REQUIRE_EQ(rows[c].edges_completed, live * (live - 1) / 2);
        REQUIRE(std::abs(rows[c].ce_loss_observed - 0.1 * c) < 1e-12);
    }
}

TEST_CASE("rogues with the real cycle are accepted every time") {
    SimScenario scenario = base_scenario(64, identity_cycle(NetworkParams(64)), 16);
    scenario.rogues = RogueConfig{10, RogueStrategy::IdentityCycle, 0};
    const double rate = measure_rogue_acceptance(scenario);
    CHECK_EQ(rate, 1.0);

    const auto rows = run_scenario(scenario);
    // each rogue skips its one believed self-loop round per cycle
    CHECK_EQ(rows[0].rogue_attempts, 10 * 63);
    CHECK_EQ(rows[0].rogue_accepted, 10 * 63);
}

TEST_CASE("rogues guessing uniformly land near 1/n") {
    SimScenario scenario = base_scenario(64, shuffle_fisher_yates(NetworkParams(64), 424242), 16);
    scenario.rogues = RogueConfig{10, RogueStrategy::UniformRandom, 0};
    scenario.rng_seed = 1;

    uint64_t attempts = 0;
    for (const CycleMetrics& row : run_scenario(scenario)) attempts += row.rogue_attempts;
    CHECK_EQ(attempts, 10 * 64 * 16);  // one attempt per rogue per round

    const double rate = measure_rogue_acceptance(scenario);
    const double p = 1.0 / 64.0;
    const double sigma = std::sqrt(p * (1 - p) / double(attempts));
    CHECK(std::abs(rate - p) <= 3 * sigma);
}

TEST_CASE("rogues guessing the seed each cycle land near 1/n") {
    SimScenario scenario = base_scenario(64, shuffle_fisher_yates(NetworkParams(64), 424242), 16);
    scenario.rogues = RogueConfig{10, RogueStrategy::WrongSeed, 99};

    uint64_t attempts = 0, accepted = 0;
    for (const CycleMetrics& row : run_scenario(scenario)) {
        attempts += row.rogue_attempts;
        accepted += row.rogue_accepted;
    }
    CHECK_EQ(attempts, 10 * 63 * 16);  // one believed self-loop skipped per cycle

    const double rate = double(accepted) / double(attempts);
    const double p = 1.0 / 64.0;
    const double sigma = std::sqrt(p * (1 - p) / double(attempts));
    CHECK(std::abs(rate - p) <= 3 * sigma);
}

TEST_CASE("rogue attach and detach change the attempt volume") {
    SimScenario scenario = base_scenario(8, identity_cycle(NetworkParams(8)), 2);
    scenario.rogues = RogueConfig{0, RogueStrategy::UniformRandom, 0};
    scenario.events = {
        SimEvent{4, SimEvent::Kind::RogueAttach, 2},
        SimEvent{12, SimEvent::Kind::RogueDetach, 1},
    };
    const auto rows = run_scenario(scenario);
    CHECK_EQ(rows[0].rogue_attempts, 2 * 4);       // rounds 4..7, two rogues
    CHECK_EQ(rows[1].rogue_attempts, 2 * 4 + 4);   // rounds 8..11 two, 12..15 one
}

TEST_CASE("scenario timeline violations are reported with tick and event") {
    const NetworkParams n8(8);

    SUBCASE("events must be ordered") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 2);
        s.events = {SimEvent{9, SimEvent::Kind::NodeLoss, 1},
                    SimEvent{3, SimEvent::Kind::NodeLoss, 2}};
        CHECK_THROWS_WITH_AS(run_scenario(s),
                             "node_loss(2) at tick 3: events must be ordered by tick",
                             ScenarioError);
    }
    SUBCASE("events past the end are rejected") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 2);
        s.events = {SimEvent{16, SimEvent::Kind::NodeLoss, 1}};
        CHECK_THROWS_AS(run_scenario(s), ScenarioError);
    }
    SUBCASE("losing an absent node") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 2);
        s.events = {SimEvent{0, SimEvent::Kind::NodeLoss, 3},
                    SimEvent{1, SimEvent::Kind::NodeLoss, 3}};
        CHECK_THROWS_WITH_AS(run_scenario(s), "node_loss(3) at tick 1: node is not present",
                             ScenarioError);
    }
    SUBCASE("admitting a live index") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 2);
        s.initial_nodes = {NodeId{0}, NodeId{1}, NodeId{2}, NodeId{3}};
        s.events = {SimEvent{0, SimEvent::Kind::NodeEntry, 3}};
        CHECK_THROWS_WITH_AS(run_scenario(s),
                             "node_entry(3) at tick 0: index is already in use",
                             ScenarioError);
    }
    SUBCASE("admitting into a swarm with no free index") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 2);
        s.events = {SimEvent{0, SimEvent::Kind::NodeEntry, 3}};
        CHECK_THROWS_WITH_AS(run_scenario(s), "node_entry(3) at tick 0: network is full",
                             ScenarioError);
    }
    SUBCASE("admitting into a full network") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 2);
        s.events = {SimEvent{0, SimEvent::Kind::NodeLoss, 3},
                    SimEvent{0, SimEvent::Kind::NodeEntry, 3}};
        // fine: freed then re-admitted in the same tick
        CHECK_NOTHROW(run_scenario(s));

        s.events = {SimEvent{0, SimEvent::Kind::NodeEntry, 8}};
        CHECK_THROWS_WITH_AS(run_scenario(s),
                             "node_entry(8) at tick 0: index is outside capacity 8",
                             ScenarioError);
    }
    SUBCASE("detaching more rogues than attached") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 2);
        s.rogues = RogueConfig{1, RogueStrategy::UniformRandom, 0};
        s.events = {SimEvent{0, SimEvent::Kind::RogueDetach, 2}};
        CHECK_THROWS_WITH_AS(run_scenario(s),
                             "rogue_detach(2) at tick 0: only 1 rogue agents attached",
                             ScenarioError);
    }
    SUBCASE("attaching rogues without a strategy") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 2);
        s.events = {SimEvent{0, SimEvent::Kind::RogueAttach, 1}};
        CHECK_THROWS_AS(run_scenario(s), ScenarioError);
    }
    SUBCASE("zero cycles") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 1);
        s.cycles_to_run = 0;
        CHECK_THROWS_AS(run_scenario(s), ScenarioError);
    }
    SUBCASE("cycle capacity mismatch") {
        SimScenario s{NetworkParams(8), identity_cycle(NetworkParams(4)), all_nodes(8),
                      {},              1,                                 std::nullopt,
                      0,               SyncState::kDefaultConfirmations};
        CHECK_THROWS_AS(run_scenario(s), ScenarioError);
    }
    SUBCASE("initial nodes validated inductively") {
        SimScenario s = base_scenario(8, identity_cycle(n8), 1);
        s.initial_nodes.push_back(NodeId{3});
        // nine entries trip the capacity check before the duplicate is seen
        CHECK_THROWS_WITH_AS(run_scenario(s), "initial_nodes exceed network capacity 8",
                             ScenarioError);
        s.initial_nodes = {NodeId{0}, NodeId{1}, NodeId{2}, NodeId{3}, NodeId{3}};
        CHECK_THROWS_WITH_AS(run_scenario(s), "initial_nodes repeat index 3",
                             ScenarioError);
        s.initial_nodes = {NodeId{0}, NodeId{9}};
        CHECK_THROWS_WITH_AS(run_scenario(s),
                             "initial node index 9 is outside capacity 8", ScenarioError);
    }
}

TEST_CASE("an empty swarm reports the analytic loss instead of dividing by zero") {
    SimScenario s{NetworkParams(8), identity_cycle(NetworkParams(8)), {}, {}, 1,
                  std::nullopt,     0, SyncState::kDefaultConfirmations};
    const auto rows = run_scenario(s);
    CHECK_EQ(rows[0].edges_completed, 0);
    CHECK_EQ(rows[0].expected_edges, 0);
    CHECK_EQ(rows[0].ce_loss_observed, 1.0);
}

TEST_CASE("measure_rogue_acceptance guards its preconditions") {
    SimScenario s = base_scenario(8, identity_cycle(NetworkParams(8)), 1);
    CHECK_THROWS_WITH_AS(measure_rogue_acceptance(s), "scenario has no rogue agents",
                         ScenarioError);

    // a configured strategy with nobody attached never attempts anything
    SimScenario idle{NetworkParams(8), identity_cycle(NetworkParams(8)), {}, {}, 1,
                     RogueConfig{1, RogueStrategy::UniformRandom, 0}, 0,
                     SyncState::kDefaultConfirmations};
    CHECK_THROWS_WITH_AS(measure_rogue_acceptance(idle), "rogue agents made no attempts",
                         ScenarioError);
}

TEST_CASE("identical scenarios give identical metrics") {
    SimScenario scenario = base_scenario(64, shuffle_fisher_yates(NetworkParams(64), 424242), 8);
    scenario.rogues = RogueConfig{10, RogueStrategy::UniformRandom, 0};
    scenario.rng_seed = 17;
    const std::string a = metrics_to_csv(run_scenario(scenario));
    const std::string b = metrics_to_csv(run_scenario(scenario));
    CHECK_EQ(a, b);
    CHECK(a.find("cycle_index,edges_completed") == 0);
}

TEST_CASE("dump_schedule renders all three formats") {
    const NetworkParams n4(4);
    const CyclePermutation id = identity_cycle(n4);

    // even n: two self-loops per round (x == v - x twice mod 4)
    const std::string text = dump_schedule(n4, id, "text");
    CHECK_EQ(text,
             "r v | 0 1 2 3\n"
             "----+--------\n"
             "0 0 | - 3 - 1\n"
             "1 1 | 1 0 3 2\n"
             "2 2 | 2 - 0 -\n"
             "3 3 | 3 2 1 0\n");

    const std::string csv = dump_schedule(n4, id, "csv");
    CHECK_EQ(csv,
             "round,value,0,1,2,3\n"
             "0,0,-,3,-,1\n"
             "1,1,1,0,3,2\n"
             "2,2,2,-,0,-\n"
             "3,3,3,2,1,0\n");

    const std::string md = dump_schedule(n4, id, "markdown");
    CHECK(md.find("| r | v | 0 | 1 | 2 | 3 |") == 0);
    CHECK_NE(md.find("| 0 | 0 | - | 3 | - | 1 |"), std::string::npos);

    CHECK_THROWS_AS(dump_schedule(n4, id, "yaml"), std::invalid_argument);
    CHECK_THROWS_AS(dump_schedule(n4, identity_cycle(NetworkParams(5)), "text"),
                    std::invalid_argument);
}
