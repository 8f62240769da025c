#include "chirp/sync.hpp"

#include <optional>
#include <set>
#include <vector>

#include "doctest.h"

using namespace chirp;

namespace {

SyncObservation heard(uint64_t tick, uint32_t inbound) {
    return SyncObservation{tick, NodeId{inbound}};
}

SyncObservation silence(uint64_t tick) { return SyncObservation{tick, std::nullopt}; }

}  // namespace

TEST_CASE("observer 4 walks the pinned inference trace") {
    const NetworkParams n8(8);
    SyncState state(n8, NodeId{4}, identity_cycle(n8));

    const std::optional<uint32_t> inbound[] = {0, 1, 2, 3, std::nullopt, 5, 6, 7};
    const uint32_t expected_rounds[] = {4, 5, 6, 7, 0, 1, 2, 3};
    for (uint64_t t = 0; t < 8; ++t) {
        if (inbound[t]) state.infer_round(heard(t, *inbound[t]));
        else state.infer_round(silence(t));
        REQUIRE(state.candidate_round().has_value());
        REQUIRE_EQ(state.candidate_round()->value, expected_rounds[t]);
    }
    CHECK(state.is_synchronized());
}

TEST_CASE("synchronization needs the configured confirmation streak") {
    const NetworkParams n8(8);
    SyncState state(n8, NodeId{4}, identity_cycle(n8), 4);
    CHECK_EQ(state.required_confirmations(), 4);

    // consistent inbound indices confirm one round per tick
    const uint32_t counts[] = {1, 2, 3, 4};
    for (uint64_t t = 0; t < 4; ++t) {
        state.infer_round(heard(t, uint32_t(t)));  // (t + 4) % 8 advances with t
        REQUIRE_EQ(state.consistent_count(), counts[t]);
        REQUIRE_EQ(state.is_synchronized(), t == 3);
    }
    // the count saturates instead of growing without bound
    state.infer_round(heard(4, 0xFFFFFFFF >> 16));  // out of range, ignored
    state.infer_round(heard(5, 5));
    CHECK_EQ(state.consistent_count(), 4);
}

TEST_CASE("a mismatching observation resets the streak to the new candidate") {
    const NetworkParams n8(8);
    SyncState state(n8, NodeId{4}, identity_cycle(n8));
    state.infer_round(heard(0, 0));
    state.infer_round(heard(1, 1));
    CHECK_EQ(state.consistent_count(), 2);

    // an index implying a different round discards the streak
    state.infer_round(heard(2, 5));  // implies round (5+4)%8 = 1, advance said 6
    CHECK_EQ(state.consistent_count(), 1);
    CHECK_EQ(state.candidate_round()->value, 1);
    CHECK_FALSE(state.is_synchronized());

    // and the fresh candidate can still earn trust
    state.infer_round(heard(3, 6));  // implies 2, consistent with 1+1
    state.infer_round(heard(4, 7));  // implies 3
    CHECK(state.is_synchronized());
    CHECK_EQ(state.candidate_round()->value, 3);
}

TEST_CASE("silence advances the candidate without confirming it") {
    const NetworkParams n8(8);
    SyncState state(n8, NodeId{0}, identity_cycle(n8));
    CHECK_FALSE(state.candidate_round().has_value());

    state.infer_round(silence(0));
    CHECK_FALSE(state.candidate_round().has_value());  // nothing to advance yet

    state.infer_round(heard(1, 3));  // implies round 3
    CHECK_EQ(state.consistent_count(), 1);
    state.infer_round(silence(2));
    state.infer_round(silence(3));
    CHECK_EQ(state.candidate_round()->value, 5);  // 3 plus two silent ticks
    CHECK_EQ(state.consistent_count(), 1);

    state.infer_round(heard(4, 6));  // implies 6, matches the advanced candidate
    CHECK_EQ(state.consistent_count(), 2);
}

TEST_CASE("elapsed ticks scale the advance across gaps") {
    const NetworkParams n8(8);
    SyncState state(n8, NodeId{0}, identity_cycle(n8));
    state.infer_round(heard(10, 2));  // round 2 at tick 10
    state.infer_round(heard(21, 5));  // eleven ticks later: (2 + 11) % 8 = 5
    CHECK_EQ(state.consistent_count(), 2);
    CHECK_EQ(state.candidate_round()->value, 5);
}

TEST_CASE("reflected and out-of-range indices are ignored entirely") {
    const NetworkParams n8(8);
    SyncState state(n8, NodeId{4}, identity_cycle(n8));
    state.infer_round(heard(0, 0));

    CHECK_FALSE(state.infer_round(heard(1, 4)));  // own index echoed back
    CHECK_FALSE(state.infer_round(heard(1, 8)));  // outside the index space
    CHECK_EQ(state.consistent_count(), 1);
    CHECK_EQ(state.candidate_round()->value, 4);  // not even the tick advanced

    // tick 1 is still usable because the ignored probes never consumed it
    CHECK(state.infer_round(heard(1, 1)));
    CHECK_EQ(state.consistent_count(), 2);
}

TEST_CASE("observation ticks must strictly increase") {
    const NetworkParams n8(8);
    SyncState state(n8, NodeId{4}, identity_cycle(n8));
    state.infer_round(heard(5, 0));
    CHECK_THROWS_AS(state.infer_round(heard(5, 1)), std::invalid_argument);
    CHECK_THROWS_AS(state.infer_round(heard(4, 1)), std::invalid_argument);
}

TEST_CASE("keyed cycles map the heard value through the inverse") {
    const NetworkParams n8(8);
    const CyclePermutation cycle =
        load_cycle(n8, std::vector<uint32_t>{7, 5, 2, 0, 4, 6, 1, 3});
    SyncState state(n8, NodeId{4}, cycle);

    // true rounds 0,1,2: senders are the unique peers pairing with node 4
    // round 0 has value 7: sender (7-4)%8 = 3, and (3+4)%8 = 7 -> inverse 0
    state.infer_round(heard(0, 3));
    CHECK_EQ(state.candidate_round()->value, 0);
    // round 1 has value 5: sender 1
    state.infer_round(heard(1, 1));
    CHECK_EQ(state.candidate_round()->value, 1);
    CHECK_EQ(state.consistent_count(), 2);
    // round 2 has value 2: sender (2-4)%8 = 6
    state.infer_round(heard(2, 6));
    CHECK(state.is_synchronized());
    CHECK_EQ(state.candidate_round()->value, 2);
}

TEST_CASE("SyncState constructor validates its inputs") {
    const NetworkParams n8(8);
    const CyclePermutation cycle = identity_cycle(n8);
    CHECK_THROWS_AS(SyncState(n8, NodeId{8}, cycle), std::out_of_range);
    CHECK_THROWS_AS(SyncState(n8, NodeId{0}, cycle, 0), std::invalid_argument);
    CHECK_THROWS_AS(SyncState(n8, NodeId{0}, identity_cycle(NetworkParams(4))),
                    std::invalid_argument);
}

TEST_CASE("admission admits free indices below capacity") {
    const NetworkParams n8(8);
    const std::set<NodeId> three{NodeId{0}, NodeId{1}, NodeId{2}};

    CHECK_EQ(check_admission(n8, three, NodeId{3}), AdmissionVerdict::Admit);
    CHECK_EQ(check_admission(n8, three, NodeId{2}), AdmissionVerdict::IndexCollision);
    CHECK_THROWS_AS(check_admission(n8, three, NodeId{8}), std::out_of_range);

    std::set<NodeId> full;
    for (uint32_t i = 0; i < 8; ++i) full.insert(NodeId{i});
    CHECK_EQ(check_admission(n8, full, NodeId{3}), AdmissionVerdict::Full);

    // a saturated count wins over the collision verdict
    CHECK_EQ(check_admission(n8, full, NodeId{3}, 8), AdmissionVerdict::Full);
    // node_actual must agree with the membership set it describes
    CHECK_THROWS_AS(check_admission(n8, three, NodeId{3}, 2), std::invalid_argument);
}
