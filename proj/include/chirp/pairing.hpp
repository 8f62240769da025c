#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

// Round-robin pairing core: every node of an n-slot index space derives its
// per-round partner from nothing but the capacity, its own index, and the
// round counter. One cycle of n rounds pairs every index with every other
// index exactly once.

namespace chirp {

/// Capacity and identity of a schedule universe. node_cnt is the fixed size
/// of the index space; the live population may be smaller.
struct NetworkParams {
    uint32_t node_cnt;

    explicit NetworkParams(uint32_t n) : node_cnt(n) {
        if (n == 0) throw std::invalid_argument("NetworkParams: node_cnt must be >= 1");
    }

    bool operator==(const NetworkParams&) const = default;
};

/// A node index in [0, node_cnt).
struct NodeId {
    uint32_t value = 0;
    auto operator<=>(const NodeId&) const = default;
};

/// A round counter within a cycle, in [0, node_cnt).
struct RoundIndex {
    uint32_t value = 0;
    auto operator<=>(const RoundIndex&) const = default;
};

/// Result of the pairing rule for one (source, round): either a peer to
/// contact, or the source's own self-loop round. A self-loop is a real
/// outcome (idle checkpoint, no message), never Peer(self).
class PairOutcome {
public:
    static PairOutcome peer(NodeId target) { return PairOutcome{false, target}; }
    static PairOutcome self_loop() { return PairOutcome{true, NodeId{0}}; }

    bool is_self_loop() const { return self_loop_; }
    bool is_peer() const { return !self_loop_; }

    /// Peer index; throws std::logic_error when called on a self-loop.
    NodeId target() const {
        if (self_loop_) throw std::logic_error("PairOutcome: self-loop has no target");
        return target_;
    }

    bool operator==(const PairOutcome& other) const {
        return self_loop_ == other.self_loop_ && (self_loop_ || target_ == other.target_);
    }

private:
    PairOutcome(bool sl, NodeId t) : self_loop_(sl), target_(t) {}
    bool self_loop_;
    NodeId target_;
};

/// Fully materialized pairing matrix, rows[round][source]. Mutual by
/// construction: rows[r][x] == Peer(y) implies rows[r][y] == Peer(x).
struct Schedule {
    NetworkParams params;
    std::vector<std::vector<PairOutcome>> rows;

    const PairOutcome& at(RoundIndex r, NodeId x) const { return rows.at(r.value).at(x.value); }
};

/// Capacity vs live-count bookkeeping for the efficiency-loss ratio.
struct EfficiencyReport {
    uint32_t node_cnt;
    uint32_t node_actual;
    double ce_loss;  // (node_cnt - node_actual) / node_cnt, in [0, 1]
};

/// Theoretical lower bound on rounds needed for all-pairs communication:
/// n-1 when n is even, n when n is odd. Informational only; a cycle always
/// runs node_cnt rounds. Throws std::invalid_argument for node_cnt < 2.
uint32_t min_rounds(const NetworkParams& params);

/// Maximum pair count formable in a single round: floor(node_cnt / 2).
uint32_t max_edges_per_round(const NetworkParams& params);

/// The pairing rule: target = (round - source) mod node_cnt, with the
/// mathematical (always non-negative) modulo. Self-loop iff target == source.
/// Throws std::out_of_range when source or round is outside [0, node_cnt).
PairOutcome pair_target(const NetworkParams& params, NodeId source, RoundIndex round);

/// Materialize the full cycle, rows[r][x] == pair_target(params, x, r).
/// pair_target is the normative definition; this exists for dumping and
/// verification and agrees with it pointwise.
Schedule build_schedule(const NetworkParams& params);

/// Invert the pairing rule: the round in which `inbound` contacts `self` is
/// (inbound + self) mod node_cnt. For every Peer outcome t of
/// pair_target(x, r), recover_round(t, x) == r.
RoundIndex recover_round(const NetworkParams& params, NodeId inbound, NodeId self);

/// Efficiency loss from missing nodes. Throws std::invalid_argument when
/// node_actual exceeds node_cnt.
EfficiencyReport communication_efficiency(uint32_t node_cnt, uint32_t node_actual);

}  // namespace chirp
