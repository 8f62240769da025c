#pragma once

#include <cstdint>
#include <optional>
#include <set>

#include "chirp/pairing.hpp"
#include "chirp/permutation.hpp"

// Mid-cycle join. A node entering a running system does not know the current
// round, but each inbound pairing betrays it: the sender's index plus the
// observer's own index, mod capacity, is the effective round value. The
// tracker below accumulates such observations until enough of them advance
// in lockstep with the local tick, at which point the observer is
// synchronized and can start pairing.

namespace chirp {

/// One listening tick. `inbound` is absent when nothing arrived (the
/// observer's own self-loop round, or a missing sender).
struct SyncObservation {
    uint64_t local_tick = 0;
    std::optional<NodeId> inbound;
};

/// Round-inference state machine for one joining observer. Single-owner and
/// mutable; distinct instances are independent.
class SyncState {
public:
    static constexpr uint32_t kDefaultConfirmations = 3;

    /// The observer must already hold the cycle (seed or array); the
    /// inverse permutation is precomputed here, once.
    SyncState(const NetworkParams& params, NodeId observer, CyclePermutation cycle,
              uint32_t required_confirmations = kDefaultConfirmations);

    /// Fold one observation into the candidate round.
    ///
    /// With an inbound index, the implied round is the position of
    /// (inbound + observer) mod n in the cycle. A fresh candidate is
    /// adopted outright; an existing one is advanced by the elapsed ticks
    /// and either confirmed (count rises, saturating at the requirement) or
    /// contradicted (reset to the new implied round, count 1). Without an
    /// inbound index the candidate just advances through the gap.
    ///
    /// Returns false and leaves the state untouched when the inbound index
    /// is out of range or equals the observer (a reflected probe).
    /// Throws std::invalid_argument when the tick does not advance.
    bool infer_round(const SyncObservation& obs);

    /// True once required_confirmations consecutive observations agreed.
    bool is_synchronized() const { return consistent_ >= required_; }

    /// Round at the last processed tick; empty before any inbound was seen.
    std::optional<RoundIndex> candidate_round() const;

    uint32_t consistent_count() const { return consistent_; }
    uint32_t required_confirmations() const { return required_; }
    NodeId observer() const { return observer_; }

private:
    NetworkParams params_;
    NodeId observer_;
    CyclePermutation cycle_;
    std::vector<uint32_t> inverse_;
    std::optional<uint32_t> candidate_;
    std::optional<uint64_t> last_tick_;
    uint32_t consistent_ = 0;
    uint32_t required_;
};

/// Entry admission verdict. Full wins when both conditions fail: a system
/// at capacity rejects regardless of the index offered.
enum class AdmissionVerdict { Admit, Full, IndexCollision };

/// A candidate may enter iff the system is below capacity and its index is
/// unused. The cycle permutation plays no part here. Throws
/// std::out_of_range when the candidate index is outside [0, node_cnt), and
/// std::invalid_argument when node_actual disagrees with existing.size().
AdmissionVerdict check_admission(const NetworkParams& params, const std::set<NodeId>& existing,
                                 NodeId candidate, uint32_t node_actual);

/// Convenience overload with node_actual = existing.size().
AdmissionVerdict check_admission(const NetworkParams& params, const std::set<NodeId>& existing,
                                 NodeId candidate);

}  // namespace chirp
