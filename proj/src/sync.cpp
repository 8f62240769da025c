#include "chirp/sync.hpp"

namespace chirp {

SyncState::SyncState(const NetworkParams& params, NodeId observer, CyclePermutation cycle,
                     uint32_t required_confirmations)
    : params_(params),
      observer_(observer),
      cycle_(std::move(cycle)),
      required_(required_confirmations) {
    if (observer_.value >= params_.node_cnt)
        throw std::out_of_range("SyncState: observer index outside [0, node_cnt)");
    if (cycle_.node_cnt() != params_.node_cnt)
        throw std::invalid_argument("SyncState: cycle capacity mismatch");
    if (required_ < 1)
        throw std::invalid_argument("SyncState: required_confirmations must be >= 1");
    inverse_ = cycle_.inverse();
}

bool SyncState::infer_round(const SyncObservation& obs) {
    if (last_tick_ && obs.local_tick <= *last_tick_)
        throw std::invalid_argument("SyncState: observation tick must strictly increase");

    if (obs.inbound) {
        if (obs.inbound->value >= params_.node_cnt) return false;
        if (*obs.inbound == observer_) return false;  // reflected probe
    }

    const uint32_t n = params_.node_cnt;
    const uint64_t elapsed = last_tick_ ? obs.local_tick - *last_tick_ : 0;
    const std::optional<uint32_t> advanced =
        candidate_ ? std::optional<uint32_t>(
                         static_cast<uint32_t>((static_cast<uint64_t>(*candidate_) + elapsed) % n))
                   : std::nullopt;

    if (obs.inbound) {
        const uint32_t value =
            static_cast<uint32_t>((static_cast<uint64_t>(obs.inbound->value) + observer_.value) % n);
        const uint32_t implied = inverse_[value];
        if (advanced && *advanced == implied) {
            if (consistent_ < required_) ++consistent_;
        } else {
            consistent_ = 1;
        }
        candidate_ = implied;
    } else {
        candidate_ = advanced;  // silent gap: the sequence continues
    }

    last_tick_ = obs.local_tick;
    return true;
}

std::optional<RoundIndex> SyncState::candidate_round() const {
    if (!candidate_) return std::nullopt;
    return RoundIndex{*candidate_};
}

AdmissionVerdict check_admission(const NetworkParams& params, const std::set<NodeId>& existing,
                                 NodeId candidate, uint32_t node_actual) {
    if (node_actual != existing.size())
        throw std::invalid_argument("check_admission: node_actual " + std::to_string(node_actual) +
                                    " does not match existing set size " +
                                    std::to_string(existing.size()));
    if (candidate.value >= params.node_cnt)
        throw std::out_of_range("check_admission: candidate index " +
                                std::to_string(candidate.value) + " outside [0, " +
                                std::to_string(params.node_cnt) + ")");
    if (node_actual >= params.node_cnt) return AdmissionVerdict::Full;
    if (existing.contains(candidate)) return AdmissionVerdict::IndexCollision;
    return AdmissionVerdict::Admit;
}

AdmissionVerdict check_admission(const NetworkParams& params, const std::set<NodeId>& existing,
                                 NodeId candidate) {
    return check_admission(params, existing, candidate, static_cast<uint32_t>(existing.size()));
}

}  // namespace chirp
