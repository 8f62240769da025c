#include "chirp/verify.hpp"

#include <sstream>
#include <vector>

namespace chirp {

namespace {

constexpr uint32_t kNever = 0xFFFFFFFFu;

InvariantViolation make(std::string invariant, uint32_t n, uint32_t round,
                        uint32_t source, std::string detail) {
    return InvariantViolation{std::move(invariant), n, round, source, std::move(detail)};
}

}  // namespace

std::string to_string(const InvariantViolation& violation) {
    std::ostringstream os;
    os << violation.invariant << " violated at n=" << violation.node_cnt
       << " round=" << violation.round << " source=" << violation.source << ": "
       << violation.detail;
    return os.str();
}

std::optional<InvariantViolation> check_schedule(const Schedule& schedule,
                                                 const CyclePermutation& cycle) {
    const uint32_t n = schedule.params.node_cnt;
    if (cycle.node_cnt() != n)
        return make("capacity", n, 0, 0,
                    "cycle capacity " + std::to_string(cycle.node_cnt()) +
                        " does not match schedule capacity");
    if (schedule.rows.size() != n)
        return make("capacity", n, 0, 0,
                    "expected " + std::to_string(n) + " rows, got " +
                        std::to_string(schedule.rows.size()));

    const auto order = cycle.order();
    // met_round[x*n + y] (x < y) records the round a pair first met in.
    std::vector<uint32_t> met_round(size_t(n) * n, kNever);
    std::vector<uint32_t> self_cnt_per_node(n, 0);

    for (uint32_t r = 0; r < n; ++r) {
        const auto& row = schedule.rows[r];
        if (row.size() != n)
            return make("capacity", n, r, 0,
                        "row has " + std::to_string(row.size()) + " cells, expected " +
                            std::to_string(n));
        uint32_t self_cnt = 0;
        for (uint32_t x = 0; x < n; ++x) {
            const PairOutcome& outcome = row[x];
            if (outcome.is_self_loop()) {
                ++self_cnt;
                ++self_cnt_per_node[x];
                continue;
            }
            const uint32_t t = outcome.target().value;
            if (t >= n)
                return make("recovery", n, r, x,
                            "target " + std::to_string(t) + " is outside [0, " +
                                std::to_string(n) + ")");
            if (t == x)
                return make("self_loops", n, r, x, "peer cell points at its own source");
            const PairOutcome& back = row[t];
            if (!back.is_peer() || back.target().value != x)
                return make("mutuality", n, r, x,
                            "source " + std::to_string(x) + " meets " + std::to_string(t) +
                                " but not the other way around");
            if ((uint64_t(t) + x) % n != order[r])
                return make("recovery", n, r, x,
                            "(target + source) % n != row value " +
                                std::to_string(order[r]));
            if (x < t) {
                uint32_t& met = met_round[size_t(x) * n + t];
                if (met != kNever)
                    return make("completeness", n, r, x,
                                "pair {" + std::to_string(x) + "," + std::to_string(t) +
                                    "} already met in round " + std::to_string(met));
                met = r;
            }
        }
        if (n % 2 == 1) {
            if (self_cnt != 1)
                return make("self_loops", n, r, 0,
                            "round has " + std::to_string(self_cnt) +
                                " self-loops, expected 1");
        } else if (self_cnt != 0 && self_cnt != 2) {
            return make("self_loops", n, r, 0,
                        "round has " + std::to_string(self_cnt) +
                            " self-loops, expected 0 or 2");
        }
    }

    for (uint32_t x = 0; x < n; ++x) {
        for (uint32_t y = x + 1; y < n; ++y) {
            if (met_round[size_t(x) * n + y] == kNever)
                return make("completeness", n, 0, x,
                            "pair {" + std::to_string(x) + "," + std::to_string(y) +
                                "} never meets");
        }
        if (self_cnt_per_node[x] != 1)
            return make("self_loops", n, 0, x,
                        "node self-loops " + std::to_string(self_cnt_per_node[x]) +
                            " times per cycle, expected 1");
    }
    return std::nullopt;
}

std::optional<InvariantViolation> check_secure_equivalence(const NetworkParams& params,
                                                           const CyclePermutation& cycle) {
    const uint32_t n = params.node_cnt;
    if (cycle.node_cnt() != n)
        return make("capacity", n, 0, 0, "cycle capacity does not match network");

    const Schedule keyed = build_schedule(params, cycle);
    const Schedule plain = build_schedule(params);
    const auto order = cycle.order();
    const auto inverse = cycle.inverse();

    for (uint32_t r = 0; r < n; ++r) {
        const auto& keyed_row = keyed.rows[r];
        const auto& plain_row = plain.rows[order[r]];
        for (uint32_t x = 0; x < n; ++x) {
            if (!(keyed_row[x] == plain_row[x]))
                return make("row_reorder", n, r, x,
                            "keyed round " + std::to_string(r) +
                                " differs from unkeyed round " + std::to_string(order[r]));
        }
        for (uint32_t observer = 0; observer < n; ++observer) {
            const uint32_t sender = uint32_t((uint64_t(order[r]) + n - observer) % n);
            if (sender == observer) continue;
            const uint32_t value = uint32_t((uint64_t(sender) + observer) % n);
            if (inverse[value] != r)
                return make("recovery", n, r, observer,
                            "hearing " + std::to_string(sender) +
                                " implies round " + std::to_string(inverse[value]) +
                                ", expected " + std::to_string(r));
        }
    }
    return std::nullopt;
}

}  // namespace chirp
