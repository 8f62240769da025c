#include "chirp/pairing.hpp"

namespace chirp {

namespace {

// (a - b) mod n with a, b in [0, n); 64-bit intermediate avoids wraparound.
uint32_t mod_sub(uint32_t a, uint32_t b, uint32_t n) {
    return static_cast<uint32_t>((static_cast<uint64_t>(a) + n - b) % n);
}

}  // namespace

uint32_t min_rounds(const NetworkParams& params) {
    if (params.node_cnt < 2)
        throw std::invalid_argument("min_rounds: no pairs exist below capacity 2");
    return (params.node_cnt % 2 == 0) ? params.node_cnt - 1 : params.node_cnt;
}

uint32_t max_edges_per_round(const NetworkParams& params) {
    return params.node_cnt / 2;
}

PairOutcome pair_target(const NetworkParams& params, NodeId source, RoundIndex round) {
    const uint32_t n = params.node_cnt;
    if (source.value >= n)
        throw std::out_of_range("pair_target: source index " + std::to_string(source.value) +
                                " outside [0, " + std::to_string(n) + ")");
    if (round.value >= n)
        throw std::out_of_range("pair_target: round " + std::to_string(round.value) +
                                " outside [0, " + std::to_string(n) + ")");
    const uint32_t t = mod_sub(round.value, source.value, n);
    return t == source.value ? PairOutcome::self_loop() : PairOutcome::peer(NodeId{t});
}

Schedule build_schedule(const NetworkParams& params) {
    const uint32_t n = params.node_cnt;
    Schedule schedule{params, {}};
    schedule.rows.reserve(n);
    for (uint32_t r = 0; r < n; ++r) {
        std::vector<PairOutcome> row;
        row.reserve(n);
        for (uint32_t x = 0; x < n; ++x)
            row.push_back(pair_target(params, NodeId{x}, RoundIndex{r}));
        schedule.rows.push_back(std::move(row));
    }
    return schedule;
}

RoundIndex recover_round(const NetworkParams& params, NodeId inbound, NodeId self) {
    const uint32_t n = params.node_cnt;
    if (inbound.value >= n || self.value >= n)
        throw std::out_of_range("recover_round: node index outside [0, " + std::to_string(n) + ")");
    return RoundIndex{static_cast<uint32_t>((static_cast<uint64_t>(inbound.value) + self.value) % n)};
}

EfficiencyReport communication_efficiency(uint32_t node_cnt, uint32_t node_actual) {
    if (node_cnt == 0)
        throw std::invalid_argument("communication_efficiency: node_cnt must be >= 1");
    if (node_actual > node_cnt)
        throw std::invalid_argument("communication_efficiency: node_actual " +
                                    std::to_string(node_actual) + " exceeds capacity " +
                                    std::to_string(node_cnt));
    const double loss = static_cast<double>(node_cnt - node_actual) / static_cast<double>(node_cnt);
    return EfficiencyReport{node_cnt, node_actual, loss};
}

}  // namespace chirp
