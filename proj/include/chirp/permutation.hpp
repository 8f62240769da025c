#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chirp/pairing.hpp"

// Cycle permutations: the keyed variant of the protocol replaces the
// monotone round sequence [0, 1, ..., n-1] with a secret permutation shared
// by all legitimate nodes. Pairing then reads the permuted value for the
// current round, which destroys the diagonal sweep an observer could
// otherwise extrapolate from a handful of intercepted pairings.

namespace chirp {

/// Where a cycle permutation came from: derived on-device from a shared
/// seed, or loaded from an externally crafted array.
struct Provenance {
    enum class Kind { Seeded, External };
    Kind kind = Kind::Seeded;
    uint64_t seed = 0;   // meaningful when kind == Seeded
    std::string label;   // meaningful when kind == External
};

/// An ordered round sequence: a permutation of [0, node_cnt). The identity
/// permutation reproduces the unkeyed protocol exactly. Immutable after
/// construction.
class CyclePermutation {
public:
    const NetworkParams& params() const { return params_; }
    uint32_t node_cnt() const { return params_.node_cnt; }
    std::span<const uint32_t> order() const { return order_; }
    const Provenance& provenance() const { return provenance_; }

    /// The effective round value order[r].
    uint32_t value_at(RoundIndex r) const {
        if (r.value >= order_.size())
            throw std::out_of_range("CyclePermutation: round outside [0, node_cnt)");
        return order_[r.value];
    }

    bool is_identity() const;

    /// inverse[v] = the round position holding value v; order[inverse[v]] == v.
    std::vector<uint32_t> inverse() const;

private:
    friend CyclePermutation identity_cycle(const NetworkParams&);
    friend CyclePermutation shuffle_fisher_yates(const NetworkParams&, uint64_t);
    friend CyclePermutation shuffle_sattolo(const NetworkParams&, uint64_t);
    friend CyclePermutation load_cycle(const NetworkParams&, std::span<const uint32_t>, std::string);

    CyclePermutation(NetworkParams params, std::vector<uint32_t> order, Provenance prov)
        : params_(params), order_(std::move(order)), provenance_(std::move(prov)) {}

    NetworkParams params_;
    std::vector<uint32_t> order_;
    Provenance provenance_;
};

/// The monotone sequence [0, 1, ..., node_cnt-1].
CyclePermutation identity_cycle(const NetworkParams& params);

/// Deterministic Fisher-Yates shuffle of [0, node_cnt), fully determined by
/// (node_cnt, seed). Draws one splitmix64 value per step i from node_cnt-1
/// down to 1 and swaps positions i and (value mod (i+1)). This exact draw
/// and swap sequence is the wire contract: any conforming implementation
/// must reproduce it bit-for-bit.
CyclePermutation shuffle_fisher_yates(const NetworkParams& params, uint64_t seed);

/// Sattolo variant: same draw sequence but swap range (value mod i), which
/// always yields a single-cycle permutation (no fixed points for n >= 2).
/// Throws std::invalid_argument when node_cnt < 2.
CyclePermutation shuffle_sattolo(const NetworkParams& params, uint64_t seed);

/// Validate an externally produced round sequence. Rejects wrong length,
/// out-of-range values, and duplicates, naming the offending position.
CyclePermutation load_cycle(const NetworkParams& params, std::span<const uint32_t> values,
                            std::string label = "external");

/// Keyed pairing rule: target = (order[round] - source) mod node_cnt.
/// With the identity cycle this is exactly pair_target.
PairOutcome pair_target_secure(const NetworkParams& params, const CyclePermutation& cycle,
                               NodeId source, RoundIndex round);

/// Keyed variant of build_schedule; row r equals the plain schedule's row
/// order[r].
Schedule build_schedule(const NetworkParams& params, const CyclePermutation& cycle);

/// How large the keyspace and the storage cost are for a given capacity:
/// node_cnt! possible cycles, 4 bytes per stored index.
class PermutationStats {
public:
    PermutationStats(uint32_t node_cnt, double mantissa, int exponent10, uint64_t storage_bytes,
                     std::string count_decimal)
        : node_cnt_(node_cnt),
          mantissa_(mantissa),
          exponent10_(exponent10),
          storage_bytes_(storage_bytes),
          count_decimal_(std::move(count_decimal)) {}

    uint32_t node_cnt() const { return node_cnt_; }

    /// Exact node_cnt! as a decimal string. Empty when the value was too
    /// large to render (beyond ~20000 digits); mantissa/exponent are always
    /// available.
    const std::string& count_decimal() const { return count_decimal_; }

    /// permutation_count == mantissa * 10^exponent10, mantissa in [1, 10).
    double mantissa() const { return mantissa_; }
    int exponent10() const { return exponent10_; }

    /// 4 * node_cnt: raw serialized size of one full cycle.
    uint64_t storage_bytes() const { return storage_bytes_; }

    /// Rendering like "3.63e6", rounded to `sig_figs` significant figures.
    std::string scientific(int sig_figs = 3) const;

private:
    uint32_t node_cnt_;
    double mantissa_;
    int exponent10_;
    uint64_t storage_bytes_;
    std::string count_decimal_;
};

/// Exact factorial accounting for the permutation keyspace.
PermutationStats permutation_space(const NetworkParams& params);

// Raw serialization: 4-byte little-endian values, order[0] first, no header.
// A 10^4-node cycle is exactly 40000 bytes; 10^6 nodes, 4 MB.

std::vector<uint8_t> cycle_to_bytes(const CyclePermutation& cycle);
void save_cycle_raw(const CyclePermutation& cycle, const std::filesystem::path& path);

/// Read and validate a raw cycle file for the given capacity. The file
/// length must be exactly 4 * node_cnt bytes.
CyclePermutation load_cycle_raw(const NetworkParams& params, const std::filesystem::path& path);

}  // namespace chirp
