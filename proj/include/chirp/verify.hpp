#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "chirp/pairing.hpp"
#include "chirp/permutation.hpp"

// Structural checks over materialized schedules. These re-derive nothing
// from the pairing formula; they test the properties the formula is supposed
// to guarantee, so a corrupted matrix cell is caught no matter how it was
// produced.

namespace chirp {

/// First invariant breach found, as a concrete counterexample.
struct InvariantViolation {
    std::string invariant;  // mutuality | recovery | completeness | self_loops
                            // | row_reorder | capacity
    uint32_t node_cnt = 0;
    uint32_t round = 0;
    uint32_t source = 0;
    std::string detail;
};

std::string to_string(const InvariantViolation& violation);

/// Validate a schedule whose row r is keyed by cycle value order[r]:
///  - mutuality: x meets t exactly when t meets x,
///  - recovery: a peer cell (r, x) -> t satisfies (t + x) % n == order[r],
///  - completeness: every unordered pair meets exactly once per cycle,
///  - self_loops: per-round self-loop count is 1 (odd n) or 0/2 (even n),
///    and every node self-loops exactly once per cycle.
/// Pass the identity cycle for an unkeyed schedule. Returns the first
/// violation, or nullopt for a clean schedule.
std::optional<InvariantViolation> check_schedule(const Schedule& schedule,
                                                 const CyclePermutation& cycle);

/// Confirm the keyed schedule is exactly the unkeyed schedule with rows
/// reordered by the cycle, and that observer-side round recovery inverts it:
/// hearing x in keyed round r implies inverse[(x + observer) % n] == r.
std::optional<InvariantViolation> check_secure_equivalence(const NetworkParams& params,
                                                           const CyclePermutation& cycle);

}  // namespace chirp
