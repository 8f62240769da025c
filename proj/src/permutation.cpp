#include "chirp/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "chirp/rng.hpp"

namespace chirp {

namespace mp = boost::multiprecision;

bool CyclePermutation::is_identity() const {
    for (uint32_t i = 0; i < order_.size(); ++i)
        if (order_[i] != i) return false;
    return true;
}

std::vector<uint32_t> CyclePermutation::inverse() const {
    std::vector<uint32_t> inv(order_.size());
    for (uint32_t i = 0; i < order_.size(); ++i) inv[order_[i]] = i;
    return inv;
}

CyclePermutation identity_cycle(const NetworkParams& params) {
    std::vector<uint32_t> order(params.node_cnt);
    std::iota(order.begin(), order.end(), 0u);
    return CyclePermutation(params, std::move(order), Provenance{Provenance::Kind::External, 0, "identity"});
}

CyclePermutation shuffle_fisher_yates(const NetworkParams& params, uint64_t seed) {
    std::vector<uint32_t> order(params.node_cnt);
    std::iota(order.begin(), order.end(), 0u);
    SplitMix64 rng(seed);
    for (uint32_t i = params.node_cnt - 1; i >= 1; --i) {
        const uint64_t v = rng.next();
        std::swap(order[i], order[v % (i + 1)]);
    }
    return CyclePermutation(params, std::move(order), Provenance{Provenance::Kind::Seeded, seed, {}});
}

CyclePermutation shuffle_sattolo(const NetworkParams& params, uint64_t seed) {
    if (params.node_cnt < 2)
        throw std::invalid_argument("shuffle_sattolo: needs node_cnt >= 2");
    std::vector<uint32_t> order(params.node_cnt);
    std::iota(order.begin(), order.end(), 0u);
    SplitMix64 rng(seed);
    for (uint32_t i = params.node_cnt - 1; i >= 1; --i) {
        const uint64_t v = rng.next();
        std::swap(order[i], order[v % i]);  // j < i: forces one single cycle
    }
    return CyclePermutation(params, std::move(order), Provenance{Provenance::Kind::Seeded, seed, {}});
}

CyclePermutation load_cycle(const NetworkParams& params, std::span<const uint32_t> values,
                            std::string label) {
    const uint32_t n = params.node_cnt;
    if (values.size() != n)
        throw std::invalid_argument("load_cycle: expected " + std::to_string(n) + " values, got " +
                                    std::to_string(values.size()));
    std::vector<uint32_t> first_seen(n, UINT32_MAX);
    for (uint32_t i = 0; i < n; ++i) {
        const uint32_t v = values[i];
        if (v >= n)
            throw std::invalid_argument("load_cycle: value " + std::to_string(v) +
                                        " at position " + std::to_string(i) + " outside [0, " +
                                        std::to_string(n) + ")");
        if (first_seen[v] != UINT32_MAX)
            throw std::invalid_argument("load_cycle: duplicate value " + std::to_string(v) +
                                        " at position " + std::to_string(i) + " (first at " +
                                        std::to_string(first_seen[v]) + ")");
        first_seen[v] = i;
    }
    return CyclePermutation(params, std::vector<uint32_t>(values.begin(), values.end()),
                            Provenance{Provenance::Kind::External, 0, std::move(label)});
}

PairOutcome pair_target_secure(const NetworkParams& params, const CyclePermutation& cycle,
                               NodeId source, RoundIndex round) {
    if (cycle.node_cnt() != params.node_cnt)
        throw std::invalid_argument("pair_target_secure: cycle built for capacity " +
                                    std::to_string(cycle.node_cnt()) + ", params say " +
                                    std::to_string(params.node_cnt));
    const uint32_t n = params.node_cnt;
    if (source.value >= n)
        throw std::out_of_range("pair_target_secure: source index " + std::to_string(source.value) +
                                " outside [0, " + std::to_string(n) + ")");
    const uint32_t v = cycle.value_at(round);
    const uint32_t t = static_cast<uint32_t>((static_cast<uint64_t>(v) + n - source.value) % n);
    return t == source.value ? PairOutcome::self_loop() : PairOutcome::peer(NodeId{t});
}

Schedule build_schedule(const NetworkParams& params, const CyclePermutation& cycle) {
    const uint32_t n = params.node_cnt;
    Schedule schedule{params, {}};
    schedule.rows.reserve(n);
    for (uint32_t r = 0; r < n; ++r) {
        std::vector<PairOutcome> row;
        row.reserve(n);
        for (uint32_t x = 0; x < n; ++x)
            row.push_back(pair_target_secure(params, cycle, NodeId{x}, RoundIndex{r}));
        schedule.rows.push_back(std::move(row));
    }
    return schedule;
}

namespace {

// Balanced product of [lo, hi]; keeps operand sizes comparable so the
// large multiplies stay near the top of the tree.
mp::cpp_int range_product(uint32_t lo, uint32_t hi) {
    if (hi - lo < 8) {
        mp::cpp_int p = lo;
        for (uint32_t k = lo + 1; k <= hi; ++k) p *= k;
        return p;
    }
    const uint32_t mid = lo + (hi - lo) / 2;
    return range_product(lo, mid) * range_product(mid + 1, hi);
}

// Digits beyond which the exact decimal rendering is skipped (the
// mantissa/exponent pair is always produced).
constexpr double kMaxDecimalDigits = 20000.0;

}  // namespace

std::string PermutationStats::scientific(int sig_figs) const {
    if (sig_figs < 1) sig_figs = 1;
    double m = mantissa_;
    int e = exponent10_;
    const double scale = std::pow(10.0, sig_figs - 1);
    m = std::round(m * scale) / scale;
    if (m >= 10.0) {  // rounding carried into the next decade
        m /= 10.0;
        e += 1;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*fe%d", sig_figs - 1, m, e);
    return std::string(buf);
}

PermutationStats permutation_space(const NetworkParams& params) {
    const uint32_t n = params.node_cnt;
    const mp::cpp_int count = n <= 1 ? mp::cpp_int(1) : range_product(2, n);

    double mantissa = 1.0;
    int exponent = 0;
    if (count > 1) {
        const unsigned bits = mp::msb(count) + 1;
        uint64_t top;
        long double log10v;
        if (bits <= 64) {
            top = count.convert_to<uint64_t>();
            log10v = std::log10(static_cast<long double>(top));
        } else {
            // log10 from the top 64 bits; the truncated tail contributes
            // less than 2^-63 relative error, far below double precision.
            top = static_cast<uint64_t>(count >> (bits - 64));
            log10v = std::log10(static_cast<long double>(top)) +
                     static_cast<long double>(bits - 64) * 0.30102999566398119521L;
        }
        exponent = static_cast<int>(log10v);
        mantissa = static_cast<double>(std::pow(10.0L, log10v - exponent));
    }

    std::string decimal;
    const double est_digits = exponent + 1.0;
    if (est_digits <= kMaxDecimalDigits) decimal = count.str();

    return PermutationStats(n, mantissa, exponent, 4ull * n, std::move(decimal));
}

std::vector<uint8_t> cycle_to_bytes(const CyclePermutation& cycle) {
    std::vector<uint8_t> bytes;
    bytes.reserve(4ull * cycle.node_cnt());
    for (const uint32_t v : cycle.order()) {
        bytes.push_back(static_cast<uint8_t>(v & 0xFF));
        bytes.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
        bytes.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
        bytes.push_back(static_cast<uint8_t>((v >> 24) & 0xFF));
    }
    return bytes;
}

void save_cycle_raw(const CyclePermutation& cycle, const std::filesystem::path& path) {
    const auto bytes = cycle_to_bytes(cycle);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("save_cycle_raw: cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("save_cycle_raw: short write to " + path.string());
}

CyclePermutation load_cycle_raw(const NetworkParams& params, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("load_cycle_raw: cannot open " + path.string());
    const auto size = static_cast<uint64_t>(in.tellg());
    const uint64_t expected = 4ull * params.node_cnt;
    if (size != expected)
        throw std::invalid_argument("load_cycle_raw: " + path.string() + " holds " +
                                    std::to_string(size) + " bytes, expected " +
                                    std::to_string(expected) + " for capacity " +
                                    std::to_string(params.node_cnt));
    in.seekg(0);
    std::vector<uint8_t> bytes(size);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
    if (!in) throw std::runtime_error("load_cycle_raw: short read from " + path.string());

    std::vector<uint32_t> values(params.node_cnt);
    for (uint32_t i = 0; i < params.node_cnt; ++i) {
        values[i] = static_cast<uint32_t>(bytes[4 * i]) |
                    (static_cast<uint32_t>(bytes[4 * i + 1]) << 8) |
                    (static_cast<uint32_t>(bytes[4 * i + 2]) << 16) |
                    (static_cast<uint32_t>(bytes[4 * i + 3]) << 24);
    }
    return load_cycle(params, values, path.filename().string());
}

}  // namespace chirp
