#include "chirp/scenario_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "json.hpp"

namespace chirp {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw ScenarioError(field + ": " + why);
}

const json& require(const json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) bad(ctx, "missing required key \"" + std::string(key) + "\"");
    return *it;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& ctx) {
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            bad(ctx, "unknown key \"" + item.key() + "\"");
    }
}

uint64_t get_u64(const json& value, const std::string& field) {
    if (!value.is_number_integer() ||
        (!value.is_number_unsigned() && value.get<int64_t>() < 0))
        bad(field, "expected a non-negative integer");
    return value.get<uint64_t>();
}

uint32_t get_u32(const json& value, const std::string& field) {
    const uint64_t v = get_u64(value, field);
    if (v > 0xFFFFFFFFull) bad(field, "value does not fit in 32 bits");
    return uint32_t(v);
}

CyclePermutation parse_cycle(const json& value, const NetworkParams& params,
                             const std::filesystem::path& base_dir) {
    if (value.is_string()) {
        if (value.get<std::string>() == "identity") return identity_cycle(params);
        bad("cycle", "unknown form \"" + value.get<std::string>() +
                         "\": expected \"identity\" or an object");
    }
    if (!value.is_object()) bad("cycle", "expected \"identity\" or an object");
    reject_unknown(value, {"seed", "order", "file"}, "cycle");
    if (value.size() != 1)
        bad("cycle", "expected exactly one of \"seed\", \"order\", \"file\"");
    if (auto it = value.find("seed"); it != value.end())
        return shuffle_fisher_yates(params, get_u64(*it, "cycle.seed"));
    if (auto it = value.find("order"); it != value.end()) {
        if (!it->is_array()) bad("cycle.order", "expected an array");
        std::vector<uint32_t> order;
        order.reserve(it->size());
        for (size_t i = 0; i < it->size(); ++i)
            order.push_back(get_u32((*it)[i], "cycle.order[" + std::to_string(i) + "]"));
        try {
            return load_cycle(params, order, "scenario order");
        } catch (const std::invalid_argument& e) {
            bad("cycle.order", e.what());
        }
    }
    const auto& file = *value.find("file");
    if (!file.is_string()) bad("cycle.file", "expected a path string");
    std::filesystem::path p = file.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    try {
        return load_cycle_raw(params, p);
    } catch (const std::exception& e) {
        bad("cycle.file", e.what());
    }
}

std::vector<NodeId> parse_initial_nodes(const json& value, const NetworkParams& params) {
    const uint32_t n = params.node_cnt;
    std::vector<NodeId> nodes;
    if (value.is_string()) {
        if (value.get<std::string>() != "all")
            bad("initial_nodes", "unknown form \"" + value.get<std::string>() +
                                     "\": expected \"all\", an array, or {\"first\": k}");
        nodes.reserve(n);
        for (uint32_t i = 0; i < n; ++i) nodes.push_back(NodeId{i});
        return nodes;
    }
    if (value.is_array()) {
        nodes.reserve(value.size());
        for (size_t i = 0; i < value.size(); ++i) {
            const std::string field = "initial_nodes[" + std::to_string(i) + "]";
            const uint32_t idx = get_u32(value[i], field);
            if (idx >= n)
                bad(field, "index " + std::to_string(idx) + " is outside capacity " +
                               std::to_string(n));
            nodes.push_back(NodeId{idx});
        }
        return nodes;
    }
    if (value.is_object()) {
        reject_unknown(value, {"first"}, "initial_nodes");
        const uint32_t k = get_u32(require(value, "first", "initial_nodes"),
                                   "initial_nodes.first");
        if (k > n)
            bad("initial_nodes.first", std::to_string(k) + " exceeds capacity " +
                                           std::to_string(n));
        nodes.reserve(k);
        for (uint32_t i = 0; i < k; ++i) nodes.push_back(NodeId{i});
        return nodes;
    }
    bad("initial_nodes", "expected \"all\", an array, or {\"first\": k}");
}

RogueConfig parse_rogues(const json& value) {
    if (!value.is_object()) bad("rogues", "expected an object");
    reject_unknown(value, {"count", "strategy"}, "rogues");
    RogueConfig config;
    config.count = get_u32(require(value, "count", "rogues"), "rogues.count");
    const json& strategy = require(value, "strategy", "rogues");
    if (strategy.is_string()) {
        const std::string name = strategy.get<std::string>();
        if (name == "identity_cycle") config.strategy = RogueStrategy::IdentityCycle;
        else if (name == "uniform_random") config.strategy = RogueStrategy::UniformRandom;
        else
            bad("rogues.strategy",
                "unknown strategy \"" + name +
                    "\": expected identity_cycle, uniform_random, or {\"wrong_seed\": s}");
    } else if (strategy.is_object()) {
        reject_unknown(strategy, {"wrong_seed"}, "rogues.strategy");
        config.strategy = RogueStrategy::WrongSeed;
        config.wrong_seed =
            get_u64(require(strategy, "wrong_seed", "rogues.strategy"),
                    "rogues.strategy.wrong_seed");
    } else {
        bad("rogues.strategy", "expected a strategy name or {\"wrong_seed\": s}");
    }
    return config;
}

std::vector<SimEvent> parse_events(const json& value) {
    if (!value.is_array()) bad("events", "expected an array");
    std::vector<SimEvent> events;
    events.reserve(value.size());
    for (size_t i = 0; i < value.size(); ++i) {
        const std::string ctx = "events[" + std::to_string(i) + "]";
        const json& entry = value[i];
        if (!entry.is_object()) bad(ctx, "expected an object");
        reject_unknown(entry, {"tick", "node_loss", "node_entry", "rogue_attach",
                               "rogue_detach"},
                       ctx);
        SimEvent event;
        event.tick = get_u64(require(entry, "tick", ctx), ctx + ".tick");
        int actions = 0;
        auto take = [&](const char* key, SimEvent::Kind kind) {
            if (auto it = entry.find(key); it != entry.end()) {
                ++actions;
                event.kind = kind;
                event.value = get_u32(*it, ctx + "." + key);
            }
        };
        take("node_loss", SimEvent::Kind::NodeLoss);
        take("node_entry", SimEvent::Kind::NodeEntry);
        take("rogue_attach", SimEvent::Kind::RogueAttach);
        take("rogue_detach", SimEvent::Kind::RogueDetach);
        if (actions != 1)
            bad(ctx, "expected exactly one of node_loss, node_entry, rogue_attach, "
                     "rogue_detach");
        events.push_back(event);
    }
    return events;
}

}  // namespace

SimScenario scenario_from_json(const std::string& text,
                               const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("scenario: expected a JSON object");
    reject_unknown(doc,
                   {"capacity", "cycle", "initial_nodes", "cycles", "rng_seed",
                    "required_confirmations", "rogues", "events"},
                   "scenario");

    const uint32_t capacity = get_u32(require(doc, "capacity", "scenario"), "capacity");
    if (capacity == 0) bad("capacity", "must be at least 1");
    const NetworkParams params(capacity);

    SimScenario scenario{
        params,
        parse_cycle(require(doc, "cycle", "scenario"), params, base_dir),
        parse_initial_nodes(require(doc, "initial_nodes", "scenario"), params),
        {},
        get_u32(require(doc, "cycles", "scenario"), "cycles"),
        std::nullopt,
        0,
        SyncState::kDefaultConfirmations,
    };
    if (scenario.cycles_to_run == 0) bad("cycles", "must be at least 1");

    if (auto it = doc.find("rng_seed"); it != doc.end())
        scenario.rng_seed = get_u64(*it, "rng_seed");
    if (auto it = doc.find("required_confirmations"); it != doc.end()) {
        scenario.required_confirmations = get_u32(*it, "required_confirmations");
        if (scenario.required_confirmations == 0)
            bad("required_confirmations", "must be at least 1");
    }
    if (auto it = doc.find("rogues"); it != doc.end())
        scenario.rogues = parse_rogues(*it);
    if (auto it = doc.find("events"); it != doc.end())
        scenario.events = parse_events(*it);
    return scenario;
}

SimScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str(), path.has_parent_path() ? path.parent_path()
                                                                : std::filesystem::path("."));
}

std::string metrics_to_csv(const std::vector<CycleMetrics>& rows) {
    std::ostringstream os;
    os << "cycle_index,edges_completed,expected_edges,ce_loss_observed,"
          "rogue_attempts,rogue_accepted,joins_synchronized\n";
    char ce[32];
    for (const CycleMetrics& row : rows) {
        std::snprintf(ce, sizeof(ce), "%.6f", row.ce_loss_observed);
        os << row.cycle_index << ',' << row.edges_completed << ',' << row.expected_edges
           << ',' << ce << ',' << row.rogue_attempts << ',' << row.rogue_accepted << ','
           << row.joins_synchronized << '\n';
    }
    return os.str();
}

}  // namespace chirp
