#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <set>
#include <vector>

#include "chirp/pairing.hpp"
#include "chirp/permutation.hpp"
#include "chirp/scenario_io.hpp"
#include "chirp/sim.hpp"
#include "chirp/sync.hpp"
#include "chirp/verify.hpp"

namespace py = pybind11;
using namespace chirp;

namespace {

// Self-loops cross the boundary as None, peers as a plain int.
std::optional<uint32_t> outcome_to_py(const PairOutcome& outcome) {
    if (outcome.is_self_loop()) return std::nullopt;
    return outcome.target().value;
}

std::set<NodeId> ids_from(const std::set<uint32_t>& raw) {
    std::set<NodeId> ids;
    for (uint32_t v : raw) ids.insert(NodeId{v});
    return ids;
}

}  // namespace

PYBIND11_MODULE(_chirp, m) {
    m.doc() = "round-robin pairing schedules, keyed cycles, and swarm simulation";
    m.attr("__version__") = CHIRP_VERSION;

    py::register_exception<ScenarioError>(m, "ScenarioError");

    py::class_<EfficiencyReport>(m, "EfficiencyReport")
        .def_readonly("node_cnt", &EfficiencyReport::node_cnt)
        .def_readonly("node_actual", &EfficiencyReport::node_actual)
        .def_readonly("ce_loss", &EfficiencyReport::ce_loss)
        .def("__repr__", [](const EfficiencyReport& r) {
            return "EfficiencyReport(node_cnt=" + std::to_string(r.node_cnt) +
                   ", node_actual=" + std::to_string(r.node_actual) +
                   ", ce_loss=" + std::to_string(r.ce_loss) + ")";
        });

    py::class_<CyclePermutation>(m, "CyclePermutation")
        .def_property_readonly("node_cnt", &CyclePermutation::node_cnt)
        .def_property_readonly("order",
                               [](const CyclePermutation& c) {
                                   return std::vector<uint32_t>(c.order().begin(),
                                                                c.order().end());
                               })
        .def("inverse", &CyclePermutation::inverse)
        .def("is_identity", &CyclePermutation::is_identity)
        .def_property_readonly("label",
                               [](const CyclePermutation& c) { return c.provenance().label; })
        .def_property_readonly("seed",
                               [](const CyclePermutation& c) -> std::optional<uint64_t> {
                                   if (c.provenance().kind != Provenance::Kind::Seeded)
                                       return std::nullopt;
                                   return c.provenance().seed;
                               })
        .def("__len__", &CyclePermutation::node_cnt)
        .def("__repr__", [](const CyclePermutation& c) {
            return "CyclePermutation(n=" + std::to_string(c.node_cnt()) + ", " +
                   c.provenance().label + ")";
        });

    py::class_<Schedule>(m, "Schedule")
        .def_property_readonly("node_cnt",
                               [](const Schedule& s) { return s.params.node_cnt; })
        .def("at",
             [](const Schedule& s, uint32_t round, uint32_t source) {
                 return outcome_to_py(s.at(RoundIndex{round}, NodeId{source}));
             },
             py::arg("round"), py::arg("source"))
        .def("rows", [](const Schedule& s) {
            std::vector<std::vector<std::optional<uint32_t>>> rows;
            rows.reserve(s.rows.size());
            for (const auto& row : s.rows) {
                std::vector<std::optional<uint32_t>> out;
                out.reserve(row.size());
                for (const PairOutcome& cell : row) out.push_back(outcome_to_py(cell));
                rows.push_back(std::move(out));
            }
            return rows;
        });

    py::class_<PermutationStats>(m, "PermutationStats")
        .def_property_readonly("node_cnt", &PermutationStats::node_cnt)
        .def_property_readonly("mantissa", &PermutationStats::mantissa)
        .def_property_readonly("exponent10", &PermutationStats::exponent10)
        .def_property_readonly("storage_bytes", &PermutationStats::storage_bytes)
        .def_property_readonly("count_decimal", &PermutationStats::count_decimal)
        .def("scientific", &PermutationStats::scientific, py::arg("sig_figs") = 3)
        .def("__repr__", [](const PermutationStats& s) {
            return "PermutationStats(n=" + std::to_string(s.node_cnt()) + ", count=" +
                   s.scientific() + ")";
        });

    py::enum_<AdmissionVerdict>(m, "AdmissionVerdict")
        .value("Admit", AdmissionVerdict::Admit)
        .value("Full", AdmissionVerdict::Full)
        .value("IndexCollision", AdmissionVerdict::IndexCollision);

    py::class_<SyncState>(m, "SyncState")
        .def(py::init([](uint32_t node_cnt, uint32_t observer, const CyclePermutation& cycle,
                         uint32_t required_confirmations) {
                 return SyncState(NetworkParams(node_cnt), NodeId{observer}, cycle,
                                  required_confirmations);
             }),
             py::arg("node_cnt"), py::arg("observer"), py::arg("cycle"),
             py::arg("required_confirmations") = SyncState::kDefaultConfirmations)
        .def("infer_round",
             [](SyncState& s, uint64_t tick, std::optional<uint32_t> inbound) {
                 SyncObservation obs{tick, std::nullopt};
                 if (inbound) obs.inbound = NodeId{*inbound};
                 return s.infer_round(obs);
             },
             py::arg("tick"), py::arg("inbound") = std::nullopt)
        .def("is_synchronized", &SyncState::is_synchronized)
        .def("candidate_round",
             [](const SyncState& s) -> std::optional<uint32_t> {
                 if (auto r = s.candidate_round()) return r->value;
                 return std::nullopt;
             })
        .def("consistent_count", &SyncState::consistent_count)
        .def("required_confirmations", &SyncState::required_confirmations);

    py::class_<CycleMetrics>(m, "CycleMetrics")
        .def_readonly("cycle_index", &CycleMetrics::cycle_index)
        .def_readonly("edges_completed", &CycleMetrics::edges_completed)
        .def_readonly("expected_edges", &CycleMetrics::expected_edges)
        .def_readonly("ce_loss_observed", &CycleMetrics::ce_loss_observed)
        .def_readonly("rogue_attempts", &CycleMetrics::rogue_attempts)
        .def_readonly("rogue_accepted", &CycleMetrics::rogue_accepted)
        .def_readonly("joins_synchronized", &CycleMetrics::joins_synchronized)
        .def("__repr__", [](const CycleMetrics& r) {
            return "CycleMetrics(cycle=" + std::to_string(r.cycle_index) + ", edges=" +
                   std::to_string(r.edges_completed) + "/" +
                   std::to_string(r.expected_edges) + ")";
        });

    py::class_<SimScenario>(m, "SimScenario")
        .def_property_readonly("node_cnt",
                               [](const SimScenario& s) { return s.params.node_cnt; })
        .def_property_readonly("cycles",
                               [](const SimScenario& s) { return s.cycles_to_run; })
        .def_property_readonly("initial_count",
                               [](const SimScenario& s) { return s.initial_nodes.size(); })
        .def("__repr__", [](const SimScenario& s) {
            return "SimScenario(n=" + std::to_string(s.params.node_cnt) + ", cycles=" +
                   std::to_string(s.cycles_to_run) + ")";
        });

    m.def("min_rounds",
          [](uint32_t node_cnt) { return min_rounds(NetworkParams(node_cnt)); },
          py::arg("node_cnt"), "Fewest rounds that can cover all pairings.");
    m.def("max_edges_per_round",
          [](uint32_t node_cnt) { return max_edges_per_round(NetworkParams(node_cnt)); },
          py::arg("node_cnt"), "Concurrent pair limit for one round.");
    m.def("pair_target",
          [](uint32_t node_cnt, uint32_t source, uint32_t round) {
              return outcome_to_py(
                  pair_target(NetworkParams(node_cnt), NodeId{source}, RoundIndex{round}));
          },
          py::arg("node_cnt"), py::arg("source"), py::arg("round"),
          "Partner index for a round, or None on a self-loop.");
    m.def("pair_target_secure",
          [](uint32_t node_cnt, const CyclePermutation& cycle, uint32_t source,
             uint32_t round) {
              return outcome_to_py(pair_target_secure(NetworkParams(node_cnt), cycle,
                                                      NodeId{source}, RoundIndex{round}));
          },
          py::arg("node_cnt"), py::arg("cycle"), py::arg("source"), py::arg("round"),
          "Partner index under a keyed cycle, or None on a self-loop.");
    m.def("recover_round",
          [](uint32_t node_cnt, uint32_t self_idx, uint32_t inbound) {
              return recover_round(NetworkParams(node_cnt), NodeId{self_idx},
                                   NodeId{inbound})
                  .value;
          },
          py::arg("node_cnt"), py::arg("self_idx"), py::arg("inbound"),
          "Round implied by hearing `inbound` (unkeyed schedule).");
    m.def("communication_efficiency",
          [](uint32_t node_cnt, uint32_t node_actual) {
              return communication_efficiency(node_cnt, node_actual);
          },
          py::arg("node_cnt"), py::arg("node_actual"));

    m.def("identity_cycle",
          [](uint32_t node_cnt) { return identity_cycle(NetworkParams(node_cnt)); },
          py::arg("node_cnt"));
    m.def("fisher_yates",
          [](uint32_t node_cnt, uint64_t seed) {
              return shuffle_fisher_yates(NetworkParams(node_cnt), seed);
          },
          py::arg("node_cnt"), py::arg("seed"),
          "Seed-keyed uniform permutation of the cycle values.");
    m.def("sattolo",
          [](uint32_t node_cnt, uint64_t seed) {
              return shuffle_sattolo(NetworkParams(node_cnt), seed);
          },
          py::arg("node_cnt"), py::arg("seed"),
          "Seed-keyed single-cycle permutation of the cycle values.");
    m.def("load_cycle",
          [](uint32_t node_cnt, const std::vector<uint32_t>& order) {
              return load_cycle(NetworkParams(node_cnt), order);
          },
          py::arg("node_cnt"), py::arg("order"));
    m.def("load_cycle_raw",
          [](uint32_t node_cnt, const std::filesystem::path& path) {
              return load_cycle_raw(NetworkParams(node_cnt), path);
          },
          py::arg("node_cnt"), py::arg("path"));
    m.def("save_cycle_raw", &save_cycle_raw, py::arg("cycle"), py::arg("path"));
    m.def("cycle_to_bytes",
          [](const CyclePermutation& cycle) {
              const std::vector<uint8_t> raw = cycle_to_bytes(cycle);
              return py::bytes(reinterpret_cast<const char*>(raw.data()), raw.size());
          },
          py::arg("cycle"), "Little-endian 4-byte entries, order[0] first.");
    m.def("permutation_space",
          [](uint32_t node_cnt) { return permutation_space(NetworkParams(node_cnt)); },
          py::arg("node_cnt"));

    m.def("build_schedule",
          [](uint32_t node_cnt, std::optional<CyclePermutation> cycle) {
              const NetworkParams params(node_cnt);
              if (cycle) return build_schedule(params, *cycle);
              return build_schedule(params);
          },
          py::arg("node_cnt"), py::arg("cycle") = std::nullopt);
    m.def("dump_schedule",
          [](uint32_t node_cnt, const CyclePermutation& cycle, const std::string& format) {
              return dump_schedule(NetworkParams(node_cnt), cycle, format);
          },
          py::arg("node_cnt"), py::arg("cycle"), py::arg("format") = "text");

    m.def("check_admission",
          [](uint32_t node_cnt, const std::set<uint32_t>& existing, uint32_t candidate,
             std::optional<uint32_t> node_actual) {
              const NetworkParams params(node_cnt);
              const std::set<NodeId> ids = ids_from(existing);
              if (node_actual)
                  return check_admission(params, ids, NodeId{candidate}, *node_actual);
              return check_admission(params, ids, NodeId{candidate});
          },
          py::arg("node_cnt"), py::arg("existing"), py::arg("candidate"),
          py::arg("node_actual") = std::nullopt);

    m.def("check_cycle_invariants",
          [](uint32_t node_cnt, const CyclePermutation& cycle) -> std::optional<std::string> {
              const NetworkParams params(node_cnt);
              const Schedule schedule = build_schedule(params, cycle);
              if (auto violation = check_schedule(schedule, cycle))
                  return to_string(*violation);
              if (auto violation = check_secure_equivalence(params, cycle))
                  return to_string(*violation);
              return std::nullopt;
          },
          py::arg("node_cnt"), py::arg("cycle"),
          "First violated schedule invariant as text, or None when clean.");

    m.def("scenario_from_json", &scenario_from_json, py::arg("text"),
          py::arg("base_dir") = std::filesystem::path("."));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("run_scenario", &run_scenario, py::arg("scenario"));
    m.def("measure_rogue_acceptance", &measure_rogue_acceptance, py::arg("scenario"));
    m.def("metrics_to_csv", &metrics_to_csv, py::arg("rows"));
}
