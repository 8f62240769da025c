// chirp: round-robin pairing schedules, keyed cycles, and swarm simulation
// from the command line.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chirp/pairing.hpp"
#include "chirp/permutation.hpp"
#include "chirp/scenario_io.hpp"
#include "chirp/sim.hpp"
#include "chirp/verify.hpp"

namespace {

using namespace chirp;

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
}

// --cycle identity | seed=<u64> | file=<path>
CyclePermutation cycle_from_option(const NetworkParams& params, const std::string& spec) {
    if (spec == "identity") return identity_cycle(params);
    if (spec.rfind("seed=", 0) == 0) {
        const std::string digits = spec.substr(5);
        try {
            size_t used = 0;
            const uint64_t seed = std::stoull(digits, &used);
            if (used != digits.size()) throw std::invalid_argument("trailing characters");
            return shuffle_fisher_yates(params, seed);
        } catch (const std::exception&) {
            throw std::runtime_error("--cycle seed= wants an unsigned integer, got \"" +
                                     digits + "\"");
        }
    }
    if (spec.rfind("file=", 0) == 0) return load_cycle_raw(params, spec.substr(5));
    throw std::runtime_error("unknown --cycle form \"" + spec +
                             "\": expected identity, seed=<u64>, or file=<path>");
}

int cmd_schedule(uint32_t n, const std::string& cycle_spec, const std::string& format,
                 const std::string& output) {
    const NetworkParams params(n);
    const CyclePermutation cycle = cycle_from_option(params, cycle_spec);
    write_output(dump_schedule(params, cycle, format), output);
    return 0;
}

int cmd_simulate(const std::string& scenario_path, const std::string& csv_path) {
    const SimScenario scenario = load_scenario(scenario_path);
    const std::vector<CycleMetrics> rows = run_scenario(scenario);
    const std::string csv = metrics_to_csv(rows);

    uint64_t edges = 0, attempts = 0, accepted = 0;
    double ce_sum = 0.0;
    for (const CycleMetrics& row : rows) {
        edges += row.edges_completed;
        attempts += row.rogue_attempts;
        accepted += row.rogue_accepted;
        ce_sum += row.ce_loss_observed;
    }
    std::ostringstream summary;
    summary << "cycles:           " << rows.size() << '\n'
            << "edges completed:  " << edges << '\n'
            << "mean ce_loss:     " << (rows.empty() ? 0.0 : ce_sum / double(rows.size()))
            << '\n';
    if (attempts > 0)
        summary << "rogue acceptance: " << double(accepted) / double(attempts) << " ("
                << accepted << "/" << attempts << ")\n";
    else
        summary << "rogue acceptance: n/a (no attempts)\n";

    if (csv_path.empty()) {
        std::cout << csv;
        std::cerr << summary.str();
    } else {
        write_output(csv, csv_path);
        std::cout << summary.str();
    }
    return 0;
}

int cmd_perm_generate(uint32_t n, uint64_t seed, const std::string& algo,
                      const std::string& output, bool print) {
    const NetworkParams params(n);
    CyclePermutation cycle = algo == "sattolo" ? shuffle_sattolo(params, seed)
                                               : shuffle_fisher_yates(params, seed);
    save_cycle_raw(cycle, output);
    if (print) {
        std::ostringstream os;
        for (uint32_t i = 0; i < n; ++i) {
            if (i) os << ' ';
            os << cycle.order()[i];
        }
        std::cout << os.str() << '\n';
    }
    std::cerr << "wrote " << 4u * n << " bytes to " << output << '\n';
    return 0;
}

int cmd_perm_validate(uint32_t n, const std::string& file) {
    const NetworkParams params(n);
    try {
        const CyclePermutation cycle = load_cycle_raw(params, file);
        std::cout << "ok: valid cycle for n=" << n;
        if (cycle.is_identity()) std::cout << " (identity)";
        std::cout << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return 1;
    }
}

int cmd_perm_stats(uint32_t n, bool exact) {
    const NetworkParams params(n);
    const PermutationStats stats = permutation_space(params);
    std::cout << "n:              " << n << '\n'
              << "rounds/cycle:   " << n << '\n'
              << "min rounds:     " << (n >= 2 ? std::to_string(min_rounds(params)) : "-")
              << '\n'
              << "edges/round:    " << max_edges_per_round(params) << '\n'
              << "cycle storage:  " << stats.storage_bytes() << " bytes\n"
              << "permutations:   " << stats.scientific() << '\n';
    if (exact) {
        const std::string& digits = stats.count_decimal();
        if (digits.empty())
            std::cout << "exact:          (more than 20000 digits, not rendered)\n";
        else
            std::cout << "exact:          " << digits << '\n';
    }
    return 0;
}

int cmd_perm_inspect(uint32_t n, const std::string& file) {
    const NetworkParams params(n);
    const CyclePermutation cycle = load_cycle_raw(params, file);
    std::cout << "n:        " << n << '\n'
              << "source:   " << cycle.provenance().label << '\n'
              << "identity: " << (cycle.is_identity() ? "yes" : "no") << '\n';
    std::cout << "order:   ";
    for (uint32_t i = 0; i < n; ++i) std::cout << ' ' << cycle.order()[i];
    std::cout << '\n' << "inverse: ";
    const auto inverse = cycle.inverse();
    for (uint32_t i = 0; i < n; ++i) std::cout << ' ' << inverse[i];
    std::cout << '\n';
    return 0;
}

int cmd_verify(uint32_t max_n, std::optional<uint32_t> only_n) {
    std::vector<uint32_t> sizes;
    if (only_n) {
        sizes.push_back(*only_n);
    } else {
        for (uint32_t n = 2; n <= max_n; ++n) sizes.push_back(n);
    }
    const std::vector<uint64_t> seeds{1, 0xC0FFEEull};
    for (uint32_t n : sizes) {
        const NetworkParams params(n);
        std::vector<CyclePermutation> cycles;
        cycles.push_back(identity_cycle(params));
        for (uint64_t s : seeds) cycles.push_back(shuffle_fisher_yates(params, s));
        for (const CyclePermutation& cycle : cycles) {
            const Schedule schedule = build_schedule(params, cycle);
            if (auto violation = check_schedule(schedule, cycle)) {
                std::cerr << to_string(*violation) << '\n';
                return 1;
            }
            if (auto violation = check_secure_equivalence(params, cycle)) {
                std::cerr << to_string(*violation) << '\n';
                return 1;
            }
        }
    }
    if (only_n)
        std::cout << "all invariants hold at n=" << *only_n << '\n';
    else
        std::cout << "all invariants hold for n in [2, " << max_n << "]\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"round-robin pairing scheduler and swarm simulator"};
    app.set_version_flag("--version", std::string("chirp ") + CHIRP_VERSION);
    app.require_subcommand(1);

    // schedule
    auto* schedule = app.add_subcommand("schedule", "print a full cycle's pairing matrix");
    uint32_t sched_n = 8;
    std::string sched_cycle = "identity";
    std::string sched_format = "text";
    std::string sched_output;
    schedule->add_option("--n", sched_n, "network capacity")->required();
    schedule->add_option("--cycle", sched_cycle, "identity | seed=<u64> | file=<path>");
    schedule->add_option("--format", sched_format, "text | csv | markdown");
    schedule->add_option("--output", sched_output, "write to file instead of stdout");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a scenario file");
    std::string sim_scenario;
    std::string sim_csv;
    simulate->add_option("--scenario", sim_scenario, "scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    simulate->add_option("--csv", sim_csv,
                         "write per-cycle metrics CSV here (default: stdout)");

    // perm + subcommands
    auto* perm = app.add_subcommand("perm", "generate and examine cycle permutations");
    perm->require_subcommand(1);

    auto* generate = perm->add_subcommand("generate", "derive a cycle and store it raw");
    uint32_t gen_n = 0;
    uint64_t gen_seed = 0;
    std::string gen_algo = "fisher-yates";
    std::string gen_output;
    bool gen_print = false;
    generate->add_option("--n", gen_n, "network capacity")->required();
    generate->add_option("--seed", gen_seed, "shared secret seed")->required();
    generate->add_option("--algo", gen_algo, "fisher-yates | sattolo")
        ->check(CLI::IsMember({"fisher-yates", "sattolo"}));
    generate->add_option("--output", gen_output, "output file (4 bytes per entry)")
        ->required();
    generate->add_flag("--print", gen_print, "also print the order to stdout");

    auto* validate = perm->add_subcommand("validate", "check a stored cycle file");
    uint32_t val_n = 0;
    std::string val_file;
    validate->add_option("--n", val_n, "network capacity")->required();
    validate->add_option("--file", val_file, "cycle file")->required()->check(
        CLI::ExistingFile);

    auto* stats = perm->add_subcommand("stats", "cycle storage and keyspace size");
    uint32_t stats_n = 0;
    bool stats_exact = false;
    stats->add_option("--n", stats_n, "network capacity")->required();
    stats->add_flag("--exact", stats_exact, "print the exact permutation count");

    auto* inspect = perm->add_subcommand("inspect", "describe a stored cycle file");
    uint32_t ins_n = 0;
    std::string ins_file;
    inspect->add_option("--n", ins_n, "network capacity")->required();
    inspect->add_option("--file", ins_file, "cycle file")->required()->check(
        CLI::ExistingFile);

    // verify
    auto* verify = app.add_subcommand("verify", "exhaustively check schedule invariants");
    uint32_t ver_max = 64;
    std::optional<uint32_t> ver_only;
    verify->add_option("--max-n", ver_max, "check every capacity from 2 up to this");
    verify->add_option("--n", ver_only, "check a single capacity instead");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*schedule) return cmd_schedule(sched_n, sched_cycle, sched_format, sched_output);
        if (*simulate) return cmd_simulate(sim_scenario, sim_csv);
        if (*generate) return cmd_perm_generate(gen_n, gen_seed, gen_algo, gen_output,
                                                gen_print);
        if (*validate) return cmd_perm_validate(val_n, val_file);
        if (*stats) return cmd_perm_stats(stats_n, stats_exact);
        if (*inspect) return cmd_perm_inspect(ins_n, ins_file);
        if (*verify) return cmd_verify(ver_max, ver_only);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
