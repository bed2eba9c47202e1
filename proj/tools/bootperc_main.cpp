#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bootperc/cascade.hpp"
#include "bootperc/degree_model.hpp"
#include "bootperc/dist_config.hpp"
#include "bootperc/experiment.hpp"
#include "bootperc/graph.hpp"
#include "bootperc/theory.hpp"

namespace {

using bootperc::ConfigError;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTheoryInapplicable = 3;

std::vector<double> parse_double_grid(const std::string& spec) {
    std::vector<double> values;
    if (spec.find(':') != std::string::npos) {
        double start = 0.0, stop = 0.0, step = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream in(spec);
        if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw ConfigError("bad grid \"" + spec + "\" (expected start:stop:step)");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count < 1)
            throw ConfigError("bad grid \"" + spec + "\": empty range");
        for (long i = 0; i < count; ++i)
            values.push_back(start + static_cast<double>(i) * step);
        return values;
    }
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ','))
        values.push_back(std::stod(item));
    if (values.empty())
        throw ConfigError("bad grid \"" + spec + "\": no values");
    return values;
}

std::vector<int> parse_int_grid(const std::string& spec) {
    std::vector<int> values;
    for (double v : parse_double_grid(spec)) {
        const int i = static_cast<int>(std::llround(v));
        if (std::abs(v - static_cast<double>(i)) > 1e-9)
            throw ConfigError("bad grid \"" + spec + "\": expected integers");
        values.push_back(i);
    }
    return values;
}

std::vector<std::size_t> parse_size_list(const std::string& spec) {
    std::vector<std::size_t> values;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ','))
        values.push_back(static_cast<std::size_t>(std::stoull(item)));
    if (values.empty())
        throw ConfigError("bad list \"" + spec + "\": no values");
    return values;
}

// Configuration precedence: command-line flags override config-file values
// override built-in defaults.
struct ConfigLayer {
    json data = json::object();

    void load(const std::string& path, const std::set<std::string>& allowed_keys) {
        data = bootperc::load_json_file(path);
        if (!data.is_object())
            throw ConfigError("config file " + path + " must hold a JSON object");
        for (const auto& [key, value] : data.items())
            if (!allowed_keys.contains(key))
                throw ConfigError("config file " + path + ": unknown key \"" + key + "\"");
    }

    template <typename T>
    void fill(const CLI::App* cmd, const std::string& flag, const std::string& key,
              T& value) const {
        if (cmd->count(flag) == 0 && data.contains(key)) {
            try {
                value = data.at(key).get<T>();
            } catch (const json::exception& e) {
                throw ConfigError("config key \"" + key + "\": " + e.what());
            }
        }
    }

    bool has(const std::string& key) const { return data.contains(key); }
};

bootperc::JointDegreeDistribution resolve_distribution(const CLI::App* cmd,
                                                       const std::string& dist_path,
                                                       const ConfigLayer& config) {
    if (cmd->count("--dist") > 0)
        return bootperc::load_distribution_file(dist_path);
    if (config.has("dist"))
        return bootperc::distribution_from_json(config.data.at("dist"));
    if (!dist_path.empty())
        return bootperc::load_distribution_file(dist_path);
    throw ConfigError("no distribution given: pass --dist FILE or a config with a \"dist\" key");
}

std::uint64_t resolve_seed(const CLI::App* cmd, std::uint64_t seed, const ConfigLayer& config) {
    if (cmd->count("--seed") > 0)
        return seed;
    if (config.has("seed")) {
        try {
            return config.data.at("seed").get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key \"seed\": ") + e.what());
        }
    }
    throw ConfigError("an explicit --seed is required (no wall-clock default)");
}

json diagnostics_json(const bootperc::RootDiagnostics& diag) {
    return json{{"f_at_one", diag.f_at_one},     {"f_below", diag.f_below},
                {"f_above", diag.f_above},       {"bracket_lo", diag.bracket_lo},
                {"bracket_hi", diag.bracket_hi}, {"grid_min_f", diag.grid_min_f},
                {"grid_min_y", diag.grid_min_y}};
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open output path: " + path);
    return out;
}

// ---------------------------------------------------------------- theory --
struct TheoryArgs {
    std::string dist_path;
    std::string config_path;
    double alpha = 0.0;
    int omega = 1;
    double grid_step = 1e-3;
    double root_tol = 1e-9;
};

int cmd_theory(const CLI::App* cmd, TheoryArgs& args) {
    ConfigLayer config;
    if (!args.config_path.empty())
        config.load(args.config_path, {"dist", "alpha", "omega", "grid_step", "root_tol"});
    config.fill(cmd, "--alpha", "alpha", args.alpha);
    config.fill(cmd, "--omega", "omega", args.omega);
    config.fill(cmd, "--grid-step", "grid_step", args.grid_step);
    config.fill(cmd, "--root-tol", "root_tol", args.root_tol);
    const auto dist = resolve_distribution(cmd, args.dist_path, config);

    bootperc::RootOptions options;
    options.grid_step = args.grid_step;
    options.root_tol = args.root_tol;
    const auto outcome = bootperc::find_y_star(dist, {args.omega, args.alpha}, options);

    json out{{"alpha", outcome.alpha},
             {"omega", outcome.omega},
             {"y_star", outcome.y_star},
             {"phi", outcome.phi_pred},
             {"branch", bootperc::branch_name(outcome.branch)},
             {"diagnostics", diagnostics_json(outcome.diagnostics)}};
    std::cout << out.dump(2) << "\n";
    return outcome.branch == bootperc::Branch::Tangential ? kExitTheoryInapplicable : kExitOk;
}

// -------------------------------------------------------------- simulate --
struct SimulateArgs {
    std::string dist_path;
    std::string config_path;
    double alpha = 0.0;
    int omega = 1;
    std::uint64_t n = 10000;
    std::uint64_t seed = 0;
    std::string engine = "sequential-onfly";
    bool debug_check = false;
    std::uint64_t record_every = 0;
    std::string trajectory_out;
    std::string dump_graph;
};

int cmd_simulate(const CLI::App* cmd, SimulateArgs& args) {
    ConfigLayer config;
    if (!args.config_path.empty())
        config.load(args.config_path,
                    {"dist", "alpha", "omega", "n", "seed", "engine", "debug_check",
                     "record_every", "trajectory_out", "dump_graph"});
    config.fill(cmd, "--alpha", "alpha", args.alpha);
    config.fill(cmd, "--omega", "omega", args.omega);
    config.fill(cmd, "--n", "n", args.n);
    config.fill(cmd, "--engine", "engine", args.engine);
    config.fill(cmd, "--debug-check", "debug_check", args.debug_check);
    config.fill(cmd, "--record-every", "record_every", args.record_every);
    config.fill(cmd, "--trajectory-out", "trajectory_out", args.trajectory_out);
    config.fill(cmd, "--dump-graph", "dump_graph", args.dump_graph);
    const std::uint64_t seed = resolve_seed(cmd, args.seed, config);
    const auto dist = resolve_distribution(cmd, args.dist_path, config);
    if (args.n < 1)
        throw ConfigError("simulate: --n must be >= 1");

    bootperc::EngineKind engine;
    try {
        engine = bootperc::parse_engine(args.engine);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const bool sequential = engine != bootperc::EngineKind::Synchronous;
    if (!args.trajectory_out.empty() && !sequential)
        throw ConfigError("simulate: trajectories are recorded by the sequential engines only");
    if (!args.dump_graph.empty() && engine == bootperc::EngineKind::SequentialOnfly)
        throw ConfigError("simulate: --dump-graph needs a realized matching "
                          "(synchronous or sequential-replay engine)");

    const bootperc::CascadeParams params{args.omega, args.alpha};
    params.validate();

    bootperc::Rng rng = bootperc::derive_stream(seed, {0, 0});
    const auto seq = bootperc::sample_degree_sequence(dist, static_cast<std::size_t>(args.n), rng);
    if (seq.all_zero())
        std::cerr << "warning: all-zero degree sequence, the cascade is trivial\n";

    bootperc::SequentialOptions options;
    options.debug_check = args.debug_check;
    if (!args.trajectory_out.empty())
        options.record_every = args.record_every > 0
                                   ? args.record_every
                                   : std::max<std::uint64_t>(1, (seq.total_stubs() + 999) / 1000);

    json out{{"alpha", args.alpha}, {"omega", args.omega},
             {"engine", args.engine}, {"n", args.n},
             {"m", seq.total_stubs()}, {"seed", seed}};

    bootperc::CascadeResult result;
    if (engine == bootperc::EngineKind::SequentialOnfly) {
        auto state = bootperc::seed_initial(seq, params, rng);
        result = bootperc::run_sequential_onfly(state, params, rng, options);
    } else {
        const auto matching = bootperc::StubMatching::uniform(seq, rng);
        if (!args.dump_graph.empty()) {
            auto graph_out = open_output(args.dump_graph);
            matching.write_edge_csv(graph_out);
        }
        out["self_loops"] = matching.self_loop_count();
        auto state = bootperc::seed_initial(seq, params, rng);
        result = engine == bootperc::EngineKind::Synchronous
                     ? bootperc::run_synchronous(matching, state, params)
                     : bootperc::run_sequential_replay(matching, state, params, options, &rng);
    }

    if (!args.trajectory_out.empty()) {
        auto traj_out = open_output(args.trajectory_out);
        bootperc::write_trajectory_csv(traj_out, result.trajectory);
    }

    out["phi"] = result.phi;
    out["fired_final"] = result.fired_final;
    out["t_final"] = result.t_final;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ----------------------------------------------------------------- sweep --
struct SweepArgs {
    std::string dist_path;
    std::string config_path;
    std::string alpha_grid = "0:0.3:0.01";
    std::string omega_grid = "1:40:1";
    std::uint64_t n = 10000;
    int reps = 10;
    std::uint64_t seed = 0;
    std::string engine = "sequential-onfly";
    unsigned threads = 0;
    std::string out_path = "sweep.csv";
    std::string trajectory_dir;
    double tol_floor = 0.01;
    bool check = false;
};

int cmd_sweep(const CLI::App* cmd, SweepArgs& args) {
    ConfigLayer config;
    if (!args.config_path.empty())
        config.load(args.config_path, {"dist", "alpha_grid", "omega_grid", "n", "reps", "seed",
                                       "engine", "threads", "out", "tol_floor",
                                       "trajectory_dir"});
    config.fill(cmd, "--n", "n", args.n);
    config.fill(cmd, "--reps", "reps", args.reps);
    config.fill(cmd, "--engine", "engine", args.engine);
    config.fill(cmd, "--threads", "threads", args.threads);
    config.fill(cmd, "--out", "out", args.out_path);
    config.fill(cmd, "--tol-floor", "tol_floor", args.tol_floor);
    config.fill(cmd, "--trajectory-dir", "trajectory_dir", args.trajectory_dir);
    const std::uint64_t seed = resolve_seed(cmd, args.seed, config);
    const auto dist = resolve_distribution(cmd, args.dist_path, config);

    bootperc::ExperimentPlan plan;
    if (cmd->count("--alpha-grid") == 0 && config.has("alpha_grid") &&
        config.data.at("alpha_grid").is_array())
        plan.alpha_grid = config.data.at("alpha_grid").get<std::vector<double>>();
    else {
        std::string spec = args.alpha_grid;
        if (cmd->count("--alpha-grid") == 0 && config.has("alpha_grid"))
            spec = config.data.at("alpha_grid").get<std::string>();
        plan.alpha_grid = parse_double_grid(spec);
    }
    if (cmd->count("--omega-grid") == 0 && config.has("omega_grid") &&
        config.data.at("omega_grid").is_array())
        plan.omega_grid = config.data.at("omega_grid").get<std::vector<int>>();
    else {
        std::string spec = args.omega_grid;
        if (cmd->count("--omega-grid") == 0 && config.has("omega_grid"))
            spec = config.data.at("omega_grid").get<std::string>();
        plan.omega_grid = parse_int_grid(spec);
    }
    plan.n = static_cast<std::size_t>(args.n);
    plan.reps = args.reps;
    plan.master_seed = seed;
    if (!args.trajectory_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(args.trajectory_dir, ec);
        if (ec)
            throw ConfigError("cannot create trajectory directory: " + args.trajectory_dir);
        plan.record_trajectories = true;
        plan.trajectory_dir = args.trajectory_dir;
    }
    try {
        plan.engine = bootperc::parse_engine(args.engine);
        plan.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const unsigned threads =
        args.threads > 0 ? args.threads : std::max(1u, std::thread::hardware_concurrency());

    const auto t0 = std::chrono::steady_clock::now();
    const auto cells = bootperc::run_sweep(dist, plan, threads);
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    auto out = open_output(args.out_path);
    bootperc::write_sweep_csv(out, plan, cells);
    out.close();

    const auto check = bootperc::check_sweep(plan, cells, args.tol_floor);
    std::cout << "cells=" << cells.size() << " reps=" << plan.reps << " n=" << plan.n
              << " engine=" << bootperc::engine_name(plan.engine) << "\n";
    std::cout << "theory jumps detected: " << check.jumps.size() << "\n";
    std::cout << "max |phi_mean - phi_theory| outside critical band: "
              << bootperc::format_g9(check.max_gap_outside_band) << " over "
              << check.compared_cells << " cells (" << check.excluded_cells << " excluded)\n";
    std::cout << "tolerance violations: " << check.violations.size() << "\n";
    for (const auto& v : check.violations)
        std::cout << "  violation alpha=" << bootperc::format_g9(v.alpha) << " omega=" << v.omega
                  << " gap=" << bootperc::format_g9(v.gap)
                  << " tol=" << bootperc::format_g9(v.tolerance) << "\n";
    std::cerr << "elapsed: " << elapsed << " s\n";

    if (args.check && !check.violations.empty())
        return kExitCheckFailed;
    return kExitOk;
}

// --------------------------------------------------------------- compare --
struct CompareArgs {
    std::string dist_path;
    std::string config_path;
    double alpha = 0.0;
    int omega = 1;
    std::uint64_t n = 100000;
    int reps = 20;
    std::uint64_t seed = 0;
    std::string engine = "sequential-onfly";
    unsigned threads = 0;
    double tol_floor = 0.01;
};

int cmd_compare(const CLI::App* cmd, CompareArgs& args) {
    ConfigLayer config;
    if (!args.config_path.empty())
        config.load(args.config_path, {"dist", "alpha", "omega", "n", "reps", "seed", "engine",
                                       "threads", "tol_floor"});
    config.fill(cmd, "--alpha", "alpha", args.alpha);
    config.fill(cmd, "--omega", "omega", args.omega);
    config.fill(cmd, "--n", "n", args.n);
    config.fill(cmd, "--reps", "reps", args.reps);
    config.fill(cmd, "--engine", "engine", args.engine);
    config.fill(cmd, "--threads", "threads", args.threads);
    config.fill(cmd, "--tol-floor", "tol_floor", args.tol_floor);
    const std::uint64_t seed = resolve_seed(cmd, args.seed, config);
    const auto dist = resolve_distribution(cmd, args.dist_path, config);

    bootperc::ExperimentPlan plan;
    plan.alpha_grid = {args.alpha};
    plan.omega_grid = {args.omega};
    plan.n = static_cast<std::size_t>(args.n);
    plan.reps = args.reps;
    plan.master_seed = seed;
    try {
        plan.engine = bootperc::parse_engine(args.engine);
        plan.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const unsigned threads =
        args.threads > 0 ? args.threads : std::max(1u, std::thread::hardware_concurrency());

    const auto cell = bootperc::run_cell(dist, plan, 0, args.alpha, args.omega, threads);
    const bool reliable = cell.branch != bootperc::Branch::Tangential;
    const double gap = std::abs(cell.phi_mean - cell.phi_theory);
    const double tolerance =
        std::max(args.tol_floor, 3.0 * cell.phi_sd / std::sqrt(static_cast<double>(plan.reps)));
    const double se = cell.phi_sd / std::sqrt(static_cast<double>(plan.reps));
    const double z = gap == 0.0 ? 0.0 : (se > 0.0 ? gap / se
                                                  : std::numeric_limits<double>::infinity());
    const bool pass = reliable && gap <= tolerance;

    json out{{"alpha", args.alpha},
             {"omega", args.omega},
             {"n", args.n},
             {"reps", plan.reps},
             {"seed", seed},
             {"engine", bootperc::engine_name(plan.engine)},
             {"phi_theory", cell.phi_theory},
             {"branch", bootperc::branch_name(cell.branch)},
             {"phi_mean", cell.phi_mean},
             {"phi_sd", cell.phi_sd},
             {"phi_min", cell.phi_min},
             {"phi_max", cell.phi_max},
             {"gap", gap},
             {"z_score", z},
             {"tolerance", tolerance},
             {"reliable", reliable},
             {"pass", pass}};
    std::cout << out.dump(2) << "\n";
    if (!reliable)
        return kExitTheoryInapplicable;
    return pass ? kExitOk : kExitCheckFailed;
}

// --------------------------------------------------------- concentration --
struct ConcentrationArgs {
    std::string dist_path;
    std::string config_path;
    double alpha = 0.3;
    int omega = 2;
    std::string n_list = "1000,10000,100000";
    int reps = 10;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

int cmd_concentration(const CLI::App* cmd, ConcentrationArgs& args) {
    ConfigLayer config;
    if (!args.config_path.empty())
        config.load(args.config_path,
                    {"dist", "alpha", "omega", "n_list", "reps", "seed", "threads"});
    config.fill(cmd, "--alpha", "alpha", args.alpha);
    config.fill(cmd, "--omega", "omega", args.omega);
    config.fill(cmd, "--reps", "reps", args.reps);
    config.fill(cmd, "--threads", "threads", args.threads);
    const std::uint64_t seed = resolve_seed(cmd, args.seed, config);
    const auto dist = resolve_distribution(cmd, args.dist_path, config);

    std::vector<std::size_t> n_list;
    if (cmd->count("--n-list") == 0 && config.has("n_list") &&
        config.data.at("n_list").is_array())
        n_list = config.data.at("n_list").get<std::vector<std::size_t>>();
    else {
        std::string spec = args.n_list;
        if (cmd->count("--n-list") == 0 && config.has("n_list"))
            spec = config.data.at("n_list").get<std::string>();
        n_list = parse_size_list(spec);
    }

    const unsigned threads =
        args.threads > 0 ? args.threads : std::max(1u, std::thread::hardware_concurrency());

    bootperc::ConcentrationReport report;
    try {
        report = bootperc::trajectory_concentration_study(dist, {args.omega, args.alpha}, n_list,
                                                          args.reps, seed, threads);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    json entries = json::array();
    for (const auto& entry : report.entries)
        entries.push_back({{"n", entry.n},
                           {"median_sup_f", entry.median_sup_f},
                           {"median_sup_fout", entry.median_sup_fout},
                           {"max_sup_f", entry.max_sup_f},
                           {"min_sup_f", entry.min_sup_f}});
    json out{{"alpha", report.alpha}, {"omega", report.omega},   {"reps", report.reps},
             {"seed", seed},          {"engine", "sequential-onfly"}, {"entries", entries}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bootstrap percolation on directed configuration-model random graphs"};
    app.require_subcommand(1);

    TheoryArgs theory_args;
    auto* theory = app.add_subcommand(
        "theory", "fixed-point prediction of the final fired fraction");
    theory->add_option("--dist", theory_args.dist_path, "distribution config JSON file");
    theory->add_option("--config", theory_args.config_path, "run config JSON file");
    theory->add_option("--alpha", theory_args.alpha, "external activation probability");
    theory->add_option("--omega", theory_args.omega, "firing threshold");
    theory->add_option("--grid-step", theory_args.grid_step, "root scan grid step");
    theory->add_option("--root-tol", theory_args.root_tol, "bisection width tolerance");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "one cascade replication");
    simulate->add_option("--dist", sim_args.dist_path, "distribution config JSON file");
    simulate->add_option("--config", sim_args.config_path, "run config JSON file");
    simulate->add_option("--alpha", sim_args.alpha, "external activation probability");
    simulate->add_option("--omega", sim_args.omega, "firing threshold");
    simulate->add_option("--n", sim_args.n, "vertex count");
    simulate->add_option("--seed", sim_args.seed, "random seed (required)");
    simulate->add_option("--engine", sim_args.engine,
                         "synchronous | sequential-replay | sequential-onfly");
    simulate->add_flag("--debug-check", sim_args.debug_check,
                       "assert counter identities every step");
    simulate->add_option("--record-every", sim_args.record_every,
                         "trajectory sampling stride (default ceil(m/1000))");
    simulate->add_option("--trajectory-out", sim_args.trajectory_out, "trajectory CSV path");
    simulate->add_option("--dump-graph", sim_args.dump_graph, "edge list CSV path");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "(alpha, omega) phase-surface grid");
    sweep->add_option("--dist", sweep_args.dist_path, "distribution config JSON file");
    sweep->add_option("--config", sweep_args.config_path, "run config JSON file");
    sweep->add_option("--alpha-grid", sweep_args.alpha_grid, "start:stop:step or comma list");
    sweep->add_option("--omega-grid", sweep_args.omega_grid, "start:stop:step or comma list");
    sweep->add_option("--n", sweep_args.n, "vertex count per replication");
    sweep->add_option("--reps", sweep_args.reps, "replications per cell");
    sweep->add_option("--seed", sweep_args.seed, "master seed (required)");
    sweep->add_option("--engine", sweep_args.engine,
                      "synchronous | sequential-replay | sequential-onfly");
    sweep->add_option("--threads", sweep_args.threads, "worker count (default: hardware)");
    sweep->add_option("--out", sweep_args.out_path, "output CSV path");
    sweep->add_option("--trajectory-dir", sweep_args.trajectory_dir,
                      "write one trajectory CSV per replication into this directory");
    sweep->add_option("--tol-floor", sweep_args.tol_floor, "tolerance floor for --check");
    sweep->add_flag("--check", sweep_args.check,
                    "exit nonzero if any non-critical cell violates tolerance");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "theory vs Monte Carlo at one cell");
    compare->add_option("--dist", compare_args.dist_path, "distribution config JSON file");
    compare->add_option("--config", compare_args.config_path, "run config JSON file");
    compare->add_option("--alpha", compare_args.alpha, "external activation probability");
    compare->add_option("--omega", compare_args.omega, "firing threshold");
    compare->add_option("--n", compare_args.n, "vertex count per replication");
    compare->add_option("--reps", compare_args.reps, "replications");
    compare->add_option("--seed", compare_args.seed, "master seed (required)");
    compare->add_option("--engine", compare_args.engine,
                        "synchronous | sequential-replay | sequential-onfly");
    compare->add_option("--threads", compare_args.threads, "worker count (default: hardware)");
    compare->add_option("--tol-floor", compare_args.tol_floor, "tolerance floor");

    ConcentrationArgs conc_args;
    auto* concentration =
        app.add_subcommand("concentration", "trajectory concentration across graph sizes");
    concentration->add_option("--dist", conc_args.dist_path, "distribution config JSON file");
    concentration->add_option("--config", conc_args.config_path, "run config JSON file");
    concentration->add_option("--alpha", conc_args.alpha, "external activation probability");
    concentration->add_option("--omega", conc_args.omega, "firing threshold");
    concentration->add_option("--n-list", conc_args.n_list, "comma list of graph sizes");
    concentration->add_option("--reps", conc_args.reps, "replications per size");
    concentration->add_option("--seed", conc_args.seed, "master seed (required)");
    concentration->add_option("--threads", conc_args.threads, "worker count (default: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (theory->parsed())
            return cmd_theory(theory, theory_args);
        if (simulate->parsed())
            return cmd_simulate(simulate, sim_args);
        if (sweep->parsed())
            return cmd_sweep(sweep, sweep_args);
        if (compare->parsed())
            return cmd_compare(compare, compare_args);
        if (concentration->parsed())
            return cmd_concentration(concentration, conc_args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
