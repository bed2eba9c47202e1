#include "bootperc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace bootperc {

std::string engine_name(EngineKind engine) {
    switch (engine) {
        case EngineKind::Synchronous:
            return "synchronous";
        case EngineKind::SequentialReplay:
            return "sequential-replay";
        case EngineKind::SequentialOnfly:
            return "sequential-onfly";
    }
    return "unknown";
}

EngineKind parse_engine(const std::string& name) {
    if (name == "synchronous")
        return EngineKind::Synchronous;
    if (name == "sequential-replay")
        return EngineKind::SequentialReplay;
    if (name == "sequential-onfly")
        return EngineKind::SequentialOnfly;
    throw std::invalid_argument("unknown engine \"" + name +
                                "\" (expected synchronous | sequential-replay | sequential-onfly)");
}

void ExperimentPlan::validate() const {
    if (alpha_grid.empty() || omega_grid.empty())
        throw std::invalid_argument("ExperimentPlan: grids must be nonempty");
    for (double a : alpha_grid)
        if (!std::isfinite(a) || a < 0.0 || a > 1.0)
            throw std::invalid_argument("ExperimentPlan: alpha values must lie in [0,1]");
    for (int w : omega_grid)
        if (w < 0)
            throw std::invalid_argument("ExperimentPlan: omega values must be >= 0");
    if (reps < 1)
        throw std::invalid_argument("ExperimentPlan: reps must be >= 1");
    if (n < 1)
        throw std::invalid_argument("ExperimentPlan: n must be >= 1");
    if (record_trajectories && trajectory_dir.empty())
        throw std::invalid_argument("ExperimentPlan: record_trajectories needs a trajectory_dir");
    if (record_trajectories && engine == EngineKind::Synchronous)
        throw std::invalid_argument(
            "ExperimentPlan: trajectories are recorded by the sequential engines only");
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    if (count == 0)
        return;
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

CascadeResult run_replication(const JointDegreeDistribution& dist, std::size_t n,
                              const CascadeParams& params, EngineKind engine, Rng& rng,
                              const SequentialOptions& options) {
    const DegreeSequence seq = sample_degree_sequence(dist, n, rng);
    switch (engine) {
        case EngineKind::Synchronous: {
            const StubMatching matching = StubMatching::uniform(seq, rng);
            CascadeState state = seed_initial(seq, params, rng);
            return run_synchronous(matching, state, params);
        }
        case EngineKind::SequentialReplay: {
            const StubMatching matching = StubMatching::uniform(seq, rng);
            CascadeState state = seed_initial(seq, params, rng);
            return run_sequential_replay(matching, state, params, options, &rng);
        }
        case EngineKind::SequentialOnfly: {
            CascadeState state = seed_initial(seq, params, rng);
            return run_sequential_onfly(state, params, rng, options);
        }
    }
    throw std::logic_error("unreachable engine kind");
}

namespace {

struct SampleStats {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
};

SampleStats summarize(const std::vector<double>& values) {
    SampleStats stats;
    stats.min = values.front();
    stats.max = values.front();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        stats.min = std::min(stats.min, v);
        stats.max = std::max(stats.max, v);
    }
    stats.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - stats.mean) * (v - stats.mean);
        stats.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return stats;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1)
        return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

CellResult run_cell(const JointDegreeDistribution& dist, const ExperimentPlan& plan,
                    std::size_t cell_index, double alpha, int omega, unsigned threads) {
    plan.validate();
    const CascadeParams params{omega, alpha};
    params.validate();

    std::vector<double> phis(static_cast<std::size_t>(plan.reps), 0.0);
    parallel_for(phis.size(), threads, [&](std::size_t rep) {
        try {
            Rng rng = derive_stream(plan.master_seed, {cell_index, rep});
            SequentialOptions options;
            if (plan.record_trajectories)
                options.record_every = std::max<std::uint64_t>(
                    1, static_cast<std::uint64_t>(dist.mean_degree() *
                                                  static_cast<double>(plan.n)) /
                           1000);
            const CascadeResult result =
                run_replication(dist, plan.n, params, plan.engine, rng, options);
            phis[rep] = phi_hat(result, plan.n);
            if (plan.record_trajectories) {
                const std::string path = plan.trajectory_dir + "/cell" +
                                         std::to_string(cell_index) + "_rep" +
                                         std::to_string(rep) + ".csv";
                std::ofstream out(path);
                if (!out)
                    throw std::runtime_error("cannot open trajectory path " + path);
                write_trajectory_csv(out, result.trajectory);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("cell alpha=" + format_g9(alpha) + " omega=" +
                                     std::to_string(omega) + " rep=" + std::to_string(rep) +
                                     ": " + e.what());
        }
    });

    const SampleStats stats = summarize(phis);
    const TheoryOutcome theory = find_y_star(dist, params);
    CellResult cell;
    cell.alpha = alpha;
    cell.omega = omega;
    cell.phi_mean = stats.mean;
    cell.phi_sd = stats.sd;
    cell.phi_min = stats.min;
    cell.phi_max = stats.max;
    cell.phi_theory = theory.phi_pred;
    cell.branch = theory.branch;
    return cell;
}

std::vector<CellResult> run_sweep(const JointDegreeDistribution& dist, const ExperimentPlan& plan,
                                  unsigned threads) {
    plan.validate();
    const std::size_t cells = plan.alpha_grid.size() * plan.omega_grid.size();
    std::vector<CellResult> results(cells);
    parallel_for(cells, threads, [&](std::size_t cell_index) {
        const std::size_t ai = cell_index / plan.omega_grid.size();
        const std::size_t oi = cell_index % plan.omega_grid.size();
        results[cell_index] =
            run_cell(dist, plan, cell_index, plan.alpha_grid[ai], plan.omega_grid[oi], 1);
    });
    return results;
}

std::string format_g9(double v) {
    if (std::isnan(v))
        return "nan";
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.9g", v);
    return buffer;
}

void write_sweep_csv(std::ostream& os, const ExperimentPlan& plan,
                     const std::vector<CellResult>& cells) {
    os << "alpha,omega,n,reps,phi_mean,phi_sd,phi_theory,branch\n";
    for (const CellResult& cell : cells) {
        os << format_g9(cell.alpha) << ',' << cell.omega << ',' << plan.n << ',' << plan.reps
           << ',' << format_g9(cell.phi_mean) << ',' << format_g9(cell.phi_sd) << ','
           << format_g9(cell.phi_theory) << ',' << branch_name(cell.branch) << '\n';
    }
}

std::vector<TheoryJump> detect_theory_jumps(const ExperimentPlan& plan,
                                            const std::vector<CellResult>& cells,
                                            double jump_threshold) {
    std::vector<TheoryJump> jumps;
    const std::size_t n_omega = plan.omega_grid.size();
    for (std::size_t oi = 0; oi < n_omega; ++oi) {
        // walk the alpha axis comparing nearest predictable cells; tangential
        // cells (NaN prediction) sit inside the critical band and are skipped
        bool have_prev = false;
        std::size_t prev_ai = 0;
        double prev_phi = 0.0;
        for (std::size_t ai = 0; ai < plan.alpha_grid.size(); ++ai) {
            const CellResult& cell = cells[ai * n_omega + oi];
            if (std::isnan(cell.phi_theory))
                continue;
            if (have_prev) {
                const double jump = std::abs(cell.phi_theory - prev_phi);
                if (jump > jump_threshold)
                    jumps.push_back({plan.omega_grid[oi], prev_ai, plan.alpha_grid[prev_ai],
                                     plan.alpha_grid[ai], jump});
            }
            have_prev = true;
            prev_ai = ai;
            prev_phi = cell.phi_theory;
        }
    }
    return jumps;
}

SweepCheck check_sweep(const ExperimentPlan& plan, const std::vector<CellResult>& cells,
                       double tol_floor) {
    SweepCheck check;
    check.jumps = detect_theory_jumps(plan, cells);
    const std::size_t n_omega = plan.omega_grid.size();
    const double sqrt_reps = std::sqrt(static_cast<double>(plan.reps));
    const double grid_step = plan.alpha_grid.size() > 1
                                 ? (plan.alpha_grid.back() - plan.alpha_grid.front()) /
                                       static_cast<double>(plan.alpha_grid.size() - 1)
                                 : 0.0;

    for (std::size_t ai = 0; ai < plan.alpha_grid.size(); ++ai) {
        for (std::size_t oi = 0; oi < n_omega; ++oi) {
            const CellResult& cell = cells[ai * n_omega + oi];
            bool excluded = std::isnan(cell.phi_theory);
            for (const TheoryJump& jump : check.jumps) {
                if (jump.omega != cell.omega)
                    continue;
                if (std::abs(cell.alpha - jump.alpha_c()) <= grid_step + 1e-12) {
                    excluded = true;
                    break;
                }
            }
            if (excluded) {
                ++check.excluded_cells;
                continue;
            }
            ++check.compared_cells;
            const double gap = std::abs(cell.phi_mean - cell.phi_theory);
            const double tolerance = std::max(tol_floor, 3.0 * cell.phi_sd / sqrt_reps);
            check.max_gap_outside_band = std::max(check.max_gap_outside_band, gap);
            if (gap > tolerance)
                check.violations.push_back({cell.alpha, cell.omega, gap, tolerance});
        }
    }
    return check;
}

ConcentrationReport trajectory_concentration_study(const JointDegreeDistribution& dist,
                                                   const CascadeParams& params,
                                                   const std::vector<std::size_t>& n_list,
                                                   int reps, std::uint64_t master_seed,
                                                   unsigned threads) {
    params.validate();
    if (n_list.empty())
        throw std::invalid_argument("concentration study: n_list must be nonempty");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw std::invalid_argument("concentration study: n_list must be increasing");
    if (reps < 1)
        throw std::invalid_argument("concentration study: reps must be >= 1");

    const double lambda = dist.mean_degree();
    const std::size_t tasks = n_list.size() * static_cast<std::size_t>(reps);
    std::vector<double> sup_f(tasks, 0.0);
    std::vector<double> sup_fout(tasks, 0.0);

    parallel_for(tasks, threads, [&](std::size_t task) {
        const std::size_t ni = task / static_cast<std::size_t>(reps);
        const std::size_t rep = task % static_cast<std::size_t>(reps);
        const std::size_t n = n_list[ni];
        Rng rng = derive_stream(master_seed, {ni, rep});

        SequentialOptions options;
        options.record_every = std::max<std::uint64_t>(
            1, (static_cast<std::uint64_t>(std::llround(lambda * static_cast<double>(n))) + 999) /
                   1000);
        const CascadeResult result =
            run_replication(dist, n, params, EngineKind::SequentialOnfly, rng, options);

        double dev_f = 0.0, dev_fout = 0.0;
        for (const StepRecord& r : result.trajectory) {
            const double tau =
                std::min(static_cast<double>(r.t) / static_cast<double>(n), lambda * (1.0 - 1e-12));
            const TrajectoryAggregates agg = ode_aggregates(tau, dist, params);
            dev_f = std::max(dev_f, std::abs(static_cast<double>(r.fired) /
                                                 static_cast<double>(n) -
                                             agg.f_total_vertices));
            dev_fout = std::max(dev_fout, std::abs(static_cast<double>(r.f_out) /
                                                       static_cast<double>(n) -
                                                   agg.f_out));
        }
        sup_f[task] = dev_f;
        sup_fout[task] = dev_fout;
    });

    ConcentrationReport report;
    report.alpha = params.alpha;
    report.omega = params.omega;
    report.reps = reps;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        const auto begin = static_cast<std::ptrdiff_t>(ni * static_cast<std::size_t>(reps));
        std::vector<double> f_devs(sup_f.begin() + begin,
                                   sup_f.begin() + begin + reps);
        std::vector<double> fout_devs(sup_fout.begin() + begin,
                                      sup_fout.begin() + begin + reps);
        ConcentrationEntry entry;
        entry.n = n_list[ni];
        entry.median_sup_f = median_of(f_devs);
        entry.median_sup_fout = median_of(fout_devs);
        entry.max_sup_f = *std::max_element(f_devs.begin(), f_devs.end());
        entry.min_sup_f = *std::min_element(f_devs.begin(), f_devs.end());
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace bootperc
