// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include "bootperc/cascade.hpp"
#include "bootperc/degree_model.hpp"
#include "bootperc/experiment.hpp"
#include "bootperc/graph.hpp"
#include "bootperc/theory.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace bootperc;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, const std::string& name, bool pass, const std::string& detail,
            double elapsed) {
    std::ostringstream line;
    line << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << name;
    if (!detail.empty())
        line << " — " << detail;
    line << " (" << format_g9(std::round(elapsed * 100.0) / 100.0) << " s)";
    std::cout << line.str() << std::endl;
    if (!pass)
        ++failures;
}

unsigned worker_count() {
    return std::max(1u, std::thread::hardware_concurrency());
}

JointDegreeDistribution regular3() {
    return JointDegreeDistribution::product(point_mass_law(3), point_mass_law(3));
}

JointDegreeDistribution poisson5() {
    return JointDegreeDistribution::product(poisson_law(5.0), poisson_law(5.0));
}

JointDegreeDistribution gaussian50() {
    return JointDegreeDistribution::product(gaussian_law(50.0, 15.0, 140),
                                            gaussian_law(50.0, 15.0, 140));
}

// -------------------------------------------------------------------------
// 1. Engine equivalence: synchronous and sequential-replay closures agree
//    exactly on 200+ mixed instances within 10 s.
void criterion_1() {
    Timer timer;
    const auto reg = regular3();
    const auto poi = poisson5();
    const auto gau =
        JointDegreeDistribution::product(gaussian_law(8.0, 3.0, 26), gaussian_law(8.0, 3.0, 26));
    const JointDegreeDistribution* dists[] = {&reg, &poi, &gau};
    const double alphas[] = {0.05, 0.1, 0.3};

    int mismatches = 0;
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        Rng rng = derive_stream(8101, {static_cast<std::uint64_t>(i)});
        const auto& dist = *dists[i % 3];
        const CascadeParams params{1 + i % 3, alphas[(i / 3) % 3]};
        const std::size_t n = 50 + static_cast<std::size_t>(uniform_below(rng, 451));

        const DegreeSequence seq = sample_degree_sequence(dist, n, rng);
        const StubMatching matching = StubMatching::uniform(seq, rng);
        const CascadeState seeded = seed_initial(seq, params, rng);
        CascadeState sync_state = seeded;
        CascadeState replay_state = seeded;
        run_synchronous(matching, sync_state, params);
        run_sequential_replay(matching, replay_state, params);
        if (sync_state.fired != replay_state.fired)
            ++mismatches;
    }
    const double elapsed = timer.seconds();
    const bool pass = mismatches == 0 && elapsed < 10.0;
    report(1, "engine equivalence (exact)", pass,
           std::to_string(instances - mismatches) + "/" + std::to_string(instances) +
               " instances identical",
           elapsed);
}

// -------------------------------------------------------------------------
// 2. Counter identities hold at every step of 50 sequential runs (n = 1000),
//    exact integer equality via debug_check.
void criterion_2() {
    Timer timer;
    const auto dist = poisson5();
    SequentialOptions options;
    options.debug_check = true;
    int clean_runs = 0;
    std::string first_violation;
    for (int i = 0; i < 50; ++i) {
        Rng rng = derive_stream(8202, {static_cast<std::uint64_t>(i)});
        const CascadeParams params{1 + i % 3, 0.2};
        try {
            const DegreeSequence seq = sample_degree_sequence(dist, 1000, rng);
            if (i % 2 == 0) {
                const StubMatching matching = StubMatching::uniform(seq, rng);
                CascadeState state = seed_initial(seq, params, rng);
                run_sequential_replay(matching, state, params, options);
            } else {
                CascadeState state = seed_initial(seq, params, rng);
                run_sequential_onfly(state, params, rng, options);
            }
            ++clean_runs;
        } catch (const CounterIdentityError& e) {
            if (first_violation.empty())
                first_violation = e.what();
        }
    }
    const bool pass = clean_runs == 50;
    report(2, "counter identities (exact, every step)", pass,
           pass ? "50/50 runs clean" : first_violation, timer.seconds());
}

// -------------------------------------------------------------------------
// 3. Analytic identity f_out(tau) = f_alpha(1 - tau/lambda) within 1e-9 on a
//    1000-point grid for three laws, within 1 s.
void criterion_3() {
    Timer timer;
    double worst = 0.0;
    for (const auto& dist : {regular3(), poisson5(), gaussian50()}) {
        const CascadeParams params{2, 0.3};
        const double lambda = dist.mean_degree();
        for (int i = 0; i < 1000; ++i) {
            const double tau = lambda * (1.0 - 1e-6) * static_cast<double>(i) / 999.0;
            const TrajectoryAggregates agg = ode_aggregates(tau, dist, params);
            worst = std::max(worst, std::abs(agg.f_out - f_alpha(agg.y, dist, params)));
        }
    }
    const double elapsed = timer.seconds();
    const bool pass = worst < 1e-9 && elapsed < 1.0;
    report(3, "identity f_out(tau) = f_alpha(1 - tau/lambda)", pass,
           "max gap " + format_g9(worst), elapsed);
}

// -------------------------------------------------------------------------
// 4. Trivial limits, exact: alpha=1 -> 1; alpha=0, omega>=1 -> 0; omega=0 -> 1.
void criterion_4() {
    Timer timer;
    const auto dist = regular3();
    bool pass = true;
    std::string detail = "all limits exact";

    const auto check_case = [&](double alpha, int omega, double expected) {
        const double theory = predicted_phi(dist, {omega, alpha});
        if (theory != expected) {
            pass = false;
            detail = "theory(alpha=" + format_g9(alpha) + ", omega=" + std::to_string(omega) +
                     ") = " + format_g9(theory);
            return;
        }
        for (EngineKind engine : {EngineKind::Synchronous, EngineKind::SequentialReplay,
                                  EngineKind::SequentialOnfly}) {
            Rng rng = derive_stream(8404, {static_cast<std::uint64_t>(omega),
                                           static_cast<std::uint64_t>(engine)});
            const CascadeResult result =
                run_replication(dist, 500, {omega, alpha}, engine, rng);
            if (result.phi != expected) {
                pass = false;
                detail = "sim(alpha=" + format_g9(alpha) + ", omega=" + std::to_string(omega) +
                         ", " + engine_name(engine) + ") = " + format_g9(result.phi);
                return;
            }
        }
    };
    check_case(1.0, 2, 1.0);
    if (pass)
        check_case(0.0, 2, 0.0);
    if (pass)
        check_case(0.0, 1, 0.0);
    if (pass)
        check_case(0.0, 0, 1.0);
    if (pass)
        check_case(0.5, 0, 1.0);
    report(4, "trivial limits (exact)", pass, detail, timer.seconds());
}

// -------------------------------------------------------------------------
// 5. Theory vs Monte Carlo: poisson(5)^2, omega=2, alpha=0.2, n=1e5, 20 reps,
//    |phi_mean - phi_theory| < 0.01, theory confirmed by the 1e-6 grid oracle.
void criterion_5() {
    Timer timer;
    const auto dist = poisson5();
    const double alpha = 0.2;
    const int omega = 2;

    ExperimentPlan plan;
    plan.alpha_grid = {alpha};
    plan.omega_grid = {omega};
    plan.n = 100000;
    plan.reps = 20;
    plan.master_seed = 8505;
    plan.engine = EngineKind::SequentialOnfly;
    const CellResult cell = run_cell(dist, plan, 0, alpha, omega, worker_count());

    const double oracle = oracles::predicted_phi(dist, alpha, omega, 1e-6);
    const double theory_vs_oracle = std::abs(cell.phi_theory - oracle);
    const double gap = std::abs(cell.phi_mean - cell.phi_theory);
    const double elapsed = timer.seconds();
    const bool pass = theory_vs_oracle < 1e-6 && gap < 0.01 && elapsed < 60.0;
    report(5, "theory vs Monte Carlo at poisson(5)^2", pass,
           "|mean-theory| = " + format_g9(gap) + ", |theory-oracle| = " +
               format_g9(theory_vs_oracle),
           elapsed);
}

// -------------------------------------------------------------------------
// 6. Concentration: median sup_t |F(t)/n - f(t/n)| strictly decreasing over
//    n in {1e3, 1e4, 1e5} and < 0.02 at n = 1e5, within 2 min.
void criterion_6() {
    Timer timer;
    const auto dist = regular3();
    const ConcentrationReport report_data =
        trajectory_concentration_study(dist, {2, 0.3}, {1000, 10000, 100000}, 10, 8606,
                                       worker_count());
    const auto& e = report_data.entries;
    const double elapsed = timer.seconds();
    const bool decreasing = e[1].median_sup_f < e[0].median_sup_f &&
                            e[2].median_sup_f < e[1].median_sup_f;
    const bool small = e[2].median_sup_f < 0.02;
    const bool pass = decreasing && small && elapsed < 120.0;
    report(6, "trajectory concentration", pass,
           "medians " + format_g9(e[0].median_sup_f) + " > " + format_g9(e[1].median_sup_f) +
               " > " + format_g9(e[2].median_sup_f),
           elapsed);
}

// -------------------------------------------------------------------------
// 7. Phase surface: gaussian(50,15), alpha 0..0.3 step 0.01, omega 1..40,
//    n = 1e4, reps = 10. Theory monotone on the grid, at least one jump
//    > 0.5 located at the oracle alpha_c within one grid step, and the
//    simulation tracks theory outside the critical band.
void criterion_7() {
    Timer timer;
    const auto dist = gaussian50();
    ExperimentPlan plan;
    plan.alpha_grid.clear();
    for (int i = 0; i <= 30; ++i)
        plan.alpha_grid.push_back(static_cast<double>(i) * 0.01);
    plan.omega_grid.clear();
    for (int w = 1; w <= 40; ++w)
        plan.omega_grid.push_back(w);
    plan.n = 10000;
    plan.reps = 10;
    plan.master_seed = 8707;
    plan.engine = EngineKind::SequentialOnfly;

    const auto cells = run_sweep(dist, plan, worker_count());
    const std::size_t n_omega = plan.omega_grid.size();

    bool monotone_alpha = true;
    for (std::size_t oi = 0; oi < n_omega && monotone_alpha; ++oi) {
        double last = -1.0;
        for (std::size_t ai = 0; ai < plan.alpha_grid.size(); ++ai) {
            const double phi = cells[ai * n_omega + oi].phi_theory;
            if (std::isnan(phi))
                continue;
            if (phi < last - 1e-9)
                monotone_alpha = false;
            last = phi;
        }
    }
    bool monotone_omega = true;
    for (std::size_t ai = 0; ai < plan.alpha_grid.size() && monotone_omega; ++ai) {
        double last = 2.0;
        for (std::size_t oi = 0; oi < n_omega; ++oi) {
            const double phi = cells[ai * n_omega + oi].phi_theory;
            if (std::isnan(phi))
                continue;
            if (phi > last + 1e-9)
                monotone_omega = false;
            last = phi;
        }
    }

    const auto check = check_sweep(plan, cells, 0.01);
    const bool has_jump = !check.jumps.empty();

    // oracle alpha_c scan on the row with the largest jump
    bool jump_located = false;
    double impl_alpha_c = 0.0, oracle_alpha_c = -1.0;
    if (has_jump) {
        const TheoryJump* best = &check.jumps.front();
        for (const auto& jump : check.jumps)
            if (jump.jump > best->jump)
                best = &jump;
        impl_alpha_c = best->alpha_c();
        const int omega_row = best->omega;

        std::vector<double> oracle_phi(plan.alpha_grid.size(), 0.0);
        parallel_for(plan.alpha_grid.size(), worker_count(), [&](std::size_t ai) {
            oracle_phi[ai] = oracles::predicted_phi(dist, plan.alpha_grid[ai], omega_row, 1e-3);
        });
        for (std::size_t ai = 0; ai + 1 < plan.alpha_grid.size(); ++ai) {
            if (std::abs(oracle_phi[ai + 1] - oracle_phi[ai]) > 0.5) {
                oracle_alpha_c = 0.5 * (plan.alpha_grid[ai] + plan.alpha_grid[ai + 1]);
                break;
            }
        }
        jump_located = oracle_alpha_c >= 0.0 && std::abs(impl_alpha_c - oracle_alpha_c) <=
                                                     0.01 + 1e-9;
    }

    const double elapsed = timer.seconds();
    const bool tracking = check.violations.empty();
    const bool pass =
        monotone_alpha && monotone_omega && has_jump && jump_located && tracking && elapsed < 600.0;
    std::ostringstream detail;
    detail << "monotone(alpha)=" << (monotone_alpha ? "yes" : "no")
           << " monotone(omega)=" << (monotone_omega ? "yes" : "no")
           << " jumps=" << check.jumps.size() << " alpha_c impl/oracle=" << format_g9(impl_alpha_c)
           << "/" << format_g9(oracle_alpha_c) << " violations=" << check.violations.size()
           << " max_gap=" << format_g9(check.max_gap_outside_band);
    report(7, "phase-surface reproduction", pass, detail.str(), elapsed);
}

// -------------------------------------------------------------------------
// 8. Determinism: rerunning any command with identical flags and seed gives
//    byte-identical output, across thread counts 1 and 4.
struct CliCapture {
    int exit_code = -1;
    std::string out;
};

CliCapture run_cli(const fs::path& dir, int index, const std::string& args) {
    const fs::path out_path = dir / ("out_" + std::to_string(index) + ".txt");
    const std::string command = std::string(BOOTPERC_CLI_PATH) + " " + args + " > " +
                                out_path.string() + " 2> /dev/null";
    const int status = std::system(command.c_str());
    CliCapture capture;
    capture.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    capture.out = buffer.str();
    return capture;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void criterion_8() {
    Timer timer;
    const fs::path dir = fs::temp_directory_path() / "bootperc_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream dist(dir / "poisson5.json");
        dist << R"({"type": "poisson", "mean": 5.0})";
    }
    const std::string dist_path = (dir / "poisson5.json").string();

    bool pass = true;
    std::string detail = "theory, simulate, sweep byte-identical across reruns and threads {1,4}";
    int index = 0;

    const auto expect_identical = [&](const std::string& a, const std::string& b,
                                      const std::string& what) {
        const CliCapture first = run_cli(dir, index++, a);
        const CliCapture second = run_cli(dir, index++, b);
        if (first.exit_code != 0 || second.exit_code != 0 || first.out != second.out) {
            pass = false;
            detail = what + " differs (exit " + std::to_string(first.exit_code) + "/" +
                     std::to_string(second.exit_code) + ")";
        }
    };

    const std::string theory_cmd = "theory --alpha 0.2 --omega 2 --dist " + dist_path;
    expect_identical(theory_cmd, theory_cmd, "theory rerun");

    const std::string sim_cmd =
        "simulate --alpha 0.2 --omega 2 --n 5000 --seed 99 --dist " + dist_path;
    if (pass)
        expect_identical(sim_cmd, sim_cmd, "simulate rerun");

    if (pass) {
        const std::string sweep_base = "sweep --dist " + dist_path +
                                       " --alpha-grid 0:0.3:0.05 --omega-grid 1,2,3 --n 2000 "
                                       "--reps 5 --seed 77";
        const fs::path csv1 = dir / "sweep_t1.csv";
        const fs::path csv4 = dir / "sweep_t4.csv";
        const CliCapture t1 =
            run_cli(dir, index++, sweep_base + " --threads 1 --out " + csv1.string());
        const CliCapture t4 =
            run_cli(dir, index++, sweep_base + " --threads 4 --out " + csv4.string());
        if (t1.exit_code != 0 || t4.exit_code != 0 || t1.out != t4.out ||
            slurp(csv1) != slurp(csv4)) {
            pass = false;
            detail = "sweep outputs differ across thread counts";
        }
    }
    report(8, "determinism across reruns and thread counts", pass, detail, timer.seconds());
}

}  // namespace

int main() {
    std::cout << "acceptance suite (" << worker_count() << " workers)\n";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures == 0)
        std::cout << "all 8 criteria passed\n";
    else
        std::cout << failures << " criteria FAILED\n";
    return failures;
}
