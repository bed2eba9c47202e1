#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bootperc/cascade.hpp"
#include "bootperc/degree_model.hpp"
#include "bootperc/theory.hpp"

namespace bootperc {

enum class EngineKind { Synchronous, SequentialReplay, SequentialOnfly };

std::string engine_name(EngineKind engine);
EngineKind parse_engine(const std::string& name);

struct ExperimentPlan {
    std::vector<double> alpha_grid;
    std::vector<int> omega_grid;
    std::size_t n = 10000;
    int reps = 10;
    std::uint64_t master_seed = 0;
    EngineKind engine = EngineKind::SequentialOnfly;
    // One trajectory CSV per replication, written to trajectory_dir as
    // cell<index>_rep<rep>.csv. Sequential engines only.
    bool record_trajectories = false;
    std::string trajectory_dir;

    void validate() const;
};

struct CellResult {
    double alpha = 0.0;
    int omega = 0;
    double phi_mean = 0.0;
    double phi_sd = 0.0;
    double phi_min = 0.0;
    double phi_max = 0.0;
    double phi_theory = 0.0;
    Branch branch = Branch::RegularCrossing;
};

// Runs fn(0..count-1) on up to `threads` workers. Results must be written to
// index-keyed slots; scheduling order is unspecified but outputs are then
// independent of it. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// One full replication pipeline: degree sequence, matching (for the engines
// that need one), seeding, cascade. All randomness comes from the one stream.
CascadeResult run_replication(const JointDegreeDistribution& dist, std::size_t n,
                              const CascadeParams& params, EngineKind engine, Rng& rng,
                              const SequentialOptions& options = {});

// `reps` independent replications of one (alpha, omega) cell; streams are
// derived from (master_seed, cell_index, rep), so results do not depend on
// worker count or execution order.
CellResult run_cell(const JointDegreeDistribution& dist, const ExperimentPlan& plan,
                    std::size_t cell_index, double alpha, int omega, unsigned threads = 1);

// Full grid, cell_index = alpha_index * |omega_grid| + omega_index.
std::vector<CellResult> run_sweep(const JointDegreeDistribution& dist, const ExperimentPlan& plan,
                                  unsigned threads);

void write_sweep_csv(std::ostream& os, const ExperimentPlan& plan,
                     const std::vector<CellResult>& cells);

// Adjacent alpha cells whose theory prediction jumps by more than the
// threshold; alpha_c is taken as the midpoint of the pair.
struct TheoryJump {
    int omega = 0;
    std::size_t alpha_index_lo = 0;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    double jump = 0.0;
    double alpha_c() const { return 0.5 * (alpha_lo + alpha_hi); }
};

std::vector<TheoryJump> detect_theory_jumps(const ExperimentPlan& plan,
                                            const std::vector<CellResult>& cells,
                                            double jump_threshold = 0.5);

// Theory-vs-simulation tolerance check. Cells within one alpha grid step of
// a detected jump are excluded: the limit statement does not constrain the
// finite-size rounding of the discontinuity. Tolerance per cell is
// max(tol_floor, 3 sd / sqrt(reps)).
struct SweepCheck {
    struct Violation {
        double alpha;
        int omega;
        double gap;
        double tolerance;
    };
    std::vector<Violation> violations;
    std::vector<TheoryJump> jumps;
    double max_gap_outside_band = 0.0;
    std::size_t compared_cells = 0;
    std::size_t excluded_cells = 0;
};

SweepCheck check_sweep(const ExperimentPlan& plan, const std::vector<CellResult>& cells,
                       double tol_floor = 0.01);

// Empirical fluid-limit concentration: per graph size, the sup over the
// recorded trajectory of |F(t)/n - f(t/n)| and |F_out(t)/n - f_out(t/n)|
// against the closed-form curves, reduced to per-size medians over reps.
struct ConcentrationEntry {
    std::size_t n = 0;
    double median_sup_f = 0.0;
    double median_sup_fout = 0.0;
    double max_sup_f = 0.0;
    double min_sup_f = 0.0;
};

struct ConcentrationReport {
    double alpha = 0.0;
    int omega = 0;
    int reps = 0;
    std::vector<ConcentrationEntry> entries;
};

ConcentrationReport trajectory_concentration_study(const JointDegreeDistribution& dist,
                                                   const CascadeParams& params,
                                                   const std::vector<std::size_t>& n_list,
                                                   int reps, std::uint64_t master_seed,
                                                   unsigned threads);

// %.9g with NaN spelled "nan"; keeps CSV output byte-stable.
std::string format_g9(double v);

}  // namespace bootperc
