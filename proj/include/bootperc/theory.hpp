#pragma once

#include <string>
#include <vector>

#include "bootperc/cascade.hpp"
#include "bootperc/degree_model.hpp"

namespace bootperc {

// P(Bin(j, p) < omega), summed by the stable multiplicative term recurrence;
// falls back to log-space accumulation when the leading term would underflow
// or j is large.
double binom_tail_below(int j, double p, int omega);

// Head of the Bin(j, p) pmf: out[i] = P(Bin(j,p) = i) for i < min(omega, j+1).
void binom_pmf_head(int j, double p, int omega, std::vector<double>& out);

// Fixed-point function f_alpha(y) = lambda y - (1-alpha) E[D_out 1(Bin(D_in, 1-y) < omega)].
double f_alpha(double y, const JointDegreeDistribution& dist, const CascadeParams& params);

enum class Branch {
    FullActivation,   // f > 0 on (0,1]: y* = 0, predicted fraction 1
    RegularCrossing,  // f crosses strictly below zero just under y*
    Tangential        // root suspected to be a local minimum: no prediction
};

std::string branch_name(Branch branch);

struct RootOptions {
    double grid_step = 1e-3;
    double root_tol = 1e-9;
    double tangency_tol = 1e-6;
};

struct RootDiagnostics {
    double f_at_one = 0.0;     // equals lambda * alpha
    double f_below = 0.0;      // f(y* - 10 grid_step)
    double f_above = 0.0;      // f(min(y* + 10 grid_step, 1))
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double grid_min_f = 0.0;
    double grid_min_y = 0.0;
};

struct TheoryOutcome {
    double y_star = 0.0;
    double phi_pred = 0.0;  // NaN on the tangential branch
    Branch branch = Branch::RegularCrossing;
    double alpha = 0.0;
    int omega = 0;
    RootDiagnostics diagnostics;
};

// Locates y* = max{y in [0,1] : f_alpha(y) = 0} by a downward grid scan (the
// first sign change is the largest root) followed by bisection, and
// classifies the branch. alpha = 0 short-circuits to y* = 1, phi = 0: with no
// seeds nothing ever fires.
TheoryOutcome find_y_star(const JointDegreeDistribution& dist, const CascadeParams& params,
                          const RootOptions& options = {});

// 1 - (1-alpha) E[1(Bin(D_in, 1-y_star) < omega)].
double phi_from_y_star(const JointDegreeDistribution& dist, const CascadeParams& params,
                       double y_star);

// Predicted limiting fired fraction; NaN when the branch is tangential.
double predicted_phi(const JointDegreeDistribution& dist, const CascadeParams& params,
                     const RootOptions& options = {});

// Closed-form fluid-limit state at rescaled time tau, with y = 1 - tau/lambda:
//   n_i^{j,k} = P(j,k)(1-alpha) C(j,i) y^{j-i} (1-y)^i        (i < omega)
//   f^{j,k}   = P(j,k)[alpha + (1-alpha) P(Bin(j,1-y) >= omega)]
// The displayed aggregates keep the vertex-count sum and the out-stub-mass
// sum separate; the fired-fraction limit is the vertex-count sum.
struct TrajectoryPoint {
    double tau = 0.0;
    double y = 1.0;
    // n_table[e * omega + i] for support entry e and reveal count i.
    std::vector<double> n_table;
    std::vector<double> f_table;  // per support entry
    double f_out = 0.0;             // sum_{j,k} k f^{j,k} - tau
    double f_total_vertices = 0.0;  // sum_{j,k} f^{j,k}
    double f_total_outmass = 0.0;   // sum_{j,k} k f^{j,k}
};

TrajectoryPoint ode_trajectory(double tau, const JointDegreeDistribution& dist,
                               const CascadeParams& params);

// Aggregates only; same formulas as ode_trajectory without the tables.
struct TrajectoryAggregates {
    double y = 1.0;
    double f_out = 0.0;
    double f_total_vertices = 0.0;
    double f_total_outmass = 0.0;
};

TrajectoryAggregates ode_aggregates(double tau, const JointDegreeDistribution& dist,
                                    const CascadeParams& params);

}  // namespace bootperc
