#include "bootperc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bootperc {

namespace {

constexpr double kLogUnderflow = -700.0;  // exp() of anything below is subnormal
constexpr int kLogFreeMaxTrials = 2000;

void validate_binom_args(int j, double p, int omega) {
    if (j < 0)
        throw std::invalid_argument("binomial: trial count must be >= 0");
    if (omega < 0)
        throw std::invalid_argument("binomial: threshold must be >= 0");
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
        throw std::invalid_argument("binomial: probability must lie in [0,1]");
}

double log_choose(int n, int k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double binom_tail_below(int j, double p, int omega) {
    validate_binom_args(j, p, omega);
    if (omega == 0)
        return 0.0;
    if (omega > j)
        return 1.0;
    if (p == 0.0)
        return 1.0;
    if (p == 1.0)
        return 0.0;

    const double log_head = static_cast<double>(j) * std::log1p(-p);
    double sum = 0.0;
    if (j <= kLogFreeMaxTrials && log_head > kLogUnderflow) {
        double term = std::exp(log_head);  // P(Bin = 0)
        sum = term;
        const double ratio = p / (1.0 - p);
        for (int i = 1; i < omega; ++i) {
            term *= static_cast<double>(j - i + 1) / static_cast<double>(i) * ratio;
            sum += term;
        }
    } else {
        const double log_p = std::log(p);
        const double log_q = std::log1p(-p);
        double log_max = -std::numeric_limits<double>::infinity();
        std::vector<double> logs(static_cast<std::size_t>(omega));
        for (int i = 0; i < omega; ++i) {
            const double l = log_choose(j, i) + static_cast<double>(i) * log_p +
                             static_cast<double>(j - i) * log_q;
            logs[static_cast<std::size_t>(i)] = l;
            log_max = std::max(log_max, l);
        }
        if (std::isfinite(log_max)) {
            double acc = 0.0;
            for (double l : logs)
                acc += std::exp(l - log_max);
            sum = std::exp(log_max) * acc;
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

void binom_pmf_head(int j, double p, int omega, std::vector<double>& out) {
    validate_binom_args(j, p, omega);
    const int head = std::min(omega, j + 1);
    out.assign(static_cast<std::size_t>(head), 0.0);
    if (head == 0)
        return;
    if (p == 0.0) {
        out[0] = 1.0;
        return;
    }
    if (p == 1.0) {
        if (j < head)
            out[static_cast<std::size_t>(j)] = 1.0;
        return;
    }
    const double log_head = static_cast<double>(j) * std::log1p(-p);
    if (j <= kLogFreeMaxTrials && log_head > kLogUnderflow) {
        double term = std::exp(log_head);
        out[0] = term;
        const double ratio = p / (1.0 - p);
        for (int i = 1; i < head; ++i) {
            term *= static_cast<double>(j - i + 1) / static_cast<double>(i) * ratio;
            out[static_cast<std::size_t>(i)] = term;
        }
    } else {
        const double log_p = std::log(p);
        const double log_q = std::log1p(-p);
        for (int i = 0; i < head; ++i)
            out[static_cast<std::size_t>(i)] = std::exp(log_choose(j, i) +
                                                        static_cast<double>(i) * log_p +
                                                        static_cast<double>(j - i) * log_q);
    }
}

double f_alpha(double y, const JointDegreeDistribution& dist, const CascadeParams& params) {
    params.validate();
    if (!std::isfinite(y) || y < 0.0 || y > 1.0)
        throw std::invalid_argument("f_alpha: y must lie in [0,1]");
    const double p = 1.0 - y;
    double blocked_out_mass = 0.0;
    for (const auto& c : dist.by_in_degree())
        blocked_out_mass += c.out_mass * binom_tail_below(c.in_degree, p, params.omega);
    return dist.mean_degree() * y - (1.0 - params.alpha) * blocked_out_mass;
}

std::string branch_name(Branch branch) {
    switch (branch) {
        case Branch::FullActivation:
            return "full-activation";
        case Branch::RegularCrossing:
            return "regular-crossing";
        case Branch::Tangential:
            return "tangential";
    }
    return "unknown";
}

double phi_from_y_star(const JointDegreeDistribution& dist, const CascadeParams& params,
                       double y_star) {
    const double p = 1.0 - y_star;
    double blocked_mass = 0.0;
    for (const auto& c : dist.by_in_degree())
        blocked_mass += c.mass * binom_tail_below(c.in_degree, p, params.omega);
    return 1.0 - (1.0 - params.alpha) * blocked_mass;
}

TheoryOutcome find_y_star(const JointDegreeDistribution& dist, const CascadeParams& params,
                          const RootOptions& options) {
    params.validate();
    if (!(options.grid_step > 0.0) || options.grid_step > 0.1)
        throw std::invalid_argument("find_y_star: grid_step must lie in (0, 0.1]");
    if (!(options.root_tol > 0.0))
        throw std::invalid_argument("find_y_star: root_tol must be > 0");

    TheoryOutcome outcome;
    outcome.alpha = params.alpha;
    outcome.omega = params.omega;

    const auto f = [&](double y) { return f_alpha(y, dist, params); };
    const double delta = 10.0 * options.grid_step;
    const double f1 = f(1.0);
    outcome.diagnostics.f_at_one = f1;

    const auto classify_and_fill = [&](double y_star, double lo, double hi) {
        outcome.y_star = y_star;
        outcome.diagnostics.bracket_lo = lo;
        outcome.diagnostics.bracket_hi = hi;
        outcome.diagnostics.f_below = f(std::max(y_star - delta, 0.0));
        outcome.diagnostics.f_above = f(std::min(y_star + delta, 1.0));
        if (outcome.diagnostics.f_below < -options.tangency_tol) {
            outcome.branch = Branch::RegularCrossing;
            outcome.phi_pred = phi_from_y_star(dist, params, y_star);
        } else {
            outcome.branch = Branch::Tangential;
            outcome.phi_pred = std::numeric_limits<double>::quiet_NaN();
        }
    };

    // No seeds: nothing ever fires (omega = 0 is the exception, everything
    // fires unconditionally and the scan below lands on full activation).
    // f_alpha(1) = 0 makes y* = 1 the largest root and the predicted
    // fraction is exactly 0.
    if (params.alpha == 0.0 && params.omega >= 1) {
        outcome.y_star = 1.0;
        outcome.phi_pred = 0.0;
        outcome.branch = Branch::RegularCrossing;
        outcome.diagnostics.bracket_lo = 1.0;
        outcome.diagnostics.bracket_hi = 1.0;
        outcome.diagnostics.f_below = f(std::max(1.0 - delta, 0.0));
        outcome.diagnostics.f_above = f1;
        return outcome;
    }

    if (f1 <= 0.0) {
        // f(1) = lambda alpha, which is positive for alpha > 0 up to float
        // rounding; a nonpositive value means the root sits at 1 itself.
        classify_and_fill(1.0, 1.0, 1.0);
        return outcome;
    }

    // Downward scan over (0, 1): the first sign change brackets the largest
    // root. y = 0 is excluded; f(0) <= 0 always and equals zero exactly on
    // the full-activation branch.
    double y_prev = 1.0;
    double grid_min_f = std::numeric_limits<double>::infinity();
    double grid_min_y = 1.0;
    bool bracketed = false;
    double lo = 0.0, hi = 1.0;
    const auto steps = static_cast<long>(std::ceil(1.0 / options.grid_step));
    for (long i = 1; i <= steps; ++i) {
        const double y = 1.0 - static_cast<double>(i) * options.grid_step;
        if (y <= 0.0)
            break;
        const double fy = f(y);
        if (fy < grid_min_f) {
            grid_min_f = fy;
            grid_min_y = y;
        }
        if (fy < 0.0) {
            lo = y;
            hi = y_prev;
            bracketed = true;
            break;
        }
        y_prev = y;
    }
    outcome.diagnostics.grid_min_f = grid_min_f;
    outcome.diagnostics.grid_min_y = grid_min_y;

    if (bracketed) {
        while (hi - lo > options.root_tol) {
            const double mid = 0.5 * (lo + hi);
            if (f(mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        classify_and_fill(0.5 * (lo + hi), lo, hi);
        return outcome;
    }

    if (grid_min_f > options.tangency_tol) {
        outcome.y_star = 0.0;
        outcome.phi_pred = 1.0;
        outcome.branch = Branch::FullActivation;
        outcome.diagnostics.bracket_lo = 0.0;
        outcome.diagnostics.bracket_hi = 0.0;
        outcome.diagnostics.f_below = f(0.0);
        outcome.diagnostics.f_above = f(std::min(delta, 1.0));
        return outcome;
    }

    // Grid minimum grazes zero without a sign change: the largest root looks
    // like a local minimum, where the fluid-limit prediction does not apply.
    outcome.y_star = grid_min_y;
    outcome.phi_pred = std::numeric_limits<double>::quiet_NaN();
    outcome.branch = Branch::Tangential;
    outcome.diagnostics.bracket_lo = grid_min_y;
    outcome.diagnostics.bracket_hi = grid_min_y;
    outcome.diagnostics.f_below = f(std::max(grid_min_y - delta, 0.0));
    outcome.diagnostics.f_above = f(std::min(grid_min_y + delta, 1.0));
    return outcome;
}

double predicted_phi(const JointDegreeDistribution& dist, const CascadeParams& params,
                     const RootOptions& options) {
    return find_y_star(dist, params, options).phi_pred;
}

namespace {

void validate_tau(double tau, double lambda) {
    if (!std::isfinite(tau) || tau < 0.0 || tau >= lambda)
        throw std::invalid_argument("ode: tau must lie in [0, lambda)");
}

}  // namespace

TrajectoryPoint ode_trajectory(double tau, const JointDegreeDistribution& dist,
                               const CascadeParams& params) {
    params.validate();
    const double lambda = dist.mean_degree();
    validate_tau(tau, lambda);

    TrajectoryPoint point;
    point.tau = tau;
    point.y = 1.0 - tau / lambda;
    const double p = 1.0 - point.y;
    const int omega = params.omega;
    const double seeded = params.alpha;
    const double dark = 1.0 - params.alpha;

    const auto& entries = dist.support();
    point.n_table.assign(entries.size() * static_cast<std::size_t>(omega), 0.0);
    point.f_table.assign(entries.size(), 0.0);

    // support is sorted by in-degree, so the pmf head per j is computed once
    std::vector<double> pmf;
    int cached_j = -1;
    double cached_tail = 0.0;
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const auto& entry = entries[e];
        if (entry.in_degree != cached_j) {
            cached_j = entry.in_degree;
            binom_pmf_head(cached_j, p, omega, pmf);
            cached_tail = 0.0;
            for (double v : pmf)
                cached_tail += v;
        }
        for (std::size_t i = 0; i < pmf.size(); ++i)
            point.n_table[e * static_cast<std::size_t>(omega) + i] = entry.prob * dark * pmf[i];
        const double fired_mass = entry.prob * (seeded + dark * (1.0 - cached_tail));
        point.f_table[e] = fired_mass;
        point.f_total_vertices += fired_mass;
        point.f_total_outmass += static_cast<double>(entry.out_degree) * fired_mass;
    }
    point.f_out = point.f_total_outmass - tau;
    return point;
}

TrajectoryAggregates ode_aggregates(double tau, const JointDegreeDistribution& dist,
                                    const CascadeParams& params) {
    params.validate();
    const double lambda = dist.mean_degree();
    validate_tau(tau, lambda);

    TrajectoryAggregates agg;
    agg.y = 1.0 - tau / lambda;
    const double p = 1.0 - agg.y;
    const double dark = 1.0 - params.alpha;
    for (const auto& c : dist.by_in_degree()) {
        const double tail = binom_tail_below(c.in_degree, p, params.omega);
        const double fired_share = params.alpha + dark * (1.0 - tail);
        agg.f_total_vertices += c.mass * fired_share;
        agg.f_total_outmass += c.out_mass * fired_share;
    }
    agg.f_out = agg.f_total_outmass - tau;
    return agg;
}

}  // namespace bootperc
