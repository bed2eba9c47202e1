#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bootperc/rng.hpp"

namespace bootperc {

// A finitely supported probability law on {0, 1, ..., K}. Masses are
// normalized at construction.
class DiscreteLaw {
public:
    explicit DiscreteLaw(std::vector<double> masses);

    const std::vector<double>& masses() const { return mass_; }
    int max_value() const { return static_cast<int>(mass_.size()) - 1; }
    double mean() const { return mean_; }

private:
    std::vector<double> mass_;
    double mean_ = 0.0;
};

// Default truncation point for a discretized Gaussian: ceil(mean + 6 sd)
// keeps the lost tail mass below 1e-8.
int default_gaussian_support(double mean, double sd);

// Discretized Gaussian on {0,...,support_max}: masses proportional to
// exp(-(k-mean)^2 / (2 sd^2)), renormalized.
DiscreteLaw gaussian_law(double mean, double sd, int support_max);

// Truncated Poisson. support_max < 0 picks the smallest truncation point
// with tail mass below 1e-12.
DiscreteLaw poisson_law(double mean, int support_max = -1);

DiscreteLaw point_mass_law(int k);

// Joint law P(j,k) of (in-degree, out-degree) with finite support and equal
// in/out means (the balance condition: sum (j-k) P(j,k) = 0). Immutable and
// safe to share across threads.
class JointDegreeDistribution {
public:
    struct Entry {
        int in_degree;
        int out_degree;
        double prob;
    };

    // Support collapsed over the out coordinate: per in-degree j, the vertex
    // mass sum_k P(j,k) and out-stub mass sum_k k P(j,k).
    struct InClass {
        int in_degree;
        double mass;
        double out_mass;
    };

    // Product law P(j,k) = p_j q_k. Rejects in/out mean mismatch beyond 1e-9.
    static JointDegreeDistribution product(const DiscreteLaw& in_law, const DiscreteLaw& out_law);

    // Explicit table of (j,k,p) triples. Probabilities are validated
    // (nonnegative, total within 1e-6 of 1) and renormalized; the balance
    // condition is enforced to 1e-9.
    static JointDegreeDistribution from_table(std::vector<Entry> entries);

    const std::vector<Entry>& support() const { return support_; }
    const std::vector<InClass>& by_in_degree() const { return in_classes_; }
    double mean_degree() const { return lambda_; }
    int max_in_degree() const;
    int max_out_degree() const { return max_out_degree_; }

    // Inverse-CDF draw of one (j,k) pair.
    Entry sample(Rng& rng) const;

private:
    explicit JointDegreeDistribution(std::vector<Entry> entries);

    std::vector<Entry> support_;
    std::vector<InClass> in_classes_;
    std::vector<double> cdf_;
    double lambda_ = 0.0;
    int max_out_degree_ = 0;
};

struct Moments {
    double lambda;                     // common mean degree
    double out_mass_below_threshold;   // E[D_out 1(D_in < omega)]
};

Moments moments(const JointDegreeDistribution& dist, int omega);

struct DegreePair {
    int in_degree;
    int out_degree;
};

// Per-vertex (d+, d-) pairs with equal totals.
class DegreeSequence {
public:
    explicit DegreeSequence(std::vector<DegreePair> pairs);

    const std::vector<DegreePair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    std::uint64_t total_stubs() const { return m_; }
    bool all_zero() const { return m_ == 0; }

private:
    std::vector<DegreePair> pairs_;
    std::uint64_t m_ = 0;
};

// n iid draws from the joint law followed by the balancing repair: while the
// totals differ, a uniformly random vertex gets the deficient side
// incremented by one. The perturbation equals the initial deficit, O(sqrt(n))
// in expectation, so empirical densities still converge to P(j,k).
DegreeSequence sample_degree_sequence(const JointDegreeDistribution& dist, std::size_t n, Rng& rng);

}  // namespace bootperc
