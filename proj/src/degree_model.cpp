#include "bootperc/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bootperc {

namespace {

constexpr double kBalanceTol = 1e-9;
constexpr double kTableMassTol = 1e-6;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

DiscreteLaw::DiscreteLaw(std::vector<double> masses) : mass_(std::move(masses)) {
    if (mass_.empty())
        throw std::invalid_argument("DiscreteLaw: empty support");
    double total = 0.0;
    for (double m : mass_) {
        if (!std::isfinite(m) || m < 0.0)
            throw std::invalid_argument("DiscreteLaw: masses must be finite and nonnegative");
        total += m;
    }
    if (total <= 0.0)
        throw std::invalid_argument("DiscreteLaw: total mass is zero");
    for (double& m : mass_)
        m /= total;
    for (std::size_t k = 0; k < mass_.size(); ++k)
        mean_ += static_cast<double>(k) * mass_[k];
}

int default_gaussian_support(double mean, double sd) {
    return static_cast<int>(std::ceil(mean + 6.0 * sd));
}

DiscreteLaw gaussian_law(double mean, double sd, int support_max) {
    require_finite(mean, "gaussian mean");
    require_finite(sd, "gaussian sd");
    if (sd <= 0.0)
        throw std::invalid_argument("gaussian_law: sd must be > 0");
    if (support_max < 0 || static_cast<double>(support_max) < mean)
        throw std::invalid_argument("gaussian_law: support_max must be >= mean");
    std::vector<double> mass(static_cast<std::size_t>(support_max) + 1);
    for (int k = 0; k <= support_max; ++k) {
        const double z = (static_cast<double>(k) - mean) / sd;
        mass[static_cast<std::size_t>(k)] = std::exp(-0.5 * z * z);
    }
    return DiscreteLaw(std::move(mass));
}

DiscreteLaw poisson_law(double mean, int support_max) {
    require_finite(mean, "poisson mean");
    if (mean <= 0.0)
        throw std::invalid_argument("poisson_law: mean must be > 0");
    constexpr int kHardCap = 100000;
    constexpr double kTailTol = 1e-12;
    std::vector<double> mass;
    double term = std::exp(-mean);
    double cum = 0.0;
    for (int k = 0;; ++k) {
        mass.push_back(term);
        cum += term;
        const bool reached_explicit = support_max >= 0 && k >= support_max;
        const bool reached_adaptive = support_max < 0 && k > mean && 1.0 - cum < kTailTol;
        if (reached_explicit || reached_adaptive)
            break;
        if (k >= kHardCap)
            throw std::invalid_argument("poisson_law: support would exceed hard cap");
        term *= mean / static_cast<double>(k + 1);
    }
    return DiscreteLaw(std::move(mass));
}

DiscreteLaw point_mass_law(int k) {
    if (k < 0)
        throw std::invalid_argument("point_mass_law: negative value");
    std::vector<double> mass(static_cast<std::size_t>(k) + 1, 0.0);
    mass.back() = 1.0;
    return DiscreteLaw(std::move(mass));
}

JointDegreeDistribution::JointDegreeDistribution(std::vector<Entry> entries)
    : support_(std::move(entries)) {
    if (support_.empty())
        throw std::invalid_argument("JointDegreeDistribution: empty support");
    std::sort(support_.begin(), support_.end(), [](const Entry& a, const Entry& b) {
        return a.in_degree != b.in_degree ? a.in_degree < b.in_degree : a.out_degree < b.out_degree;
    });

    double total = 0.0;
    for (const Entry& e : support_) {
        if (e.in_degree < 0 || e.out_degree < 0)
            throw std::invalid_argument("JointDegreeDistribution: negative degree in support");
        if (!std::isfinite(e.prob) || e.prob < 0.0)
            throw std::invalid_argument("JointDegreeDistribution: invalid probability");
        total += e.prob;
    }
    if (total <= 0.0)
        throw std::invalid_argument("JointDegreeDistribution: total mass is zero");
    for (Entry& e : support_)
        e.prob /= total;

    double in_mean = 0.0;
    for (const Entry& e : support_) {
        if (in_classes_.empty() || in_classes_.back().in_degree != e.in_degree)
            in_classes_.push_back({e.in_degree, 0.0, 0.0});
        in_classes_.back().mass += e.prob;
        in_classes_.back().out_mass += static_cast<double>(e.out_degree) * e.prob;
        in_mean += static_cast<double>(e.in_degree) * e.prob;
        max_out_degree_ = std::max(max_out_degree_, e.out_degree);
    }
    for (const InClass& c : in_classes_)
        lambda_ += c.out_mass;

    if (std::abs(in_mean - lambda_) > kBalanceTol)
        throw std::invalid_argument(
            "JointDegreeDistribution: balance violation, in-mean " + std::to_string(in_mean) +
            " != out-mean " + std::to_string(lambda_));
    if (lambda_ <= 0.0)
        throw std::invalid_argument("JointDegreeDistribution: mean degree must be > 0");

    cdf_.reserve(support_.size());
    double cum = 0.0;
    for (const Entry& e : support_) {
        cum += e.prob;
        cdf_.push_back(cum);
    }
    cdf_.back() = 1.0;
}

JointDegreeDistribution JointDegreeDistribution::product(const DiscreteLaw& in_law,
                                                         const DiscreteLaw& out_law) {
    if (std::abs(in_law.mean() - out_law.mean()) > kBalanceTol)
        throw std::invalid_argument(
            "product distribution: balance violation, in-mean " + std::to_string(in_law.mean()) +
            " != out-mean " + std::to_string(out_law.mean()));
    std::vector<Entry> entries;
    for (int j = 0; j <= in_law.max_value(); ++j) {
        const double pj = in_law.masses()[static_cast<std::size_t>(j)];
        if (pj == 0.0)
            continue;
        for (int k = 0; k <= out_law.max_value(); ++k) {
            const double qk = out_law.masses()[static_cast<std::size_t>(k)];
            if (qk == 0.0)
                continue;
            entries.push_back({j, k, pj * qk});
        }
    }
    return JointDegreeDistribution(std::move(entries));
}

JointDegreeDistribution JointDegreeDistribution::from_table(std::vector<Entry> entries) {
    double total = 0.0;
    for (const Entry& e : entries) {
        if (!std::isfinite(e.prob) || e.prob < 0.0)
            throw std::invalid_argument("from_table: invalid probability");
        total += e.prob;
    }
    if (std::abs(total - 1.0) > kTableMassTol)
        throw std::invalid_argument("from_table: probabilities sum to " + std::to_string(total));
    // merge duplicate (j,k) cells
    std::map<std::pair<int, int>, double> merged;
    for (const Entry& e : entries)
        merged[{e.in_degree, e.out_degree}] += e.prob;
    std::vector<Entry> unique;
    unique.reserve(merged.size());
    for (const auto& [jk, p] : merged)
        unique.push_back({jk.first, jk.second, p});
    return JointDegreeDistribution(std::move(unique));
}

int JointDegreeDistribution::max_in_degree() const {
    return in_classes_.back().in_degree;
}

JointDegreeDistribution::Entry JointDegreeDistribution::sample(Rng& rng) const {
    const double u = uniform_real(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - cdf_.begin()), support_.size() - 1);
    return support_[idx];
}

Moments moments(const JointDegreeDistribution& dist, int omega) {
    if (omega < 0)
        throw std::invalid_argument("moments: omega must be >= 0");
    double below = 0.0;
    for (const auto& c : dist.by_in_degree())
        if (c.in_degree < omega)
            below += c.out_mass;
    return {dist.mean_degree(), below};
}

DegreeSequence::DegreeSequence(std::vector<DegreePair> pairs) : pairs_(std::move(pairs)) {
    std::uint64_t in_total = 0, out_total = 0;
    for (const DegreePair& p : pairs_) {
        if (p.in_degree < 0 || p.out_degree < 0)
            throw std::invalid_argument("DegreeSequence: negative degree");
        in_total += static_cast<std::uint64_t>(p.in_degree);
        out_total += static_cast<std::uint64_t>(p.out_degree);
    }
    if (in_total != out_total)
        throw std::invalid_argument("DegreeSequence: stub totals differ (" +
                                    std::to_string(in_total) + " in vs " +
                                    std::to_string(out_total) + " out)");
    m_ = in_total;
}

DegreeSequence sample_degree_sequence(const JointDegreeDistribution& dist, std::size_t n,
                                      Rng& rng) {
    if (n == 0)
        throw std::invalid_argument("sample_degree_sequence: n must be >= 1");
    std::vector<DegreePair> pairs(n);
    std::int64_t deficit = 0;  // sum d+ minus sum d-
    for (std::size_t v = 0; v < n; ++v) {
        const auto e = dist.sample(rng);
        pairs[v] = {e.in_degree, e.out_degree};
        deficit += e.in_degree - e.out_degree;
    }
    while (deficit < 0) {
        pairs[uniform_below(rng, n)].in_degree += 1;
        ++deficit;
    }
    while (deficit > 0) {
        pairs[uniform_below(rng, n)].out_degree += 1;
        --deficit;
    }
    return DegreeSequence(std::move(pairs));
}

}  // namespace bootperc
