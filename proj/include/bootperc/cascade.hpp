#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bootperc/degree_model.hpp"
#include "bootperc/graph.hpp"
#include "bootperc/rng.hpp"

namespace bootperc {

struct CascadeParams {
    int omega = 1;       // firing threshold
    double alpha = 0.0;  // external activation probability

    void validate() const;
};

// Counter-identity violation raised by the step-level debug checks.
class CounterIdentityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct StepRecord {
    std::uint64_t t;
    std::uint64_t fired;
    std::uint64_t f_out;
    std::uint64_t n_in;
    std::uint64_t f_in;
};

// Full cascade state: per-vertex flags plus the per-(j,k)-class counters of
// the edge-deletion chain. A state is confined to one worker at a time;
// parallel replications each own their state.
//
// Layout: vertices are bucketed into dense classes over the realized (j,k)
// pairs of the degree sequence. N[i*C + c] counts non-fired vertices of class
// c with i in-edges revealed from fired sources (0 <= i < omega); Fjk[c]
// counts fired vertices of class c. N_i is identically zero for i > j: a
// vertex cannot have more reveals than in-stubs.
struct CascadeState {
    std::vector<DegreePair> classes;       // distinct (j,k) pairs
    std::vector<std::uint32_t> class_of;   // per vertex
    std::vector<std::uint8_t> fired;       // monotone: never cleared
    std::vector<std::int32_t> received;    // reveals from fired sources
    std::vector<std::int64_t> N;           // omega rows by classes.size() cols
    std::vector<std::int64_t> Fjk;         // per class
    std::int64_t F = 0;
    std::int64_t N_in = 0;
    std::int64_t F_in = 0;
    std::int64_t F_out = 0;
    std::uint64_t t = 0;
    std::uint64_t m = 0;
    int omega = 1;

    std::size_t vertex_count() const { return fired.size(); }
    std::size_t class_count() const { return classes.size(); }

    // Verifies the exact counter identities; throws CounterIdentityError
    // naming the violated identity.
    void check_invariants() const;
};

// Independently fires each vertex with probability alpha and initializes all
// counters (N_0 holds the non-fired class counts, t = 0).
CascadeState seed_initial(const DegreeSequence& seq, const CascadeParams& params, Rng& rng);

struct CascadeResult {
    std::uint64_t fired_final = 0;
    double phi = 0.0;
    // Synchronous engine: number of rounds in which at least one vertex
    // fired. Sequential engines: edges consumed until F_out hit zero.
    std::uint64_t t_final = 0;
    std::vector<StepRecord> trajectory;
};

// Which not-yet-consumed fired out-stub the replay engine picks next. The
// final fired set is the same for every policy; FIFO is the default.
enum class PickPolicy { Fifo, Lifo, Random };

struct SequentialOptions {
    bool debug_check = false;       // assert counter identities every step
    std::uint64_t record_every = 0; // 0 = no trajectory
    PickPolicy pick = PickPolicy::Fifo;
};

// Synchronous rounds: a non-fired vertex fires once its fired in-neighbor
// count (parallel edges counted with multiplicity) reaches omega. Updates
// fired/received/F of the state; the stub-side counters (N, Fjk, N_in, F_in,
// F_out, t) describe the edge-deletion chain and are left untouched here.
CascadeResult run_synchronous(const StubMatching& matching, CascadeState& state,
                              const CascadeParams& params);

// Edge-deletion chain replayed against a fixed matching. rng is only needed
// for PickPolicy::Random.
CascadeResult run_sequential_replay(const StubMatching& matching, CascadeState& state,
                                    const CascadeParams& params,
                                    const SequentialOptions& options = {}, Rng* rng = nullptr);

// Edge-deletion chain with the matching revealed on the fly: each consumed
// out-stub is paired with a uniform draw from the remaining in-stubs.
CascadeResult run_sequential_onfly(CascadeState& state, const CascadeParams& params, Rng& rng,
                                   const SequentialOptions& options = {});

inline double phi_hat(const CascadeResult& result, std::size_t n) {
    return n == 0 ? 0.0 : static_cast<double>(result.fired_final) / static_cast<double>(n);
}

void write_trajectory_csv(std::ostream& os, const std::vector<StepRecord>& trajectory);

}  // namespace bootperc
