#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "bootperc/cascade.hpp"
#include "bootperc/degree_model.hpp"
#include "bootperc/graph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bootperc;
using doctest::Approx;
using oracles::force_seed;
using test_util::graph_from_edges;

namespace {

CascadeState dark_state(const DegreeSequence& seq, int omega) {
    Rng rng(0);
    return seed_initial(seq, {omega, 0.0}, rng);
}

}  // namespace

TEST_CASE("seed_initial extremes") {
    const DegreeSequence seq(std::vector<DegreePair>(10, {3, 3}));
    Rng rng(1);

    CascadeState all = seed_initial(seq, {2, 1.0}, rng);
    CHECK(all.F == 10);
    CHECK(all.N_in == 0);
    CHECK(all.F_in == 30);
    CHECK(all.F_out == 30);
    for (std::int64_t count : all.N)
        CHECK(count == 0);
    CHECK_NOTHROW(all.check_invariants());

    CascadeState none = seed_initial(seq, {2, 0.0}, rng);
    CHECK(none.F == 0);
    CHECK(none.N_in == 30);
    CHECK(none.F_out == 0);
    CHECK(none.N[0] == 10);  // single class, row 0
    CHECK_NOTHROW(none.check_invariants());
}

TEST_CASE("seeded count concentrates around alpha n") {
    const std::size_t n = 100000;
    const DegreeSequence seq(std::vector<DegreePair>(n, {3, 3}));
    Rng rng = derive_stream(6, {0});
    const CascadeState st = seed_initial(seq, {2, 0.3}, rng);
    const double band = 3.0 * std::sqrt(static_cast<double>(n) * 0.3 * 0.7);
    CHECK(std::abs(static_cast<double>(st.F) - 0.3 * static_cast<double>(n)) <= band);
}

TEST_CASE("cascade params are validated") {
    CHECK_THROWS_AS((CascadeParams{-1, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((CascadeParams{1, -0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((CascadeParams{1, 1.5}.validate()), std::invalid_argument);
    CHECK_NOTHROW((CascadeParams{0, 0.0}.validate()));
}

TEST_CASE("synchronous 3-cycle with a single seed") {
    const auto g = graph_from_edges(3, {{0, 1}, {1, 2}, {2, 0}});
    CascadeState st = dark_state(g.seq, 1);
    force_seed(st, 0);
    const CascadeParams params{1, 0.0};
    const CascadeResult result = run_synchronous(g.matching, st, params);
    CHECK(result.fired_final == 3);
    CHECK(result.t_final == 2);  // two extra rounds after the seed
    CHECK(result.phi == Approx(1.0));
}

TEST_CASE("omega 0 fires everyone in one round") {
    const auto g = graph_from_edges(4, {{0, 1}, {2, 3}});
    CascadeState st = dark_state(g.seq, 0);
    const CascadeResult result = run_synchronous(g.matching, st, {0, 0.0});
    CHECK(result.fired_final == 4);
    CHECK(result.t_final == 1);

    // already fully seeded: nothing left to fire
    CascadeState st2 = dark_state(g.seq, 0);
    for (Vertex v = 0; v < 4; ++v)
        force_seed(st2, v);
    const CascadeResult r2 = run_synchronous(g.matching, st2, {0, 0.0});
    CHECK(r2.fired_final == 4);
    CHECK(r2.t_final == 0);
}

TEST_CASE("star threshold arithmetic") {
    // center 0 with in-degree 4 from leaves 1..4
    const auto g = graph_from_edges(5, {{1, 0}, {2, 0}, {3, 0}, {4, 0}});

    CascadeState two_seeds = dark_state(g.seq, 2);
    force_seed(two_seeds, 1);
    force_seed(two_seeds, 2);
    const CascadeResult fired = run_synchronous(g.matching, two_seeds, {2, 0.0});
    CHECK(fired.fired_final == 3);
    CHECK(phi_hat(fired, 5) == Approx(0.6));

    CascadeState still_two = dark_state(g.seq, 3);
    force_seed(still_two, 1);
    force_seed(still_two, 2);
    const CascadeResult dark = run_synchronous(g.matching, still_two, {3, 0.0});
    CHECK(dark.fired_final == 2);
}

TEST_CASE("multi-edges count with multiplicity in the synchronous rule") {
    // double edge 1 -> 0: a single seeded source meets omega = 2
    const auto g = graph_from_edges(2, {{1, 0}, {1, 0}});
    CascadeState st = dark_state(g.seq, 2);
    force_seed(st, 1);
    const CascadeResult result = run_synchronous(g.matching, st, {2, 0.0});
    CHECK(result.fired_final == 2);
}

TEST_CASE("sequential replay on the (1,1) self-loop") {
    const auto g = graph_from_edges(1, {{0, 0}});
    CascadeState st = dark_state(g.seq, 1);
    force_seed(st, 0);
    SequentialOptions options;
    options.debug_check = true;
    const CascadeResult result = run_sequential_replay(g.matching, st, {1, 0.0}, options);
    CHECK(result.fired_final == 1);
    CHECK(result.t_final == 1);
}

TEST_CASE("engine equivalence on random instances") {
    const auto regular = JointDegreeDistribution::product(point_mass_law(3), point_mass_law(3));
    const auto poisson = JointDegreeDistribution::product(poisson_law(5.0), poisson_law(5.0));
    const auto gaussian =
        JointDegreeDistribution::product(gaussian_law(8.0, 3.0, 26), gaussian_law(8.0, 3.0, 26));
    const JointDegreeDistribution* dists[] = {&regular, &poisson, &gaussian};
    const double alphas[] = {0.05, 0.1, 0.3};

    int instances = 0;
    for (std::uint64_t i = 0; i < 210; ++i) {
        Rng rng = derive_stream(100, {i});
        const auto& dist = *dists[i % 3];
        const int omega = 1 + static_cast<int>(i % 3);
        const double alpha = alphas[(i / 3) % 3];
        const std::size_t n = 50 + static_cast<std::size_t>(uniform_below(rng, 451));

        const DegreeSequence seq = sample_degree_sequence(dist, n, rng);
        const StubMatching matching = StubMatching::uniform(seq, rng);
        const CascadeParams params{omega, alpha};
        CascadeState seeded = seed_initial(seq, params, rng);

        CascadeState sync_state = seeded;
        CascadeState seq_state = seeded;
        const CascadeResult sync = run_synchronous(matching, sync_state, params);
        const CascadeResult sequential = run_sequential_replay(matching, seq_state, params);

        CHECK(sync.fired_final == sequential.fired_final);
        CHECK(sync_state.fired == seq_state.fired);
        CHECK(sequential.t_final <= seq.total_stubs());
        CHECK(sync.t_final <= n);
        ++instances;
    }
    CHECK(instances == 210);
}

TEST_CASE("out-stub pick order does not change the final fired set") {
    const auto dist = JointDegreeDistribution::product(poisson_law(4.0), poisson_law(4.0));
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng = derive_stream(200, {i});
        const DegreeSequence seq = sample_degree_sequence(dist, 300, rng);
        const StubMatching matching = StubMatching::uniform(seq, rng);
        const CascadeParams params{2, 0.15};
        CascadeState seeded = seed_initial(seq, params, rng);

        CascadeState fifo_state = seeded;
        CascadeState lifo_state = seeded;
        CascadeState random_state = seeded;
        SequentialOptions fifo, lifo, random_pick;
        fifo.pick = PickPolicy::Fifo;
        lifo.pick = PickPolicy::Lifo;
        random_pick.pick = PickPolicy::Random;
        Rng pick_rng = derive_stream(201, {i});

        run_sequential_replay(matching, fifo_state, params, fifo);
        run_sequential_replay(matching, lifo_state, params, lifo);
        run_sequential_replay(matching, random_state, params, random_pick, &pick_rng);

        CHECK(fifo_state.fired == lifo_state.fired);
        CHECK(fifo_state.fired == random_state.fired);
    }
}

TEST_CASE("random pick policy needs an rng") {
    const auto g = graph_from_edges(1, {{0, 0}});
    CascadeState st = dark_state(g.seq, 1);
    force_seed(st, 0);
    SequentialOptions options;
    options.pick = PickPolicy::Random;
    CHECK_THROWS_AS(run_sequential_replay(g.matching, st, {1, 0.0}, options),
                    std::invalid_argument);
}

TEST_CASE("corrupted counters fail the debug check by name") {
    const auto dist = JointDegreeDistribution::product(poisson_law(4.0), poisson_law(4.0));
    Rng rng = derive_stream(310, {0});
    const DegreeSequence seq = sample_degree_sequence(dist, 200, rng);
    CascadeState st = seed_initial(seq, {2, 0.3}, rng);

    CascadeState broken = st;
    broken.N_in += 1;
    try {
        broken.check_invariants();
        FAIL("expected a counter identity error");
    } catch (const CounterIdentityError& e) {
        CHECK(std::string(e.what()).find("N_in") != std::string::npos);
    }

    broken = st;
    broken.F += 1;
    CHECK_THROWS_AS(broken.check_invariants(), CounterIdentityError);

    broken = st;
    broken.F_out += 1;
    CHECK_THROWS_AS(broken.check_invariants(), CounterIdentityError);
}

TEST_CASE("counter identities hold at every sequential step") {
    const auto dist = JointDegreeDistribution::product(poisson_law(5.0), poisson_law(5.0));
    SequentialOptions options;
    options.debug_check = true;
    for (std::uint64_t i = 0; i < 10; ++i) {
        Rng rng = derive_stream(300, {i});
        const DegreeSequence seq = sample_degree_sequence(dist, 1000, rng);
        const CascadeParams params{1 + static_cast<int>(i % 3), 0.2};

        const StubMatching matching = StubMatching::uniform(seq, rng);
        CascadeState replay_state = seed_initial(seq, params, rng);
        CHECK_NOTHROW(run_sequential_replay(matching, replay_state, params, options));

        CascadeState onfly_state = seed_initial(seq, params, rng);
        CHECK_NOTHROW(run_sequential_onfly(onfly_state, params, rng, options));
    }
}

TEST_CASE("fired sets are monotone under superset seeding") {
    const auto dist = JointDegreeDistribution::product(poisson_law(4.0), poisson_law(4.0));
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng = derive_stream(400, {i});
        const DegreeSequence seq = sample_degree_sequence(dist, 200, rng);
        const StubMatching matching = StubMatching::uniform(seq, rng);
        const CascadeParams params{2, 0.0};

        CascadeState small = dark_state(seq, 2);
        CascadeState big = dark_state(seq, 2);
        for (Vertex v = 0; v < 20; ++v)
            force_seed(small, static_cast<Vertex>(uniform_below(rng, 200)));
        for (Vertex v = 0; v < 200; ++v)
            if (small.fired[v])
                force_seed(big, v);
        for (Vertex v = 0; v < 10; ++v)
            force_seed(big, static_cast<Vertex>(uniform_below(rng, 200)));

        run_synchronous(matching, small, params);
        run_synchronous(matching, big, params);
        for (Vertex v = 0; v < 200; ++v)
            if (small.fired[v])
                CHECK(big.fired[v]);
    }
}

TEST_CASE("on-the-fly matches replay in distribution") {
    const auto dist = JointDegreeDistribution::product(poisson_law(5.0), poisson_law(5.0));
    const CascadeParams params{2, 0.2};
    const std::size_t n = 10000;
    const int reps = 20;

    double replay_sum = 0.0, onfly_sum = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        Rng r1 = derive_stream(500, {static_cast<std::uint64_t>(rep)});
        const DegreeSequence seq1 = sample_degree_sequence(dist, n, r1);
        const StubMatching matching = StubMatching::uniform(seq1, r1);
        CascadeState replay_state = seed_initial(seq1, params, r1);
        replay_sum += phi_hat(run_sequential_replay(matching, replay_state, params), n);

        Rng r2 = derive_stream(501, {static_cast<std::uint64_t>(rep)});
        const DegreeSequence seq2 = sample_degree_sequence(dist, n, r2);
        CascadeState onfly_state = seed_initial(seq2, params, r2);
        onfly_sum += phi_hat(run_sequential_onfly(onfly_state, params, r2), n);
    }
    CHECK(std::abs(replay_sum / reps - onfly_sum / reps) < 0.02);
}

TEST_CASE("trajectory recording brackets the run") {
    const auto dist = JointDegreeDistribution::product(poisson_law(5.0), poisson_law(5.0));
    Rng rng = derive_stream(600, {0});
    const DegreeSequence seq = sample_degree_sequence(dist, 2000, rng);
    const CascadeParams params{2, 0.3};
    CascadeState st = seed_initial(seq, params, rng);
    SequentialOptions options;
    options.record_every = 100;
    const CascadeResult result = run_sequential_onfly(st, params, rng, options);

    REQUIRE(!result.trajectory.empty());
    CHECK(result.trajectory.front().t == 0);
    CHECK(result.trajectory.back().t == result.t_final);
    for (const StepRecord& r : result.trajectory) {
        CHECK(r.f_in + r.n_in == seq.total_stubs() - r.t);
        CHECK(r.fired <= 2000);
    }

    std::ostringstream csv;
    write_trajectory_csv(csv, result.trajectory);
    CHECK(csv.str().substr(0, 21) == "t,F,F_out,N_in,F_in\n0");
}

TEST_CASE("phi_hat endpoints") {
    CascadeResult all;
    all.fired_final = 100;
    CHECK(phi_hat(all, 100) == Approx(1.0));
    CascadeResult none;
    none.fired_final = 0;
    CHECK(phi_hat(none, 100) == Approx(0.0));
}
