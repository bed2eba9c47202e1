#include "bootperc/cascade.hpp"

#include <cmath>
#include <ostream>
#include <unordered_map>

namespace bootperc {

void CascadeParams::validate() const {
    if (omega < 0)
        throw std::invalid_argument("CascadeParams: omega must be >= 0");
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("CascadeParams: alpha must lie in [0,1]");
}

void CascadeState::check_invariants() const {
    const std::size_t C = classes.size();
    if (F_in + N_in != static_cast<std::int64_t>(m) - static_cast<std::int64_t>(t))
        throw CounterIdentityError("counter identity violated: F_in + N_in != m - t");
    if (omega > 0) {
        std::int64_t revealed_in = 0;
        for (int i = 0; i < omega; ++i) {
            for (std::size_t c = 0; c < C; ++c) {
                const std::int64_t count = N[static_cast<std::size_t>(i) * C + c];
                const int j = classes[c].in_degree;
                if (count < 0)
                    throw CounterIdentityError("counter identity violated: negative N_i^{j,k}");
                if (i > j && count != 0)
                    throw CounterIdentityError(
                        "counter identity violated: N_i^{j,k} != 0 for i > j");
                revealed_in += static_cast<std::int64_t>(j - i) * count;
            }
        }
        if (revealed_in != N_in)
            throw CounterIdentityError(
                "counter identity violated: N_in != sum_{j,k} sum_{i<omega} (j-i) N_i^{j,k}");
    }
    std::int64_t fired_sum = 0;
    std::int64_t fired_out = 0;
    for (std::size_t c = 0; c < C; ++c) {
        if (Fjk[c] < 0)
            throw CounterIdentityError("counter identity violated: negative F^{j,k}");
        fired_sum += Fjk[c];
        fired_out += static_cast<std::int64_t>(classes[c].out_degree) * Fjk[c];
    }
    if (fired_sum != F)
        throw CounterIdentityError("counter identity violated: F != sum_{j,k} F^{j,k}");
    if (fired_out - static_cast<std::int64_t>(t) != F_out)
        throw CounterIdentityError(
            "counter identity violated: F_out != sum_{j,k} k F^{j,k} - t");
}

CascadeState seed_initial(const DegreeSequence& seq, const CascadeParams& params, Rng& rng) {
    params.validate();
    const std::size_t n = seq.size();
    CascadeState st;
    st.omega = params.omega;
    st.m = seq.total_stubs();

    std::unordered_map<std::uint64_t, std::uint32_t> class_index;
    st.class_of.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        const DegreePair d = seq.pairs()[v];
        const std::uint64_t key =
            (static_cast<std::uint64_t>(d.in_degree) << 32) | static_cast<std::uint32_t>(d.out_degree);
        auto [it, inserted] = class_index.try_emplace(key, static_cast<std::uint32_t>(st.classes.size()));
        if (inserted)
            st.classes.push_back(d);
        st.class_of[v] = it->second;
    }

    const std::size_t C = st.classes.size();
    st.N.assign(static_cast<std::size_t>(st.omega) * C, 0);
    st.Fjk.assign(C, 0);
    st.fired.assign(n, 0);
    st.received.assign(n, 0);

    for (std::size_t v = 0; v < n; ++v) {
        const std::uint32_t c = st.class_of[v];
        const DegreePair d = st.classes[c];
        if (bernoulli(rng, params.alpha)) {
            st.fired[v] = 1;
            st.Fjk[c] += 1;
            st.F += 1;
            st.F_in += d.in_degree;
            st.F_out += d.out_degree;
        } else {
            if (st.omega > 0)
                st.N[c] += 1;  // row i = 0
            st.N_in += d.in_degree;
        }
    }
    return st;
}

namespace {

// Fires every still-dark vertex, moving its counters to the fired side.
// Invoked for omega = 0, where the threshold test is vacuously true; keeps
// all counter identities intact. Returns the number of newly fired vertices.
std::uint64_t fire_everything(CascadeState& st) {
    std::uint64_t newly = 0;
    for (std::size_t v = 0; v < st.vertex_count(); ++v) {
        if (st.fired[v])
            continue;
        const std::uint32_t c = st.class_of[v];
        const DegreePair d = st.classes[c];
        st.fired[v] = 1;
        st.Fjk[c] += 1;
        st.F += 1;
        st.N_in -= d.in_degree;
        st.F_in += d.in_degree;
        st.F_out += d.out_degree;
        ++newly;
    }
    return newly;
}

// One step of the edge-deletion chain: consumes a fired out-stub whose
// partner in-stub belongs to vj. Returns true when vj newly fires.
bool consume_partner(CascadeState& st, Vertex vj) {
    st.t += 1;
    st.F_out -= 1;
    if (st.fired[vj]) {
        st.F_in -= 1;  // partner fired: only the clock advances
        return false;
    }
    const std::uint32_t c = st.class_of[vj];
    const int j = st.classes[c].in_degree;
    const int k = st.classes[c].out_degree;
    const std::size_t C = st.classes.size();
    const int i = st.received[vj]++;
    st.N_in -= 1;
    if (i + 1 < st.omega) {
        // reveal i+1 of omega: shift within the non-fired table
        st.N[static_cast<std::size_t>(i) * C + c] -= 1;
        st.N[static_cast<std::size_t>(i + 1) * C + c] += 1;
        return false;
    }
    // omega-th reveal: vj fires and its stubs switch sides
    st.N[static_cast<std::size_t>(st.omega - 1) * C + c] -= 1;
    st.Fjk[c] += 1;
    st.F += 1;
    st.fired[vj] = 1;
    const std::int64_t remaining_in = j - st.omega;
    st.N_in -= remaining_in;
    st.F_in += remaining_in;
    st.F_out += k;
    return true;
}

void record_step(std::vector<StepRecord>& trajectory, const CascadeState& st) {
    trajectory.push_back({st.t, static_cast<std::uint64_t>(st.F),
                          static_cast<std::uint64_t>(st.F_out),
                          static_cast<std::uint64_t>(st.N_in),
                          static_cast<std::uint64_t>(st.F_in)});
}

CascadeResult finish(const CascadeState& st, std::uint64_t t_final,
                     std::vector<StepRecord> trajectory) {
    CascadeResult result;
    result.fired_final = static_cast<std::uint64_t>(st.F);
    result.phi = st.vertex_count() == 0
                     ? 0.0
                     : static_cast<double>(st.F) / static_cast<double>(st.vertex_count());
    result.t_final = t_final;
    result.trajectory = std::move(trajectory);
    return result;
}

}  // namespace

CascadeResult run_synchronous(const StubMatching& matching, CascadeState& state,
                              const CascadeParams& params) {
    params.validate();
    if (matching.vertex_count() != state.vertex_count() || matching.stub_count() != state.m)
        throw std::invalid_argument("run_synchronous: matching does not match state");

    if (params.omega == 0) {
        const std::uint64_t newly = fire_everything(state);
        return finish(state, newly > 0 ? 1 : 0, {});
    }

    std::vector<Vertex> frontier;
    frontier.reserve(state.vertex_count());
    for (std::size_t v = 0; v < state.vertex_count(); ++v)
        if (state.fired[v])
            frontier.push_back(static_cast<Vertex>(v));

    std::uint64_t rounds = 0;
    std::vector<Vertex> next;
    while (!frontier.empty()) {
        next.clear();
        for (Vertex u : frontier) {
            const std::uint64_t begin = matching.out_stubs_begin(u);
            const std::uint64_t end = begin + static_cast<std::uint64_t>(matching.out_degree(u));
            for (std::uint64_t s = begin; s < end; ++s) {
                const Vertex v = matching.edge_target(static_cast<StubIndex>(s));
                if (state.fired[v])
                    continue;
                if (++state.received[v] >= params.omega) {
                    state.fired[v] = 1;
                    state.F += 1;
                    next.push_back(v);
                }
            }
        }
        if (!next.empty())
            ++rounds;
        frontier.swap(next);
    }
    return finish(state, rounds, {});
}

namespace {

struct OutStubQueue {
    std::vector<StubIndex> stubs;
    std::size_t head = 0;

    std::size_t pending() const { return stubs.size() - head; }

    void push_range(std::uint64_t begin, int count) {
        for (int d = 0; d < count; ++d)
            stubs.push_back(static_cast<StubIndex>(begin + static_cast<std::uint64_t>(d)));
    }

    StubIndex pop(PickPolicy pick, Rng* rng) {
        switch (pick) {
            case PickPolicy::Fifo:
                return stubs[head++];
            case PickPolicy::Lifo: {
                const StubIndex s = stubs.back();
                stubs.pop_back();
                return s;
            }
            case PickPolicy::Random: {
                if (rng == nullptr)
                    throw std::invalid_argument("PickPolicy::Random requires an rng");
                const std::size_t idx =
                    head + static_cast<std::size_t>(uniform_below(*rng, pending()));
                std::swap(stubs[idx], stubs.back());
                const StubIndex s = stubs.back();
                stubs.pop_back();
                return s;
            }
        }
        throw std::logic_error("unreachable pick policy");
    }
};

}  // namespace

CascadeResult run_sequential_replay(const StubMatching& matching, CascadeState& state,
                                    const CascadeParams& params,
                                    const SequentialOptions& options, Rng* rng) {
    params.validate();
    if (matching.vertex_count() != state.vertex_count() || matching.stub_count() != state.m)
        throw std::invalid_argument("run_sequential_replay: matching does not match state");

    if (params.omega == 0)
        fire_everything(state);

    OutStubQueue queue;
    queue.stubs.reserve(static_cast<std::size_t>(state.m));
    for (std::size_t v = 0; v < state.vertex_count(); ++v)
        if (state.fired[v])
            queue.push_range(matching.out_stubs_begin(static_cast<Vertex>(v)),
                             matching.out_degree(static_cast<Vertex>(v)));

    std::vector<StepRecord> trajectory;
    if (options.record_every > 0)
        record_step(trajectory, state);
    if (options.debug_check)
        state.check_invariants();

    while (queue.pending() > 0) {
        const StubIndex s = queue.pop(options.pick, rng);
        const Vertex vj = matching.edge_target(s);
        if (consume_partner(state, vj))
            queue.push_range(matching.out_stubs_begin(vj), matching.out_degree(vj));
        if (options.debug_check) {
            state.check_invariants();
            if (static_cast<std::int64_t>(queue.pending()) != state.F_out)
                throw CounterIdentityError(
                    "counter identity violated: pending fired out-stubs != F_out");
        }
        if (options.record_every > 0 && state.t % options.record_every == 0)
            record_step(trajectory, state);
    }

    if (options.record_every > 0 && (trajectory.empty() || trajectory.back().t != state.t))
        record_step(trajectory, state);
    return finish(state, state.t, std::move(trajectory));
}

CascadeResult run_sequential_onfly(CascadeState& state, const CascadeParams& params, Rng& rng,
                                   const SequentialOptions& options) {
    params.validate();

    if (params.omega == 0)
        fire_everything(state);

    // Pool of undeleted in-stubs, one slot per stub, owner recorded.
    std::vector<Vertex> pool;
    pool.reserve(static_cast<std::size_t>(state.m));
    for (std::size_t v = 0; v < state.vertex_count(); ++v) {
        const int d_in = state.classes[state.class_of[v]].in_degree;
        for (int i = 0; i < d_in; ++i)
            pool.push_back(static_cast<Vertex>(v));
    }
    std::size_t alive = pool.size();

    std::vector<StepRecord> trajectory;
    if (options.record_every > 0)
        record_step(trajectory, state);
    if (options.debug_check)
        state.check_invariants();

    while (state.F_out > 0) {
        const std::size_t idx = static_cast<std::size_t>(uniform_below(rng, alive));
        const Vertex vj = pool[idx];
        pool[idx] = pool[--alive];
        consume_partner(state, vj);
        if (options.debug_check) {
            state.check_invariants();
            if (alive != state.m - state.t)
                throw CounterIdentityError(
                    "counter identity violated: live in-stub pool != m - t");
        }
        if (options.record_every > 0 && state.t % options.record_every == 0)
            record_step(trajectory, state);
    }

    if (options.record_every > 0 && (trajectory.empty() || trajectory.back().t != state.t))
        record_step(trajectory, state);
    return finish(state, state.t, std::move(trajectory));
}

void write_trajectory_csv(std::ostream& os, const std::vector<StepRecord>& trajectory) {
    os << "t,F,F_out,N_in,F_in\n";
    for (const StepRecord& r : trajectory)
        os << r.t << ',' << r.fired << ',' << r.f_out << ',' << r.n_in << ',' << r.f_in << '\n';
}

}  // namespace bootperc
