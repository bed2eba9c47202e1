#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bootperc/degree_model.hpp"
#include "bootperc/rng.hpp"

namespace bootperc {

using Vertex = std::uint32_t;
using StubIndex = std::uint32_t;

// Directed configuration-model multigraph stored as a stub pairing: out-stub
// s is matched with in-stub mate[s]. Self-loops and parallel edges are kept
// as-is; simplifying them would change the law of the model. Immutable after
// construction.
class StubMatching {
public:
    // Explicit pairing, validated to be a bijection. Used for replaying and
    // for hand-built test graphs.
    StubMatching(const DegreeSequence& seq, std::vector<StubIndex> mate);

    // Uniformly random configuration: an unbiased shuffle of the in-stub
    // indices. Deterministic given (seq, rng state).
    static StubMatching uniform(const DegreeSequence& seq, Rng& rng);

    std::size_t vertex_count() const { return in_begin_.size() - 1; }
    std::uint64_t stub_count() const { return mate_.size(); }  // m

    Vertex in_stub_owner(StubIndex s) const { return in_owner_[s]; }
    Vertex out_stub_owner(StubIndex s) const { return out_owner_[s]; }
    StubIndex mate_of_out(StubIndex s) const { return mate_[s]; }

    // Head vertex of the edge whose tail is out-stub s.
    Vertex edge_target(StubIndex s) const { return in_owner_[mate_[s]]; }

    std::uint64_t out_stubs_begin(Vertex v) const { return out_begin_[v]; }
    std::uint64_t in_stubs_begin(Vertex v) const { return in_begin_[v]; }
    int in_degree(Vertex v) const { return static_cast<int>(in_begin_[v + 1] - in_begin_[v]); }
    int out_degree(Vertex v) const { return static_cast<int>(out_begin_[v + 1] - out_begin_[v]); }

    // Multiset of in-neighbors of v, sorted. Derived by a full scan of the
    // pairing; meant for inspection and tests, not for the hot path.
    std::vector<Vertex> in_neighbors(Vertex v) const;

    std::uint64_t self_loop_count() const;

    // Edge list dump, one `out_vertex,in_vertex` row per stub pair.
    void write_edge_csv(std::ostream& os) const;

private:
    StubMatching() = default;
    void build_owners(const DegreeSequence& seq);

    std::vector<Vertex> in_owner_;
    std::vector<Vertex> out_owner_;
    std::vector<StubIndex> mate_;
    std::vector<std::uint64_t> in_begin_;   // n+1 offsets
    std::vector<std::uint64_t> out_begin_;  // n+1 offsets
};

}  // namespace bootperc
