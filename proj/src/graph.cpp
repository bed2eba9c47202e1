#include "bootperc/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace bootperc {

void StubMatching::build_owners(const DegreeSequence& seq) {
    const std::size_t n = seq.size();
    const std::uint64_t m = seq.total_stubs();
    if (m > std::numeric_limits<StubIndex>::max())
        throw std::invalid_argument("StubMatching: stub count exceeds index range");
    if (n > std::numeric_limits<Vertex>::max())
        throw std::invalid_argument("StubMatching: vertex count exceeds index range");

    in_begin_.assign(n + 1, 0);
    out_begin_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        in_begin_[v + 1] = in_begin_[v] + static_cast<std::uint64_t>(seq.pairs()[v].in_degree);
        out_begin_[v + 1] = out_begin_[v] + static_cast<std::uint64_t>(seq.pairs()[v].out_degree);
    }
    in_owner_.resize(m);
    out_owner_.resize(m);
    for (std::size_t v = 0; v < n; ++v) {
        std::fill(in_owner_.begin() + static_cast<std::ptrdiff_t>(in_begin_[v]),
                  in_owner_.begin() + static_cast<std::ptrdiff_t>(in_begin_[v + 1]),
                  static_cast<Vertex>(v));
        std::fill(out_owner_.begin() + static_cast<std::ptrdiff_t>(out_begin_[v]),
                  out_owner_.begin() + static_cast<std::ptrdiff_t>(out_begin_[v + 1]),
                  static_cast<Vertex>(v));
    }
}

StubMatching::StubMatching(const DegreeSequence& seq, std::vector<StubIndex> mate)
    : mate_(std::move(mate)) {
    build_owners(seq);
    if (mate_.size() != seq.total_stubs())
        throw std::invalid_argument("StubMatching: mate size does not match stub count");
    std::vector<bool> seen(mate_.size(), false);
    for (StubIndex s : mate_) {
        if (s >= mate_.size() || seen[s])
            throw std::invalid_argument("StubMatching: mate is not a permutation");
        seen[s] = true;
    }
}

StubMatching StubMatching::uniform(const DegreeSequence& seq, Rng& rng) {
    StubMatching g;
    g.build_owners(seq);
    g.mate_.resize(seq.total_stubs());
    std::iota(g.mate_.begin(), g.mate_.end(), StubIndex{0});
    shuffle(g.mate_, rng);
    return g;
}

std::vector<Vertex> StubMatching::in_neighbors(Vertex v) const {
    if (static_cast<std::size_t>(v) >= vertex_count())
        throw std::invalid_argument("in_neighbors: vertex out of range");
    std::vector<Vertex> result;
    result.reserve(static_cast<std::size_t>(in_degree(v)));
    for (StubIndex s = 0; s < mate_.size(); ++s)
        if (in_owner_[mate_[s]] == v)
            result.push_back(out_owner_[s]);
    std::sort(result.begin(), result.end());
    return result;
}

std::uint64_t StubMatching::self_loop_count() const {
    std::uint64_t count = 0;
    for (StubIndex s = 0; s < mate_.size(); ++s)
        if (out_owner_[s] == in_owner_[mate_[s]])
            ++count;
    return count;
}

void StubMatching::write_edge_csv(std::ostream& os) const {
    os << "out_vertex,in_vertex\n";
    for (StubIndex s = 0; s < mate_.size(); ++s)
        os << out_owner_[s] << ',' << in_owner_[mate_[s]] << '\n';
}

}  // namespace bootperc
