#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "modechoice/types.hpp"

namespace modechoice {

/// Undirected social graph in CSR form. Immutable after construction;
/// concurrent reads are safe.
struct SocialGraph {
    int n = 0;
    int m_per_node = 0;
    double homophily = 0.0;
    std::vector<int> offsets;   // size n+1
    std::vector<int> neighbors; // sorted per node

    std::span<const int> neighbors_of(int id) const {
        if (id < 0 || id >= n) throw DataError("neighbors_of: unknown agent id " + std::to_string(id));
        return {neighbors.data() + offsets[static_cast<std::size_t>(id)],
                static_cast<std::size_t>(offsets[static_cast<std::size_t>(id) + 1] -
                                         offsets[static_cast<std::size_t>(id)])};
    }

    std::size_t edge_count() const { return neighbors.size() / 2; }
    int degree(int id) const { return static_cast<int>(neighbors_of(id).size()); }

    /// Builds a graph from an explicit undirected edge list (tests, imports).
    static SocialGraph from_edges(int n, std::span<const std::pair<int, int>> edges);
};

/// Growth process: seed clique of m nodes, then each newcomer attaches m
/// distinct edges with weight deg(j) * (1 + h * bonus) for candidates in the
/// newcomer's socioeconomic group, deg(j) otherwise. Deterministic per seed.
SocialGraph build_network(std::span<const Agent> agents, int m, double homophily, double bonus,
                          std::uint64_t seed);

/// Fraction of edges whose endpoints share a socioeconomic group.
double assortativity_by_ses(const SocialGraph& graph, std::span<const Agent> agents);

/// Edge-list export, one "src,dst" row per undirected edge (src < dst).
void export_edge_list_csv(const SocialGraph& graph, std::ostream& os);

} // namespace modechoice
