#include "modechoice/social_network.hpp"

#include <algorithm>
#include <ostream>

#include "modechoice/rng.hpp"

namespace modechoice {

namespace {

SocialGraph finalize(int n, int m, double h, const std::vector<std::vector<int>>& adj) {
    SocialGraph g;
    g.n = n;
    g.m_per_node = m;
    g.homophily = h;
    g.offsets.resize(static_cast<std::size_t>(n) + 1, 0);
    std::size_t total = 0;
    for (int i = 0; i < n; ++i) {
        total += adj[static_cast<std::size_t>(i)].size();
        g.offsets[static_cast<std::size_t>(i) + 1] = static_cast<int>(total);
    }
    g.neighbors.reserve(total);
    for (int i = 0; i < n; ++i) {
        std::vector<int> nb = adj[static_cast<std::size_t>(i)];
        std::sort(nb.begin(), nb.end());
        g.neighbors.insert(g.neighbors.end(), nb.begin(), nb.end());
    }
    return g;
}

} // namespace

SocialGraph SocialGraph::from_edges(int n, std::span<const std::pair<int, int>> edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) {
        if (a < 0 || a >= n || b < 0 || b >= n) throw DataError("from_edges: node id out of range");
        if (a == b) throw DataError("from_edges: self loop");
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    return finalize(n, 0, 0.0, adj);
}

SocialGraph build_network(std::span<const Agent> agents, int m, double homophily, double bonus,
                          std::uint64_t seed) {
    const int n = static_cast<int>(agents.size());
    if (m < 1) throw ConfigError("network.m: must be >= 1");
    if (n <= m) throw ConfigError("network.m: population must exceed m");
    if (homophily < 0.0 || homophily > 1.0) throw ConfigError("network.homophily: expected [0,1]");
    if (bonus < 0.0) throw ConfigError("network.homophily_bonus: expected >= 0");

    RngStream rng = RngStream::derive(seed, {rng_tag::network});

    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    // Degree-proportional sampling via endpoint lists: picking a uniform
    // entry of `endpoints` is a draw proportional to degree. One extra list
    // per SES group supports the homophily bonus term.
    std::vector<int> endpoints;
    std::array<std::vector<int>, kNumSes> ses_endpoints;

    auto add_edge = [&](int a, int b) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
        ++degree[static_cast<std::size_t>(a)];
        ++degree[static_cast<std::size_t>(b)];
        endpoints.push_back(a);
        endpoints.push_back(b);
        ses_endpoints[static_cast<int>(agents[static_cast<std::size_t>(a)].ses)].push_back(a);
        ses_endpoints[static_cast<int>(agents[static_cast<std::size_t>(b)].ses)].push_back(b);
    };

    // Seed component: clique over the first m nodes (a single node when m=1).
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) add_edge(a, b);

    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(m));
    for (int v = m; v < n; ++v) {
        const int group = static_cast<int>(agents[static_cast<std::size_t>(v)].ses);
        const auto& same = ses_endpoints[group];
        chosen.clear();
        // Attachment weights are frozen at the newcomer's arrival; the m
        // targets are sampled without replacement by rejection.
        const double w_all = static_cast<double>(endpoints.size());
        const double w_same = homophily * bonus * static_cast<double>(same.size());
        int guard = 0;
        while (static_cast<int>(chosen.size()) < m) {
            int target = -1;
            if (w_all + w_same <= 0.0) {
                // No edges yet (m=1 seed): fall back to uniform over existing nodes.
                target = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(v)));
            } else if (rng.uniform01() * (w_all + w_same) < w_all) {
                target = endpoints[rng.uniform_index(endpoints.size())];
            } else {
                target = same[rng.uniform_index(same.size())];
            }
            bool dup = target == v ||
                       std::find(chosen.begin(), chosen.end(), target) != chosen.end();
            if (!dup) {
                chosen.push_back(target);
            } else if (++guard > 50 * m + 1000) {
                // Degenerate weight concentrations could starve rejection
                // sampling; finish deterministically with the lowest ids not
                // yet chosen.
                for (int u = 0; u < v && static_cast<int>(chosen.size()) < m; ++u)
                    if (u != v && std::find(chosen.begin(), chosen.end(), u) == chosen.end())
                        chosen.push_back(u);
            }
        }
        for (int t : chosen) add_edge(v, t);
    }

    return finalize(n, m, homophily, adj);
}

double assortativity_by_ses(const SocialGraph& graph, std::span<const Agent> agents) {
    if (graph.edge_count() == 0) throw DataError("assortativity_by_ses: empty graph");
    std::size_t same = 0;
    std::size_t total = 0;
    for (int i = 0; i < graph.n; ++i) {
        for (int j : graph.neighbors_of(i)) {
            if (j <= i) continue;
            ++total;
            if (agents[static_cast<std::size_t>(i)].ses == agents[static_cast<std::size_t>(j)].ses) ++same;
        }
    }
    return static_cast<double>(same) / static_cast<double>(total);
}

void export_edge_list_csv(const SocialGraph& graph, std::ostream& os) {
    os << "src,dst\n";
    for (int i = 0; i < graph.n; ++i)
        for (int j : graph.neighbors_of(i))
            if (i < j) os << i << ',' << j << '\n';
}

} // namespace modechoice
