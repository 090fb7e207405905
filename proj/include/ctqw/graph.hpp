#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "ctqw/errors.hpp"
#include "ctqw/matrix.hpp"

namespace ctqw {

inline constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

/// Simple undirected graph: no self-loops, no duplicate edges. Edges are kept
/// canonical (u < v, lexicographically sorted), which makes file output and
/// test fixtures reproducible. Immutable after construction.
class Graph {
public:
    using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

    Graph(std::size_t n, EdgeList edge_list) : n_(n) {
        if (n == 0) throw InvalidParameter("Graph: vertex count must be positive");
        for (auto& [u, v] : edge_list) {
            if (u == v) throw InvalidParameter("Graph: self-loop at vertex " + std::to_string(u));
            if (u >= n || v >= n)
                throw InvalidParameter("Graph: edge endpoint out of range: " + std::to_string(std::max(u, v)));
            if (u > v) std::swap(u, v);
        }
        std::sort(edge_list.begin(), edge_list.end());
        const auto dup = std::adjacent_find(edge_list.begin(), edge_list.end());
        if (dup != edge_list.end())
            throw InvalidParameter("Graph: duplicate edge " + std::to_string(dup->first) + " " +
                                   std::to_string(dup->second));
        edges_ = std::move(edge_list);
    }

    std::size_t vertex_count() const { return n_; }

    /// Canonical edge list: u < v, sorted lexicographically.
    const EdgeList& edges() const { return edges_; }

    std::vector<std::vector<std::size_t>> adjacency_lists() const {
        std::vector<std::vector<std::size_t>> adj(n_);
        for (const auto& [u, v] : edges_) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        return adj;
    }

    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> deg(n_, 0);
        for (const auto& [u, v] : edges_) {
            ++deg[u];
            ++deg[v];
        }
        return deg;
    }

private:
    std::size_t n_;
    EdgeList edges_;
};

inline Graph complete_graph(std::size_t n) {
    if (n < 2) throw InvalidParameter("complete_graph: need at least 2 vertices");
    Graph::EdgeList edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t u = 0; u + 1 < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

inline Graph cycle_graph(std::size_t n) {
    if (n < 3) throw InvalidParameter("cycle_graph: need at least 3 vertices");
    Graph::EdgeList edges;
    edges.reserve(n);
    for (std::size_t u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
    return Graph(n, std::move(edges));
}

/// Two-cycle search family: a hub (vertex 0) joined to every vertex of an
/// inner cycle of m = 2(2k+1)^2 vertices; each inner vertex additionally owns
/// a private block of m consecutive vertices on an outer cycle of m^2
/// vertices. Total 1 + m + m^2 vertices. Labels: hub 0, inner 1..m, outer
/// m+1..m+m^2. The block assignment (inner vertex i -> outer block i) is one
/// of many m-to-1 wirings with the same cell structure; it is fixed for
/// determinism.
inline Graph cyclepair_graph(std::size_t k) {
    if (k < 1) throw InvalidParameter("cyclepair_graph: parameter must be at least 1");
    const std::size_t m = 2 * (2 * k + 1) * (2 * k + 1);
    const std::size_t n = 1 + m + m * m;
    Graph::EdgeList edges;
    edges.reserve(2 * m + 2 * m * m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t inner = 1 + i;
        edges.emplace_back(0, inner);                    // hub spoke
        edges.emplace_back(inner, 1 + (i + 1) % m);      // inner cycle
        for (std::size_t b = 0; b < m; ++b)              // private outer block
            edges.emplace_back(inner, 1 + m + i * m + b);
    }
    for (std::size_t j = 0; j < m * m; ++j)              // outer cycle
        edges.emplace_back(1 + m + j, 1 + m + (j + 1) % (m * m));
    return Graph(n, std::move(edges));
}

/// 0/1 adjacency matrix as a real-symmetric HermitianMatrix.
inline HermitianMatrix adjacency_matrix(const Graph& g) {
    HermitianMatrix a(g.vertex_count());
    for (const auto& [u, v] : g.edges()) a.set(u, v, complexd{1.0, 0.0});
    return a;
}

inline std::vector<std::size_t> bfs_distances(const Graph& g, std::size_t source) {
    if (source >= g.vertex_count()) throw InvalidParameter("bfs_distances: source out of range");
    const auto adj = g.adjacency_lists();
    std::vector<std::size_t> dist(g.vertex_count(), kUnreached);
    std::queue<std::size_t> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const std::size_t v = frontier.front();
        frontier.pop();
        for (std::size_t w : adj[v]) {
            if (dist[w] == kUnreached) {
                dist[w] = dist[v] + 1;
                frontier.push(w);
            }
        }
    }
    return dist;
}

inline bool is_connected(const Graph& g) {
    const auto dist = bfs_distances(g, 0);
    return std::none_of(dist.begin(), dist.end(), [](std::size_t d) { return d == kUnreached; });
}

}  // namespace ctqw
