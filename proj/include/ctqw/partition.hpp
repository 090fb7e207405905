#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ctqw/errors.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/matrix.hpp"

namespace ctqw {

/// Vertex partition in which every vertex of cell j has the same number of
/// neighbours in cell k, seeded so that cell 0 holds exactly the marked
/// vertex. degree_table[j][k] is that common neighbour count.
struct EquitablePartition {
    std::vector<std::vector<std::size_t>> cells;      // cell 0 = {marked}
    std::vector<std::size_t> sizes;                   // members per cell
    std::vector<std::vector<long long>> degree_table; // J x J
    std::vector<std::size_t> cell_of;                 // vertex -> cell index
    std::size_t vertex_total = 0;

    std::size_t cell_count() const { return cells.size(); }
};

/// Checks that `cells` partitions the vertex set and is equitable; returns
/// the degree table, or throws DataError naming the violating vertex/cell.
inline std::vector<std::vector<long long>> validate_partition(
    const Graph& g, const std::vector<std::vector<std::size_t>>& cells) {
    const std::size_t n = g.vertex_count();
    const std::size_t J = cells.size();
    if (J == 0) throw DataError("partition has no cells");
    std::vector<std::size_t> cell_of(n, J);
    for (std::size_t j = 0; j < J; ++j) {
        if (cells[j].empty()) throw DataError("cell " + std::to_string(j) + " is empty");
        for (std::size_t v : cells[j]) {
            if (v >= n) throw DataError("cell " + std::to_string(j) + " names vertex " +
                                        std::to_string(v) + " outside the graph");
            if (cell_of[v] != J)
                throw DataError("vertex " + std::to_string(v) + " appears in cells " +
                                std::to_string(cell_of[v]) + " and " + std::to_string(j));
            cell_of[v] = j;
        }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (cell_of[v] == J) throw DataError("vertex " + std::to_string(v) + " is not covered");

    const auto adj = g.adjacency_lists();
    std::vector<std::vector<long long>> dtable(J, std::vector<long long>(J, -1));
    std::vector<long long> counts(J);
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t v : cells[j]) {
            std::fill(counts.begin(), counts.end(), 0);
            for (std::size_t w : adj[v]) ++counts[cell_of[w]];
            for (std::size_t k = 0; k < J; ++k) {
                if (dtable[j][k] < 0) {
                    dtable[j][k] = counts[k];
                } else if (dtable[j][k] != counts[k]) {
                    throw DataError("not equitable: vertex " + std::to_string(v) + " has " +
                                    std::to_string(counts[k]) + " neighbours in cell " +
                                    std::to_string(k) + ", expected " + std::to_string(dtable[j][k]));
                }
            }
        }
    }
    return dtable;
}

/// Coarsest equitable partition refining {marked} | {rest}: iterative
/// recolouring by the multiset of neighbour colours until a fixpoint. Cells
/// come out ordered by (distance from the marked vertex, smallest member).
inline EquitablePartition coarsest_equitable_partition(const Graph& g, std::size_t marked) {
    const std::size_t n = g.vertex_count();
    if (marked >= n) throw InvalidParameter("coarsest_equitable_partition: marked vertex out of range");
    const auto dist = bfs_distances(g, marked);
    if (std::any_of(dist.begin(), dist.end(), [](std::size_t d) { return d == kUnreached; }))
        throw DataError("graph is disconnected");

    const auto adj = g.adjacency_lists();
    std::vector<std::size_t> color(n, n == 1 ? 0 : 1);
    color[marked] = 0;
    std::size_t ncolors = (n == 1) ? 1 : 2;
    while (true) {
        using Signature = std::pair<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>>;
        std::map<Signature, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (std::size_t v = 0; v < n; ++v) {
            std::map<std::size_t, std::size_t> tally;
            for (std::size_t w : adj[v]) ++tally[color[w]];
            Signature sig{color[v], {tally.begin(), tally.end()}};
            next[v] = ids.emplace(sig, ids.size()).first->second;
        }
        const std::size_t count = ids.size();
        color = std::move(next);
        if (count == ncolors) break;  // recolouring only ever splits cells
        ncolors = count;
    }

    std::vector<std::vector<std::size_t>> raw(ncolors);
    for (std::size_t v = 0; v < n; ++v) raw[color[v]].push_back(v);
    std::vector<std::size_t> order(ncolors);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::make_pair(dist[raw[a].front()], raw[a].front()) <
               std::make_pair(dist[raw[b].front()], raw[b].front());
    });

    EquitablePartition p;
    p.vertex_total = n;
    p.cells.reserve(ncolors);
    for (std::size_t c : order) p.cells.push_back(std::move(raw[c]));
    p.degree_table = validate_partition(g, p.cells);
    p.sizes.reserve(ncolors);
    p.cell_of.assign(n, 0);
    for (std::size_t j = 0; j < p.cells.size(); ++j) {
        p.sizes.push_back(p.cells[j].size());
        for (std::size_t v : p.cells[j]) p.cell_of[v] = j;
    }
    return p;
}

/// Cell-level reduction of the search Hamiltonian: `adjacency` carries
/// sqrt(d_jk * d_kj) and `hamiltonian` adds 1 on the marked cell plus the
/// coupling times `adjacency`.
struct QuotientHamiltonian {
    std::vector<double> adjacency;    // J x J, row-major
    double gamma = 0.0;
    std::vector<double> hamiltonian;  // J x J, row-major
    std::vector<std::size_t> sizes;
    std::size_t vertex_total = 0;

    std::size_t cell_count() const { return sizes.size(); }

    HermitianMatrix hamiltonian_matrix() const {
        const std::size_t J = cell_count();
        HermitianMatrix m(J);
        for (std::size_t r = 0; r < J; ++r)
            for (std::size_t c = r; c < J; ++c) m.set(r, c, complexd{hamiltonian[r * J + c], 0.0});
        return m;
    }
};

/// Builds the quotient directly from cell sizes and a degree table, checking
/// the balance condition n_j * d_jk == n_k * d_kj implied by undirected edges.
inline QuotientHamiltonian quotient_from_degree_table(const std::vector<std::size_t>& sizes,
                                                      const std::vector<std::vector<long long>>& dtable,
                                                      double gamma) {
    if (!std::isfinite(gamma)) throw InvalidParameter("quotient: coupling must be finite");
    const std::size_t J = sizes.size();
    if (J == 0) throw InvalidParameter("quotient: no cells");
    if (dtable.size() != J) throw InvalidParameter("quotient: degree table size mismatch");
    for (const auto& row : dtable)
        if (row.size() != J) throw InvalidParameter("quotient: degree table is not square");
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = 0; k < J; ++k) {
            if (dtable[j][k] < 0) throw DataError("quotient: negative degree entry");
            const auto lhs = static_cast<long long>(sizes[j]) * dtable[j][k];
            const auto rhs = static_cast<long long>(sizes[k]) * dtable[k][j];
            if (lhs != rhs)
                throw DataError("quotient: unbalanced degree table at (" + std::to_string(j) + "," +
                                std::to_string(k) + ")");
        }
    }
    QuotientHamiltonian q;
    q.sizes = sizes;
    q.gamma = gamma;
    q.vertex_total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    q.adjacency.assign(J * J, 0.0);
    q.hamiltonian.assign(J * J, 0.0);
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < J; ++k) {
            q.adjacency[j * J + k] =
                std::sqrt(static_cast<double>(dtable[j][k]) * static_cast<double>(dtable[k][j]));
            q.hamiltonian[j * J + k] = gamma * q.adjacency[j * J + k];
        }
    q.hamiltonian[0] += 1.0;
    return q;
}

inline QuotientHamiltonian quotient_hamiltonian(const EquitablePartition& p, double gamma) {
    return quotient_from_degree_table(p.sizes, p.degree_table, gamma);
}

/// Quotient-space image of the uniform full-space state: component
/// sqrt(n_j / N) on cell j. Unit norm.
inline cvector uniform_quotient_state(const std::vector<std::size_t>& sizes) {
    const double total = static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}));
    cvector v(sizes.size());
    for (std::size_t j = 0; j < sizes.size(); ++j)
        v[j] = complexd{std::sqrt(static_cast<double>(sizes[j]) / total), 0.0};
    return v;
}

inline cvector project_uniform(const EquitablePartition& p) { return uniform_quotient_state(p.sizes); }

/// Expands a quotient-space vector to the full space: vertex v in cell j gets
/// amplitude qv[j] / sqrt(n_j). Norm preserving.
inline cvector lift(const EquitablePartition& p, const cvector& qv) {
    if (qv.size() != p.cell_count()) throw InvalidParameter("lift: dimension mismatch");
    cvector out(p.vertex_total);
    for (std::size_t j = 0; j < p.cell_count(); ++j) {
        const complexd amp = qv[j] / std::sqrt(static_cast<double>(p.sizes[j]));
        for (std::size_t v : p.cells[j]) out[v] = amp;
    }
    return out;
}

}  // namespace ctqw
