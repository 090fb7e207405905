// Walks one search instance end to end with the library API: build the
// graph, reduce it to its equitable quotient, find the transfer time into
// the marked cell, and compare the probability there against the predicted
// cell fraction and the full simulation.

#include <cstdio>

#include "ctqw/ctqw.hpp"

int main() {
    using namespace ctqw;

    const std::size_t k = 1;
    const Graph g = cyclepair_graph(k);
    const double gamma = 0.5;
    std::printf("graph: %zu vertices, %zu edges\n", g.vertex_count(), g.edges().size());

    const EquitablePartition p = coarsest_equitable_partition(g, 0);
    std::printf("equitable cells:");
    for (std::size_t s : p.sizes) std::printf(" %zu", s);
    std::printf("\n");

    const QuotientHamiltonian q = quotient_hamiltonian(p, gamma);
    const Spectrum qs = decompose(q.hamiltonian_matrix());
    std::printf("quotient eigenvalues:");
    for (double ev : qs.eigenvalues) std::printf(" %.6f", ev);
    std::printf("\n");

    const PstTimes times = pst_times(qs, 2, 0);
    if (!times.found) {
        std::printf("no transfer into the marked cell: %s\n", times.reason.c_str());
        return 1;
    }
    std::printf("transfer times into the marked cell: %.6f + n * %.6f\n", times.base, times.stride);

    const auto cert = check_pst_at(qs, 2, 0, times.base);
    const double predicted = theorem_probability(q, *cert);
    const double quotient = run_search_quotient(q, times.base);
    const SearchInstance inst = make_search_instance(g, 0, gamma);
    const double full = run_search_full(inst, times.base);
    std::printf("success probability at t=%.6f: quotient %.12f, full %.12f, predicted %.12f\n",
                times.base, quotient, full, predicted);
    return 0;
}
