#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctqw/errors.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/partition.hpp"
#include "ctqw/pst.hpp"
#include "ctqw/spectral.hpp"

namespace ctqw {

/// Squared amplitudes may drift past [0, 1] by rounding; a drift beyond
/// 1e-12 is treated as numerical breakdown rather than clamped away.
inline double clamp_probability(double p) {
    if (p < 0.0) {
        if (p < -1e-12) throw NumericError("probability below zero: " + std::to_string(p));
        return 0.0;
    }
    if (p > 1.0) {
        if (p > 1.0 + 1e-12) throw NumericError("probability above one: " + std::to_string(p));
        return 1.0;
    }
    return p;
}

inline cvector uniform_state(std::size_t n) {
    if (n < 1) throw InvalidParameter("uniform_state: need at least one vertex");
    return cvector(n, complexd{1.0 / std::sqrt(static_cast<double>(n)), 0.0});
}

inline double finding_probability(const cvector& state, std::size_t s) {
    if (s >= state.size()) throw InvalidParameter("finding_probability: index out of range");
    return clamp_probability(std::norm(state[s]));
}

/// Search setup on a concrete graph: rank-one term on the marked vertex plus
/// the coupling times the adjacency matrix, with its spectrum ready for
/// evolution at arbitrary times.
struct SearchInstance {
    Graph graph;
    std::size_t marked;
    double gamma;
    HermitianMatrix hamiltonian;
    Spectrum spectrum;
};

inline SearchInstance make_search_instance(Graph g, std::size_t marked, double gamma) {
    if (marked >= g.vertex_count()) throw InvalidParameter("make_search_instance: marked vertex out of range");
    if (!std::isfinite(gamma)) throw InvalidParameter("make_search_instance: coupling must be finite");
    HermitianMatrix h(g.vertex_count());
    for (const auto& [u, v] : g.edges()) h.set(u, v, complexd{gamma, 0.0});
    h.set(marked, marked, complexd{1.0, 0.0});
    Spectrum s = decompose(h);
    return SearchInstance{std::move(g), marked, gamma, std::move(h), std::move(s)};
}

/// Probability of finding the walker on the marked vertex at time t, from the
/// full-dimensional evolution of the uniform state.
inline double run_search_full(const SearchInstance& inst, double t) {
    const cvector evolved = evolve(inst.spectrum, t, uniform_state(inst.graph.vertex_count()));
    return finding_probability(evolved, inst.marked);
}

/// Same probability from the cell-level reduction alone.
inline double run_search_quotient(const QuotientHamiltonian& q, double t) {
    const Spectrum s = decompose(q.hamiltonian_matrix());
    const cvector evolved = evolve(s, t, uniform_quotient_state(q.sizes));
    return finding_probability(evolved, 0);
}

/// Predicted success probability when a transfer certificate lands on the
/// marked cell: the relative size of the source cell.
inline double theorem_probability(const QuotientHamiltonian& q, const PstCertificate& cert) {
    if (cert.target != 0) throw InvalidParameter("theorem_probability: certificate must target the marked cell");
    if (cert.source >= q.cell_count()) throw InvalidParameter("theorem_probability: source cell out of range");
    return static_cast<double>(q.sizes[cert.source]) / static_cast<double>(q.vertex_total);
}

enum class ExampleFamily { complete, cyclepair };

inline const char* to_string(ExampleFamily f) {
    return f == ExampleFamily::complete ? "complete" : "cyclepair";
}

struct VerifyOptions {
    std::size_t full_cap = 2048;   // largest N simulated in full
    std::size_t curve_points = 50;
    double tol = 1e-9;
    long long max_denominator = 1000000;
    std::size_t times_count = 8;
};

/// End-to-end record for one example family instance: the certificate, the
/// probability at the found time, the predicted value, the sampled curve,
/// and (when the full simulation ran) the worst full-vs-quotient deviation.
struct SearchReport {
    std::string family;
    long long parameter = 0;      // N for complete, k for cyclepair
    std::size_t vertex_total = 0;
    double gamma = 0.0;
    bool quotient_only = false;
    double tau = 0.0;             // minimal transfer time into the marked cell
    double probability = 0.0;     // quotient probability at tau
    double theorem_probability = 0.0;
    double theorem_residual = 0.0;
    std::optional<PstCertificate> certificate;
    PstTimes transfer_times;
    std::vector<double> curve_times;
    std::vector<double> curve_probabilities;  // quotient values
    std::optional<double> full_probability;   // at tau
    std::optional<double> oracle_residual;    // max |full - quotient| over the curve and at tau
    std::optional<double> asymptotic_deviation;  // cyclepair: |(1 - P) - 1/sqrt(N)|
};

namespace detail {

struct FamilySetup {
    std::vector<std::size_t> sizes;
    std::vector<std::vector<long long>> dtable;
    double gamma = 0.0;
    double headline_time = 0.0;  // curve spans [0, 2 * headline_time]
};

inline FamilySetup family_setup(ExampleFamily family, long long parameter) {
    FamilySetup f;
    if (family == ExampleFamily::complete) {
        if (parameter < 3)
            throw InvalidParameter("complete family: need N >= 3 (the preset coupling 1/(N-2) requires it)");
        const long long n = parameter;
        f.sizes = {1, static_cast<std::size_t>(n - 1)};
        f.dtable = {{0, n - 1}, {1, n - 2}};
        f.gamma = 1.0 / static_cast<double>(n - 2);
        f.headline_time = static_cast<double>(n - 2) * std::numbers::pi /
                          (2.0 * std::sqrt(static_cast<double>(n - 1)));
    } else {
        if (parameter < 1) throw InvalidParameter("cyclepair family: need k >= 1");
        const long long k = parameter;
        const long long m = 2 * (2 * k + 1) * (2 * k + 1);
        f.sizes = {1, static_cast<std::size_t>(m), static_cast<std::size_t>(m * m)};
        f.dtable = {{0, m, 0}, {1, 2, m}, {0, 1, 2}};
        f.gamma = 0.5;
        f.headline_time = std::numbers::pi;
    }
    return f;
}

inline Graph build_family_graph(ExampleFamily family, long long parameter) {
    if (family == ExampleFamily::complete) return complete_graph(static_cast<std::size_t>(parameter));
    return cyclepair_graph(static_cast<std::size_t>(parameter));
}

}  // namespace detail

/// Builds the family quotient, finds the transfer into the marked cell,
/// compares the probability at the found time against the predicted cell
/// fraction, and (for N within the cap) repeats everything on the concrete
/// graph as an independent oracle.
inline SearchReport verify_example(ExampleFamily family, long long parameter,
                                   const VerifyOptions& opts = {}) {
    const auto setup = detail::family_setup(family, parameter);
    const QuotientHamiltonian q = quotient_from_degree_table(setup.sizes, setup.dtable, setup.gamma);
    const Spectrum qs = decompose(q.hamiltonian_matrix());
    const cvector q0 = uniform_quotient_state(q.sizes);

    SearchReport report;
    report.family = to_string(family);
    report.parameter = parameter;
    report.vertex_total = q.vertex_total;
    report.gamma = setup.gamma;

    // transfer into the marked cell, searched over all source cells
    std::size_t best_source = 0;
    PstTimes best;
    for (std::size_t j = 1; j < q.cell_count(); ++j) {
        PstTimes t = pst_times(qs, j, 0, opts.tol, opts.max_denominator, opts.times_count);
        if (t.found && !t.trivial && (!best.found || t.base < best.base)) {
            best = std::move(t);
            best_source = j;
        }
    }
    if (!best.found) throw NumericError("verify_example: no transfer into the marked cell was found");
    report.transfer_times = best;
    report.tau = best.base;
    auto cert = check_pst_at(qs, best_source, 0, best.base, opts.tol);
    if (!cert) throw NumericError("verify_example: transfer time failed the direct check");
    report.certificate = *cert;

    report.probability = clamp_probability(std::norm(evolve(qs, report.tau, q0)[0]));
    report.theorem_probability = theorem_probability(q, *cert);
    report.theorem_residual = std::abs(report.probability - report.theorem_probability);

    const std::size_t points = std::max<std::size_t>(opts.curve_points, 2);
    report.curve_times.resize(points);
    report.curve_probabilities.resize(points);
    const double span = 2.0 * setup.headline_time;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = span * static_cast<double>(i) / static_cast<double>(points - 1);
        report.curve_times[i] = t;
        report.curve_probabilities[i] = clamp_probability(std::norm(evolve(qs, t, q0)[0]));
    }

    if (q.vertex_total <= opts.full_cap) {
        const Graph g = detail::build_family_graph(family, parameter);
        const EquitablePartition p = coarsest_equitable_partition(g, 0);
        if (p.degree_table != setup.dtable)
            throw NumericError("verify_example: computed partition deviates from the family degree table");
        const SearchInstance inst = make_search_instance(g, 0, setup.gamma);
        const double full_at_tau = run_search_full(inst, report.tau);
        report.full_probability = full_at_tau;
        double residual = std::abs(full_at_tau - report.probability);
        const cvector start = uniform_state(inst.graph.vertex_count());
        for (std::size_t i = 0; i < points; ++i) {
            const double t = report.curve_times[i];
            const double full = finding_probability(evolve(inst.spectrum, t, start), 0);
            residual = std::max(residual, std::abs(full - report.curve_probabilities[i]));
        }
        report.oracle_residual = residual;
    } else {
        report.quotient_only = true;
    }

    if (family == ExampleFamily::cyclepair) {
        const double n = static_cast<double>(q.vertex_total);
        report.asymptotic_deviation = std::abs((1.0 - report.probability) - 1.0 / std::sqrt(n));
    }
    return report;
}

}  // namespace ctqw
