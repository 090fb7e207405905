#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctqw/errors.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/matrix.hpp"
#include "ctqw/partition.hpp"
#include "ctqw/pst.hpp"
#include "ctqw/search.hpp"

namespace ctqw {

/// JSON output carries 17 significant digits (lossless doubles), CSV 12.
inline std::string format_double(double v, int significant = 17) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant, v);
    return std::string(buf);
}

namespace detail {

inline void append_double(std::string& out, double v) { out += format_double(v); }

inline void append_size_array(std::string& out, const std::vector<std::size_t>& xs) {
    out += '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    out += ']';
}

inline void append_ll_table(std::string& out, const std::vector<std::vector<long long>>& t) {
    out += '[';
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (r) out += ',';
        out += '[';
        for (std::size_t c = 0; c < t[r].size(); ++c) {
            if (c) out += ',';
            out += std::to_string(t[r][c]);
        }
        out += ']';
    }
    out += ']';
}

}  // namespace detail

// ---------------------------------------------------------------------------
// graph files
//
// Edge-list text: first line is the vertex count, then one "u v" pair per
// line, 0-based. Canonical form: u < v, pairs sorted lexicographically.
// The JSON form mirrors the same fields: {"n": ..., "edges": [[u,v], ...]}.
// ---------------------------------------------------------------------------

inline std::string store_graph_edges(const Graph& g) {
    std::string out = std::to_string(g.vertex_count());
    out += '\n';
    for (const auto& [u, v] : g.edges()) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
    }
    return out;
}

inline Graph load_graph_edges(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::size_t n = 0;
    bool have_n = false;
    Graph::EdgeList edges;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        if (!have_n) {
            long long count = -1;
            ls >> count;
            std::string rest;
            if (!ls || (ls >> rest) || count < 1)
                throw DataError("line " + std::to_string(lineno) + ": expected a positive vertex count");
            n = static_cast<std::size_t>(count);
            have_n = true;
            continue;
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        long long u = -1, v = -1;
        ls >> u >> v;
        std::string rest;
        if (!ls || (ls >> rest))
            throw DataError("line " + std::to_string(lineno) + ": expected \"u v\"");
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
            throw DataError("line " + std::to_string(lineno) + ": endpoint out of range");
        if (u == v) throw DataError("line " + std::to_string(lineno) + ": self-loop at vertex " +
                                    std::to_string(u));
        auto e = std::make_pair(static_cast<std::size_t>(std::min(u, v)),
                                static_cast<std::size_t>(std::max(u, v)));
        edges.push_back(e);
    }
    if (!have_n) throw DataError("line 1: empty graph file");
    std::sort(edges.begin(), edges.end());
    const auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end())
        throw DataError("duplicate edge " + std::to_string(dup->first) + " " + std::to_string(dup->second));
    return Graph(n, std::move(edges));
}

inline std::string store_graph_json(const Graph& g) {
    std::string out = "{\"n\":" + std::to_string(g.vertex_count()) + ",\"edges\":[";
    bool first = true;
    for (const auto& [u, v] : g.edges()) {
        if (!first) out += ',';
        first = false;
        out += '[' + std::to_string(u) + ',' + std::to_string(v) + ']';
    }
    out += "]}\n";
    return out;
}

inline Graph load_graph_json(const nlohmann::json& doc) {
    if (!doc.contains("n") || !doc.contains("edges")) throw DataError("graph document needs n and edges");
    const auto n = doc.at("n").get<long long>();
    if (n < 1) throw DataError("graph document: vertex count must be positive");
    Graph::EdgeList edges;
    for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw DataError("graph document: edges must be [u,v] pairs");
        const auto u = e.at(0).get<long long>();
        const auto v = e.at(1).get<long long>();
        if (u < 0 || v < 0 || u >= n || v >= n) throw DataError("graph document: endpoint out of range");
        if (u == v) throw DataError("graph document: self-loop at vertex " + std::to_string(u));
        edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw DataError("graph document: duplicate edge");
    return Graph(static_cast<std::size_t>(n), std::move(edges));
}

/// Accepts either the edge-list text or the JSON form.
inline Graph load_graph_auto(const std::string& content) {
    const auto pos = content.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && content[pos] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(content);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("bad JSON: ") + e.what());
        }
        return load_graph_json(doc);
    }
    return load_graph_edges(content);
}

// ---------------------------------------------------------------------------
// partition document: {"cells": ..., "sizes": ..., "dtable": ..., "gamma"?}
// ---------------------------------------------------------------------------

inline std::string store_partition_json(const EquitablePartition& p,
                                        std::optional<double> gamma = std::nullopt) {
    std::string out = "{\"cells\":[";
    for (std::size_t j = 0; j < p.cells.size(); ++j) {
        if (j) out += ',';
        detail::append_size_array(out, p.cells[j]);
    }
    out += "],\"sizes\":";
    detail::append_size_array(out, p.sizes);
    out += ",\"dtable\":";
    detail::append_ll_table(out, p.degree_table);
    if (gamma) {
        out += ",\"gamma\":";
        detail::append_double(out, *gamma);
    }
    out += "}\n";
    return out;
}

/// Rebuilds the quotient from a partition document; the coupling must come
/// from the document or the override.
inline QuotientHamiltonian load_quotient_from_partition_json(const nlohmann::json& doc,
                                                             std::optional<double> gamma_override) {
    if (!doc.contains("sizes") || !doc.contains("dtable"))
        throw DataError("partition document needs sizes and dtable");
    std::vector<std::size_t> sizes;
    for (const auto& s : doc.at("sizes")) {
        const auto v = s.get<long long>();
        if (v < 1) throw DataError("partition document: cell sizes must be positive");
        sizes.push_back(static_cast<std::size_t>(v));
    }
    std::vector<std::vector<long long>> dtable;
    for (const auto& row : doc.at("dtable")) dtable.push_back(row.get<std::vector<long long>>());
    double gamma;
    if (gamma_override) {
        gamma = *gamma_override;
    } else if (doc.contains("gamma")) {
        gamma = doc.at("gamma").get<double>();
    } else {
        throw InvalidParameter("partition document has no gamma; pass --gamma");
    }
    return quotient_from_degree_table(sizes, dtable, gamma);
}

// ---------------------------------------------------------------------------
// matrix document: {"dim": d, "entries": [[re, im], ...]} row-major
// ---------------------------------------------------------------------------

inline std::string store_matrix_json(const HermitianMatrix& m) {
    std::string out = "{\"dim\":" + std::to_string(m.dim()) + ",\"entries\":[";
    for (std::size_t i = 0; i < m.entries().size(); ++i) {
        if (i) out += ',';
        out += '[';
        detail::append_double(out, m.entries()[i].real());
        out += ',';
        detail::append_double(out, m.entries()[i].imag());
        out += ']';
    }
    out += "]}\n";
    return out;
}

inline HermitianMatrix load_matrix_json(const nlohmann::json& doc) {
    if (!doc.contains("dim") || !doc.contains("entries"))
        throw DataError("matrix document needs dim and entries");
    const auto dim = doc.at("dim").get<long long>();
    if (dim < 1) throw DataError("matrix document: dimension must be positive");
    cvector entries;
    for (const auto& e : doc.at("entries")) {
        if (!e.is_array() || e.size() != 2) throw DataError("matrix document: entries must be [re, im] pairs");
        entries.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
    if (entries.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim))
        throw DataError("matrix document: entry count does not match dim");
    return HermitianMatrix::checked(static_cast<std::size_t>(dim), entries);
}

// ---------------------------------------------------------------------------
// certificate / transfer-times documents
// ---------------------------------------------------------------------------

namespace detail {

inline void append_parities(std::string& out, const std::vector<Parity>& ps) {
    out += '[';
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i) out += ',';
        out += '"';
        out += to_string(ps[i]);
        out += '"';
    }
    out += ']';
}

inline void append_certificate_fields(std::string& out, const PstCertificate& cert) {
    out += "\"source\":" + std::to_string(cert.source);
    out += ",\"target\":" + std::to_string(cert.target);
    out += ",\"tau\":";
    append_double(out, cert.tau);
    out += ",\"phase\":[";
    append_double(out, cert.phase.real());
    out += ',';
    append_double(out, cert.phase.imag());
    out += "],\"parities\":";
    append_parities(out, cert.parities);
    out += ",\"residuals\":{\"deficit\":";
    append_double(out, cert.deficit);
    out += ",\"congruence\":";
    append_double(out, cert.congruence_residual);
    out += ",\"magnitude\":";
    append_double(out, cert.magnitude_residual);
    out += '}';
}

}  // namespace detail

inline std::string store_certificate_json(const PstCertificate& cert) {
    std::string out = "{\"present\":true,";
    detail::append_certificate_fields(out, cert);
    out += "}\n";
    return out;
}

inline std::string store_absent_json(std::size_t source, std::size_t target, const std::string& reason) {
    return "{\"present\":false,\"source\":" + std::to_string(source) +
           ",\"target\":" + std::to_string(target) + ",\"reason\":\"" + reason + "\"}\n";
}

inline std::string store_times_json(std::size_t source, std::size_t target, const PstTimes& times,
                                    const std::optional<PstCertificate>& cert) {
    if (!times.found) return store_absent_json(source, target, times.reason);
    std::string out = "{\"present\":true,\"source\":" + std::to_string(source) +
                      ",\"target\":" + std::to_string(target);
    out += ",\"trivial\":";
    out += times.trivial ? "true" : "false";
    if (!times.trivial) {
        out += ",\"tau\":";
        detail::append_double(out, times.base);
        out += ",\"stride\":";
        detail::append_double(out, times.stride);
        out += ",\"times\":[";
        for (std::size_t i = 0; i < times.times.size(); ++i) {
            if (i) out += ',';
            out += '[';
            detail::append_double(out, times.times[i].tau);
            out += ',';
            detail::append_double(out, times.times[i].phase.real());
            out += ',';
            detail::append_double(out, times.times[i].phase.imag());
            out += ']';
        }
        out += ']';
    }
    if (cert) {
        out += ",\"certificate\":{";
        detail::append_certificate_fields(out, *cert);
        out += '}';
    }
    out += "}\n";
    return out;
}

// ---------------------------------------------------------------------------
// search report document and curve CSV
// ---------------------------------------------------------------------------

inline std::string store_report_json(const SearchReport& r) {
    std::string out = "{\"family\":\"" + r.family + "\"";
    out += ",\"parameter\":" + std::to_string(r.parameter);
    out += ",\"n\":" + std::to_string(r.vertex_total);
    out += ",\"gamma\":";
    detail::append_double(out, r.gamma);
    out += ",\"quotient_only\":";
    out += r.quotient_only ? "true" : "false";
    out += ",\"tau\":";
    detail::append_double(out, r.tau);
    out += ",\"probability\":";
    detail::append_double(out, r.probability);
    out += ",\"theorem_probability\":";
    detail::append_double(out, r.theorem_probability);
    out += ",\"theorem_residual\":";
    detail::append_double(out, r.theorem_residual);
    if (r.full_probability) {
        out += ",\"full_probability\":";
        detail::append_double(out, *r.full_probability);
    }
    if (r.oracle_residual) {
        out += ",\"oracle_residual\":";
        detail::append_double(out, *r.oracle_residual);
    }
    if (r.asymptotic_deviation) {
        out += ",\"asymptotic_deviation\":";
        detail::append_double(out, *r.asymptotic_deviation);
    }
    if (r.certificate) {
        out += ",\"certificate\":{";
        detail::append_certificate_fields(out, *r.certificate);
        out += '}';
    }
    out += ",\"curve\":[";
    for (std::size_t i = 0; i < r.curve_times.size(); ++i) {
        if (i) out += ',';
        out += '[';
        detail::append_double(out, r.curve_times[i]);
        out += ',';
        detail::append_double(out, r.curve_probabilities[i]);
        out += ']';
    }
    out += "]}\n";
    return out;
}

inline std::string store_curve_csv(const std::vector<double>& times, const std::vector<double>& probabilities) {
    std::string out = "t,probability\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        out += format_double(times[i], 12);
        out += ',';
        out += format_double(probabilities[i], 12);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// files
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes via a temp file in the same directory plus rename, so readers never
/// observe a half-written document.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::random_device rd;
    const std::filesystem::path tmp =
        dir / (path.filename().string() + ".tmp" + std::to_string(rd() % 1000000));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw DataError("cannot move output into place at " + path.string() + ": " + ec.message());
    }
}

}  // namespace ctqw
