// Command-line front end: graph generation, equitable partitioning, walk
// simulation, transfer certification, and example-family verification.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "ctqw/ctqw.hpp"

namespace {

using namespace ctqw;

struct Common {
    std::optional<std::string> out;
    std::string format;
    double tolerance;

    void attach(CLI::App* cmd, const char* default_format, double default_tol) {
        format = default_format;
        tolerance = default_tol;
        cmd->add_option("--out", out, "write the document here instead of stdout");
        cmd->add_option("--format", format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
        cmd->add_option("--tolerance", tolerance, "numeric tolerance where applicable")
            ->capture_default_str();
    }

    void emit(const std::string& content) const {
        if (out) {
            atomic_write_file(*out, content);
        } else {
            std::cout << content;
        }
    }
};

struct GridSpec {
    double start = 0.0;
    double end = 0.0;
    long long points = 0;
};

// "start:end:steps", inclusive endpoints, steps >= 2
GridSpec parse_grid(const std::string& spec) {
    GridSpec g;
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw InvalidParameter("grid must be start:end:steps");
    try {
        g.start = std::stod(spec.substr(0, c1));
        g.end = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        g.points = std::stoll(spec.substr(c2 + 1));
    } catch (const std::exception&) {
        throw InvalidParameter("grid must be start:end:steps with numeric fields");
    }
    if (!(g.start <= g.end)) throw InvalidParameter("grid start must not exceed end");
    if (g.points < 2) throw InvalidParameter("grid needs at least 2 steps");
    return g;
}

std::vector<double> grid_points(const GridSpec& g) {
    std::vector<double> ts(static_cast<std::size_t>(g.points));
    for (std::size_t i = 0; i < ts.size(); ++i)
        ts[i] = g.start + (g.end - g.start) * static_cast<double>(i) / static_cast<double>(g.points - 1);
    return ts;
}

enum class PstInput { graph, partition, matrix };

// a JSON document is recognised by its keys; anything else is edge-list text
std::pair<PstInput, nlohmann::json> sniff_document(const std::string& content) {
    const auto pos = content.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos || content[pos] != '{') return {PstInput::graph, {}};
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad JSON: ") + e.what());
    }
    if (doc.contains("entries")) return {PstInput::matrix, doc};
    if (doc.contains("dtable")) return {PstInput::partition, doc};
    if (doc.contains("edges")) return {PstInput::graph, doc};
    throw DataError("JSON input is neither a graph, a partition, nor a matrix document");
}

int cmd_generate(const std::string& family, long long n, long long k, const Common& io) {
    std::optional<Graph> g;
    if (family == "complete") {
        if (n < 0) throw InvalidParameter("generate complete requires --n");
        if (n < 2) throw InvalidParameter("complete graph needs --n >= 2");
        g = complete_graph(static_cast<std::size_t>(n));
    } else if (family == "cycle") {
        if (n < 0) throw InvalidParameter("generate cycle requires --n");
        if (n < 3) throw InvalidParameter("cycle graph needs --n >= 3");
        g = cycle_graph(static_cast<std::size_t>(n));
    } else if (family == "cyclepair") {
        if (k < 0) throw InvalidParameter("generate cyclepair requires --k");
        if (k < 1) throw InvalidParameter("cyclepair graph needs --k >= 1");
        g = cyclepair_graph(static_cast<std::size_t>(k));
    } else {
        throw InvalidParameter("unknown family " + family + " (expected complete, cycle, cyclepair)");
    }
    io.emit(io.format == "json" ? store_graph_json(*g) : store_graph_edges(*g));
    return 0;
}

int cmd_partition(const std::string& path, long long marked, std::optional<double> gamma,
                  const Common& io) {
    const Graph g = load_graph_auto(read_file(path));
    if (marked < 0 || static_cast<std::size_t>(marked) >= g.vertex_count())
        throw InvalidParameter("marked vertex out of range");
    const EquitablePartition p = coarsest_equitable_partition(g, static_cast<std::size_t>(marked));
    if (io.format == "csv") {
        std::string doc;
        for (const auto& row : p.degree_table) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) doc += ',';
                doc += std::to_string(row[i]);
            }
            doc += '\n';
        }
        io.emit(doc);
    } else {
        io.emit(store_partition_json(p, gamma));
    }
    return 0;
}

int cmd_simulate(const std::string& path, long long marked, double gamma,
                 const std::optional<std::string>& grid, std::optional<double> at,
                 const std::string& mode, long long cap, const Common& io) {
    if (grid.has_value() == at.has_value())
        throw InvalidParameter("pass exactly one of --grid and --at");
    const Graph g = load_graph_auto(read_file(path));
    if (marked < 0 || static_cast<std::size_t>(marked) >= g.vertex_count())
        throw InvalidParameter("marked vertex out of range");
    const auto w = static_cast<std::size_t>(marked);
    const std::vector<double> ts = grid ? grid_points(parse_grid(*grid)) : std::vector<double>{*at};

    const bool fits_cap = static_cast<long long>(g.vertex_count()) <= cap;
    bool want_full, want_quotient;
    if (mode == "full") {
        want_full = true;
        want_quotient = false;
    } else if (mode == "quotient") {
        want_full = false;
        want_quotient = true;
    } else if (mode == "both") {
        want_full = want_quotient = true;
    } else if (mode == "auto") {
        want_full = fits_cap;
        want_quotient = true;
    } else {
        throw InvalidParameter("mode must be auto, full, quotient, or both");
    }

    std::vector<double> full_curve, quotient_curve;
    if (want_full) {
        const SearchInstance inst = make_search_instance(g, w, gamma);
        const cvector start = uniform_state(g.vertex_count());
        full_curve.reserve(ts.size());
        for (double t : ts) full_curve.push_back(finding_probability(evolve(inst.spectrum, t, start), w));
    }
    if (want_quotient) {
        const EquitablePartition p = coarsest_equitable_partition(g, w);
        const QuotientHamiltonian q = quotient_hamiltonian(p, gamma);
        const Spectrum qs = decompose(q.hamiltonian_matrix());
        const cvector start = uniform_quotient_state(q.sizes);
        quotient_curve.reserve(ts.size());
        for (double t : ts) quotient_curve.push_back(finding_probability(evolve(qs, t, start), 0));
    }
    const std::vector<double>& primary = want_full ? full_curve : quotient_curve;

    if (io.format == "csv") {
        io.emit(store_curve_csv(ts, primary));
        return 0;
    }
    std::string doc = "{\"n\":" + std::to_string(g.vertex_count()) + ",\"marked\":" + std::to_string(w) +
                      ",\"gamma\":" + format_double(gamma) + ",\"mode\":\"";
    doc += want_full && want_quotient ? "both" : (want_full ? "full" : "quotient");
    doc += "\",\"curve\":[";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) doc += ',';
        doc += '[' + format_double(ts[i]) + ',' + format_double(primary[i]) + ']';
    }
    doc += ']';
    if (want_full && want_quotient) {
        doc += ",\"curve_quotient\":[";
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (i) doc += ',';
            doc += '[' + format_double(ts[i]) + ',' + format_double(quotient_curve[i]) + ']';
        }
        doc += ']';
        double residual = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i)
            residual = std::max(residual, std::abs(full_curve[i] - quotient_curve[i]));
        doc += ",\"max_residual\":" + format_double(residual);
    }
    doc += "}\n";
    io.emit(doc);
    return 0;
}

int cmd_pst(const std::string& path, long long j, long long k, std::optional<double> at,
            std::optional<double> gamma, long long max_den, long long times_count, const Common& io) {
    const std::string content = read_file(path);
    const auto [kind, doc] = sniff_document(content);
    std::optional<HermitianMatrix> m;
    switch (kind) {
        case PstInput::matrix:
            m = load_matrix_json(doc);
            break;
        case PstInput::partition:
            m = load_quotient_from_partition_json(doc, gamma).hamiltonian_matrix();
            break;
        case PstInput::graph:
            m = adjacency_matrix(doc.is_null() ? load_graph_edges(content) : load_graph_json(doc));
            break;
    }
    if (j < 0 || k < 0 || static_cast<std::size_t>(j) >= m->dim() || static_cast<std::size_t>(k) >= m->dim())
        throw InvalidParameter("vertex indices out of range for the loaded matrix");
    if (!(io.tolerance > 0.0)) throw InvalidParameter("tolerance must be positive");
    if (max_den < 1) throw InvalidParameter("max denominator must be positive");
    if (times_count < 1) throw InvalidParameter("times count must be positive");
    const auto src = static_cast<std::size_t>(j);
    const auto dst = static_cast<std::size_t>(k);
    const Spectrum s = decompose(*m);

    if (at) {
        const auto cert = check_pst_at(s, src, dst, *at, io.tolerance);
        if (io.format == "csv") {
            std::string csv = "tau,phase_re,phase_im\n";
            if (cert)
                csv += format_double(cert->tau, 12) + ',' + format_double(cert->phase.real(), 12) + ',' +
                       format_double(cert->phase.imag(), 12) + '\n';
            io.emit(csv);
        } else {
            io.emit(cert ? store_certificate_json(*cert)
                         : store_absent_json(src, dst, "no transfer at the given time"));
        }
        return 0;
    }

    const PstTimes times =
        pst_times(s, src, dst, io.tolerance, max_den, static_cast<std::size_t>(times_count));
    std::optional<PstCertificate> cert;
    if (times.found && !times.trivial) cert = check_pst_at(s, src, dst, times.base, io.tolerance);
    if (io.format == "csv") {
        std::string csv = "tau,phase_re,phase_im\n";
        for (const auto& t : times.times)
            csv += format_double(t.tau, 12) + ',' + format_double(t.phase.real(), 12) + ',' +
                   format_double(t.phase.imag(), 12) + '\n';
        io.emit(csv);
    } else {
        io.emit(store_times_json(src, dst, times, cert));
    }
    return 0;
}

int cmd_verify(const std::string& family, long long n, long long k, long long cap, long long points,
               const Common& io) {
    ExampleFamily fam;
    long long parameter;
    if (family == "complete") {
        if (n < 0) throw InvalidParameter("verify complete requires --n");
        fam = ExampleFamily::complete;
        parameter = n;
    } else if (family == "cyclepair") {
        if (k < 0) throw InvalidParameter("verify cyclepair requires --k");
        fam = ExampleFamily::cyclepair;
        parameter = k;
    } else {
        throw InvalidParameter("unknown family " + family + " (expected complete or cyclepair)");
    }
    if (cap < 0) throw InvalidParameter("cap must be non-negative");
    if (points < 2) throw InvalidParameter("curve needs at least 2 points");

    VerifyOptions opts;
    opts.full_cap = static_cast<std::size_t>(cap);
    opts.curve_points = static_cast<std::size_t>(points);
    const SearchReport report = verify_example(fam, parameter, opts);

    if (io.format == "csv") {
        io.emit(store_curve_csv(report.curve_times, report.curve_probabilities));
    } else {
        io.emit(store_report_json(report));
    }

    bool ok = report.certificate.has_value() && report.theorem_residual <= io.tolerance &&
              report.certificate->deficit <= io.tolerance;
    if (report.oracle_residual && *report.oracle_residual > io.tolerance) ok = false;
    if (!ok) std::cerr << "verification residuals exceed tolerance " << format_double(io.tolerance) << "\n";
    return ok ? 0 : 4;
}

int run(int argc, char** argv) {
    CLI::App app{"continuous-time quantum walk search on graphs: equitable quotients and state transfer"};
    app.require_subcommand(1);
    app.footer("exit codes: 0 success, 2 usage or parameter error, 3 input data error, 4 numeric failure\n"
               "numbers: JSON carries 17 significant digits, CSV 12");

    auto* gen = app.add_subcommand("generate", "write a graph of a named family as a canonical edge list");
    std::string gen_family;
    long long gen_n = -1, gen_k = -1;
    gen->add_option("family", gen_family, "complete | cycle | cyclepair")->required();
    gen->add_option("--n", gen_n, "vertex count (complete, cycle)");
    gen->add_option("--k", gen_k, "cyclepair size parameter");
    Common gen_io;
    gen_io.attach(gen, "csv", 1e-9);

    auto* part = app.add_subcommand("partition", "coarsest equitable partition seeded by the marked vertex");
    std::string part_path;
    long long part_marked = 0;
    std::optional<double> part_gamma;
    part->add_option("graph", part_path, "edge-list or JSON graph file")->required();
    part->add_option("--marked", part_marked, "marked vertex")->capture_default_str();
    part->add_option("--gamma", part_gamma, "coupling to record in the document");
    Common part_io;
    part_io.attach(part, "json", 1e-9);

    auto* sim = app.add_subcommand("simulate", "search probability over time, full and/or quotient");
    std::string sim_path, sim_mode = "auto";
    long long sim_marked = 0, sim_cap = 2048;
    double sim_gamma = 0.0;
    std::optional<std::string> sim_grid;
    std::optional<double> sim_at;
    sim->add_option("graph", sim_path, "edge-list or JSON graph file")->required();
    sim->add_option("--marked", sim_marked, "marked vertex")->capture_default_str();
    sim->add_option("--gamma", sim_gamma, "coupling in front of the adjacency matrix")->required();
    sim->add_option("--grid", sim_grid, "time grid start:end:steps (inclusive, steps >= 2)");
    sim->add_option("--at", sim_at, "single evaluation time");
    sim->add_option("--mode", sim_mode, "auto | full | quotient | both")->capture_default_str();
    sim->add_option("--cap", sim_cap, "largest vertex count simulated in full")->capture_default_str();
    Common sim_io;
    sim_io.attach(sim, "csv", 1e-9);

    auto* pst = app.add_subcommand("pst", "transfer times or a single-time certificate for a vertex pair");
    std::string pst_path;
    long long pst_j = 0, pst_k = 0, pst_maxden = 1000000, pst_count = 8;
    std::optional<double> pst_at, pst_gamma;
    pst->add_option("file", pst_path, "graph, partition, or matrix file")->required();
    pst->add_option("j", pst_j, "source index")->required();
    pst->add_option("k", pst_k, "target index")->required();
    pst->add_option("--at", pst_at, "check this time only");
    pst->add_option("--gamma", pst_gamma, "coupling override for partition input");
    pst->add_option("--max-denominator", pst_maxden, "bound for gap rationalization")->capture_default_str();
    pst->add_option("--times", pst_count, "how many transfer times to list")->capture_default_str();
    Common pst_io;
    pst_io.attach(pst, "json", 1e-9);

    auto* ver = app.add_subcommand("verify", "reproduce a named search family end to end");
    std::string ver_family;
    long long ver_n = -1, ver_k = -1, ver_cap = 2048, ver_points = 50;
    ver->add_option("family", ver_family, "complete | cyclepair")->required();
    ver->add_option("--n", ver_n, "complete-family vertex count");
    ver->add_option("--k", ver_k, "cyclepair size parameter");
    ver->add_option("--cap", ver_cap, "largest vertex count simulated in full")->capture_default_str();
    ver->add_option("--points", ver_points, "curve sample count")->capture_default_str();
    Common ver_io;
    ver_io.attach(ver, "json", 1e-8);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    if (*gen) return cmd_generate(gen_family, gen_n, gen_k, gen_io);
    if (*part) return cmd_partition(part_path, part_marked, part_gamma, part_io);
    if (*sim) return cmd_simulate(sim_path, sim_marked, sim_gamma, sim_grid, sim_at, sim_mode, sim_cap, sim_io);
    if (*pst) return cmd_pst(pst_path, pst_j, pst_k, pst_at, pst_gamma, pst_maxden, pst_count, pst_io);
    if (*ver) return cmd_verify(ver_family, ver_n, ver_k, ver_cap, ver_points, ver_io);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ctqw::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ctqw::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
