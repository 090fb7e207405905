#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "ctqw/search.hpp"

using namespace ctqw;

namespace {
constexpr double kPi = std::numbers::pi;

// independent route: truncated power series applied to the start state
cvector taylor_evolve(const HermitianMatrix& m, double t, const cvector& start, int terms) {
    cvector sum = start;
    cvector term = start;
    const complexd it{0.0, t};
    for (int k = 1; k <= terms; ++k) {
        term = m.apply(term);
        for (auto& c : term) c *= it / static_cast<double>(k);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
    }
    return sum;
}
}  // namespace

TEST_CASE("uniform state") {
    const cvector u4 = uniform_state(4);
    for (const auto& c : u4) REQUIRE(c == complexd{0.5, 0.0});
    REQUIRE(uniform_state(1) == cvector{complexd{1.0, 0.0}});
    REQUIRE(std::abs(vec_norm(uniform_state(343)) - 1.0) < 1e-14);
    REQUIRE_THROWS_AS(uniform_state(0), InvalidParameter);
}

TEST_CASE("finding probability") {
    REQUIRE(finding_probability(uniform_state(4), 0) == Catch::Approx(0.25).margin(1e-15));
    cvector e2(4, complexd{});
    e2[2] = complexd{1.0, 0.0};
    REQUIRE(finding_probability(e2, 2) == 1.0);
    REQUIRE(finding_probability(e2, 0) == 0.0);
    REQUIRE_THROWS_AS(finding_probability(e2, 4), InvalidParameter);
}

TEST_CASE("probability clamping") {
    REQUIRE(clamp_probability(-1e-13) == 0.0);
    REQUIRE(clamp_probability(1.0 + 1e-13) == 1.0);
    REQUIRE_THROWS_AS(clamp_probability(-1e-9), NumericError);
    REQUIRE_THROWS_AS(clamp_probability(1.0 + 1e-9), NumericError);
}

TEST_CASE("search instance structure") {
    const SearchInstance inst = make_search_instance(complete_graph(4), 0, 0.5);
    // removing the coupling term leaves exactly one unit on the marked vertex
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            const double adj = (r != c) ? 0.5 : 0.0;
            const double expect = (r == 0 && c == 0) ? 1.0 : adj;
            REQUIRE(inst.hamiltonian.entry(r, c).real() == Catch::Approx(expect).margin(1e-15));
            REQUIRE(inst.hamiltonian.entry(r, c).imag() == 0.0);
        }
    REQUIRE_THROWS_AS(make_search_instance(complete_graph(4), 9, 0.5), InvalidParameter);
}

TEST_CASE("full search probabilities") {
    const SearchInstance k5 = make_search_instance(complete_graph(5), 0, 0.37);
    REQUIRE(run_search_full(k5, 0.0) == Catch::Approx(0.2).margin(1e-13));

    // K_4 with coupling 1/2 peaks at 3/4 at time pi/sqrt(3)
    const SearchInstance k4 = make_search_instance(complete_graph(4), 0, 0.5);
    const double t4 = kPi / std::sqrt(3.0);
    REQUIRE(run_search_full(k4, t4) == Catch::Approx(0.75).margin(1e-12));
    // cross-check through the power series
    const cvector series = taylor_evolve(k4.hamiltonian, t4, uniform_state(4), 60);
    REQUIRE(std::norm(series[0]) == Catch::Approx(run_search_full(k4, t4)).margin(1e-10));
}

TEST_CASE("full search on the cyclepair family") {
    const SearchInstance inst = make_search_instance(cyclepair_graph(1), 0, 0.5);
    REQUIRE(run_search_full(inst, kPi) == Catch::Approx(324.0 / 343.0).margin(1e-8));

    // probability conservation across the vertex set
    const cvector evolved = evolve(inst.spectrum, 1.3, uniform_state(343));
    double total = 0.0;
    for (std::size_t v = 0; v < 343; ++v) total += finding_probability(evolved, v);
    REQUIRE(total == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("quotient search probabilities") {
    for (long long n : {4LL, 10LL, 100LL}) {
        const auto q = quotient_from_degree_table({1, static_cast<std::size_t>(n - 1)},
                                                  {{0, n - 1}, {1, n - 2}},
                                                  1.0 / static_cast<double>(n - 2));
        const double tau = static_cast<double>(n - 2) * kPi / (2.0 * std::sqrt(static_cast<double>(n - 1)));
        REQUIRE(run_search_quotient(q, 0.0) ==
                Catch::Approx(1.0 / static_cast<double>(n)).margin(1e-13));
        REQUIRE(run_search_quotient(q, tau) ==
                Catch::Approx(1.0 - 1.0 / static_cast<double>(n)).margin(1e-12));
    }
    const auto q = quotient_from_degree_table({1, 18, 324}, {{0, 18, 0}, {1, 2, 18}, {0, 1, 2}}, 0.5);
    REQUIRE(run_search_quotient(q, kPi) == Catch::Approx(324.0 / 343.0).margin(1e-12));
}

TEST_CASE("theorem probability") {
    const auto q = quotient_from_degree_table({1, 99}, {{0, 99}, {1, 98}}, 1.0 / 98.0);
    PstCertificate cert;
    cert.source = 1;
    cert.target = 0;
    REQUIRE(theorem_probability(q, cert) == Catch::Approx(0.99).margin(1e-15));

    cert.target = 1;
    REQUIRE_THROWS_AS(theorem_probability(q, cert), InvalidParameter);

    // single-cell graph: the whole space is the marked cell
    const auto single = quotient_from_degree_table({1}, {{0}}, 0.7);
    PstCertificate self;
    REQUIRE(theorem_probability(single, self) == 1.0);
}

TEST_CASE("verify the complete family") {
    const SearchReport r = verify_example(ExampleFamily::complete, 100);
    REQUIRE(r.family == "complete");
    REQUIRE(r.vertex_total == 100);
    REQUIRE_FALSE(r.quotient_only);
    const double expect_tau = 98.0 * kPi / (2.0 * std::sqrt(99.0));
    REQUIRE(r.tau == Catch::Approx(expect_tau).epsilon(1e-12));
    REQUIRE(r.probability == Catch::Approx(0.99).margin(1e-10));
    REQUIRE(r.theorem_probability == Catch::Approx(0.99).margin(1e-15));
    REQUIRE(r.theorem_residual < 1e-10);
    REQUIRE(r.certificate.has_value());
    REQUIRE(r.certificate->source == 1);
    REQUIRE(r.oracle_residual.has_value());
    REQUIRE(*r.oracle_residual < 1e-9);
    REQUIRE(r.curve_times.size() == 50);
    REQUIRE(r.curve_probabilities.front() == Catch::Approx(0.01).margin(1e-12));
}

TEST_CASE("verify the complete family above the cap") {
    VerifyOptions opts;
    opts.full_cap = 64;
    const SearchReport r = verify_example(ExampleFamily::complete, 1000, opts);
    REQUIRE(r.quotient_only);
    REQUIRE_FALSE(r.full_probability.has_value());
    REQUIRE_FALSE(r.oracle_residual.has_value());
    REQUIRE(r.probability == Catch::Approx(0.999).margin(1e-10));
}

TEST_CASE("verify the cyclepair family") {
    const SearchReport r = verify_example(ExampleFamily::cyclepair, 1);
    REQUIRE(r.vertex_total == 343);
    REQUIRE(r.gamma == 0.5);
    // minimal transfer time is pi/3 for k=1; the headline crossing at pi is
    // an odd multiple of it
    REQUIRE(r.tau == Catch::Approx(kPi / 3.0).epsilon(1e-12));
    REQUIRE(r.probability == Catch::Approx(324.0 / 343.0).margin(1e-10));
    REQUIRE(r.theorem_residual < 1e-10);
    REQUIRE(r.certificate->source == 2);
    REQUIRE(r.oracle_residual.has_value());
    REQUIRE(*r.oracle_residual < 1e-8);
    REQUIRE(r.asymptotic_deviation.has_value());
    const double expect_dev = std::abs(19.0 / 343.0 - 1.0 / std::sqrt(343.0));
    REQUIRE(*r.asymptotic_deviation == Catch::Approx(expect_dev).margin(1e-10));
    // the deviation itself is about 1.4e-3
    REQUIRE(*r.asymptotic_deviation == Catch::Approx(0.0013987).margin(1e-6));
}

TEST_CASE("verify parameter errors") {
    REQUIRE_THROWS_AS(verify_example(ExampleFamily::complete, 2), InvalidParameter);
    REQUIRE_THROWS_AS(verify_example(ExampleFamily::cyclepair, 0), InvalidParameter);
}

TEST_CASE("transfer time scaling for the complete family") {
    // tau(N)/sqrt(N) approaches pi/2 from below
    double prev_dev = 1.0;
    for (long long n : {100LL, 10000LL, 1000000LL}) {
        VerifyOptions opts;
        opts.full_cap = 0;  // quotient route only
        const SearchReport r = verify_example(ExampleFamily::complete, n, opts);
        const double ratio = r.tau / std::sqrt(static_cast<double>(n));
        const double dev = std::abs(ratio - kPi / 2.0) / (kPi / 2.0);
        REQUIRE(dev < prev_dev);
        prev_dev = dev;
    }
    REQUIRE(prev_dev < 1e-5);
}
