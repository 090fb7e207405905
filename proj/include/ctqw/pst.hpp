#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ctqw/errors.hpp"
#include "ctqw/rational.hpp"
#include "ctqw/spectral.hpp"

namespace ctqw {

/// Sign relating an eigenvector's components on the transfer pair:
/// v(j) == v(k) (plus), v(j) == -v(k) (minus), or both negligible (none).
enum class Parity { plus, minus, none };

inline const char* to_string(Parity p) {
    switch (p) {
        case Parity::plus: return "plus";
        case Parity::minus: return "minus";
        default: return "null";
    }
}

struct ParityReport {
    bool ok = false;
    std::vector<Parity> parities;        // per eigenvector, when ok
    double max_magnitude_mismatch = 0.0; // max | ||P_C e_j|| - ||P_C e_k|| | over clusters
    std::string violation;               // empty when ok
};

/// Per-eigenvector parity classification for the pair (j, k). Degenerate
/// eigenvalues are handled per cluster so the answer does not depend on the
/// basis chosen inside the cluster: the cluster carries a single parity, and
/// a member is `none` exactly when both of its components sit below zero_tol.
inline ParityReport classify_parities(const Spectrum& s, std::size_t j, std::size_t k,
                                      double zero_tol = 1e-10, double cmp_tol = 1e-8) {
    if (j >= s.dim || k >= s.dim) throw InvalidParameter("classify_parities: index out of range");
    ParityReport report;
    report.parities.assign(s.dim, Parity::none);
    report.ok = true;
    for (const auto& [begin, end] : eigenvalue_clusters(s)) {
        double nx2 = 0.0, ny2 = 0.0, dplus2 = 0.0, dminus2 = 0.0;
        for (std::size_t l = begin; l < end; ++l) {
            const complexd xj = s.component(l, j);
            const complexd xk = s.component(l, k);
            nx2 += std::norm(xj);
            ny2 += std::norm(xk);
            dplus2 += std::norm(xj - xk);
            dminus2 += std::norm(xj + xk);
        }
        const double nx = std::sqrt(nx2);
        const double ny = std::sqrt(ny2);
        report.max_magnitude_mismatch = std::max(report.max_magnitude_mismatch, std::abs(nx - ny));
        if (nx <= zero_tol && ny <= zero_tol) continue;  // cluster invisible to the pair
        Parity cluster_parity;
        if (std::abs(nx - ny) > cmp_tol) {
            report.ok = false;
            report.violation = "component magnitudes differ on eigenvalue cluster starting at index " +
                               std::to_string(begin) + " (" + std::to_string(nx) + " vs " +
                               std::to_string(ny) + ")";
            break;
        } else if (std::sqrt(dplus2) <= cmp_tol) {
            cluster_parity = Parity::plus;
        } else if (std::sqrt(dminus2) <= cmp_tol) {
            cluster_parity = Parity::minus;
        } else {
            report.ok = false;
            report.violation = "mixed parity on eigenvalue cluster starting at index " +
                               std::to_string(begin);
            break;
        }
        for (std::size_t l = begin; l < end; ++l) {
            if (s.component_magnitude(l, j) < zero_tol && s.component_magnitude(l, k) < zero_tol)
                continue;  // stays none
            report.parities[l] = cluster_parity;
        }
    }
    if (!report.ok) report.parities.clear();
    return report;
}

struct CongruenceReport {
    double max_phase_residual = 0.0;      // radians, worst wrap distance
    double max_magnitude_residual = 0.0;  // worst | |v(j)| - |v(k)| |
    std::size_t reference = 0;            // eigenvector index anchoring the congruence
    std::vector<double> residuals;        // per eigenvector; meaningful where included
    std::vector<char> included;           // skipped eigenvectors have both components ~ 0
};

/// Phase-congruence test: transfer at time tau forces, for every eigenvector
/// visible to the pair, the eigenvalue drop times tau to match the difference
/// of component phases on (j, k), modulo 2*pi, relative to the top visible
/// eigenvector. Also checks the component magnitude condition.
inline CongruenceReport phase_congruence(const Spectrum& s, std::size_t j, std::size_t k, double tau,
                                             double zero_tol = 1e-10) {
    if (j >= s.dim || k >= s.dim) throw InvalidParameter("phase_congruence: index out of range");
    if (!std::isfinite(tau)) throw InvalidParameter("phase_congruence: time must be finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    CongruenceReport report;
    report.residuals.assign(s.dim, 0.0);
    report.included.assign(s.dim, 0);
    std::size_t ref = s.dim;
    for (std::size_t l = 0; l < s.dim; ++l) {
        if (s.component_magnitude(l, j) < zero_tol && s.component_magnitude(l, k) < zero_tol) continue;
        report.included[l] = 1;
        if (ref == s.dim) ref = l;
    }
    if (ref == s.dim) return report;  // nothing visible; vacuous
    report.reference = ref;
    const double ref_phase_diff = s.component_phase(ref, k) - s.component_phase(ref, j);
    for (std::size_t l = 0; l < s.dim; ++l) {
        if (!report.included[l]) continue;
        report.max_magnitude_residual =
            std::max(report.max_magnitude_residual,
                     std::abs(s.component_magnitude(l, j) - s.component_magnitude(l, k)));
        const double lhs = (s.eigenvalues[ref] - s.eigenvalues[l]) * tau;
        const double rhs = (s.component_phase(l, k) - s.component_phase(l, j)) - ref_phase_diff;
        const double r = std::abs(std::remainder(lhs - rhs, two_pi));
        report.residuals[l] = r;
        report.max_phase_residual = std::max(report.max_phase_residual, r);
    }
    return report;
}

/// Evidence that (exp(i tau M))_{target,source} has unit modulus, with the
/// measured phase and the per-eigenvector parity pattern behind it.
struct PstCertificate {
    std::size_t source = 0;
    std::size_t target = 0;
    double tau = 0.0;
    complexd phase{1.0, 0.0};
    std::vector<Parity> parities;
    double deficit = 0.0;              // 1 - |U(tau)_{target,source}|
    double congruence_residual = 0.0;
    double magnitude_residual = 0.0;
};

/// Direct check of the transfer condition at a single time. Present iff
/// |U(tau)_{k,j}| >= 1 - tol; the certificate records the unit-modulus phase
/// and the residuals of the two equivalent spectral conditions.
inline std::optional<PstCertificate> check_pst_at(const Spectrum& s, std::size_t j, std::size_t k,
                                                  double tau, double tol = 1e-9) {
    if (j >= s.dim || k >= s.dim) throw InvalidParameter("check_pst_at: index out of range");
    if (!std::isfinite(tau)) throw InvalidParameter("check_pst_at: time must be finite");
    if (!(tol > 0.0)) throw InvalidParameter("check_pst_at: tolerance must be positive");
    const complexd amp = transition_amplitude(s, tau, j, k);
    const double mod = std::abs(amp);
    if (mod < 1.0 - tol) return std::nullopt;
    PstCertificate cert;
    cert.source = j;
    cert.target = k;
    cert.tau = tau;
    cert.phase = amp / mod;
    cert.deficit = std::max(0.0, 1.0 - mod);
    const auto parity = classify_parities(s, j, k);
    if (parity.ok) cert.parities = parity.parities;
    const auto cong = phase_congruence(s, j, k, tau);
    cert.congruence_residual = cong.max_phase_residual;
    cert.magnitude_residual = cong.max_magnitude_residual;
    return cert;
}

struct PstTime {
    double tau = 0.0;
    complexd phase{1.0, 0.0};
};

/// Result of the transfer-time search. When found and not trivial, the valid
/// times form the lattice base + n * stride (n >= 0) and `times` lists the
/// first few. `trivial` marks pairs whose transfer holds at every time.
struct PstTimes {
    bool found = false;
    bool trivial = false;
    std::string reason;           // why absent; empty when found
    double base = 0.0;            // minimal positive transfer time
    double stride = 0.0;
    std::vector<PstTime> times;
    double deficit = 0.0;         // measured 1 - |U(base)| as a self-check
};

/// Finds all transfer times for the pair (j, k) from the spectrum alone.
///
/// Every eigenvalue cluster visible to the pair carries a parity; writing
/// gaps from the top visible eigenvalue, a time tau works iff gap * tau is an
/// even multiple of pi on equal parity and an odd multiple on opposite
/// parity. That system is solvable exactly when the gaps are commensurable
/// (detected by continued fractions, denominators <= max_denominator) and the
/// integer gap ratios have the right parities; the minimal solution and the
/// lattice stride drop out of the gcd of those integers. A candidate is
/// accepted only after the congruences and the measured amplitude at the
/// candidate time both check out, so an accidental rational fit can never
/// produce a false time.
inline PstTimes pst_times(const Spectrum& s, std::size_t j, std::size_t k, double tol = 1e-9,
                          long long max_denominator = 1000000, std::size_t count = 8) {
    if (j >= s.dim || k >= s.dim) throw InvalidParameter("pst_times: index out of range");
    constexpr double pi = std::numbers::pi;
    PstTimes result;

    const double zero_tol = 1e-10;
    const auto parity = classify_parities(s, j, k, zero_tol);
    if (!parity.ok) {
        result.reason = "parity violation: " + parity.violation;
        return result;
    }

    // one representative (eigenvalue, parity) per visible cluster
    std::vector<std::pair<double, Parity>> reps;
    for (const auto& [begin, end] : eigenvalue_clusters(s)) {
        Parity p = Parity::none;
        double sum = 0.0;
        for (std::size_t l = begin; l < end; ++l) {
            sum += s.eigenvalues[l];
            if (p == Parity::none) p = parity.parities[l];
        }
        if (p != Parity::none) reps.emplace_back(sum / static_cast<double>(end - begin), p);
    }
    if (reps.empty()) {
        result.reason = "no eigenvector overlaps the pair";
        return result;
    }

    const double theta_ref = reps.front().first;
    const double sigma_ref = reps.front().second == Parity::plus ? 1.0 : -1.0;
    std::vector<double> gaps;
    std::vector<bool> odd_class;
    for (std::size_t i = 1; i < reps.size(); ++i) {
        gaps.push_back(theta_ref - reps[i].first);
        odd_class.push_back(reps[i].second != reps.front().second);
    }

    if (gaps.empty()) {
        // single visible eigenvalue: the pair transfers at every time
        result.found = true;
        result.trivial = true;
        return result;
    }

    const double base_gap = *std::min_element(gaps.begin(), gaps.end());
    std::vector<long long> numer(gaps.size()), denom(gaps.size());
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const Fraction f = rational_approximation(gaps[i] / base_gap, max_denominator);
        if (std::abs(gaps[i] - f.value() * base_gap) > 1e-9 * base_gap) {
            result.reason = "incommensurable eigenvalue gaps";
            return result;
        }
        numer[i] = f.num;
        denom[i] = f.den;
    }
    long long common_den = 1;
    for (long long q : denom) {
        common_den = capped_lcm(common_den, q, 1000000000000000LL);
        if (common_den == 0) {
            result.reason = "incommensurable eigenvalue gaps";
            return result;
        }
    }
    std::vector<long long> units(gaps.size());
    long long shared = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const long long mult = common_den / denom[i];
        if (numer[i] > std::numeric_limits<long long>::max() / std::max(mult, 1LL)) {
            result.reason = "incommensurable eigenvalue gaps";
            return result;
        }
        units[i] = numer[i] * mult;
        shared = std::gcd(shared, units[i]);
    }
    for (auto& u : units) u /= shared;

    // least-squares fit of the common gap unit over all measured gaps
    double num_fit = 0.0, den_fit = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        num_fit += static_cast<double>(units[i]) * gaps[i];
        den_fit += static_cast<double>(units[i]) * static_cast<double>(units[i]);
    }
    const double unit = num_fit / den_fit;

    // the integer model must reproduce every gap essentially exactly; a
    // continued-fraction fit with huge denominators fails here, which is how
    // irrational gap ratios are ruled out rather than by denominator luck
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (std::abs(gaps[i] - static_cast<double>(units[i]) * unit) > 1e-9 * unit) {
            result.reason = "incommensurable eigenvalue gaps";
            return result;
        }
    }

    // opposite parity forces an odd gap multiple, equal parity an even one;
    // with no opposite-parity gap present any integer multiple works
    const bool any_odd = std::find(odd_class.begin(), odd_class.end(), true) != odd_class.end();
    if (any_odd) {
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            if (odd_class[i] != ((units[i] % 2) != 0)) {
                result.reason = "congruence system unsatisfiable";
                return result;
            }
        }
    }
    const double base = any_odd ? pi / unit : 2.0 * pi / unit;
    const double stride = 2.0 * pi / unit;

    const double deficit = 1.0 - std::abs(transition_amplitude(s, base, j, k));
    if (deficit > tol) {
        result.reason = "amplitude self-check failed at the candidate time";
        return result;
    }

    result.found = true;
    result.base = base;
    result.stride = stride;
    result.deficit = std::max(0.0, deficit);
    result.times.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const double tau = base + static_cast<double>(n) * stride;
        result.times.push_back(PstTime{tau, sigma_ref * std::polar(1.0, tau * theta_ref)});
    }
    return result;
}

}  // namespace ctqw
