#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ctqw/errors.hpp"
#include "ctqw/matrix.hpp"

namespace ctqw {

/// Eigendecomposition of a Hermitian matrix. Eigenvalues descending,
/// eigenvectors orthonormal, stored column-major (column l = eigenvector l).
struct Spectrum {
    std::size_t dim = 0;
    std::vector<double> eigenvalues;
    cvector eigenvectors;
    bool real_eigenvectors = false;
    double scale = 0.0;  // spectral norm, max |eigenvalue|

    complexd component(std::size_t l, std::size_t j) const { return eigenvectors[l * dim + j]; }
    double component_magnitude(std::size_t l, std::size_t j) const { return std::abs(component(l, j)); }
    double component_phase(std::size_t l, std::size_t j) const { return std::arg(component(l, j)); }

    cvector eigenvector(std::size_t l) const {
        return cvector(eigenvectors.begin() + static_cast<std::ptrdiff_t>(l * dim),
                       eigenvectors.begin() + static_cast<std::ptrdiff_t>((l + 1) * dim));
    }
};

namespace detail {

/// Cyclic Jacobi for a dense real-symmetric matrix. `a` is row-major and is
/// destroyed; eigenvectors come back column-major. Converges when the
/// off-diagonal Frobenius norm drops below 1e-13 of the input norm; more than
/// 100 sweeps is an error, not a silent return.
inline void jacobi_real(std::size_t n, std::vector<double>& a, std::vector<double>& eval,
                        std::vector<double>& evec) {
    constexpr int kMaxSweeps = 100;
    constexpr double kOffTarget = 1e-13;

    evec.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) evec[i * n + i] = 1.0;
    eval.assign(n, 0.0);

    double fnorm = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) fnorm += a[i] * a[i];
    fnorm = std::sqrt(fnorm);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
        return std::sqrt(2.0 * s);
    };

    bool converged = (n == 1) || fnorm == 0.0;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        const double off = off_norm();
        if (off <= kOffTarget * fnorm) {
            converged = true;
            break;
        }
        const double tresh = (sweep < 3) ? 0.2 * off * off / static_cast<double>(n * n) : 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                const double g = 100.0 * std::abs(apq);
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                // negligible against the diagonal: zero it and move on
                if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
                    a[p * n + q] = a[q * n + p] = 0.0;
                    continue;
                }
                if (std::abs(apq) <= tresh) continue;
                double t;
                const double theta = (aqq - app) / (2.0 * apq);
                if (std::abs(theta) > 1e154) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = a[q * n + p] = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[r * n + p];
                    const double arq = a[r * n + q];
                    const double nrp = arp - s * (arq + tau * arp);
                    const double nrq = arq + s * (arp - tau * arq);
                    a[r * n + p] = a[p * n + r] = nrp;
                    a[r * n + q] = a[q * n + r] = nrq;
                }
                double* vp = evec.data() + p * n;
                double* vq = evec.data() + q * n;
                for (std::size_t r = 0; r < n; ++r) {
                    const double xp = vp[r];
                    const double xq = vq[r];
                    vp[r] = xp - s * (xq + tau * xp);
                    vq[r] = xq + s * (xp - tau * xq);
                }
            }
        }
    }
    if (!converged && off_norm() > kOffTarget * fnorm)
        throw NumericError("jacobi: no convergence within 100 sweeps");
    for (std::size_t i = 0; i < n; ++i) eval[i] = a[i * n + i];
}

inline std::size_t first_significant_index(const cvector& v, double tol = 1e-8) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > tol) return i;
    return v.size();
}

/// Sorts descending, orders near-degenerate runs by the first significant
/// component's index, and fixes each eigenvector's global phase so that
/// component real and positive. Real input stays real.
inline void finalize_spectrum(Spectrum& s, std::vector<std::pair<double, cvector>>& pairs) {
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    double scale = 0.0;
    for (const auto& [ev, vec] : pairs) scale = std::max(scale, std::abs(ev));
    const double cluster_tol = 1e-9 * std::max(scale, 1e-300);
    std::size_t begin = 0;
    while (begin < pairs.size()) {
        std::size_t end = begin + 1;
        while (end < pairs.size() && pairs[end - 1].first - pairs[end].first <= cluster_tol) ++end;
        std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(begin),
                         pairs.begin() + static_cast<std::ptrdiff_t>(end), [](const auto& a, const auto& b) {
                             return first_significant_index(a.second) < first_significant_index(b.second);
                         });
        begin = end;
    }
    s.eigenvalues.resize(pairs.size());
    s.eigenvectors.assign(pairs.size() * s.dim, complexd{});
    double max_imag = 0.0;
    for (std::size_t l = 0; l < pairs.size(); ++l) {
        s.eigenvalues[l] = pairs[l].first;
        cvector& v = pairs[l].second;
        const std::size_t lead = first_significant_index(v);
        if (lead < v.size()) {
            const complexd ph = v[lead] / std::abs(v[lead]);
            const complexd fix = std::conj(ph);
            for (auto& x : v) x *= fix;
        }
        for (std::size_t j = 0; j < s.dim; ++j) {
            s.eigenvectors[l * s.dim + j] = v[j];
            max_imag = std::max(max_imag, std::abs(v[j].imag()));
        }
    }
    s.scale = scale;
    s.real_eigenvectors = max_imag <= 1e-12;
}

}  // namespace detail

/// Full eigendecomposition. Real-symmetric input runs cyclic Jacobi directly;
/// complex-Hermitian input goes through the standard real embedding of twice
/// the dimension, with conjugate pairs merged back into complex eigenvectors.
inline Spectrum decompose(const HermitianMatrix& m) {
    const std::size_t n = m.dim();
    for (const auto& e : m.entries())
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw DataError("decompose: non-finite matrix entry");

    Spectrum s;
    s.dim = n;
    std::vector<std::pair<double, cvector>> pairs;

    if (m.is_real()) {
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n * n; ++i) a[i] = m.entries()[i].real();
        std::vector<double> eval, evec;
        detail::jacobi_real(n, a, eval, evec);
        pairs.reserve(n);
        for (std::size_t l = 0; l < n; ++l) {
            cvector v(n);
            for (std::size_t j = 0; j < n; ++j) v[j] = complexd{evec[l * n + j], 0.0};
            pairs.emplace_back(eval[l], std::move(v));
        }
    } else {
        // [[Re, -Im], [Im, Re]]: every eigenvalue of m shows up twice.
        const std::size_t n2 = 2 * n;
        std::vector<double> a(n2 * n2, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                const complexd e = m.entry(r, c);
                a[r * n2 + c] = e.real();
                a[r * n2 + n + c] = -e.imag();
                a[(n + r) * n2 + c] = e.imag();
                a[(n + r) * n2 + n + c] = e.real();
            }
        }
        std::vector<double> eval, evec;
        detail::jacobi_real(n2, a, eval, evec);

        std::vector<std::size_t> order(n2);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return eval[x] > eval[y]; });
        double scale = 0.0;
        for (double ev : eval) scale = std::max(scale, std::abs(ev));
        const double cluster_tol = 1e-9 * std::max(scale, 1e-300);

        std::size_t begin = 0;
        while (begin < n2) {
            std::size_t end = begin + 1;
            while (end < n2 && eval[order[end - 1]] - eval[order[end]] <= cluster_tol) ++end;
            const std::size_t count = end - begin;
            if (count % 2 != 0)
                throw NumericError("decompose: embedding produced an odd eigenvalue cluster");
            const std::size_t want = count / 2;

            std::vector<cvector> cands;
            cands.reserve(count);
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t col = order[i];
                cvector w(n);
                for (std::size_t j = 0; j < n; ++j)
                    w[j] = complexd{evec[col * n2 + j], evec[col * n2 + n + j]};
                cands.push_back(std::move(w));
            }
            // Pivoted Gram-Schmidt: the 2g real basis vectors map onto a
            // g-dimensional complex eigenspace; keep the g best-conditioned.
            std::vector<cvector> accepted;
            while (accepted.size() < want) {
                std::size_t best = cands.size();
                double best_norm = 0.3;
                for (std::size_t i = 0; i < cands.size(); ++i) {
                    const double nn = vec_norm(cands[i]);
                    if (nn > best_norm) {
                        best_norm = nn;
                        best = i;
                    }
                }
                if (best == cands.size())
                    throw NumericError("decompose: eigenvector pairing failed");
                cvector v = cands[best];
                for (auto& x : v) x /= best_norm;
                for (auto& c : cands) {
                    const complexd proj = vec_dot(v, c);
                    for (std::size_t j = 0; j < n; ++j) c[j] -= proj * v[j];
                }
                accepted.push_back(std::move(v));
            }
            for (auto& v : accepted) {
                const cvector mv = m.apply(v);
                const double mu = vec_dot(v, mv).real();
                pairs.emplace_back(mu, std::move(v));
            }
            begin = end;
        }
    }

    detail::finalize_spectrum(s, pairs);
    return s;
}

/// exp(i t M) as a dense complex matrix, assembled from the spectrum.
inline cvector unitary_at(const Spectrum& s, double t) {
    if (!std::isfinite(t)) throw InvalidParameter("unitary_at: time must be finite");
    const std::size_t n = s.dim;
    cvector u(n * n, complexd{});
    for (std::size_t l = 0; l < n; ++l) {
        const complexd ph = std::polar(1.0, t * s.eigenvalues[l]);
        const complexd* v = s.eigenvectors.data() + l * n;
        for (std::size_t r = 0; r < n; ++r) {
            const complexd f = ph * v[r];
            for (std::size_t c = 0; c < n; ++c) u[r * n + c] += f * std::conj(v[c]);
        }
    }
    return u;
}

/// exp(i t M) |state>, via eigenbasis coefficients; O(dim^2).
inline cvector evolve(const Spectrum& s, double t, const cvector& state) {
    if (!std::isfinite(t)) throw InvalidParameter("evolve: time must be finite");
    if (state.size() != s.dim) throw InvalidParameter("evolve: state dimension mismatch");
    const std::size_t n = s.dim;
    cvector coeff(n);
    for (std::size_t l = 0; l < n; ++l) {
        const complexd* v = s.eigenvectors.data() + l * n;
        complexd c{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) c += std::conj(v[j]) * state[j];
        coeff[l] = c * std::polar(1.0, t * s.eigenvalues[l]);
    }
    cvector out(n, complexd{});
    for (std::size_t l = 0; l < n; ++l) {
        const complexd* v = s.eigenvectors.data() + l * n;
        for (std::size_t j = 0; j < n; ++j) out[j] += coeff[l] * v[j];
    }
    return out;
}

/// Single entry (exp(i t M))_{to,from}; O(dim).
inline complexd transition_amplitude(const Spectrum& s, double t, std::size_t from, std::size_t to) {
    if (from >= s.dim || to >= s.dim) throw InvalidParameter("transition_amplitude: index out of range");
    complexd a{0.0, 0.0};
    for (std::size_t l = 0; l < s.dim; ++l)
        a += std::polar(1.0, t * s.eigenvalues[l]) * s.component(l, to) * std::conj(s.component(l, from));
    return a;
}

/// Half-open [begin,end) runs of near-equal eigenvalues (gap below rel_tol
/// of the spectral norm).
inline std::vector<std::pair<std::size_t, std::size_t>> eigenvalue_clusters(const Spectrum& s,
                                                                            double rel_tol = 1e-9) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    const double tol = rel_tol * std::max(s.scale, 1e-300);
    std::size_t begin = 0;
    while (begin < s.dim) {
        std::size_t end = begin + 1;
        while (end < s.dim && s.eigenvalues[end - 1] - s.eigenvalues[end] <= tol) ++end;
        runs.emplace_back(begin, end);
        begin = end;
    }
    return runs;
}

}  // namespace ctqw
