#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "ctqw/errors.hpp"

namespace ctqw {

using complexd = std::complex<double>;
using cvector = std::vector<complexd>;

inline double vec_norm(const cvector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

/// Inner product, conjugate-linear in the first argument.
inline complexd vec_dot(const cvector& a, const cvector& b) {
    if (a.size() != b.size()) throw InvalidParameter("vec_dot: dimension mismatch");
    complexd s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// Dense Hermitian matrix. Construction symmetrizes, so
/// entry(j,k) == conj(entry(k,j)) holds exactly for the stored values.
class HermitianMatrix {
public:
    explicit HermitianMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
        if (dim == 0) throw InvalidParameter("HermitianMatrix: dimension must be positive");
    }

    /// Builds from arbitrary row-major entries by averaging with the adjoint.
    static HermitianMatrix symmetrized(std::size_t dim, const cvector& raw) {
        if (raw.size() != dim * dim) throw InvalidParameter("HermitianMatrix: entry count mismatch");
        HermitianMatrix m(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            m.entries_[r * dim + r] = complexd{raw[r * dim + r].real(), 0.0};
            for (std::size_t c = r + 1; c < dim; ++c) {
                const complexd h = 0.5 * (raw[r * dim + c] + std::conj(raw[c * dim + r]));
                m.entries_[r * dim + c] = h;
                m.entries_[c * dim + r] = std::conj(h);
            }
        }
        return m;
    }

    /// Like symmetrized(), but rejects input whose deviation from its own
    /// adjoint exceeds tol (relative to the largest entry).
    static HermitianMatrix checked(std::size_t dim, const cvector& raw, double tol = 1e-12) {
        if (raw.size() != dim * dim) throw InvalidParameter("HermitianMatrix: entry count mismatch");
        double scale = 0.0;
        for (const auto& e : raw) scale = std::max(scale, std::abs(e));
        double dev = 0.0;
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = r; c < dim; ++c)
                dev = std::max(dev, std::abs(raw[r * dim + c] - std::conj(raw[c * dim + r])));
        if (dev > tol * std::max(scale, 1.0))
            throw DataError("matrix is not Hermitian (max deviation " + std::to_string(dev) + ")");
        return symmetrized(dim, raw);
    }

    std::size_t dim() const { return dim_; }

    complexd entry(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    /// Sets (r,c) and mirrors the conjugate into (c,r); diagonal keeps only
    /// the real part.
    void set(std::size_t r, std::size_t c, complexd value) {
        if (r >= dim_ || c >= dim_) throw InvalidParameter("HermitianMatrix::set: index out of range");
        if (r == c) {
            entries_[r * dim_ + c] = complexd{value.real(), 0.0};
        } else {
            entries_[r * dim_ + c] = value;
            entries_[c * dim_ + r] = std::conj(value);
        }
    }

    const cvector& entries() const { return entries_; }

    bool is_real() const {
        for (const auto& e : entries_)
            if (e.imag() != 0.0) return false;
        return true;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& e : entries_) s += std::norm(e);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& e : entries_) m = std::max(m, std::abs(e));
        return m;
    }

    cvector apply(const cvector& x) const {
        if (x.size() != dim_) throw InvalidParameter("HermitianMatrix::apply: dimension mismatch");
        cvector y(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            complexd s{0.0, 0.0};
            const complexd* row = entries_.data() + r * dim_;
            for (std::size_t c = 0; c < dim_; ++c) s += row[c] * x[c];
            y[r] = s;
        }
        return y;
    }

private:
    std::size_t dim_;
    cvector entries_;
};

}  // namespace ctqw
