#pragma once

// Dense complex Hermitian linear algebra for small matrices (order <= ~10).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netgc/errors.hpp"

namespace netgc {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Fixed-length vector of finite complex samples.
class ComplexVector {
public:
    explicit ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw DimensionError("ComplexVector: length must be >= 1");
        for (const auto& z : entries_)
            if (!is_finite(z)) throw InvalidInputError("ComplexVector: non-finite entry");
    }
    ComplexVector(std::initializer_list<Complex> entries)
        : ComplexVector(std::vector<Complex>(entries)) {}

    std::size_t size() const noexcept { return entries_.size(); }
    Complex operator[](std::size_t k) const { return entries_[k]; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    ComplexVector scaled(Complex factor) const {
        std::vector<Complex> out(entries_);
        for (auto& z : out) z *= factor;
        return ComplexVector(std::move(out));
    }

private:
    std::vector<Complex> entries_;
};

/// Sum of conj(a_k) * b_k; conjugate-linear in the first argument.
inline Complex inner_product(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size())
        throw DimensionError("inner_product: length mismatch (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

inline double norm(const ComplexVector& x) {
    double acc = 0.0;
    for (auto z : x.entries()) acc += std::norm(z);
    return std::sqrt(acc);
}

inline ComplexVector normalize(const ComplexVector& x) {
    const double n = norm(x);
    if (!(n > 0.0)) throw DegenerateInputError("normalize: zero-norm vector");
    return x.scaled(Complex{1.0 / n, 0.0});
}

/// Square Hermitian matrix, stored densely. Setters write both (i,j) and (j,i),
/// so the Hermitian invariant holds by construction.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(std::size_t order) : order_(order), data_(order * order) {}

    static HermitianMatrix identity(std::size_t order) {
        HermitianMatrix h(order);
        for (std::size_t i = 0; i < order; ++i) h.data_[i * order + i] = 1.0;
        return h;
    }

    /// Builds from full rows; rejects input that is not exactly Hermitian.
    static HermitianMatrix from_rows(const std::vector<std::vector<Complex>>& rows) {
        const std::size_t m = rows.size();
        HermitianMatrix h(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (rows[i].size() != m) throw DimensionError("HermitianMatrix: rows must be square");
            for (std::size_t j = 0; j < m; ++j) h.data_[i * m + j] = rows[i][j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (h(i, i).imag() != 0.0)
                throw InvalidInputError("HermitianMatrix: diagonal must be real");
            for (std::size_t j = i + 1; j < m; ++j)
                if (h(j, i) != std::conj(h(i, j)))
                    throw InvalidInputError("HermitianMatrix: input is not Hermitian");
        }
        return h;
    }

    std::size_t order() const noexcept { return order_; }
    Complex operator()(std::size_t i, std::size_t j) const { return data_[i * order_ + j]; }

    void set(std::size_t i, std::size_t j, Complex value) {
        if (i == j) {
            data_[i * order_ + i] = Complex{value.real(), 0.0};
            return;
        }
        data_[i * order_ + j] = value;
        data_[j * order_ + i] = std::conj(value);
    }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](Complex z) { return is_finite(z); });
    }

    double max_abs_entry() const noexcept {
        double m = 0.0;
        for (auto z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

private:
    std::size_t order_ = 0;
    std::vector<Complex> data_;
};

inline HermitianMatrix principal_submatrix(const HermitianMatrix& h,
                                           std::span<const std::size_t> indices) {
    HermitianMatrix sub(indices.size());
    for (std::size_t a = 0; a < indices.size(); ++a)
        for (std::size_t b = a; b < indices.size(); ++b) sub.set(a, b, h(indices[a], indices[b]));
    return sub;
}

/// Relabels rows and columns: result(perm[i], perm[j]) = h(i, j).
inline HermitianMatrix permuted(const HermitianMatrix& h, std::span<const std::size_t> perm) {
    if (perm.size() != h.order()) throw DimensionError("permuted: permutation size mismatch");
    HermitianMatrix out(h.order());
    for (std::size_t i = 0; i < h.order(); ++i)
        for (std::size_t j = i; j < h.order(); ++j) out.set(perm[i], perm[j], h(i, j));
    return out;
}

/// Lower-triangular L with real positive diagonal and L * L^H = h.
class CholeskyFactor {
public:
    CholeskyFactor(std::size_t order, std::vector<Complex> lower)
        : order_(order), lower_(std::move(lower)) {}

    std::size_t order() const noexcept { return order_; }
    Complex operator()(std::size_t i, std::size_t j) const {
        return j <= i ? lower_[i * order_ + j] : Complex{};
    }

    /// Pivot k of the LDL^H form, i.e. L_kk^2.
    double pivot(std::size_t k) const { return std::norm(lower_[k * order_ + k]); }

    double determinant() const {
        double d = 1.0;
        for (std::size_t k = 0; k < order_; ++k) d *= pivot(k);
        return d;
    }

    double log_determinant() const {
        double d = 0.0;
        for (std::size_t k = 0; k < order_; ++k) d += std::log(pivot(k));
        return d;
    }

    /// Solves (L L^H) x = b.
    std::vector<Complex> solve(std::span<const Complex> b) const {
        if (b.size() != order_) throw DimensionError("CholeskyFactor::solve: size mismatch");
        std::vector<Complex> y(b.begin(), b.end());
        for (std::size_t i = 0; i < order_; ++i) {
            Complex s = y[i];
            for (std::size_t k = 0; k < i; ++k) s -= (*this)(i, k) * y[k];
            y[i] = s / (*this)(i, i);
        }
        for (std::size_t i = order_; i-- > 0;) {
            Complex s = y[i];
            for (std::size_t k = i + 1; k < order_; ++k) s -= std::conj((*this)(k, i)) * y[k];
            y[i] = s / (*this)(i, i);
        }
        return y;
    }

private:
    std::size_t order_;
    std::vector<Complex> lower_;
};

/// Returns the factor when h is positive definite, std::nullopt otherwise.
inline std::optional<CholeskyFactor> cholesky(const HermitianMatrix& h) {
    if (!h.all_finite()) throw InvalidInputError("cholesky: non-finite entry");
    const std::size_t m = h.order();
    std::vector<Complex> l(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        double d = h(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l[j * m + k]);
        if (!(d > 0.0)) return std::nullopt;
        const double ljj = std::sqrt(d);
        l[j * m + j] = ljj;
        for (std::size_t i = j + 1; i < m; ++i) {
            Complex s = h(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l[i * m + k] * std::conj(l[j * m + k]);
            l[i * m + j] = s / ljj;
        }
    }
    return CholeskyFactor(m, std::move(l));
}

namespace detail {

struct LuResult {
    std::vector<Complex> lu;
    std::vector<std::size_t> perm;
    int sign = 1;
};

// Gaussian elimination with partial pivoting on a full copy of h.
inline LuResult lu_decompose(const HermitianMatrix& h) {
    const std::size_t m = h.order();
    LuResult r;
    r.lu.resize(m * m);
    r.perm.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        r.perm[i] = i;
        for (std::size_t j = 0; j < m; ++j) r.lu[i * m + j] = h(i, j);
    }
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < m; ++i)
            if (std::abs(r.lu[i * m + k]) > std::abs(r.lu[p * m + k])) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < m; ++j) std::swap(r.lu[k * m + j], r.lu[p * m + j]);
            std::swap(r.perm[k], r.perm[p]);
            r.sign = -r.sign;
        }
        const Complex pivot = r.lu[k * m + k];
        if (pivot == Complex{}) continue;
        for (std::size_t i = k + 1; i < m; ++i) {
            const Complex f = r.lu[i * m + k] / pivot;
            r.lu[i * m + k] = f;
            for (std::size_t j = k + 1; j < m; ++j) r.lu[i * m + j] -= f * r.lu[k * m + j];
        }
    }
    return r;
}

inline void check_finite(const HermitianMatrix& h, const char* who) {
    if (!h.all_finite()) throw InvalidInputError(std::string(who) + ": non-finite entry");
}

inline constexpr double kPivotFloor = 1e-12;

}  // namespace detail

/// Determinant; exact real for Hermitian input. Uses Cholesky when positive
/// definite, pivoted LU otherwise.
inline double det(const HermitianMatrix& h) {
    detail::check_finite(h, "det");
    if (auto f = cholesky(h)) return f->determinant();
    const auto r = detail::lu_decompose(h);
    Complex d = static_cast<double>(r.sign);
    for (std::size_t k = 0; k < h.order(); ++k) d *= r.lu[k * h.order() + k];
    return d.real();
}

/// log det for positive definite h; -infinity when h is not positive definite.
inline double log_det(const HermitianMatrix& h) {
    detail::check_finite(h, "log_det");
    if (auto f = cholesky(h)) return f->log_determinant();
    return -std::numeric_limits<double>::infinity();
}

/// Inverse of h. Refuses when the smallest pivot falls below 1e-12 times the largest.
inline HermitianMatrix inverse(const HermitianMatrix& h) {
    detail::check_finite(h, "inverse");
    const std::size_t m = h.order();
    HermitianMatrix out(m);
    if (m == 0) return out;

    if (auto f = cholesky(h)) {
        double lo = f->pivot(0), hi = f->pivot(0);
        for (std::size_t k = 1; k < m; ++k) {
            lo = std::min(lo, f->pivot(k));
            hi = std::max(hi, f->pivot(k));
        }
        if (lo < detail::kPivotFloor * hi)
            throw SingularMatrixError("inverse: matrix is ill-conditioned", std::abs(f->determinant()));
        std::vector<Complex> e(m);
        for (std::size_t j = 0; j < m; ++j) {
            std::fill(e.begin(), e.end(), Complex{});
            e[j] = 1.0;
            const auto col = f->solve(e);
            for (std::size_t i = 0; i <= j; ++i) out.set(i, j, col[i]);
        }
        return out;
    }

    const auto r = detail::lu_decompose(h);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    Complex d = static_cast<double>(r.sign);
    for (std::size_t k = 0; k < m; ++k) {
        const double a = std::abs(r.lu[k * m + k]);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        d *= r.lu[k * m + k];
    }
    if (!(hi > 0.0) || lo < detail::kPivotFloor * hi)
        throw SingularMatrixError("inverse: matrix is singular or ill-conditioned", std::abs(d));

    std::vector<Complex> x(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) x[i] = r.perm[i] == j ? 1.0 : 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < i; ++k) x[i] -= r.lu[i * m + k] * x[k];
        for (std::size_t i = m; i-- > 0;) {
            for (std::size_t k = i + 1; k < m; ++k) x[i] -= r.lu[i * m + k] * x[k];
            x[i] /= r.lu[i * m + i];
        }
        for (std::size_t i = 0; i <= j; ++i) out.set(i, j, x[i]);
    }
    return out;
}

}  // namespace netgc
