#pragma once

#include <complex>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

#include "lbfd/rational.hpp"
#include "lbfd/shift_poly.hpp"

namespace lbfd {

/// Dense square matrix over the shift-operator ring. Entries all share one
/// spatial dimension. Immutable by convention once built.
class OpMatrix {
public:
    OpMatrix(std::size_t q, std::size_t dim)
        : q_(q), dim_(dim), entries_(q * q, ShiftPoly::zero(dim)) {
        if (q == 0) throw std::invalid_argument("OpMatrix: size must be positive");
    }

    static OpMatrix identity(std::size_t q, std::size_t dim) {
        OpMatrix m(q, dim);
        for (std::size_t i = 0; i < q; ++i) m.at(i, i) = ShiftPoly::one(dim);
        return m;
    }

    /// Embeds a rational matrix as a matrix of constant operators.
    static OpMatrix from_rational(const RatMatrix& r, std::size_t dim) {
        if (r.rows() != r.cols()) throw std::invalid_argument("OpMatrix: non-square rational matrix");
        OpMatrix m(r.rows(), dim);
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t j = 0; j < r.cols(); ++j)
                m.at(i, j) = ShiftPoly::constant(dim, r.at(i, j));
        return m;
    }

    static OpMatrix diagonal(const std::vector<ShiftPoly>& d) {
        if (d.empty()) throw std::invalid_argument("OpMatrix: empty diagonal");
        OpMatrix m(d.size(), d[0].dim());
        for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }

    std::size_t size() const { return q_; }
    std::size_t dim() const { return dim_; }

    ShiftPoly& at(std::size_t r, std::size_t c) { return entries_[r * q_ + c]; }
    const ShiftPoly& at(std::size_t r, std::size_t c) const { return entries_[r * q_ + c]; }

    std::vector<ShiftPoly> row(std::size_t r) const {
        std::vector<ShiftPoly> out;
        out.reserve(q_);
        for (std::size_t c = 0; c < q_; ++c) out.push_back(at(r, c));
        return out;
    }

    bool operator==(const OpMatrix& o) const {
        return q_ == o.q_ && dim_ == o.dim_ && entries_ == o.entries_;
    }
    bool operator!=(const OpMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    OpMatrix operator+(const OpMatrix& o) const {
        check_shape(o);
        OpMatrix out = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += o.entries_[i];
        return out;
    }

    OpMatrix operator-(const OpMatrix& o) const {
        check_shape(o);
        OpMatrix out = *this;
        for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= o.entries_[i];
        return out;
    }

    OpMatrix operator*(const OpMatrix& o) const {
        check_shape(o);
        OpMatrix out(q_, dim_);
        for (std::size_t i = 0; i < q_; ++i)
            for (std::size_t k = 0; k < q_; ++k) {
                if (at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < q_; ++j) {
                    if (o.at(k, j).is_zero()) continue;
                    out.at(i, j) += at(i, k) * o.at(k, j);
                }
            }
        return out;
    }

    /// Scales every entry by a ring element.
    OpMatrix operator*(const ShiftPoly& s) const {
        OpMatrix out(q_, dim_);
        for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] * s;
        return out;
    }

private:
    void check_shape(const OpMatrix& o) const {
        if (q_ != o.q_ || dim_ != o.dim_) throw std::invalid_argument("OpMatrix: shape mismatch");
    }

    std::size_t q_, dim_;
    std::vector<ShiftPoly> entries_;
};

/// Coefficients of det(X*I - A), stored lowest degree first; coeffs.back()
/// is always the ring identity (monic normalization, "gamma_q = 1").
struct CharPoly {
    std::vector<ShiftPoly> coeffs;

    std::size_t degree() const { return coeffs.size() - 1; }
    bool operator==(const CharPoly& o) const { return coeffs == o.coeffs; }
    bool operator!=(const CharPoly& o) const { return !(*this == o); }
};

/// Zeroes every entry outside keep x keep (1-based indices). The companion
/// piece of the splitting is A - mat_restrict(A, keep).
inline OpMatrix mat_restrict(const OpMatrix& a, const std::set<std::size_t>& keep) {
    if (keep.empty()) throw std::invalid_argument("mat_restrict: empty index set");
    for (auto i : keep)
        if (i < 1 || i > a.size()) throw std::invalid_argument("mat_restrict: index out of range");
    OpMatrix out(a.size(), a.dim());
    for (auto r : keep)
        for (auto c : keep) out.at(r - 1, c - 1) = a.at(r - 1, c - 1);
    return out;
}

/// Determinant by cofactor expansion along the first row. Exponential in q,
/// fine for q <= 4; used as the independent cross-check of the Berkowitz
/// constant term.
inline ShiftPoly mat_det_cofactor(const OpMatrix& a) {
    const std::size_t n = a.size();
    if (n == 1) return a.at(0, 0);
    ShiftPoly acc = ShiftPoly::zero(a.dim());
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        if (!a.at(0, c).is_zero()) {
            OpMatrix minor(n - 1, a.dim());
            for (std::size_t i = 1; i < n; ++i) {
                std::size_t jj = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == c) continue;
                    minor.at(i - 1, jj++) = a.at(i, j);
                }
            }
            ShiftPoly term = a.at(0, c) * mat_det_cofactor(minor);
            acc += sign > 0 ? term : -term;
        }
        sign = -sign;
    }
    return acc;
}

/// Characteristic polynomial det(X*I - A) by the Berkowitz algorithm, which
/// is division-free and therefore valid over the operator ring. Returns the
/// coefficients lowest degree first with leading coefficient 1.
inline CharPoly mat_charpoly(const OpMatrix& a) {
    const std::size_t n = a.size();
    const std::size_t dim = a.dim();
    const ShiftPoly zero = ShiftPoly::zero(dim);

    // c holds the coefficients of the r x r leading principal submatrix,
    // highest degree first: c[0] = 1.
    std::vector<ShiftPoly> c = {ShiftPoly::one(dim), -a.at(0, 0)};
    for (std::size_t r = 2; r <= n; ++r) {
        // Toeplitz column: 1, -a_rr, -(R S), -(R A' S), ..., for the row R
        // and column S bordering the (r-1) x (r-1) block A'.
        std::vector<ShiftPoly> t;
        t.reserve(r + 1);
        t.push_back(ShiftPoly::one(dim));
        t.push_back(-a.at(r - 1, r - 1));
        std::vector<ShiftPoly> v(r - 1, zero);  // v = A'^k S, built incrementally
        for (std::size_t i = 0; i < r - 1; ++i) v[i] = a.at(i, r - 1);
        for (std::size_t k = 2; k <= r; ++k) {
            ShiftPoly dot = zero;
            for (std::size_t i = 0; i < r - 1; ++i) dot += a.at(r - 1, i) * v[i];
            t.push_back(-dot);
            if (k < r) {
                std::vector<ShiftPoly> nv(r - 1, zero);
                for (std::size_t i = 0; i < r - 1; ++i)
                    for (std::size_t j = 0; j < r - 1; ++j)
                        if (!a.at(i, j).is_zero() && !v[j].is_zero()) nv[i] += a.at(i, j) * v[j];
                v = std::move(nv);
            }
        }
        std::vector<ShiftPoly> next(r + 1, zero);
        for (std::size_t i = 0; i <= r; ++i)
            for (std::size_t j = 0; j < c.size() && j <= i; ++j)
                if (i - j < t.size()) next[i] += t[i - j] * c[j];
        c = std::move(next);
    }

    CharPoly out;
    out.coeffs.assign(c.rbegin(), c.rend());
    return out;
}

/// Evaluates sum_k gamma_k A^k over the ring. mat_charpoly followed by this
/// must yield the zero matrix (Cayley-Hamilton).
inline OpMatrix mat_eval_charpoly(const CharPoly& p, const OpMatrix& a) {
    OpMatrix acc(a.size(), a.dim());
    OpMatrix power = OpMatrix::identity(a.size(), a.dim());
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        if (k > 0) power = power * a;
        if (!p.coeffs[k].is_zero()) acc = acc + power * p.coeffs[k];
    }
    return acc;
}

using ComplexMatrix = std::vector<std::vector<std::complex<double>>>;

/// Entrywise operator symbol at theta.
inline ComplexMatrix mat_symbol(const OpMatrix& a, const std::vector<double>& theta) {
    ComplexMatrix out(a.size(), std::vector<std::complex<double>>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = a.at(i, j).symbol(theta);
    return out;
}

/// Characteristic polynomial of a small complex matrix via Faddeev-LeVerrier
/// (floating point; used only for cross-checks against the exact ring path).
/// Returns coefficients of det(X*I - A), lowest degree first, monic.
inline std::vector<std::complex<double>> complex_charpoly(const ComplexMatrix& a) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> coeffs(n + 1);
    coeffs[n] = 1.0;
    ComplexMatrix m(n, std::vector<std::complex<double>>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;  // M_0 = I
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A * M_{k-1} + c_{n-k+1} I  (with the previous coefficient folded in)
        ComplexMatrix am(n, std::vector<std::complex<double>>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t j = 0; j < n; ++j) am[i][j] += a[i][l] * m[l][j];
        std::complex<double> trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += am[i][i];
        coeffs[n - k] = -trace / static_cast<double>(k);
        m = am;
        for (std::size_t i = 0; i < n; ++i) m[i][i] += coeffs[n - k];
    }
    return coeffs;
}

}  // namespace lbfd
