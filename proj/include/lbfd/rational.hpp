#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lbfd {

/// Exact rational scalar. All coefficients in the library are of this type;
/// nothing is ever rounded.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rat_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

/// Formats as "p/q", or just "p" when the denominator is 1.
inline std::string format_rational(const Rational& x) { return x.str(); }

/// Parses "p", "-p" or "p/q". Anything else (floats in particular) is
/// rejected with a diagnostic naming the offending text.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::size_t slash = std::string::npos;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '/') {
            if (slash != std::string::npos || i == 0 || i + 1 == text.size())
                throw std::invalid_argument("malformed rational literal: '" + text + "'");
            slash = i;
        } else if (c == '-' || c == '+') {
            if (i != 0) throw std::invalid_argument("malformed rational literal: '" + text + "'");
        } else if (c < '0' || c > '9') {
            throw std::invalid_argument("invalid character in rational literal: '" + text + "'");
        }
    }
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in rational literal: '" + text + "'");
        return Rational(num, den);
    }
    return Rational(BigInt(text));
}

/// Small dense matrix over the rationals. Sized for moment matrices
/// (q <= 4 in practice), so plain Gauss-Jordan and cofactor expansion
/// are all we need.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("RatMatrix: data size does not match shape");
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const RatMatrix& o) const { return !(*this == o); }

    RatMatrix operator*(const RatMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: size mismatch in product");
        RatMatrix out(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if (at(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    out.at(i, j) += at(i, k) * o.at(k, j);
            }
        return out;
    }

    RatMatrix operator-(const RatMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("RatMatrix: size mismatch in difference");
        RatMatrix out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
        return out;
    }

    Rational det() const {
        if (rows_ != cols_) throw std::invalid_argument("RatMatrix: determinant of non-square matrix");
        return det_rec(*this);
    }

    /// Exact inverse by Gauss-Jordan elimination, pivoting on the first
    /// nonzero entry of each column. Throws on singular input.
    RatMatrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("RatMatrix: inverse of non-square matrix");
        const std::size_t n = rows_;
        RatMatrix a = *this;
        RatMatrix inv = identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            while (pivot < n && a.at(pivot, col) == 0) ++pivot;
            if (pivot == n) throw std::domain_error("RatMatrix: singular matrix");
            if (pivot != col) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(a.at(pivot, j), a.at(col, j));
                    std::swap(inv.at(pivot, j), inv.at(col, j));
                }
            }
            const Rational p = a.at(col, col);
            for (std::size_t j = 0; j < n; ++j) {
                a.at(col, j) /= p;
                inv.at(col, j) /= p;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col || a.at(r, col) == 0) continue;
                const Rational f = a.at(r, col);
                for (std::size_t j = 0; j < n; ++j) {
                    a.at(r, j) -= f * a.at(col, j);
                    inv.at(r, j) -= f * inv.at(col, j);
                }
            }
        }
        return inv;
    }

private:
    static Rational det_rec(const RatMatrix& m) {
        const std::size_t n = m.rows();
        if (n == 1) return m.at(0, 0);
        if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
        Rational acc = 0;
        int sign = 1;
        for (std::size_t c = 0; c < n; ++c) {
            if (m.at(0, c) != 0) {
                RatMatrix minor(n - 1, n - 1);
                for (std::size_t i = 1; i < n; ++i) {
                    std::size_t jj = 0;
                    for (std::size_t j = 0; j < n; ++j) {
                        if (j == c) continue;
                        minor.at(i - 1, jj++) = m.at(i, j);
                    }
                }
                acc += sign * m.at(0, c) * det_rec(minor);
            }
            sign = -sign;
        }
        return acc;
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

}  // namespace lbfd
