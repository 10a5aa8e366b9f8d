#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lbfd/rational.hpp"

namespace lbfd {

/// Offset of a shift operator on the integer lattice, one entry per axis.
using Offset = std::vector<std::int64_t>;

/// Element of the commutative ring of finite difference operators in d
/// dimensions: a finite sum  sum_z  c_z * T^z  of integer shifts with exact
/// rational coefficients (a Laurent polynomial in the d shift variables).
///
/// Values are kept canonical at all times: no stored coefficient is zero and
/// every offset has length dim(). Two values are equal iff their term maps
/// are identical, so operator== is structural equality of operators.
/// Immutable after construction; safe to share across threads.
class ShiftPoly {
public:
    using TermMap = std::map<Offset, Rational>;

    explicit ShiftPoly(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw std::invalid_argument("ShiftPoly: dimension must be positive");
    }

    /// The zero operator.
    static ShiftPoly zero(std::size_t dim) { return ShiftPoly(dim); }

    /// The identity operator (shift by the zero offset).
    static ShiftPoly one(std::size_t dim) { return constant(dim, 1); }

    /// c times the identity.
    static ShiftPoly constant(std::size_t dim, const Rational& c) {
        ShiftPoly p(dim);
        if (c != 0) p.terms_.emplace(Offset(dim, 0), c);
        return p;
    }

    /// The monomial c * T^z.
    static ShiftPoly monomial(const Offset& z, const Rational& c = 1) {
        if (z.empty()) throw std::invalid_argument("ShiftPoly: empty offset");
        ShiftPoly p(z.size());
        if (c != 0) p.terms_.emplace(z, c);
        return p;
    }

    /// The pure shift operator T^z, i.e. (T^z f)(x) = f(x - z*dx).
    static ShiftPoly shift(const Offset& z) { return monomial(z, 1); }

    std::size_t dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Coefficient of T^z (zero when absent).
    Rational coeff(const Offset& z) const {
        auto it = terms_.find(z);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool operator==(const ShiftPoly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }
    bool operator!=(const ShiftPoly& o) const { return !(*this == o); }

    ShiftPoly operator-() const {
        ShiftPoly out(dim_);
        for (const auto& [z, c] : terms_) out.terms_.emplace(z, -c);
        return out;
    }

    ShiftPoly operator+(const ShiftPoly& o) const {
        check_dim(o);
        ShiftPoly out = *this;
        for (const auto& [z, c] : o.terms_) out.add_term(z, c);
        return out;
    }

    ShiftPoly operator-(const ShiftPoly& o) const {
        check_dim(o);
        ShiftPoly out = *this;
        for (const auto& [z, c] : o.terms_) out.add_term(z, -c);
        return out;
    }

    /// Ring product: offsets add, coefficients multiply (convolution of the
    /// term maps). Commutative.
    ShiftPoly operator*(const ShiftPoly& o) const {
        check_dim(o);
        ShiftPoly out(dim_);
        Offset z(dim_);
        for (const auto& [za, ca] : terms_) {
            for (const auto& [zb, cb] : o.terms_) {
                for (std::size_t k = 0; k < dim_; ++k) z[k] = za[k] + zb[k];
                out.add_term(z, ca * cb);
            }
        }
        return out;
    }

    ShiftPoly operator*(const Rational& s) const {
        ShiftPoly out(dim_);
        if (s == 0) return out;
        for (const auto& [z, c] : terms_) out.terms_.emplace(z, c * s);
        return out;
    }

    ShiftPoly operator/(const Rational& s) const {
        if (s == 0) throw std::domain_error("ShiftPoly: division by zero scalar");
        return *this * Rational(1 / s);
    }

    ShiftPoly& operator+=(const ShiftPoly& o) { return *this = *this + o; }
    ShiftPoly& operator-=(const ShiftPoly& o) { return *this = *this - o; }
    ShiftPoly& operator*=(const ShiftPoly& o) { return *this = *this * o; }

    ShiftPoly pow(std::size_t e) const {
        ShiftPoly acc = one(dim_);
        ShiftPoly base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    /// Operator symbol at wave vector theta: every shift T^z is sent to
    /// e^{-i theta.z}. This is the single place fixing the Fourier sign
    /// convention; it makes the plane wave e^{i theta.x} an eigenvector of
    /// T^z with eigenvalue e^{-i theta.z}. The map is a ring homomorphism
    /// into the complex numbers.
    std::complex<double> symbol(const std::vector<double>& theta) const {
        if (theta.size() != dim_) throw std::invalid_argument("ShiftPoly: theta dimension mismatch");
        std::complex<double> acc(0.0, 0.0);
        for (const auto& [z, c] : terms_) {
            double phase = 0.0;
            for (std::size_t k = 0; k < dim_; ++k) phase -= theta[k] * static_cast<double>(z[k]);
            acc += static_cast<double>(c) * std::polar(1.0, phase);
        }
        return acc;
    }

    /// Applies the operator to a periodic grid function, exactly.
    /// The grid has extents[k] nodes along axis k (row-major layout) and
    /// (T^z f)(x) = f(x - z) with wraparound per axis.
    std::vector<Rational> apply(const std::vector<Rational>& f,
                                const std::vector<std::int64_t>& extents) const {
        if (extents.size() != dim_) throw std::invalid_argument("ShiftPoly: grid rank mismatch");
        std::size_t total = 1;
        for (auto e : extents) {
            if (e < 1) throw std::invalid_argument("ShiftPoly: grid extent must be >= 1");
            total *= static_cast<std::size_t>(e);
        }
        if (f.size() != total) throw std::invalid_argument("ShiftPoly: grid size mismatch");

        std::vector<Rational> out(total);
        std::vector<std::int64_t> x(dim_, 0);
        for (std::size_t idx = 0; idx < total; ++idx) {
            Rational acc = 0;
            for (const auto& [z, c] : terms_) {
                std::size_t src = 0;
                for (std::size_t k = 0; k < dim_; ++k) {
                    std::int64_t xk = (x[k] - z[k]) % extents[k];
                    if (xk < 0) xk += extents[k];
                    src = src * static_cast<std::size_t>(extents[k]) + static_cast<std::size_t>(xk);
                }
                acc += c * f[src];
            }
            out[idx] = acc;
            for (std::size_t k = dim_; k-- > 0;) {
                if (++x[k] < extents[k]) break;
                x[k] = 0;
            }
        }
        return out;
    }

    /// Canonical text form: `p/q*T[z1,...,zd]` terms joined by " + ",
    /// offsets in lexicographic order; "0" for the zero operator.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [z, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << format_rational(c) << "*T[";
            for (std::size_t k = 0; k < z.size(); ++k) {
                if (k) os << ",";
                os << z[k];
            }
            os << "]";
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const ShiftPoly& p) { return os << p.str(); }

private:
    void check_dim(const ShiftPoly& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("ShiftPoly: dimension mismatch");
    }

    void add_term(const Offset& z, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(z, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::size_t dim_;
    TermMap terms_;
};

inline ShiftPoly operator*(const Rational& s, const ShiftPoly& p) { return p * s; }

}  // namespace lbfd
