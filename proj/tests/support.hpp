#pragma once

// Shared generators for the test suites. Everything is seeded explicitly so
// failures reproduce.

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "lbfd/lbfd.hpp"

namespace testsupport {

using Rng = std::mt19937_64;
using lbfd::Offset;
using lbfd::OpMatrix;
using lbfd::RatMatrix;
using lbfd::Rational;
using lbfd::ShiftPoly;

inline Rational random_rational(Rng& rng, int max_abs_num = 4, int max_den = 3) {
    std::uniform_int_distribution<int> num(-max_abs_num, max_abs_num);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rational(num(rng), den(rng));
}

inline Rational random_nonzero_rational(Rng& rng, int max_abs_num = 4, int max_den = 3) {
    while (true) {
        Rational r = random_rational(rng, max_abs_num, max_den);
        if (r != 0) return r;
    }
}

inline ShiftPoly random_shift_poly(Rng& rng, std::size_t dim = 1, int max_terms = 3,
                                   int max_offset = 2) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<std::int64_t> off(-max_offset, max_offset);
    ShiftPoly acc = ShiftPoly::zero(dim);
    const int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Offset z(dim);
        for (auto& zk : z) zk = off(rng);
        acc += ShiftPoly::monomial(z, random_rational(rng));
    }
    return acc;
}

inline OpMatrix random_op_matrix(Rng& rng, std::size_t q, std::size_t dim = 1, int max_terms = 2,
                                 int max_offset = 1) {
    OpMatrix m(q, dim);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j)
            m.at(i, j) = random_shift_poly(rng, dim, max_terms, max_offset);
    return m;
}

inline RatMatrix random_invertible_matrix(Rng& rng, std::size_t n, int max_abs_num = 3,
                                          int max_den = 2) {
    while (true) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m.at(i, j) = random_rational(rng, max_abs_num, max_den);
        if (m.det() != 0) return m;
    }
}

inline std::vector<Offset> random_velocities(Rng& rng, std::size_t q) {
    std::uniform_int_distribution<std::int64_t> v(-1, 1);
    std::vector<Offset> out;
    out.reserve(q);
    for (std::size_t j = 0; j < q; ++j) out.push_back({v(rng)});
    return out;
}

/// Random valid scheme with one conserved moment and linear equilibria.
inline lbfd::LbsSpec random_spec(Rng& rng, std::size_t q) {
    static const Rational rates[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
    lbfd::LbsSpec spec;
    spec.q = q;
    spec.d = 1;
    spec.conserved = 1;
    spec.moment_matrix = random_invertible_matrix(rng, q);
    spec.velocities = random_velocities(rng, q);
    spec.relaxation.assign(q, Rational(0));
    std::uniform_int_distribution<int> rate(0, 3);
    for (std::size_t i = 1; i < q; ++i) spec.relaxation[i] = rates[rate(rng)];
    RatMatrix eq(q, 1);
    eq.at(0, 0) = 1;
    for (std::size_t i = 1; i < q; ++i) eq.at(i, 0) = random_rational(rng);
    spec.equilibria = eq;
    spec.label = "random-q" + std::to_string(q);
    return spec;
}

/// A pair of genuinely different D1Q3 moment matrices whose schemes satisfy
/// all eight equality conditions under S = diag(0,2,2).
///
/// Construction: pick nonzero rationals a, b and a moment matrix whose third
/// column is proportional to (0, b, -a)^T. Then the first-row tails of B,
/// AB and A^2 B are all operator multiples of the rational direction (a, b),
/// and conjugating by W = blockdiag(1, (I+K)^-1) with K = (b,-a)^T (alpha,
/// beta) fixes those rows while preserving the characteristic polynomial
/// (W commutes with I - S). Nondegeneracy needs 1 + b*alpha - a*beta != 0.
struct ConditionedPair {
    RatMatrix m;
    RatMatrix m_tilde;
    std::vector<Offset> velocities;
};

inline ConditionedPair conditioned_d1q3_pair(Rng& rng) {
    while (true) {
        const Rational a = random_nonzero_rational(rng);
        const Rational b = random_nonzero_rational(rng);
        const Rational alpha = random_rational(rng);
        const Rational beta = random_rational(rng);
        if (alpha == 0 && beta == 0) continue;
        if (1 + b * alpha - a * beta == 0) continue;

        RatMatrix m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 2; ++j) m.at(i, j) = random_rational(rng);
        m.at(0, 2) = 0;
        m.at(1, 2) = b;
        m.at(2, 2) = -a;
        if (m.det() == 0) continue;

        RatMatrix k(2, 2);
        k.at(0, 0) = b * alpha;
        k.at(0, 1) = b * beta;
        k.at(1, 0) = -a * alpha;
        k.at(1, 1) = -a * beta;
        RatMatrix block = RatMatrix::identity(2);
        block.at(0, 0) += k.at(0, 0);
        block.at(0, 1) += k.at(0, 1);
        block.at(1, 0) += k.at(1, 0);
        block.at(1, 1) += k.at(1, 1);
        const RatMatrix v = block.inverse();
        RatMatrix w = RatMatrix::identity(3);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) w.at(i + 1, j + 1) = v.at(i, j);

        ConditionedPair pair;
        pair.m = m;
        pair.m_tilde = w * m;
        pair.velocities = random_velocities(rng, 3);
        if (lbfd::transport_matrix(pair.m, pair.velocities) ==
            lbfd::transport_matrix(pair.m_tilde, pair.velocities))
            continue;  // degenerate sample, conjugation happened to fix T
        return pair;
    }
}

}  // namespace testsupport
