#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <set>

#include "support.hpp"

using namespace lbfd;
using testsupport::Rng;

namespace {

std::pair<OpMatrix, OpMatrix> over_relaxed_pair(const OpMatrix& t) {
    // S = diag(0,2,2)
    OpMatrix a(3, t.dim()), b(3, t.dim());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            a.at(i, j) = j == 0 ? t.at(i, j) : -t.at(i, j);
            b.at(i, j) = j == 0 ? ShiftPoly::zero(t.dim()) : t.at(i, j) * Rational(2);
        }
    return {a, b};
}

/// Product expansion of det(X I - diag of shifts), the conjugation-invariant
/// oracle for transport characteristic polynomials.
std::vector<ShiftPoly> shift_product_charpoly(const std::vector<Offset>& velocities) {
    std::vector<ShiftPoly> poly = {ShiftPoly::one(velocities.front().size())};
    for (const auto& c : velocities) {
        std::vector<ShiftPoly> next(poly.size() + 1, ShiftPoly::zero(poly.front().dim()));
        for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] += poly[k];
            next[k] -= ShiftPoly::shift(c) * poly[k];
        }
        poly = std::move(next);
    }
    return poly;
}

/// det of a complex matrix by Gaussian elimination; independent route used
/// to validate the charpoly/symbol commutation.
std::complex<double> complex_det(std::vector<std::vector<std::complex<double>>> m) {
    const std::size_t n = m.size();
    std::complex<double> det(1.0, 0.0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (std::abs(m[pivot][col]) < 1e-14) return {0.0, 0.0};
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const auto f = m[r][col] / m[col][col];
            for (std::size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
        }
    }
    return det;
}

}  // namespace

TEST_CASE("matrix product basics", "[opmatrix]") {
    Rng rng(11);
    const OpMatrix a = testsupport::random_op_matrix(rng, 3);
    CHECK(OpMatrix::identity(3, 1) * a == a);
    CHECK(a * OpMatrix::identity(3, 1) == a);
    CHECK_THROWS_AS(a * OpMatrix::identity(2, 1), std::invalid_argument);
}

TEST_CASE("first row of AB for the over-relaxed collision pair", "[opmatrix]") {
    Rng rng(12);
    const auto m = testsupport::random_invertible_matrix(rng, 3);
    const OpMatrix t = transport_matrix(m, {{1}, {-1}, {0}});
    auto [a, b] = over_relaxed_pair(t);
    const OpMatrix ab = a * b;
    auto tij = [&t](std::size_t i, std::size_t j) { return t.at(i - 1, j - 1); };

    CHECK(ab.at(0, 0).is_zero());
    CHECK(ab.at(0, 1) == (tij(1, 1) * tij(1, 2) - tij(1, 2) * tij(2, 2) - tij(1, 3) * tij(3, 2)) *
                             Rational(2));
    CHECK(ab.at(0, 2) == (tij(1, 1) * tij(1, 3) - tij(1, 2) * tij(2, 3) - tij(1, 3) * tij(3, 3)) *
                             Rational(2));
}

TEST_CASE("two-velocity transport squares like its shift diagonal", "[opmatrix]") {
    RatMatrix m(2, 2, {1, 1, 1, -1});
    const OpMatrix t = transport_matrix(m, {{1}, {-1}});
    const OpMatrix lhs = t * t;
    const OpMatrix rhs = OpMatrix::from_rational(m, 1) *
                         OpMatrix::diagonal({ShiftPoly::shift({2}), ShiftPoly::shift({-2})}) *
                         OpMatrix::from_rational(m.inverse(), 1);
    CHECK(lhs == rhs);
    CHECK(lhs.at(0, 0) ==
          (ShiftPoly::shift({2}) + ShiftPoly::shift({-2})) * Rational(1, 2));
}

TEST_CASE("restriction splits a matrix", "[opmatrix]") {
    Rng rng(13);
    const OpMatrix a = testsupport::random_op_matrix(rng, 3);

    CHECK(mat_restrict(a, {1, 2, 3}) == a);

    const OpMatrix kept = mat_restrict(a, {1, 3});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(kept.at(1, i).is_zero());
        CHECK(kept.at(i, 1).is_zero());
    }
    CHECK(kept.at(0, 2) == a.at(0, 2));
    CHECK(kept + (a - kept) == a);

    // N = 1 keeps everything, so the companion part vanishes
    CHECK((a - mat_restrict(a, {1, 2, 3})).is_zero());

    CHECK_THROWS_AS(mat_restrict(a, {}), std::invalid_argument);
    CHECK_THROWS_AS(mat_restrict(a, {0, 1}), std::invalid_argument);
}

TEST_CASE("characteristic polynomial of the zero matrix", "[opmatrix]") {
    const CharPoly chi = mat_charpoly(OpMatrix(3, 1));
    REQUIRE(chi.coeffs.size() == 4);
    CHECK(chi.coeffs[0].is_zero());
    CHECK(chi.coeffs[1].is_zero());
    CHECK(chi.coeffs[2].is_zero());
    CHECK(chi.coeffs[3] == ShiftPoly::one(1));
}

TEST_CASE("charpoly coefficients of the over-relaxed matrix", "[opmatrix]") {
    // gamma2 = -tr(A); gamma1 is the sum of principal 2x2 minors and gamma0
    // is -det(A). Expanded in the entries of T with A = T diag(1,-1,-1).
    Rng rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = testsupport::random_invertible_matrix(rng, 3);
        const OpMatrix t = transport_matrix(m, testsupport::random_velocities(rng, 3));
        auto [a, b] = over_relaxed_pair(t);
        const CharPoly chi = mat_charpoly(a);
        auto tij = [&t](std::size_t i, std::size_t j) { return t.at(i - 1, j - 1); };

        CHECK(chi.coeffs[3] == ShiftPoly::one(1));
        CHECK(chi.coeffs[2] == -(tij(1, 1) - tij(2, 2) - tij(3, 3)));
        CHECK(chi.coeffs[1] ==
              -(tij(1, 1) * tij(2, 2) + tij(1, 1) * tij(3, 3) - tij(2, 2) * tij(3, 3) -
                tij(1, 2) * tij(2, 1) - tij(1, 3) * tij(3, 1) + tij(2, 3) * tij(3, 2)));
        CHECK(chi.coeffs[0] ==
              -(tij(1, 1) * tij(2, 2) * tij(3, 3) - tij(1, 1) * tij(2, 3) * tij(3, 2) -
                tij(1, 2) * tij(2, 1) * tij(3, 3) + tij(1, 2) * tij(2, 3) * tij(3, 1) +
                tij(1, 3) * tij(2, 1) * tij(3, 2) - tij(1, 3) * tij(2, 2) * tij(3, 1)));
    }
}

TEST_CASE("transport charpoly equals the shift product", "[opmatrix][property]") {
    Rng rng(15);
    for (int trial = 0; trial < 40; ++trial) {
        const auto m = testsupport::random_invertible_matrix(rng, 3);
        const auto velocities = testsupport::random_velocities(rng, 3);
        const CharPoly chi = mat_charpoly(transport_matrix(m, velocities));
        const auto oracle = shift_product_charpoly(velocities);
        REQUIRE(chi.coeffs.size() == oracle.size());
        for (std::size_t k = 0; k < oracle.size(); ++k) CHECK(chi.coeffs[k] == oracle[k]);
    }
}

TEST_CASE("Cayley-Hamilton", "[opmatrix][property]") {
    Rng rng(16);
    for (int trial = 0; trial < 30; ++trial) {
        const OpMatrix a = testsupport::random_op_matrix(rng, 3);
        CHECK(mat_eval_charpoly(mat_charpoly(a), a).is_zero());
    }
    // and one 4x4 for good measure
    const OpMatrix a4 = testsupport::random_op_matrix(rng, 4, 1, 1, 1);
    CHECK(mat_eval_charpoly(mat_charpoly(a4), a4).is_zero());
}

TEST_CASE("charpoly of the identity evaluated at the identity", "[opmatrix]") {
    const OpMatrix eye = OpMatrix::identity(2, 1);
    // chi = (X - 1)^2, so evaluating at X = I gives zero
    const CharPoly chi = mat_charpoly(eye);
    CHECK(chi.coeffs[0] == ShiftPoly::one(1));
    CHECK(chi.coeffs[1] == ShiftPoly::constant(1, -2));
    CHECK(mat_eval_charpoly(chi, eye).is_zero());
}

TEST_CASE("cofactor determinant agrees with the constant coefficient", "[opmatrix][property]") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const OpMatrix a = testsupport::random_op_matrix(rng, 3);
        const CharPoly chi = mat_charpoly(a);
        // det(XI - A) at X = 0 is (-1)^q det(A)
        CHECK(chi.coeffs[0] == -mat_det_cofactor(a));
    }
}

TEST_CASE("matrix symbol", "[opmatrix]") {
    const auto eye = mat_symbol(OpMatrix::identity(3, 1), {1.234});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(eye[i][j] - std::complex<double>(i == j ? 1.0 : 0.0)) < 1e-15);

    // D1Q2 transport: symbol is M diag(e^{-i theta}, e^{i theta}) M^{-1}
    RatMatrix m(2, 2, {1, 1, 1, -1});
    const OpMatrix t = transport_matrix(m, {{1}, {-1}});
    const double theta = 0.81;
    const auto ts = mat_symbol(t, {theta});
    const std::complex<double> em = std::polar(1.0, -theta), ep = std::polar(1.0, theta);
    // conjugation computed by hand for the 2x2 case
    CHECK(std::abs(ts[0][0] - (em + ep) / 2.0) < 1e-14);
    CHECK(std::abs(ts[0][1] - (em - ep) / 2.0) < 1e-14);
    CHECK(std::abs(ts[1][0] - (em - ep) / 2.0) < 1e-14);
    CHECK(std::abs(ts[1][1] - (em + ep) / 2.0) < 1e-14);
}

TEST_CASE("charpoly commutes with the symbol map", "[opmatrix][property]") {
    Rng rng(18);
    for (int trial = 0; trial < 25; ++trial) {
        const OpMatrix a = testsupport::random_op_matrix(rng, 3);
        const CharPoly chi = mat_charpoly(a);
        const double theta = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
        const auto sym = mat_symbol(a, {theta});
        const auto complex_chi = complex_charpoly(sym);
        REQUIRE(complex_chi.size() == chi.coeffs.size());
        for (std::size_t k = 0; k < complex_chi.size(); ++k)
            CHECK(std::abs(chi.coeffs[k].symbol({theta}) - complex_chi[k]) <= 1e-10);

        // third route: evaluate det(x0 I - sym) directly at sample points
        for (double x0 : {0.5, -1.25}) {
            auto shifted = sym;
            for (std::size_t i = 0; i < 3; ++i) {
                for (std::size_t j = 0; j < 3; ++j) shifted[i][j] = -sym[i][j];
                shifted[i][i] += x0;
            }
            std::complex<double> horner(0, 0);
            for (std::size_t k = complex_chi.size(); k-- > 0;)
                horner = horner * x0 + complex_chi[k];
            CHECK(std::abs(horner - complex_det(shifted)) <= 1e-9);
        }
    }
}
