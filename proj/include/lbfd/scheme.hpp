#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lbfd/op_matrix.hpp"
#include "lbfd/rational.hpp"
#include "lbfd/shift_poly.hpp"

namespace lbfd {

/// Definition of a lattice Boltzmann scheme in moment form: an invertible
/// moment matrix M over the rationals, one integer velocity per population,
/// a diagonal of relaxation rates (zero exactly on the N conserved moments),
/// and optionally a linear equilibrium map sending the conserved moments to
/// all q equilibria.
struct LbsSpec {
    std::size_t q = 0;          // number of velocities / moments
    std::size_t d = 1;          // spatial dimension
    std::size_t conserved = 1;  // N, number of conserved moments
    RatMatrix moment_matrix;    // q x q, invertible
    std::vector<Offset> velocities;
    std::vector<Rational> relaxation;      // diagonal of S
    std::optional<RatMatrix> equilibria;   // q x N; m_eq = equilibria * (m_1..m_N)
    std::string label;

    void validate() const {
        if (q < 2) throw std::invalid_argument("scheme: q must be at least 2");
        if (d < 1) throw std::invalid_argument("scheme: d must be positive");
        if (conserved < 1 || conserved >= q)
            throw std::invalid_argument("scheme: need 1 <= N < q");
        if (moment_matrix.rows() != q || moment_matrix.cols() != q)
            throw std::invalid_argument("scheme: moment matrix must be q x q");
        if (moment_matrix.det() == 0)
            throw std::invalid_argument("scheme: moment matrix is singular");
        if (velocities.size() != q)
            throw std::invalid_argument("scheme: expected q velocities");
        for (const auto& c : velocities)
            if (c.size() != d) throw std::invalid_argument("scheme: velocity dimension mismatch");
        if (relaxation.size() != q)
            throw std::invalid_argument("scheme: expected q relaxation rates");
        for (std::size_t i = 0; i < q; ++i) {
            if (i < conserved) {
                if (relaxation[i] != 0)
                    throw std::invalid_argument("scheme: conserved moments need relaxation rate 0");
            } else if (relaxation[i] <= 0 || relaxation[i] > 2) {
                throw std::invalid_argument("scheme: nonconserved relaxation rates must lie in (0,2]");
            }
        }
        if (equilibria) {
            if (equilibria->rows() != q || equilibria->cols() != conserved)
                throw std::invalid_argument("scheme: equilibria must be q x N");
            for (std::size_t i = 0; i < conserved; ++i)
                for (std::size_t j = 0; j < conserved; ++j)
                    if (equilibria->at(i, j) != Rational(i == j ? 1 : 0))
                        throw std::invalid_argument(
                            "scheme: equilibrium of a conserved moment must be the moment itself");
        }
    }
};

/// Moment values on a periodic 1-D lattice: one row of L exact rationals per
/// moment.
struct MomentState {
    std::vector<std::vector<Rational>> values;  // [moment][node]

    std::size_t moments() const { return values.size(); }
    std::size_t nodes() const { return values.empty() ? 0 : values[0].size(); }

    void validate() const {
        for (const auto& row : values)
            if (row.size() != nodes() || row.empty())
                throw std::invalid_argument("MomentState: rows must share one positive length");
    }

    bool operator==(const MomentState& o) const { return values == o.values; }
};

/// Transport matrix M diag(T^{c_1}, ..., T^{c_q}) M^{-1} for a bare moment
/// matrix and velocity list, with M^{-1} computed exactly.
inline OpMatrix transport_matrix(const RatMatrix& moment_matrix,
                                 const std::vector<Offset>& velocities) {
    if (moment_matrix.rows() != velocities.size())
        throw std::invalid_argument("transport: one velocity per moment required");
    std::vector<ShiftPoly> shifts;
    shifts.reserve(velocities.size());
    for (const auto& c : velocities) shifts.push_back(ShiftPoly::shift(c));
    const std::size_t dim = velocities.front().size();
    const OpMatrix m = OpMatrix::from_rational(moment_matrix, dim);
    const OpMatrix minv = OpMatrix::from_rational(moment_matrix.inverse(), dim);
    return m * OpMatrix::diagonal(shifts) * minv;
}

/// Transport matrix T of a scheme.
inline OpMatrix lbs_transport(const LbsSpec& spec) {
    spec.validate();
    return transport_matrix(spec.moment_matrix, spec.velocities);
}

/// Collision pair A = T(I - S), B = T S.
inline std::pair<OpMatrix, OpMatrix> lbs_collision_matrices(const LbsSpec& spec) {
    const OpMatrix t = lbs_transport(spec);
    OpMatrix a(spec.q, spec.d);
    OpMatrix b(spec.q, spec.d);
    // S is diagonal, so right-multiplication just scales columns.
    for (std::size_t j = 0; j < spec.q; ++j) {
        const Rational& s = spec.relaxation[j];
        for (std::size_t i = 0; i < spec.q; ++i) {
            a.at(i, j) = t.at(i, j) * Rational(1 - s);
            b.at(i, j) = t.at(i, j) * s;
        }
    }
    return {a, b};
}

/// Rational q x q matrix projecting a full moment vector onto the equilibria:
/// column block 1..N is the equilibrium map, the rest is zero. Substituting
/// it for m_eq closes the scheme into the one-step update E = A + B * this.
inline RatMatrix equilibrium_projector(const LbsSpec& spec) {
    if (!spec.equilibria) throw std::invalid_argument("scheme: no equilibria defined");
    RatMatrix proj(spec.q, spec.q);
    for (std::size_t i = 0; i < spec.q; ++i)
        for (std::size_t j = 0; j < spec.conserved; ++j)
            proj.at(i, j) = spec.equilibria->at(i, j);
    return proj;
}

/// Closure matrix E = A + B * E_eq * P for linear equilibria; the scheme then
/// reads m^{n+1} = E m^n.
inline OpMatrix lbs_closure(const LbsSpec& spec) {
    auto [a, b] = lbs_collision_matrices(spec);
    return a + b * OpMatrix::from_rational(equilibrium_projector(spec), spec.d);
}

/// Equilibrium moment state of the given conserved rows.
inline MomentState equilibrium_state(const LbsSpec& spec,
                                     const std::vector<std::vector<Rational>>& conserved_rows) {
    if (!spec.equilibria) throw std::invalid_argument("scheme: no equilibria defined");
    if (conserved_rows.size() != spec.conserved)
        throw std::invalid_argument("scheme: expected one row per conserved moment");
    const std::size_t nodes = conserved_rows[0].size();
    MomentState state;
    state.values.assign(spec.q, std::vector<Rational>(nodes));
    for (std::size_t i = 0; i < spec.q; ++i)
        for (std::size_t x = 0; x < nodes; ++x) {
            Rational acc = 0;
            for (std::size_t j = 0; j < spec.conserved; ++j)
                acc += spec.equilibria->at(i, j) * conserved_rows[j][x];
            state.values[i][x] = acc;
        }
    state.validate();
    return state;
}

/// One scheme update m^{n+1} = A m^n + B m_eq|^n on the periodic lattice,
/// all arithmetic exact.
inline MomentState lbs_step(const LbsSpec& spec, const OpMatrix& a, const OpMatrix& b,
                            const MomentState& state) {
    if (spec.d != 1) throw std::invalid_argument("lbs_step: lattice stepping is 1-D");
    if (state.moments() != spec.q) throw std::invalid_argument("lbs_step: state moment count mismatch");
    state.validate();
    const std::int64_t nodes = static_cast<std::int64_t>(state.nodes());
    const std::vector<std::int64_t> extents = {nodes};

    std::vector<std::vector<Rational>> eq_rows(spec.conserved);
    for (std::size_t j = 0; j < spec.conserved; ++j) eq_rows[j] = state.values[j];
    const MomentState eq = equilibrium_state(spec, eq_rows);

    MomentState out;
    out.values.assign(spec.q, std::vector<Rational>(state.nodes()));
    for (std::size_t i = 0; i < spec.q; ++i) {
        for (std::size_t j = 0; j < spec.q; ++j) {
            if (!a.at(i, j).is_zero()) {
                auto part = a.at(i, j).apply(state.values[j], extents);
                for (std::size_t x = 0; x < part.size(); ++x) out.values[i][x] += part[x];
            }
            if (!b.at(i, j).is_zero()) {
                auto part = b.at(i, j).apply(eq.values[j], extents);
                for (std::size_t x = 0; x < part.size(); ++x) out.values[i][x] += part[x];
            }
        }
    }
    return out;
}

}  // namespace lbfd
