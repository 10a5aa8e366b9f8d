#pragma once

#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbfd/op_matrix.hpp"
#include "lbfd/scheme.hpp"

namespace lbfd {

/// Multi-step finite difference scheme on a conserved moment, as produced by
/// eliminating the nonconserved moments from an LBS.
///
/// Lag indexing: lag j refers to time level n - j throughout, so the update
/// reads
///   m_i^{n+1} = sum_j homogeneous[j] m_i^{n-j}
///             + sum_j cross[j] . m^{n-j}          (empty when N = 1)
///             + sum_j source[j] . m_eq|^{n-j}
/// with j running over 0..q-N. The gamma list holds the characteristic
/// polynomial coefficients of the restricted matrix, lowest degree first,
/// with gamma.back() the ring identity.
struct Fds {
    std::size_t q = 0;
    std::size_t conserved = 1;  // N
    std::size_t moment = 1;     // i, 1-based
    std::vector<ShiftPoly> gamma;
    std::vector<ShiftPoly> homogeneous;            // [lag]
    std::vector<std::vector<ShiftPoly>> cross;     // [lag][column], only for N > 1
    std::vector<std::vector<ShiftPoly>> source;    // [lag][column]

    std::size_t lags() const { return q - conserved; }

    bool operator==(const Fds& o) const {
        return q == o.q && conserved == o.conserved && moment == o.moment && gamma == o.gamma &&
               homogeneous == o.homogeneous && cross == o.cross && source == o.source;
    }
};

/// The same recurrence after substituting a linear equilibrium map: one
/// operator row per lag acting on the conserved moments only.
struct ClosedFds {
    std::size_t q = 0;
    std::size_t conserved = 1;
    std::size_t moment = 1;
    std::vector<std::vector<ShiftPoly>> coeffs;  // [lag][conserved index]

    std::size_t lags() const { return q - conserved; }

    bool operator==(const ClosedFds& o) const {
        return q == o.q && conserved == o.conserved && moment == o.moment && coeffs == o.coeffs;
    }
};

/// Canonical row/column index set isolating conserved moment i together with
/// all nonconserved moments.
inline std::set<std::size_t> canonical_keep_set(std::size_t q, std::size_t n_conserved,
                                                std::size_t moment) {
    std::set<std::size_t> keep = {moment};
    for (std::size_t k = n_conserved + 1; k <= q; ++k) keep.insert(k);
    return keep;
}

/// Derives the multi-step scheme for conserved moment i from the collision
/// pair (A, B). The splitting index set defaults to the canonical one; a
/// different admissible set of the same size q-N+1 containing i may be
/// supplied.
inline Fds fds_from_matrices(const OpMatrix& a, const OpMatrix& b, std::size_t n_conserved,
                             std::size_t moment, const std::set<std::size_t>* keep_override = nullptr) {
    const std::size_t q = a.size();
    if (b.size() != q || b.dim() != a.dim()) throw std::invalid_argument("fds: A and B shapes differ");
    if (n_conserved < 1 || n_conserved >= q) throw std::invalid_argument("fds: need 1 <= N < q");
    if (moment < 1 || moment > n_conserved) throw std::invalid_argument("fds: conserved index out of range");

    const std::set<std::size_t> keep =
        keep_override ? *keep_override : canonical_keep_set(q, n_conserved, moment);
    if (keep.size() != q - n_conserved + 1 || !keep.count(moment))
        throw std::invalid_argument("fds: splitting set must contain i and all q-N nonconserved indices");

    const OpMatrix a_kept = mat_restrict(a, keep);
    const OpMatrix a_off = a - a_kept;

    // gamma comes from the characteristic polynomial of the kept submatrix;
    // the full restricted matrix only adds a factor X^{N-1}.
    OpMatrix sub(keep.size(), a.dim());
    {
        std::vector<std::size_t> idx(keep.begin(), keep.end());
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                sub.at(r, c) = a.at(idx[r] - 1, idx[c] - 1);
    }
    const CharPoly chi = mat_charpoly(sub);

    Fds out;
    out.q = q;
    out.conserved = n_conserved;
    out.moment = moment;
    out.gamma = chi.coeffs;  // gamma_0 .. gamma_{q+1-N}, monic top

    const std::size_t depth = q - n_conserved;  // lags 0..depth
    std::vector<OpMatrix> powers;               // A_i^0 .. A_i^depth
    powers.reserve(depth + 1);
    powers.push_back(OpMatrix::identity(q, a.dim()));
    for (std::size_t l = 1; l <= depth; ++l) powers.push_back(powers.back() * a_kept);

    out.homogeneous.reserve(depth + 1);
    for (std::size_t j = 0; j <= depth; ++j) out.homogeneous.push_back(-out.gamma[depth - j]);

    for (std::size_t k = 0; k <= depth; ++k) {
        // Theta_k = sum_{l=0}^{k} gamma_{q+1-N+l-k} A_i^l
        OpMatrix theta(q, a.dim());
        for (std::size_t l = 0; l <= k; ++l) {
            const ShiftPoly& g = out.gamma[depth + 1 + l - k];
            if (!g.is_zero()) theta = theta + powers[l] * g;
        }
        out.source.push_back((theta * b).row(moment - 1));
        if (n_conserved > 1) out.cross.push_back((theta * a_off).row(moment - 1));
    }
    return out;
}

/// Derivation straight from a scheme definition.
inline Fds fds_from_lbs(const LbsSpec& spec, std::size_t moment,
                        const std::set<std::size_t>* keep_override = nullptr) {
    auto [a, b] = lbs_collision_matrices(spec);
    return fds_from_matrices(a, b, spec.conserved, moment, keep_override);
}

/// Substitutes m_eq = equilibria * (m_1..m_N) and merges everything into one
/// operator row per lag over the conserved moments.
inline ClosedFds fds_close(const Fds& fds, const RatMatrix& equilibria) {
    if (equilibria.rows() != fds.q || equilibria.cols() != fds.conserved)
        throw std::invalid_argument("fds_close: equilibria must be q x N");
    for (std::size_t i = 0; i < fds.conserved; ++i)
        for (std::size_t j = 0; j < fds.conserved; ++j)
            if (equilibria.at(i, j) != Rational(i == j ? 1 : 0))
                throw std::invalid_argument("fds_close: conserved rows of the equilibria must be unit rows");

    const std::size_t dim = fds.gamma.front().dim();
    ClosedFds out;
    out.q = fds.q;
    out.conserved = fds.conserved;
    out.moment = fds.moment;
    out.coeffs.assign(fds.lags() + 1, std::vector<ShiftPoly>(fds.conserved, ShiftPoly::zero(dim)));
    for (std::size_t j = 0; j <= fds.lags(); ++j) {
        out.coeffs[j][fds.moment - 1] += fds.homogeneous[j];
        for (std::size_t t = 0; t < fds.conserved; ++t) {
            for (std::size_t c = 0; c < fds.q; ++c)
                if (equilibria.at(c, t) != 0)
                    out.coeffs[j][t] += fds.source[j][c] * equilibria.at(c, t);
            if (!fds.cross.empty()) out.coeffs[j][t] += fds.cross[j][t];
        }
    }
    return out;
}

/// Verdict of a structural comparison plus the first differing component.
struct FdsDiff {
    bool equal = true;
    std::string component;  // e.g. "gamma[2]" or "source[lag 1][2]"
    std::string lhs, rhs;
};

/// Structural equality of two derived schemes. Components are compared in a
/// fixed documented order: gamma from the monic top downward, then the
/// homogeneous, cross and source rows by ascending lag.
inline FdsDiff fds_equal(const Fds& f1, const Fds& f2) {
    if (f1.q != f2.q || f1.conserved != f2.conserved || f1.moment != f2.moment)
        throw std::invalid_argument("fds_equal: incomparable shapes");
    FdsDiff diff;
    auto mismatch = [&diff](std::string component, const ShiftPoly& l, const ShiftPoly& r) {
        diff.equal = false;
        diff.component = std::move(component);
        diff.lhs = l.str();
        diff.rhs = r.str();
    };
    for (std::size_t k = f1.gamma.size(); k-- > 0;)
        if (f1.gamma[k] != f2.gamma[k]) {
            mismatch("gamma[" + std::to_string(k) + "]", f1.gamma[k], f2.gamma[k]);
            return diff;
        }
    for (std::size_t j = 0; j < f1.homogeneous.size(); ++j)
        if (f1.homogeneous[j] != f2.homogeneous[j]) {
            mismatch("homogeneous[lag " + std::to_string(j) + "]", f1.homogeneous[j], f2.homogeneous[j]);
            return diff;
        }
    for (std::size_t j = 0; j < f1.cross.size(); ++j)
        for (std::size_t c = 0; c < f1.cross[j].size(); ++c)
            if (f1.cross[j][c] != f2.cross[j][c]) {
                mismatch("cross[lag " + std::to_string(j) + "][" + std::to_string(c + 1) + "]",
                         f1.cross[j][c], f2.cross[j][c]);
                return diff;
            }
    for (std::size_t j = 0; j < f1.source.size(); ++j)
        for (std::size_t c = 0; c < f1.source[j].size(); ++c)
            if (f1.source[j][c] != f2.source[j][c]) {
                mismatch("source[lag " + std::to_string(j) + "][" + std::to_string(c + 1) + "]",
                         f1.source[j][c], f2.source[j][c]);
                return diff;
            }
    return diff;
}

inline FdsDiff closed_fds_equal(const ClosedFds& f1, const ClosedFds& f2) {
    if (f1.q != f2.q || f1.conserved != f2.conserved || f1.moment != f2.moment)
        throw std::invalid_argument("closed_fds_equal: incomparable shapes");
    FdsDiff diff;
    for (std::size_t j = 0; j < f1.coeffs.size(); ++j)
        for (std::size_t t = 0; t < f1.coeffs[j].size(); ++t)
            if (f1.coeffs[j][t] != f2.coeffs[j][t]) {
                diff.equal = false;
                diff.component = "coeff[lag " + std::to_string(j) + "][" + std::to_string(t + 1) + "]";
                diff.lhs = f1.coeffs[j][t].str();
                diff.rhs = f2.coeffs[j][t].str();
                return diff;
            }
    return diff;
}

/// Advances a closed recurrence one step: history[j] holds the conserved
/// rows at time level n - j, and the result is moment i at level n + 1.
inline std::vector<Rational> fds_apply(const ClosedFds& fds,
                                       const std::vector<std::vector<std::vector<Rational>>>& history) {
    if (history.size() < fds.lags() + 1)
        throw std::invalid_argument("fds_apply: insufficient history for the deepest lag");
    const std::size_t nodes = history[0].at(0).size();
    std::vector<Rational> next(nodes, Rational(0));
    const std::vector<std::int64_t> extents = {static_cast<std::int64_t>(nodes)};
    for (std::size_t j = 0; j <= fds.lags(); ++j) {
        if (history[j].size() != fds.conserved)
            throw std::invalid_argument("fds_apply: history level has wrong number of conserved rows");
        for (std::size_t t = 0; t < fds.conserved; ++t) {
            if (fds.coeffs[j][t].is_zero()) continue;
            auto part = fds.coeffs[j][t].apply(history[j][t], extents);
            for (std::size_t x = 0; x < nodes; ++x) next[x] += part[x];
        }
    }
    return next;
}

/// Single-moment convenience overload (N = 1): history[j] is the conserved
/// grid at level n - j.
inline std::vector<Rational> fds_apply(const ClosedFds& fds,
                                       const std::vector<std::vector<Rational>>& history) {
    std::vector<std::vector<std::vector<Rational>>> wrapped;
    wrapped.reserve(history.size());
    for (const auto& level : history) wrapped.push_back({level});
    return fds_apply(fds, wrapped);
}

/// Deterministic text rendering used for fingerprints and reports. Every
/// component appears in a fixed order and in the canonical operator text
/// form, so equal schemes serialize identically on any platform.
inline std::string fds_canonical_string(const Fds& fds) {
    std::ostringstream os;
    os << "fds/v1;q=" << fds.q << ";N=" << fds.conserved << ";i=" << fds.moment;
    os << ";gamma=";
    for (std::size_t k = 0; k < fds.gamma.size(); ++k) os << (k ? "|" : "") << fds.gamma[k].str();
    os << ";homogeneous=";
    for (std::size_t j = 0; j < fds.homogeneous.size(); ++j)
        os << (j ? "|" : "") << fds.homogeneous[j].str();
    // "~" separates row cells: it cannot occur inside operator text, so the
    // rendering stays injective.
    os << ";cross=";
    for (std::size_t j = 0; j < fds.cross.size(); ++j) {
        if (j) os << "|";
        for (std::size_t c = 0; c < fds.cross[j].size(); ++c)
            os << (c ? "~" : "") << fds.cross[j][c].str();
    }
    os << ";source=";
    for (std::size_t j = 0; j < fds.source.size(); ++j) {
        if (j) os << "|";
        for (std::size_t c = 0; c < fds.source[j].size(); ++c)
            os << (c ? "~" : "") << fds.source[j][c].str();
    }
    return os.str();
}

}  // namespace lbfd
