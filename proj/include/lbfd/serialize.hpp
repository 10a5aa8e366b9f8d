#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lbfd/derive.hpp"
#include "lbfd/detail/sha256.hpp"
#include "lbfd/equiv.hpp"
#include "lbfd/scheme.hpp"
#include "lbfd/shift_poly.hpp"

namespace lbfd {

using nlohmann::json;

/// Stable content hash of a derived scheme: SHA-256 over the canonical text
/// rendering. Identical schemes fingerprint identically on every platform.
inline std::string fds_fingerprint(const Fds& fds) {
    return detail::sha256_hex(fds_canonical_string(fds));
}

/// Parses the canonical operator text form: `p/q*T[z1,...,zd]` terms joined
/// by " + ", or "0". The expected spatial dimension must be supplied since
/// the zero operator carries no offsets.
inline ShiftPoly parse_shift_poly(const std::string& text, std::size_t dim) {
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string body = trim(text);
    if (body.empty()) throw std::invalid_argument("operator text: empty");
    if (body == "0") return ShiftPoly::zero(dim);

    ShiftPoly acc = ShiftPoly::zero(dim);
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t next = body.find('+', pos);
        if (next == std::string::npos) next = body.size();
        const std::string term = trim(body.substr(pos, next - pos));
        pos = next + 1;
        if (term.empty()) throw std::invalid_argument("operator text: empty term in '" + text + "'");

        const std::size_t star = term.find('*');
        if (star == std::string::npos)
            throw std::invalid_argument("operator text: missing '*' in term '" + term + "'");
        const Rational coeff = parse_rational(trim(term.substr(0, star)));
        std::string tail = trim(term.substr(star + 1));
        if (tail.size() < 4 || tail.substr(0, 2) != "T[" || tail.back() != ']')
            throw std::invalid_argument("operator text: malformed shift in term '" + term + "'");
        tail = tail.substr(2, tail.size() - 3);

        Offset z;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = tail.find(',', start);
            const std::string piece = trim(tail.substr(start, comma - start));
            try {
                z.push_back(std::stoll(piece));
            } catch (const std::exception&) {
                throw std::invalid_argument("operator text: bad offset '" + piece + "'");
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (z.size() != dim)
            throw std::invalid_argument("operator text: offset rank mismatch in term '" + term + "'");
        acc += ShiftPoly::monomial(z, coeff);
    }
    return acc;
}

namespace detail {

inline Rational rational_from_json(const json& j, const std::string& where) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    throw std::invalid_argument(where + ": rationals must be strings like \"p/q\" (floats are not accepted)");
}

inline const json& require(const json& j, const std::string& key, const std::string& what) {
    auto it = j.find(key);
    if (it == j.end()) throw std::invalid_argument(what + ": missing field '" + key + "'");
    return *it;
}

}  // namespace detail

/// Reads a scheme definition from its JSON form. Validation errors name the
/// offending field.
inline LbsSpec scheme_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("scheme file: expected a JSON object");
    LbsSpec spec;
    spec.q = detail::require(j, "q", "scheme file").get<std::size_t>();
    spec.d = detail::require(j, "d", "scheme file").get<std::size_t>();
    spec.conserved = detail::require(j, "N", "scheme file").get<std::size_t>();
    if (j.contains("label")) spec.label = j["label"].get<std::string>();

    const json& m = detail::require(j, "M", "scheme file");
    if (!m.is_array() || m.size() != spec.q)
        throw std::invalid_argument("scheme file: 'M' must have q rows");
    spec.moment_matrix = RatMatrix(spec.q, spec.q);
    for (std::size_t r = 0; r < spec.q; ++r) {
        if (!m[r].is_array() || m[r].size() != spec.q)
            throw std::invalid_argument("scheme file: 'M' row " + std::to_string(r + 1) +
                                        " must have q entries");
        for (std::size_t c = 0; c < spec.q; ++c)
            spec.moment_matrix.at(r, c) = detail::rational_from_json(m[r][c], "scheme file: M");
    }

    const json& vel = detail::require(j, "velocities", "scheme file");
    if (!vel.is_array() || vel.size() != spec.q)
        throw std::invalid_argument("scheme file: 'velocities' must have q entries");
    for (const auto& v : vel) {
        Offset z;
        if (v.is_number_integer()) {
            z.push_back(v.get<std::int64_t>());
        } else if (v.is_array()) {
            for (const auto& comp : v) z.push_back(comp.get<std::int64_t>());
        } else {
            throw std::invalid_argument("scheme file: velocities must be integer vectors");
        }
        spec.velocities.push_back(std::move(z));
    }

    const json& s = detail::require(j, "S", "scheme file");
    if (!s.is_array() || s.size() != spec.q)
        throw std::invalid_argument("scheme file: 'S' must have q entries");
    for (const auto& entry : s) spec.relaxation.push_back(detail::rational_from_json(entry, "scheme file: S"));

    if (j.contains("equilibria") && !j["equilibria"].is_null()) {
        const json& eq = j["equilibria"];
        if (!eq.is_array() || eq.size() != spec.q)
            throw std::invalid_argument("scheme file: 'equilibria' must have q rows");
        RatMatrix e(spec.q, spec.conserved);
        for (std::size_t r = 0; r < spec.q; ++r) {
            if (!eq[r].is_array() || eq[r].size() != spec.conserved)
                throw std::invalid_argument("scheme file: 'equilibria' rows must have N entries");
            for (std::size_t c = 0; c < spec.conserved; ++c)
                e.at(r, c) = detail::rational_from_json(eq[r][c], "scheme file: equilibria");
        }
        spec.equilibria = e;
    }

    spec.validate();
    return spec;
}

inline LbsSpec scheme_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scheme file: ") + e.what());
    }
    return scheme_from_json(j);
}

inline json scheme_to_json(const LbsSpec& spec) {
    json j;
    if (!spec.label.empty()) j["label"] = spec.label;
    j["q"] = spec.q;
    j["d"] = spec.d;
    j["N"] = spec.conserved;
    json m = json::array();
    for (std::size_t r = 0; r < spec.q; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < spec.q; ++c)
            row.push_back(format_rational(spec.moment_matrix.at(r, c)));
        m.push_back(std::move(row));
    }
    j["M"] = std::move(m);
    json vel = json::array();
    for (const auto& v : spec.velocities) vel.push_back(v);
    j["velocities"] = std::move(vel);
    json s = json::array();
    for (const auto& r : spec.relaxation) s.push_back(format_rational(r));
    j["S"] = std::move(s);
    if (spec.equilibria) {
        json eq = json::array();
        for (std::size_t r = 0; r < spec.q; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < spec.conserved; ++c)
                row.push_back(format_rational(spec.equilibria->at(r, c)));
            eq.push_back(std::move(row));
        }
        j["equilibria"] = std::move(eq);
    }
    return j;
}

/// Row-major operator-text rendering of a square matrix.
inline json op_matrix_to_json(const OpMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline OpMatrix op_matrix_from_json(const json& j, std::size_t dim) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected rows");
    OpMatrix m(j.size(), dim);
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != j.size())
            throw std::invalid_argument("matrix: must be square");
        for (std::size_t c = 0; c < j.size(); ++c)
            m.at(i, c) = parse_shift_poly(j[i][c].get<std::string>(), dim);
    }
    return m;
}

inline json fds_to_json(const Fds& fds) {
    json j;
    j["q"] = fds.q;
    j["d"] = fds.gamma.front().dim();
    j["N"] = fds.conserved;
    j["moment"] = fds.moment;
    json gamma = json::array();
    for (const auto& g : fds.gamma) gamma.push_back(g.str());
    j["gamma"] = std::move(gamma);
    json homog = json::array();
    for (const auto& h : fds.homogeneous) homog.push_back(h.str());
    j["homogeneous"] = std::move(homog);
    auto rows_to_json = [](const std::vector<std::vector<ShiftPoly>>& rows) {
        json out = json::array();
        for (const auto& row : rows) {
            json r = json::array();
            for (const auto& op : row) r.push_back(op.str());
            out.push_back(std::move(r));
        }
        return out;
    };
    if (!fds.cross.empty()) j["cross"] = rows_to_json(fds.cross);
    j["source"] = rows_to_json(fds.source);
    j["fingerprint"] = fds_fingerprint(fds);
    return j;
}

/// Rebuilds a derived scheme from its JSON form. The 'd' field supplies the
/// spatial dimension (operator texts for the zero operator carry no offsets).
inline Fds fds_from_json(const json& j) {
    Fds fds;
    const std::size_t dim = detail::require(j, "d", "fds").get<std::size_t>();
    fds.q = detail::require(j, "q", "fds").get<std::size_t>();
    fds.conserved = detail::require(j, "N", "fds").get<std::size_t>();
    fds.moment = detail::require(j, "moment", "fds").get<std::size_t>();
    for (const auto& g : detail::require(j, "gamma", "fds"))
        fds.gamma.push_back(parse_shift_poly(g.get<std::string>(), dim));
    for (const auto& h : detail::require(j, "homogeneous", "fds"))
        fds.homogeneous.push_back(parse_shift_poly(h.get<std::string>(), dim));
    auto rows_from_json = [dim](const json& rows) {
        std::vector<std::vector<ShiftPoly>> out;
        for (const auto& row : rows) {
            std::vector<ShiftPoly> r;
            for (const auto& op : row) r.push_back(parse_shift_poly(op.get<std::string>(), dim));
            out.push_back(std::move(r));
        }
        return out;
    };
    if (j.contains("cross")) fds.cross = rows_from_json(j["cross"]);
    fds.source = rows_from_json(detail::require(j, "source", "fds"));
    return fds;
}

inline json equiv_report_to_json(const EquivReport& report) {
    json j;
    json conditions = json::array();
    for (const auto& c : report.conditions) {
        json v;
        v["name"] = c.name;
        v["holds"] = c.holds;
        v["lhs"] = c.lhs;
        v["rhs"] = c.rhs;
        conditions.push_back(std::move(v));
    }
    j["conditions"] = std::move(conditions);
    j["all_conditions_hold"] = report.all_conditions_hold;
    if (report.fds_match) {
        j["fds_match"] = *report.fds_match;
        if (!*report.fds_match) j["fds_diff_component"] = report.fds_diff_component;
    }
    if (!report.notes.empty()) j["notes"] = report.notes;
    return j;
}

inline std::string equiv_report_to_text(const EquivReport& report) {
    std::ostringstream os;
    for (const auto& c : report.conditions) {
        os << (c.holds ? "  [ok]   " : "  [FAIL] ") << c.name << "\n";
        if (!c.holds) os << "         lhs: " << c.lhs << "\n         rhs: " << c.rhs << "\n";
    }
    os << "conditions: " << (report.all_conditions_hold ? "all hold" : "violated") << "\n";
    if (report.fds_match) {
        os << "derived FDS: " << (*report.fds_match ? "identical" : "different");
        if (!*report.fds_match) os << " (first difference at " << report.fds_diff_component << ")";
        os << "\n";
    }
    for (const auto& n : report.notes) os << "note: " << n << "\n";
    return os.str();
}

}  // namespace lbfd
