#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbfd/derive.hpp"
#include "lbfd/scheme.hpp"

namespace lbfd {

/// Exact moment trajectory on a periodic 1-D lattice: one MomentState per
/// time level, starting at level 0.
struct Trajectory {
    std::vector<MomentState> levels;
    std::size_t lattice_size = 0;
    std::string scheme_label;

    std::size_t steps() const { return levels.empty() ? 0 : levels.size() - 1; }
};

/// Runs an LBS from a caller-supplied full moment state. This is the general
/// entry point: it makes the nonconserved (mesoscopic) content of the
/// initial data explicit, which is exactly where FDS-equivalent schemes can
/// still differ.
inline Trajectory run_lbs_from_state(const LbsSpec& spec, const MomentState& initial,
                                     std::size_t steps) {
    spec.validate();
    if (!spec.equilibria) throw std::invalid_argument("run_lbs: scheme has no equilibria");
    if (spec.d != 1) throw std::invalid_argument("run_lbs: simulation is 1-D");
    if (initial.moments() != spec.q) throw std::invalid_argument("run_lbs: initial state moment count");
    initial.validate();

    auto [a, b] = lbs_collision_matrices(spec);
    Trajectory traj;
    traj.lattice_size = initial.nodes();
    traj.scheme_label = spec.label;
    traj.levels.reserve(steps + 1);
    traj.levels.push_back(initial);
    for (std::size_t n = 0; n < steps; ++n)
        traj.levels.push_back(lbs_step(spec, a, b, traj.levels.back()));
    return traj;
}

/// Runs an LBS with the nonconserved moments initialized at equilibrium of
/// the given conserved fields.
inline Trajectory run_lbs(const LbsSpec& spec,
                          const std::vector<std::vector<Rational>>& initial_conserved,
                          std::size_t steps) {
    return run_lbs_from_state(spec, equilibrium_state(spec, initial_conserved), steps);
}

/// Residual of a trajectory against a closed recurrence.
struct RecurrenceReport {
    Rational max_residual = 0;  // exact; must be 0 for a matching pair
    std::optional<std::pair<std::size_t, std::size_t>> first_violation;  // (level, node)
    std::size_t levels_checked = 0;
};

/// Checks that the conserved moment of a trajectory satisfies the recurrence
/// at every level from the deepest lag onward, exactly. The produced level
/// n+1 is compared for every n >= q - N.
inline RecurrenceReport check_recurrence(const Trajectory& traj, const ClosedFds& fds) {
    const std::size_t depth = fds.lags();  // history levels needed: lags 0..depth
    if (traj.levels.size() < depth + 2)
        throw std::invalid_argument("check_recurrence: trajectory shorter than the deepest lag");

    RecurrenceReport report;
    for (std::size_t n = depth; n + 1 < traj.levels.size(); ++n) {
        std::vector<std::vector<std::vector<Rational>>> history(depth + 1);
        for (std::size_t j = 0; j <= depth; ++j) {
            history[j].reserve(fds.conserved);
            for (std::size_t t = 0; t < fds.conserved; ++t)
                history[j].push_back(traj.levels[n - j].values[t]);
        }
        const auto predicted = fds_apply(fds, history);
        const auto& actual = traj.levels[n + 1].values[fds.moment - 1];
        for (std::size_t x = 0; x < predicted.size(); ++x) {
            const Rational r = rat_abs(actual[x] - predicted[x]);
            if (r > report.max_residual) report.max_residual = r;
            if (r != 0 && !report.first_violation) report.first_violation = {n + 1, x};
        }
        ++report.levels_checked;
    }
    return report;
}

/// Level-by-level comparison of the conserved moments of two trajectories.
struct ConservedComparison {
    bool identical = true;
    std::optional<std::size_t> first_divergence_level;
    std::optional<std::size_t> first_divergence_node;
    std::size_t levels_compared = 0;
};

/// Documents whether two runs agree on the conserved moments. Equality of
/// the derived recurrences does not force equality here: the schemes can
/// disagree during the bootstrap levels (and hence afterwards) whenever the
/// initial nonconserved content is off equilibrium.
inline ConservedComparison compare_conserved(const Trajectory& ta, const Trajectory& tb,
                                             std::size_t n_conserved) {
    if (ta.lattice_size != tb.lattice_size)
        throw std::invalid_argument("compare_conserved: lattice sizes differ");
    ConservedComparison cmp;
    cmp.levels_compared = std::min(ta.levels.size(), tb.levels.size());
    for (std::size_t n = 0; n < cmp.levels_compared && cmp.identical; ++n) {
        for (std::size_t t = 0; t < n_conserved && cmp.identical; ++t) {
            const auto& ra = ta.levels[n].values.at(t);
            const auto& rb = tb.levels[n].values.at(t);
            for (std::size_t x = 0; x < ra.size(); ++x)
                if (ra[x] != rb[x]) {
                    cmp.identical = false;
                    cmp.first_divergence_level = n;
                    cmp.first_divergence_node = x;
                    break;
                }
        }
    }
    return cmp;
}

/// CSV export, one row per (level, node, moment), values as exact "p/q".
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "level,node,moment,value\n";
    for (std::size_t n = 0; n < traj.levels.size(); ++n)
        for (std::size_t i = 0; i < traj.levels[n].moments(); ++i)
            for (std::size_t x = 0; x < traj.levels[n].nodes(); ++x)
                os << n << "," << x << "," << (i + 1) << ","
                   << format_rational(traj.levels[n].values[i][x]) << "\n";
}

}  // namespace lbfd
