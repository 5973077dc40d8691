#pragma once

// Contextuality hierarchy: noncontextual < probabilistic < logical < strong.
// Possibilistic levels are decided by enumerating global assignments, the
// probabilistic level by exact rational linear feasibility.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ewfs/empirical.hpp"
#include "ewfs/error.hpp"
#include "ewfs/lp.hpp"
#include "ewfs/rational.hpp"

namespace ewfs {

inline constexpr std::uint64_t kMaxGlobalAssignments = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kMaxLpColumns = std::uint64_t{1} << 12;

// Total map from measurements (spec order) to outcomes.
struct GlobalAssignment {
    std::vector<int> values;

    int at(const MeasurementScenarioSpec& spec, const std::string& m) const { return values[spec.index_of(m)]; }

    std::vector<int> restrict_to(const MeasurementScenarioSpec& spec, std::size_t ctx) const {
        std::vector<int> s;
        for (const auto& v : spec.contexts[ctx]) s.push_back(values[spec.index_of(v)]);
        return s;
    }

    bool operator==(const GlobalAssignment&) const = default;
    auto operator<=>(const GlobalAssignment&) const = default;
};

enum class HierarchyLevel { Noncontextual, Probabilistic, Logical, Strong };

inline std::string to_string(HierarchyLevel l) {
    switch (l) {
        case HierarchyLevel::Noncontextual: return "NONCONTEXTUAL";
        case HierarchyLevel::Probabilistic: return "PROBABILISTIC";
        case HierarchyLevel::Logical: return "LOGICAL";
        case HierarchyLevel::Strong: return "STRONG";
    }
    return "?";
}

namespace detail {

inline std::uint64_t global_count(const MeasurementScenarioSpec& spec) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < spec.measurements.size(); ++i) {
        n *= static_cast<std::uint64_t>(spec.num_outcomes);
        if (n > kMaxGlobalAssignments) {
            throw error("scenario too large: more than 2^24 global assignments");
        }
    }
    return n;
}

inline GlobalAssignment decode_global(const MeasurementScenarioSpec& spec, std::uint64_t idx) {
    GlobalAssignment g{std::vector<int>(spec.measurements.size())};
    const auto r = static_cast<std::uint64_t>(spec.num_outcomes);
    for (std::size_t i = spec.measurements.size(); i-- > 0;) {
        g.values[i] = static_cast<int>(idx % r);
        idx /= r;
    }
    return g;
}

// Per context, the position of each context variable in the measurement list.
inline std::vector<std::vector<std::size_t>> context_positions(const MeasurementScenarioSpec& spec) {
    std::vector<std::vector<std::size_t>> pos;
    for (const auto& c : spec.contexts) {
        std::vector<std::size_t> p;
        for (const auto& v : c) p.push_back(spec.index_of(v));
        pos.push_back(std::move(p));
    }
    return pos;
}

inline std::size_t section_entry(const MeasurementScenarioSpec& spec, const std::vector<std::size_t>& pos,
                                 const std::vector<int>& values) {
    std::size_t idx = 0;
    for (auto p : pos) idx = idx * static_cast<std::size_t>(spec.num_outcomes) + static_cast<std::size_t>(values[p]);
    return idx;
}

}  // namespace detail

// Every global assignment whose restriction to each context is possible.
inline std::vector<GlobalAssignment> consistent_globals(const PossibilisticModel& pm) {
    pm.validate();
    const auto total = detail::global_count(pm.spec);
    const auto pos = detail::context_positions(pm.spec);
    std::vector<GlobalAssignment> out;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        auto g = detail::decode_global(pm.spec, idx);
        bool ok = true;
        for (std::size_t c = 0; c < pos.size() && ok; ++c) ok = pm.supports[c][detail::section_entry(pm.spec, pos[c], g.values)];
        if (ok) out.push_back(std::move(g));
    }
    return out;
}

inline bool is_strongly_contextual(const PossibilisticModel& pm) { return consistent_globals(pm).empty(); }

struct LogicalWitness {
    bool contextual = false;
    std::size_t context = 0;
    std::vector<int> section;  // a possible section extending to no consistent global
};

inline LogicalWitness is_logically_contextual(const PossibilisticModel& pm) {
    const auto globals = consistent_globals(pm);
    const auto pos = detail::context_positions(pm.spec);
    for (std::size_t c = 0; c < pm.spec.contexts.size(); ++c) {
        std::vector<bool> covered(pm.supports[c].size(), false);
        for (const auto& g : globals) covered[detail::section_entry(pm.spec, pos[c], g.values)] = true;
        for (std::size_t idx = 0; idx < covered.size(); ++idx)
            if (pm.supports[c][idx] && !covered[idx]) return {true, c, pm.spec.section(c, idx)};
    }
    return {};
}

struct ProbabilisticVerdict {
    bool contextual = false;
    // True when the weights reproduce the snapped tables exactly; false when
    // feasibility needed the per-entry slack.
    bool exact = false;
    std::vector<std::pair<GlobalAssignment, Rational>> mixture;  // nonzero weights when noncontextual
};

inline constexpr double kLpSlack = 2e-9;

// Decides whether some distribution over global assignments marginalizes to
// every context table. Probabilities are snapped to rationals (denominator
// <= 10^6, within 1e-9) when possible. The exact system is tried first; if it is
// infeasible the entries are allowed to move by at most kLpSlack, and the
// model is contextual only if that is infeasible too.
inline ProbabilisticVerdict is_probabilistically_contextual(const EmpiricalModel& em) {
    em.validate();
    const auto total = detail::global_count(em.spec);
    if (total > kMaxLpColumns) throw error("scenario too large for the exact LP");
    const auto pos = detail::context_positions(em.spec);

    std::vector<std::vector<Rational>> snapped;
    for (std::size_t c = 0; c < em.tables.size(); ++c) {
        std::vector<Rational> row;
        for (double p : em.tables[c]) {
            const double clamped = p < 0.0 ? 0.0 : p;
            // Unsnappable entries keep their exact binary value.
            auto q = snap(clamped);
            row.push_back(q ? *q : Rational(clamped));
        }
        snapped.push_back(std::move(row));
    }

    const std::size_t cols = static_cast<std::size_t>(total);
    std::vector<GlobalAssignment> globals;
    for (std::uint64_t i = 0; i < total; ++i) globals.push_back(detail::decode_global(em.spec, i));

    // Rows: normalization, then one per (context, section).
    lp::Matrix a;
    std::vector<Rational> b;
    a.emplace_back(cols, Rational(1));
    b.emplace_back(1);
    for (std::size_t c = 0; c < snapped.size(); ++c)
        for (std::size_t idx = 0; idx < snapped[c].size(); ++idx) {
            std::vector<Rational> row(cols);
            for (std::size_t g = 0; g < cols; ++g)
                if (detail::section_entry(em.spec, pos[c], globals[g].values) == idx) row[g] = 1;
            a.push_back(std::move(row));
            b.push_back(snapped[c][idx]);
        }

    auto collect = [&](const std::vector<Rational>& x, bool exact) {
        ProbabilisticVerdict v{false, exact, {}};
        for (std::size_t g = 0; g < cols; ++g)
            if (x[g] != 0) v.mixture.emplace_back(globals[g], x[g]);
        return v;
    };

    if (auto x = lp::find_nonnegative_solution(a, b)) return collect(*x, true);

    // Slack variables s+ and s- per table row, each bounded by delta through
    // a complementary variable.
    const std::size_t rows = a.size() - 1;
    const std::size_t width = cols + 4 * rows;
    const Rational delta(1, 500'000'000);  // kLpSlack
    lp::Matrix as;
    std::vector<Rational> bs;
    for (std::size_t r = 0; r < a.size(); ++r) {
        std::vector<Rational> row(width);
        for (std::size_t g = 0; g < cols; ++g) row[g] = a[r][g];
        if (r > 0) {
            row[cols + 4 * (r - 1)] = 1;
            row[cols + 4 * (r - 1) + 1] = -1;
        }
        as.push_back(std::move(row));
        bs.push_back(b[r]);
    }
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < 2; ++k) {
            std::vector<Rational> row(width);
            row[cols + 4 * r + k] = 1;
            row[cols + 4 * r + 2 + k] = 1;
            as.push_back(std::move(row));
            bs.push_back(delta);
        }
    if (auto x = lp::find_nonnegative_solution(as, bs)) {
        x->resize(cols);
        return collect(*x, false);
    }
    return {true, false, {}};
}

struct ClassificationReport {
    HierarchyLevel level = HierarchyLevel::Noncontextual;
    std::size_t consistent_global_count = 0;
    std::size_t global_count = 0;
    LogicalWitness witness;
    std::optional<ProbabilisticVerdict> lp;  // computed unless the model is strongly contextual
};

inline ClassificationReport classify_report(const EmpiricalModel& em, double eps = kPossibilisticEps,
                                            bool always_run_lp = false) {
    const auto pm = possibilistic(em, eps);
    ClassificationReport r;
    r.global_count = static_cast<std::size_t>(detail::global_count(pm.spec));
    r.consistent_global_count = consistent_globals(pm).size();
    r.witness = is_logically_contextual(pm);
    if (r.consistent_global_count == 0) r.level = HierarchyLevel::Strong;
    else if (r.witness.contextual) r.level = HierarchyLevel::Logical;
    if (r.level == HierarchyLevel::Noncontextual || always_run_lp) {
        r.lp = is_probabilistically_contextual(em);
        if (r.level == HierarchyLevel::Noncontextual && r.lp->contextual) r.level = HierarchyLevel::Probabilistic;
    }
    return r;
}

inline HierarchyLevel classify(const EmpiricalModel& em, double eps = kPossibilisticEps) {
    return classify_report(em, eps).level;
}

}  // namespace ewfs
