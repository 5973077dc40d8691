#pragma once

// Empirical models (one outcome distribution per maximal context), their
// possibilistic reduction, the reference tables for the Hardy and GHZ-Mermin
// models, and no-signalling checks.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann::json

#include "ewfs/error.hpp"
#include "ewfs/scenario.hpp"

namespace ewfs {

inline constexpr double kPossibilisticEps = 1e-9;

struct MeasurementScenarioSpec {
    std::vector<std::string> measurements;
    int num_outcomes = 2;
    std::vector<Context> contexts;

    void validate() const {
        if (num_outcomes < 1) throw error("scenario: need at least one outcome");
        for (std::size_t i = 0; i < measurements.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (measurements[i] == measurements[j]) throw error("scenario: duplicate measurement " + measurements[i]);
        for (const auto& c : contexts) {
            if (c.empty()) throw error("scenario: empty context");
            for (const auto& v : c) index_of(v);
        }
        for (const auto& m : measurements) {
            const bool used = std::any_of(contexts.begin(), contexts.end(), [&](const Context& c) {
                return std::find(c.begin(), c.end(), m) != c.end();
            });
            if (!used) throw error("scenario: measurement " + m + " appears in no context");
        }
        for (std::size_t i = 0; i < contexts.size(); ++i)
            for (std::size_t j = 0; j < contexts.size(); ++j) {
                if (i == j) continue;
                const auto& a = contexts[i];
                const auto& b = contexts[j];
                const bool contained = std::all_of(a.begin(), a.end(), [&](const std::string& v) {
                    return std::find(b.begin(), b.end(), v) != b.end();
                });
                if (contained) throw error("scenario: contexts are not maximal (context " + std::to_string(i) +
                                           " is contained in context " + std::to_string(j) + ")");
            }
    }

    std::size_t index_of(const std::string& m) const {
        auto it = std::find(measurements.begin(), measurements.end(), m);
        if (it == measurements.end()) throw error("scenario: unknown measurement " + m);
        return static_cast<std::size_t>(it - measurements.begin());
    }

    std::size_t table_size(std::size_t ctx) const {
        std::size_t s = 1;
        for (std::size_t i = 0; i < contexts[ctx].size(); ++i) s *= static_cast<std::size_t>(num_outcomes);
        return s;
    }

    // Joint outcome of a table entry, first variable most significant.
    std::vector<int> section(std::size_t ctx, std::size_t idx) const {
        std::vector<int> out(contexts[ctx].size());
        for (std::size_t i = out.size(); i-- > 0;) {
            out[i] = static_cast<int>(idx % static_cast<std::size_t>(num_outcomes));
            idx /= static_cast<std::size_t>(num_outcomes);
        }
        return out;
    }

    std::size_t entry(const std::vector<int>& section) const {
        std::size_t idx = 0;
        for (int v : section) idx = idx * static_cast<std::size_t>(num_outcomes) + static_cast<std::size_t>(v);
        return idx;
    }

    bool operator==(const MeasurementScenarioSpec&) const = default;
};

struct EmpiricalModel {
    MeasurementScenarioSpec spec;
    std::vector<std::vector<double>> tables;

    void validate() const {
        spec.validate();
        if (tables.size() != spec.contexts.size()) throw error("model: one table per context required");
        for (std::size_t c = 0; c < tables.size(); ++c) {
            if (tables[c].size() != spec.table_size(c)) throw error("model: table size mismatch");
            double s = 0.0;
            for (double p : tables[c]) {
                if (!std::isfinite(p) || p < -1e-12) throw error("model: invalid probability");
                s += p;
            }
            if (std::abs(s - 1.0) > 1e-10) {
                throw error("model: table " + std::to_string(c) + " sums to " + std::to_string(s));
            }
        }
    }
};

struct PossibilisticModel {
    MeasurementScenarioSpec spec;
    std::vector<std::vector<bool>> supports;

    void validate() const {
        spec.validate();
        if (supports.size() != spec.contexts.size()) throw error("possibilistic model: one support per context");
        for (std::size_t c = 0; c < supports.size(); ++c) {
            if (supports[c].size() != spec.table_size(c)) throw error("possibilistic model: support size mismatch");
            if (std::none_of(supports[c].begin(), supports[c].end(), [](bool b) { return b; })) {
                throw error("possibilistic model: empty support in context " + std::to_string(c));
            }
        }
    }

    bool possible(std::size_t ctx, const std::vector<int>& section) const {
        return supports[ctx][spec.entry(section)];
    }

    bool operator==(const PossibilisticModel&) const = default;
};

inline PossibilisticModel possibilistic(const EmpiricalModel& m, double eps = kPossibilisticEps) {
    PossibilisticModel pm{m.spec, {}};
    for (const auto& t : m.tables) {
        std::vector<bool> s;
        s.reserve(t.size());
        for (double p : t) s.push_back(p > eps);
        pm.supports.push_back(std::move(s));
    }
    return pm;
}

// ---------------------------------------------------------------------------
// Construction from simulations

// One table per selected setting choice (all choices when absent).
inline EmpiricalModel model_from_bell(const BellScenario& bell,
                                      std::optional<std::vector<std::vector<int>>> selected = std::nullopt) {
    bell.validate();
    const auto settings = selected.value_or(bell.all_settings());
    EmpiricalModel m;
    for (const auto& q : bell.parties) {
        m.spec.measurements.push_back(q.setting0_name);
        m.spec.measurements.push_back(q.setting1_name);
    }
    for (const auto& s : settings) {
        const auto d = bell_distribution(bell, s);
        m.spec.contexts.push_back(d.variables);
        m.tables.push_back(d.probabilities);
    }
    // Keep only measurements that occur in a selected context.
    std::vector<std::string> used;
    for (const auto& name : m.spec.measurements) {
        for (const auto& c : m.spec.contexts)
            if (std::find(c.begin(), c.end(), name) != c.end()) {
                used.push_back(name);
                break;
            }
    }
    m.spec.measurements = std::move(used);
    m.validate();
    return m;
}

// Tables via joint_distribution. Outcomes added by basis completion must carry
// negligible mass and are dropped.
inline EmpiricalModel model_from_protocol(const Protocol& p, const std::vector<Context>& contexts) {
    EmpiricalModel m;
    for (const auto& id : p.measurements()) {
        for (const auto& c : contexts)
            if (std::find(c.begin(), c.end(), id.name) != c.end()) {
                m.spec.measurements.push_back(id.name);
                break;
            }
    }
    for (const auto& c : contexts) {
        if (auto why = validate_context(p, c)) throw error("invalid context: " + *why);
        const auto d = joint_distribution(p, c);
        std::vector<double> table(std::size_t{1} << c.size(), 0.0);
        double extra = 0.0;
        for (std::size_t idx = 0; idx < d.probabilities.size(); ++idx) {
            const auto o = d.outcome_at(idx);
            if (std::all_of(o.begin(), o.end(), [](int x) { return x < 2; })) {
                std::size_t t = 0;
                for (int x : o) t = t * 2 + static_cast<std::size_t>(x);
                table[t] = d.probabilities[idx];
            } else {
                extra += d.probabilities[idx];
            }
        }
        if (extra > kPossibilisticEps) {
            throw tolerance_error("context carries probability " + std::to_string(extra) +
                                  " on outcomes outside {0,1}");
        }
        m.spec.contexts.push_back(c);
        m.tables.push_back(std::move(table));
    }
    m.validate();
    return m;
}

// Named simulated models. GHZ keeps the four contexts XXX, XYY, YXY, YYX.
inline EmpiricalModel hardy_model() { return model_from_bell(hardy_bell()); }
inline EmpiricalModel ghz_model() { return model_from_bell(ghz_bell(), {{{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}); }
inline EmpiricalModel chsh_model() { return model_from_bell(chsh_bell()); }
inline EmpiricalModel product_model() { return model_from_bell(product_bell()); }

// ---------------------------------------------------------------------------
// Reference tables

namespace detail {

inline std::vector<bool> row(std::initializer_list<int> cells) {
    std::vector<bool> r;
    for (int c : cells) r.push_back(c != 0);
    return r;
}

}  // namespace detail

// Hardy / FR support table (u, w: ok = 0, fail = 1).
inline PossibilisticModel canonical_hardy() {
    PossibilisticModel pm;
    pm.spec.measurements = {"A", "B", "U", "W"};
    pm.spec.contexts = {{"A", "B"}, {"A", "W"}, {"U", "B"}, {"U", "W"}};
    pm.supports = {
        detail::row({1, 0, 1, 1}),
        detail::row({1, 1, 0, 1}),
        detail::row({0, 1, 1, 1}),
        detail::row({1, 1, 1, 1}),
    };
    pm.validate();
    return pm;
}

// GHZ-Mermin support table for the contexts XXX, XYY, YXY, YYX.
inline PossibilisticModel canonical_ghz_mermin() {
    PossibilisticModel pm;
    pm.spec.measurements = {"X_A", "Y_A", "X_B", "Y_B", "X_C", "Y_C"};
    pm.spec.contexts = {{"X_A", "X_B", "X_C"}, {"X_A", "Y_B", "Y_C"}, {"Y_A", "X_B", "Y_C"}, {"Y_A", "Y_B", "X_C"}};
    pm.supports = {
        detail::row({1, 0, 0, 1, 0, 1, 1, 0}),
        detail::row({0, 1, 1, 0, 1, 0, 0, 1}),
        detail::row({0, 1, 1, 0, 1, 0, 0, 1}),
        detail::row({0, 1, 1, 0, 1, 0, 0, 1}),
    };
    pm.validate();
    return pm;
}

// ---------------------------------------------------------------------------
// Comparison and renaming

inline PossibilisticModel rename(const PossibilisticModel& pm, const std::map<std::string, std::string>& names) {
    auto map1 = [&](const std::string& s) {
        auto it = names.find(s);
        return it == names.end() ? s : it->second;
    };
    PossibilisticModel out = pm;
    for (auto& m : out.spec.measurements) m = map1(m);
    for (auto& c : out.spec.contexts)
        for (auto& v : c) v = map1(v);
    return out;
}

// Same measurements and contexts (as sets) with identical supports after
// aligning variable order.
inline bool same_supports(const PossibilisticModel& a, const PossibilisticModel& b) {
    if (a.spec.num_outcomes != b.spec.num_outcomes) return false;
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    if (sorted(a.spec.measurements) != sorted(b.spec.measurements)) return false;
    if (a.spec.contexts.size() != b.spec.contexts.size()) return false;
    for (std::size_t ca = 0; ca < a.spec.contexts.size(); ++ca) {
        const auto& va = a.spec.contexts[ca];
        std::optional<std::size_t> match;
        for (std::size_t cb = 0; cb < b.spec.contexts.size(); ++cb)
            if (sorted(b.spec.contexts[cb]) == sorted(va)) match = cb;
        if (!match) return false;
        const auto& vb = b.spec.contexts[*match];
        std::vector<std::size_t> perm;  // position in vb of each variable of va
        for (const auto& v : va) perm.push_back(static_cast<std::size_t>(std::find(vb.begin(), vb.end(), v) - vb.begin()));
        for (std::size_t idx = 0; idx < a.spec.table_size(ca); ++idx) {
            const auto sa = a.spec.section(ca, idx);
            std::vector<int> sb(sa.size());
            for (std::size_t i = 0; i < sa.size(); ++i) sb[perm[i]] = sa[i];
            if (a.supports[ca][idx] != b.possible(*match, sb)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// No-signalling

struct NoSignallingReport {
    double max_deviation = 0.0;
    std::size_t context_a = 0;
    std::size_t context_b = 0;
    bool ok(double tol) const { return max_deviation <= tol; }
};

inline std::vector<double> table_marginal(const MeasurementScenarioSpec& spec, std::size_t ctx,
                                          const std::vector<double>& table, const std::vector<std::string>& keep) {
    const auto& vars = spec.contexts[ctx];
    std::vector<std::size_t> pos;
    for (const auto& k : keep) pos.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), k) - vars.begin()));
    std::size_t size = 1;
    for (std::size_t i = 0; i < keep.size(); ++i) size *= static_cast<std::size_t>(spec.num_outcomes);
    std::vector<double> out(size, 0.0);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        const auto s = spec.section(ctx, idx);
        std::vector<int> sub;
        for (auto p : pos) sub.push_back(s[p]);
        out[spec.entry(sub)] += table[idx];
    }
    return out;
}

inline NoSignallingReport check_no_signalling(const EmpiricalModel& m) {
    NoSignallingReport r;
    const auto& cs = m.spec.contexts;
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            std::vector<std::string> shared;
            for (const auto& v : cs[i])
                if (std::find(cs[j].begin(), cs[j].end(), v) != cs[j].end()) shared.push_back(v);
            if (shared.empty()) continue;
            const auto mi = table_marginal(m.spec, i, m.tables[i], shared);
            const auto mj = table_marginal(m.spec, j, m.tables[j], shared);
            for (std::size_t k = 0; k < mi.size(); ++k) {
                const double d = std::abs(mi[k] - mj[k]);
                if (d > r.max_deviation) {
                    r.max_deviation = d;
                    r.context_a = i;
                    r.context_b = j;
                }
            }
        }
    return r;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const MeasurementScenarioSpec& s) {
    return {{"measurements", s.measurements}, {"num_outcomes", s.num_outcomes}, {"contexts", s.contexts}};
}

inline MeasurementScenarioSpec spec_from_json(const nlohmann::json& j) {
    MeasurementScenarioSpec s;
    s.measurements = j.at("measurements").get<std::vector<std::string>>();
    s.num_outcomes = j.at("num_outcomes").get<int>();
    s.contexts = j.at("contexts").get<std::vector<Context>>();
    return s;
}

inline std::string section_key(const std::vector<int>& s) {
    std::string k;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) k += ',';
        k += std::to_string(s[i]);
    }
    return k;
}

// {"spec": ..., "rows": [{"context": [...], "cells": {"0,0": p, ...}}]}
inline nlohmann::json to_json(const EmpiricalModel& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t c = 0; c < m.tables.size(); ++c) {
        nlohmann::json cells = nlohmann::json::object();
        for (std::size_t idx = 0; idx < m.tables[c].size(); ++idx)
            cells[section_key(m.spec.section(c, idx))] = m.tables[c][idx];
        rows.push_back({{"context", m.spec.contexts[c]}, {"cells", cells}});
    }
    return {{"spec", to_json(m.spec)}, {"rows", rows}};
}

inline nlohmann::json to_json(const PossibilisticModel& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t c = 0; c < m.supports.size(); ++c) {
        nlohmann::json cells = nlohmann::json::object();
        for (std::size_t idx = 0; idx < m.supports[c].size(); ++idx)
            cells[section_key(m.spec.section(c, idx))] = m.supports[c][idx] ? 1 : 0;
        rows.push_back({{"context", m.spec.contexts[c]}, {"cells", cells}});
    }
    return {{"spec", to_json(m.spec)}, {"rows", rows}};
}

inline EmpiricalModel empirical_from_json(const nlohmann::json& j) {
    EmpiricalModel m;
    m.spec = spec_from_json(j.at("spec"));
    for (std::size_t c = 0; c < m.spec.contexts.size(); ++c) {
        const auto& cells = j.at("rows").at(c).at("cells");
        std::vector<double> t(m.spec.table_size(c));
        for (std::size_t idx = 0; idx < t.size(); ++idx) t[idx] = cells.at(section_key(m.spec.section(c, idx))).get<double>();
        m.tables.push_back(std::move(t));
    }
    m.validate();
    return m;
}

inline PossibilisticModel possibilistic_from_json(const nlohmann::json& j) {
    PossibilisticModel m;
    m.spec = spec_from_json(j.at("spec"));
    for (std::size_t c = 0; c < m.spec.contexts.size(); ++c) {
        const auto& cells = j.at("rows").at(c).at("cells");
        std::vector<bool> s(m.spec.table_size(c));
        for (std::size_t idx = 0; idx < s.size(); ++idx) s[idx] = cells.at(section_key(m.spec.section(c, idx))).get<int>() != 0;
        m.supports.push_back(std::move(s));
    }
    m.validate();
    return m;
}

}  // namespace ewfs
