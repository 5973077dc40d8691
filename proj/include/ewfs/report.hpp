#pragma once

// Report envelope, JSON encodings of results and plain-text rendering.

#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann::json

#include "ewfs/contextuality.hpp"
#include "ewfs/empirical.hpp"
#include "ewfs/rational.hpp"
#include "ewfs/reasoning.hpp"

#ifndef EWFS_VERSION
#define EWFS_VERSION "1.0.0"
#endif

namespace ewfs::report {

using nlohmann::json;

inline constexpr const char* kVersion = EWFS_VERSION;

inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Report {
    std::vector<std::string> command;
    std::string inputs_digest;
    json result;
    std::string version = kVersion;

    bool operator==(const Report&) const = default;
};

inline json to_json(const Report& r) {
    return {{"command", r.command}, {"inputs_digest", r.inputs_digest}, {"result", r.result}, {"version", r.version}};
}

inline Report report_from_json(const json& j) {
    return {j.at("command").get<std::vector<std::string>>(), j.at("inputs_digest").get<std::string>(), j.at("result"),
            j.at("version").get<std::string>()};
}

// ---------------------------------------------------------------------------
// Numbers

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Display fractions stay short; anything else prints as a decimal.
inline constexpr std::int64_t kDisplayMaxDenominator = 10'000;
inline constexpr double kDisplayTolerance = 1e-12;

inline std::optional<Rational> display_fraction(double x) { return snap(x, kDisplayMaxDenominator, kDisplayTolerance); }

// Reduced fraction when x has a short one, decimal otherwise.
inline std::string format_fraction(double x) {
    auto q = display_fraction(x);
    if (!q) return format_number(x);
    if (denominator(*q) == 1) return numerator(*q).str();
    return q->str();
}

// A row of fractions over their common denominator when it stays small
// (1/12 1/12 1/12 9/12), otherwise each entry reduced on its own.
inline std::vector<std::string> format_row(const std::vector<double>& row) {
    std::vector<Rational> qs;
    std::int64_t lcm = 1;
    bool common = true;
    for (double x : row) {
        auto q = display_fraction(x);
        if (!q) {
            common = false;
            break;
        }
        const auto d = static_cast<std::int64_t>(denominator(*q));
        lcm = std::lcm(lcm, d);
        if (lcm > 1000) common = false;
        qs.push_back(*q);
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (!common || lcm == 1) {
            out.push_back(format_fraction(row[i]));
        } else if (qs[i] == 0) {
            out.emplace_back("0");
        } else {
            const Rational scaled = qs[i] * lcm;
            out.push_back(numerator(scaled).str() + "/" + std::to_string(lcm));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tables

inline std::string pad(std::string s, std::size_t width) {
    // Column widths count code points so that labels like "⊕" align.
    std::size_t len = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++len;
    while (len++ < width) s += ' ';
    return s;
}

inline std::string context_label(const Context& c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + c[i];
    return out;
}

// Rows are contexts in declaration order, columns joint outcomes in
// lexicographic order. Cells are 0/1 possibilities or probabilities.
inline std::string render_table(const EmpiricalModel& m, bool probabilities, double eps = kPossibilisticEps) {
    const auto pm = possibilistic(m, eps);
    std::vector<std::vector<std::string>> cells;
    std::size_t width = 0;
    std::size_t label_width = 0;
    std::size_t columns = 0;
    for (std::size_t c = 0; c < m.tables.size(); ++c) {
        std::vector<std::string> row;
        if (probabilities) {
            row = format_row(m.tables[c]);
        } else {
            for (bool b : pm.supports[c]) row.emplace_back(b ? "1" : "0");
        }
        for (const auto& x : row) width = std::max(width, x.size());
        label_width = std::max(label_width, context_label(m.spec.contexts[c]).size());
        columns = std::max(columns, row.size());
        cells.push_back(std::move(row));
    }
    std::string out;
    std::string header = pad("", label_width) + " |";
    std::vector<std::string> heads;
    for (std::size_t idx = 0; idx < columns; ++idx) {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < columns) ++n;
        std::string h;
        for (int b : ewfs::detail::bits_of(idx, n)) h += static_cast<char>('0' + b);
        width = std::max(width, h.size());
        heads.push_back(h);
    }
    for (const auto& h : heads) header += " " + pad(h, width);
    out += header + "\n";
    out += std::string(header.size(), '-') + "\n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::string line = pad(context_label(m.spec.contexts[c]), label_width) + " |";
        for (const auto& x : cells[c]) line += " " + pad(x, width);
        out += line + "\n";
    }
    return out;
}

inline json table_json(const EmpiricalModel& m, bool probabilities, double eps = kPossibilisticEps) {
    const auto pm = possibilistic(m, eps);
    json rows = json::array();
    for (std::size_t c = 0; c < m.tables.size(); ++c) {
        json cells = json::object();
        const auto fr = format_row(m.tables[c]);
        for (std::size_t idx = 0; idx < m.tables[c].size(); ++idx) {
            const auto key = section_key(m.spec.section(c, idx));
            if (probabilities) cells[key] = {{"p", m.tables[c][idx]}, {"fraction", fr[idx]}};
            else cells[key] = pm.supports[c][idx] ? 1 : 0;
        }
        rows.push_back({{"context", m.spec.contexts[c]}, {"cells", cells}});
    }
    return {{"spec", ewfs::to_json(m.spec)}, {"rows", rows}, {"probabilities", probabilities}};
}

// ---------------------------------------------------------------------------
// Classification

inline json assignment_json(const MeasurementScenarioSpec& spec, const GlobalAssignment& g) {
    json a = json::object();
    for (std::size_t i = 0; i < spec.measurements.size(); ++i) a[spec.measurements[i]] = g.values[i];
    return a;
}

inline json classification_json(const EmpiricalModel& m, const ClassificationReport& r) {
    json j{{"level", to_string(r.level)},
           {"consistent_global_count", r.consistent_global_count},
           {"global_count", r.global_count}};
    if (r.witness.contextual) {
        json sec = json::object();
        const auto& ctx = m.spec.contexts[r.witness.context];
        for (std::size_t i = 0; i < ctx.size(); ++i) sec[ctx[i]] = r.witness.section[i];
        j["witness"] = {{"context", ctx}, {"section", sec}};
    }
    if (r.lp) {
        json mix = json::array();
        for (const auto& [g, w] : r.lp->mixture) mix.push_back({{"assignment", assignment_json(m.spec, g)}, {"weight", w.str()}});
        j["lp"] = {{"contextual", r.lp->contextual}, {"exact", r.lp->exact}, {"mixture", mix}};
    }
    return j;
}

inline std::string render_classification(const EmpiricalModel& m, const ClassificationReport& r) {
    std::string out = "level: " + to_string(r.level) + "\n";
    out += "consistent global assignments: " + std::to_string(r.consistent_global_count) + " of " +
           std::to_string(r.global_count) + "\n";
    if (r.witness.contextual) {
        const auto& ctx = m.spec.contexts[r.witness.context];
        out += "witness: {";
        for (std::size_t i = 0; i < ctx.size(); ++i)
            out += (i ? ", " : "") + ctx[i] + "↦" + std::to_string(r.witness.section[i]);
        out += "} extends to no consistent global assignment\n";
    }
    if (r.lp) {
        out += std::string("exact LP: ") + (r.lp->contextual ? "infeasible" : "feasible") +
               (r.lp->contextual || r.lp->exact ? "" : " (within slack)") + "\n";
        for (const auto& [g, w] : r.lp->mixture) {
            out += "  " + w.str() + " × {";
            for (std::size_t i = 0; i < m.spec.measurements.size(); ++i)
                out += (i ? ", " : "") + m.spec.measurements[i] + "↦" + std::to_string(g.values[i]);
            out += "}\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reasoning

inline std::string condition_label(const Statement& s) {
    if (s.origin == Origin::Observation) return "OBSERVED";
    return s.gather ? "ON_GATHER" : "UNCONDITIONAL";
}

inline json statement_json(const Protocol& p, const Statement& s, const AssumptionSet& flags) {
    std::vector<std::string> names;
    for (const auto& m : s.scope()) names.push_back(symbol(m));
    json j{{"owner", s.owner},
           {"scope", s.scope()},
           {"kind", std::holds_alternative<Parity>(s.constraint) ? "parity" : "forbidden"},
           {"constraint", ewfs::detail::render_constraint(s.constraint, names)},
           {"claim", render_claim(p, s)},
           {"condition", condition_label(s)},
           {"active", ewfs::detail::statement_active(s, flags)},
           {"holders", s.holders}};
    if (!s.premise.empty()) j["premise"] = s.premise;
    if (s.gather) {
        j["gather"] = {{"gatherer", s.gather->gatherer}, {"targets", s.gather->targets}, {"occurs", s.gather->occurs}};
    }
    return j;
}

inline json verdict_json(const Verdict& v) {
    json j{{"sat", v.sat}, {"verdict", v.sat ? "SAT" : "UNSAT"}, {"variables", v.variables}};
    json active = json::array();
    for (const auto& c : v.active) active.push_back(c.label);
    j["active"] = active;
    if (v.sat) {
        j["model"] = v.model;
    } else {
        json cert = json::array();
        for (auto i : v.certificate) cert.push_back(v.active[i].label);
        j["certificate"] = cert;
        const auto sum = gf2_sum(certificate_clauses(v));
        j["gf2_sum"] = {{"lhs_cancels", sum.lhs_cancels}, {"rhs", sum.rhs}, {"contradiction", sum.contradiction()}};
    }
    return j;
}

inline json rendered_json(const RenderedStatement& r) {
    return {{"owner", r.owner}, {"scope", r.scope},     {"condition", r.condition},
            {"claim", r.claim}, {"caveat", r.caveat},   {"text", r.text}};
}

inline json nogo_json(const Protocol& p, const NoGoReport& r) {
    json statements = json::array();
    for (const auto& s : r.statements) statements.push_back(statement_json(p, s, r.flags));
    json eqs = json::array();
    for (const auto& e : r.equalities) {
        eqs.push_back(variable_name(e.first, e.measurement, true) + " = " + variable_name(e.second, e.measurement, true));
    }
    json rendered = json::array();
    for (const auto& x : r.rendered) rendered.push_back(rendered_json(x));
    return {{"variant", to_string(r.variant)},
            {"assumptions", r.flags.names()},
            {"statements", statements},
            {"equalities", eqs},
            {"trace", r.trace},
            {"verdict", verdict_json(r.verdict)},
            {"expected", r.expected_sat ? "SAT" : "UNSAT"},
            {"reproduced", r.reproduced()},
            {"rendered", rendered}};
}

inline std::string render_verdict(const Verdict& v) {
    std::string out = std::string("verdict: ") + (v.sat ? "SAT" : "UNSAT") + "\n";
    if (v.sat) {
        out += "model:";
        for (const auto& [k, x] : v.model) out += " " + k + "=" + std::to_string(x);
        out += "\n";
    } else {
        out += "minimal certificate:\n";
        for (auto i : v.certificate) out += "  " + v.active[i].label + "\n";
        const auto sum = gf2_sum(certificate_clauses(v));
        if (sum.lhs_cancels) out += "GF(2) sum of the certificate: 0 = " + std::to_string(sum.rhs) + "\n";
    }
    return out;
}

inline std::string render_nogo(const Protocol& p, const NoGoReport& r) {
    std::string out = "variant: " + to_string(r.variant) + "\nassumptions:";
    for (const auto& f : r.flags.names()) out += " " + f;
    out += "\nstatements:\n";
    for (const auto& s : r.statements) {
        out += "  [" + s.owner + ", " + condition_label(s) +
               (ewfs::detail::statement_active(s, r.flags) ? ", active" : ", inactive") + "] " + render_claim(p, s);
        if (!s.premise.empty()) {
            out += "  given";
            for (const auto& [m, v] : s.premise) out += " " + symbol(m) + "=" + outcome_label(p, m, v);
        }
        out += "\n";
    }
    if (!r.trace.empty()) {
        out += "communication:\n";
        for (const auto& t : r.trace) out += "  " + t + "\n";
    }
    out += render_verdict(r.verdict);
    if (!r.rendered.empty()) {
        out += "conditional statements:\n";
        for (const auto& x : r.rendered) out += "  " + x.text + "\n";
    }
    out += std::string("expected ") + (r.expected_sat ? "SAT" : "UNSAT") + ": " +
           (r.reproduced() ? "reproduced" : "NOT reproduced") + "\n";
    return out;
}

}  // namespace ewfs::report
