#pragma once

// No-go engine. Agents turn possibilistic Born-rule predictions into outcome
// constraints, optionally share them, and a brute-force checker decides
// whether some outcome assignment satisfies every active constraint under a
// given assumption set.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ewfs/empirical.hpp"
#include "ewfs/error.hpp"
#include "ewfs/scenario.hpp"

namespace ewfs {

// ---------------------------------------------------------------------------
// Assumptions

struct AssumptionSet {
    bool aoe = false;                  // absoluteness of observed events
    bool born_compat_aoe = false;      // requires aoe
    bool personal_knowledge = false;
    bool classical_agreement = false;
    bool born_compat_persk = false;    // requires personal_knowledge
    bool born_practicality = false;

    void validate() const {
        if (born_compat_aoe && !aoe) throw error("assumptions: BORN_COMPAT_AOE requires AOE");
        if (born_compat_persk && !personal_knowledge) {
            throw error("assumptions: BORN_COMPAT_PERSK requires PERSONAL_KNOWLEDGE");
        }
    }

    static AssumptionSet truth() { return {.aoe = true, .born_compat_aoe = true}; }
    static AssumptionSet agreement() {
        return {.personal_knowledge = true, .classical_agreement = true, .born_compat_persk = true};
    }
    static AssumptionSet practicality() { return {.born_practicality = true}; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        if (aoe) out.emplace_back("AOE");
        if (born_compat_aoe) out.emplace_back("BORN_COMPAT_AOE");
        if (personal_knowledge) out.emplace_back("PERSONAL_KNOWLEDGE");
        if (classical_agreement) out.emplace_back("CLASSICAL_AGREEMENT");
        if (born_compat_persk) out.emplace_back("BORN_COMPAT_PERSK");
        if (born_practicality) out.emplace_back("BORN_PRACTICALITY");
        return out;
    }

    bool operator==(const AssumptionSet&) const = default;
};

// ---------------------------------------------------------------------------
// Agents

struct Agent {
    std::string name;
    bool classical = true;
    std::vector<std::string> accessible;  // measurements the agent can gather
    std::vector<std::string> own;         // measurements the agent performs
};

namespace detail {

inline bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace detail

// Superobservers reach their own supermeasurements and the friends' outcomes
// in labs they do not supermeasure; friends reach their own outcome;
// agents with no measurement of their own (external observers) reach all.
inline Agent make_agent(const Protocol& p, const std::string& name) {
    const auto all = p.measurements();
    const auto agents = p.agents();
    if (!detail::contains(agents, name)) throw error("unknown agent '" + name + "'");
    Agent a{name, p.is_classical(name), {}, {}};
    bool supers = false;
    for (const auto& m : all)
        if (m.agent == name) {
            a.own.push_back(m.name);
            supers = supers || m.kind == MeasurementKind::Super;
        }
    for (const auto& m : all) {
        const bool own = m.agent == name;
        bool reach = own || a.own.empty();
        if (!reach && supers && m.kind == MeasurementKind::Friend) {
            const auto* sm = p.super_on_lab(p.lab_of(m.name));
            reach = sm == nullptr || sm->agent != name;
        }
        if (reach) a.accessible.push_back(m.name);
    }
    return a;
}

inline std::vector<Agent> protocol_agents(const Protocol& p) {
    std::vector<Agent> out;
    for (const auto& n : p.agents()) out.push_back(make_agent(p, n));
    return out;
}

// The declared contexts an agent reasons about: those inside its reach that
// involve one of its own measurements or, for an agent with none, that
// consist of classically recorded outcomes only.
inline std::vector<Context> agent_contexts(const Protocol& p, const Agent& a) {
    std::vector<Context> out;
    for (const auto& c : p.contexts()) {
        const bool inside = std::all_of(c.begin(), c.end(), [&](const auto& m) { return detail::contains(a.accessible, m); });
        if (!inside) continue;
        bool relevant;
        if (!a.own.empty()) {
            relevant = std::any_of(c.begin(), c.end(), [&](const auto& m) { return detail::contains(a.own, m); });
        } else {
            relevant = std::all_of(c.begin(), c.end(), [&](const auto& m) { return p.is_classical(p.measurement(m).agent); });
        }
        if (relevant) out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Statements

struct Parity {
    std::vector<std::string> vars;
    int rhs = 0;  // XOR of vars equals rhs
    bool operator==(const Parity&) const = default;
};

struct ForbiddenSet {
    std::vector<std::string> vars;
    std::vector<std::vector<int>> excluded;
    bool operator==(const ForbiddenSet&) const = default;
};

using Constraint = std::variant<Parity, ForbiddenSet>;

inline const std::vector<std::string>& constraint_vars(const Constraint& c) {
    return std::visit([](const auto& x) -> const std::vector<std::string>& { return x.vars; }, c);
}

inline bool constraint_allows(const Constraint& c, const std::vector<int>& values) {
    if (const auto* p = std::get_if<Parity>(&c)) {
        int s = 0;
        for (int v : values) s ^= v;
        return s == p->rhs;
    }
    const auto& f = std::get<ForbiddenSet>(c);
    return std::find(f.excluded.begin(), f.excluded.end(), values) == f.excluded.end();
}

// The gatherer must learn every target outcome before the statement applies.
struct OnGather {
    std::string gatherer;
    std::vector<std::string> targets;
    bool occurs = false;  // whether the protocol realizes the gather
    bool operator==(const OnGather&) const = default;
};

enum class Origin { BornRule, Observation };

struct Statement {
    std::string owner;
    Constraint constraint;
    std::optional<OnGather> gather;    // nullopt: unconditional
    std::map<std::string, int> premise;  // recorded outcomes the prediction is conditioned on
    Origin origin = Origin::BornRule;
    std::vector<std::string> holders;  // agents that received it by communication

    const std::vector<std::string>& scope() const { return constraint_vars(constraint); }
    bool operator==(const Statement&) const = default;
};

// f_sender(m) = f_receiver(m)
struct Equality {
    std::string first;
    std::string second;
    std::string measurement;
    bool operator==(const Equality&) const = default;
};

// Whether `gatherer` can come to know the outcome of `m` in this protocol.
// Only classical agents gather. Their own outcomes and outcomes recorded by
// classical agents are available; a quantum friend's outcome needs an
// explicit ask on that friend's lab.
inline bool gather_occurs(const Protocol& p, const std::string& gatherer, const std::string& m) {
    if (!p.is_classical(gatherer)) return false;
    const auto id = p.measurement(m);
    if (id.agent == gatherer || p.is_classical(id.agent)) return true;
    const auto& lab = p.lab_of(m);
    return std::any_of(p.steps().begin(), p.steps().end(), [&](const Step& s) {
        const auto* a = std::get_if<Ask>(&s);
        return a != nullptr && a->asker == gatherer && a->lab == lab;
    });
}

inline OnGather make_gather(const Protocol& p, const std::string& gatherer, const Context& scope,
                            const std::vector<std::string>& known) {
    OnGather g{gatherer, {}, true};
    for (const auto& m : scope)
        if (!detail::contains(known, m)) {
            g.targets.push_back(m);
            g.occurs = g.occurs && gather_occurs(p, gatherer, m);
        }
    return g;
}

namespace detail {

inline std::vector<bool> binary_support(const Protocol& p, const Context& ctx, double eps) {
    return possibilistic(model_from_protocol(p, {ctx}), eps).supports.front();
}

inline std::vector<int> bits_of(std::size_t idx, std::size_t n) {
    std::vector<int> out(n);
    for (std::size_t i = n; i-- > 0;) {
        out[i] = static_cast<int>(idx & 1U);
        idx >>= 1U;
    }
    return out;
}

// rhs when the support is exactly one parity class, nullopt otherwise.
inline std::optional<int> parity_class(const std::vector<bool>& support, std::size_t n) {
    for (int rhs = 0; rhs < 2; ++rhs) {
        bool match = true;
        for (std::size_t idx = 0; idx < support.size() && match; ++idx) {
            int s = 0;
            for (int b : bits_of(idx, n)) s ^= b;
            match = support[idx] == (s == rhs);
        }
        if (match) return rhs;
    }
    return std::nullopt;
}

// Prediction for one context given a premise. Returns nullopt when the
// premise-compatible support rules nothing out.
inline std::optional<Constraint> predict(const std::vector<bool>& support, const Context& ctx,
                                         const std::map<std::string, int>& premise) {
    const bool conditioned = std::any_of(ctx.begin(), ctx.end(), [&](const auto& m) { return premise.contains(m); });
    if (!conditioned) {
        if (auto rhs = parity_class(support, ctx.size())) return Parity{ctx, *rhs};
    }
    ForbiddenSet f{ctx, {}};
    for (std::size_t idx = 0; idx < support.size(); ++idx) {
        if (support[idx]) continue;
        auto bits = bits_of(idx, ctx.size());
        bool agrees = true;
        for (std::size_t i = 0; i < ctx.size(); ++i)
            if (auto it = premise.find(ctx[i]); it != premise.end() && it->second != bits[i]) agrees = false;
        if (agrees) f.excluded.push_back(std::move(bits));
    }
    if (f.excluded.empty()) return std::nullopt;
    return f;
}

// Values of `m` left open by the constraint once the premise holds.
inline std::set<int> allowed_values(const Constraint& c, const std::map<std::string, int>& premise,
                                    const std::string& m) {
    const auto& vars = constraint_vars(c);
    std::set<int> out;
    for (std::size_t idx = 0; idx < (std::size_t{1} << vars.size()); ++idx) {
        const auto bits = bits_of(idx, vars.size());
        bool agrees = true;
        int value = -1;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (auto it = premise.find(vars[i]); it != premise.end() && it->second != bits[i]) agrees = false;
            if (vars[i] == m) value = bits[i];
        }
        if (agrees && constraint_allows(c, bits)) out.insert(value);
    }
    return out;
}

}  // namespace detail

// Born-rule statements of `agent` for each context. Predictions are
// conditioned on the agent's own outcomes listed in `observed`. With an
// observation, every forced outcome of another agent is chained through the
// next unused protocol context containing it, as seen by that agent.
inline std::vector<Statement> derive_statements(const Protocol& p, const Agent& agent,
                                                const std::vector<Context>& contexts,
                                                const std::map<std::string, int>& observed = {},
                                                bool conditional = false, double eps = kPossibilisticEps) {
    for (const auto& c : contexts) {
        if (auto why = validate_context(p, c)) throw error("invalid context: " + *why);
        for (const auto& m : c)
            if (!detail::contains(agent.accessible, m)) {
                throw error("context variable " + m + " is outside the reach of " + agent.name);
            }
    }
    std::map<std::string, int> premise;
    for (const auto& [m, v] : observed)
        if (detail::contains(agent.own, m)) premise[m] = v;

    std::vector<Statement> out;
    std::vector<Context> used;
    for (const auto& c : contexts) {
        used.push_back(c);
        auto constraint = detail::predict(detail::binary_support(p, c, eps), c, premise);
        if (!constraint) continue;
        Statement s{agent.name, *constraint, std::nullopt, {}, Origin::BornRule, {}};
        for (const auto& m : c)
            if (premise.contains(m)) s.premise[m] = premise.at(m);
        if (conditional) s.gather = make_gather(p, agent.name, c, agent.own);
        out.push_back(std::move(s));
    }
    if (premise.empty()) return out;

    // Chain through forced values of other agents' outcomes.
    std::vector<std::pair<std::string, int>> frontier;
    for (const auto& s : out)
        for (const auto& m : s.scope()) {
            if (s.premise.contains(m)) continue;
            auto vals = detail::allowed_values(s.constraint, s.premise, m);
            if (vals.size() == 1) frontier.emplace_back(m, *vals.begin());
        }
    while (!frontier.empty()) {
        const auto [m, v] = frontier.front();
        frontier.erase(frontier.begin());
        const Context* next = nullptr;
        for (const auto& c : p.contexts())
            if (detail::contains(c, m) && std::find(used.begin(), used.end(), c) == used.end()) {
                next = &c;
                break;
            }
        if (next == nullptr) continue;
        used.push_back(*next);
        const std::map<std::string, int> link{{m, v}};
        auto constraint = detail::predict(detail::binary_support(p, *next, eps), *next, link);
        if (!constraint) continue;
        const std::string via = p.measurement(m).agent;
        Statement s{agent.name, *constraint, std::nullopt, link, Origin::BornRule, {}};
        if (conditional) s.gather = make_gather(p, via, *next, {m});
        for (const auto& x : *next) {
            if (x == m) continue;
            auto vals = detail::allowed_values(s.constraint, link, x);
            if (vals.size() == 1) frontier.emplace_back(x, *vals.begin());
        }
        out.push_back(std::move(s));
    }
    return out;
}

// A recorded outcome, held by the agent who obtained it.
inline Statement observation(const Protocol& p, const std::string& m, int value) {
    return Statement{p.measurement(m).agent, ForbiddenSet{{m}, {{1 - value}}}, std::nullopt, {}, Origin::Observation, {}};
}

// ---------------------------------------------------------------------------
// Communication

// Measurements an agent assigns values to through its own statements.
inline std::vector<std::string> assignment_scope(const std::string& agent, const std::vector<Statement>& statements) {
    std::vector<std::string> out;
    for (const auto& s : statements)
        if (s.owner == agent)
            for (const auto& m : s.scope())
                if (!detail::contains(out, m)) out.push_back(m);
    return out;
}

struct Communication {
    std::vector<Statement> statements;  // input with receiver added as holder
    std::vector<Equality> equalities;   // new overlap equalities
};

inline Communication communicate(const AssumptionSet& flags, const Agent& sender, const Agent& receiver,
                                 std::vector<Statement> statements, const std::vector<Equality>& existing = {}) {
    if (!flags.classical_agreement) throw error("communication requires CLASSICAL_AGREEMENT");
    if (!sender.classical || !receiver.classical) {
        throw error("only classical agents communicate (" + sender.name + " -> " + receiver.name + ")");
    }
    Communication out{std::move(statements), {}};
    if (sender.name == receiver.name) return out;
    for (auto& s : out.statements)
        if (s.owner == sender.name && !detail::contains(s.holders, receiver.name)) s.holders.push_back(receiver.name);
    const auto mine = assignment_scope(sender.name, out.statements);
    const auto theirs = assignment_scope(receiver.name, out.statements);
    for (const auto& m : mine) {
        if (!detail::contains(theirs, m)) continue;
        const bool known = std::any_of(existing.begin(), existing.end(), [&](const Equality& e) {
            return e.measurement == m && ((e.first == sender.name && e.second == receiver.name) ||
                                          (e.first == receiver.name && e.second == sender.name));
        });
        if (!known) out.equalities.push_back({sender.name, receiver.name, m});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Consistency checking

inline constexpr std::size_t kMaxBooleanVariables = 24;

// Constraint over named boolean variables, in the checker's own vocabulary.
struct Clause {
    std::string label;
    std::vector<std::string> vars;
    std::vector<bool> allowed;  // indexed by assignment to vars, first most significant
    std::optional<Parity> parity;  // set when the clause is a parity
};

struct Verdict {
    bool sat = false;
    std::map<std::string, int> model;  // SAT: satisfying assignment
    std::vector<Clause> active;         // constraints that were checked
    std::vector<std::size_t> certificate;  // UNSAT: indices into active, minimal
    std::vector<std::string> variables;
};

inline std::string variable_name(const std::string& owner, const std::string& m, bool per_agent) {
    if (!per_agent) {
        std::string s = m;
        for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
    }
    return "f_" + owner + "(" + m + ")";
}

namespace detail {

inline bool statement_active(const Statement& s, const AssumptionSet& f) {
    if (s.origin == Origin::Observation) return true;
    if (s.gather) return f.born_practicality && s.gather->occurs;
    return (f.aoe && f.born_compat_aoe) || (f.personal_knowledge && f.born_compat_persk);
}

inline std::string render_constraint(const Constraint& c, const std::vector<std::string>& names) {
    std::string out;
    if (const auto* p = std::get_if<Parity>(&c)) {
        for (std::size_t i = 0; i < names.size(); ++i) out += (i ? " ⊕ " : "") + names[i];
        return out + " = " + std::to_string(p->rhs);
    }
    const auto& f = std::get<ForbiddenSet>(c);
    out = "not (";
    for (std::size_t e = 0; e < f.excluded.size(); ++e) {
        if (e) out += " or ";
        for (std::size_t i = 0; i < names.size(); ++i)
            out += (i ? " ∧ " : "") + names[i] + "=" + std::to_string(f.excluded[e][i]);
    }
    return out + ")";
}

inline Clause make_clause(std::string label, std::vector<std::string> vars, const Constraint& c) {
    Clause cl{std::move(label), std::move(vars), {}, std::nullopt};
    cl.allowed.resize(std::size_t{1} << cl.vars.size());
    for (std::size_t idx = 0; idx < cl.allowed.size(); ++idx) cl.allowed[idx] = constraint_allows(c, bits_of(idx, cl.vars.size()));
    if (const auto* p = std::get_if<Parity>(&c)) cl.parity = Parity{cl.vars, p->rhs};
    return cl;
}

}  // namespace detail

// Brute force over every assignment of the clauses' variables. Returns the
// first satisfying assignment in lexicographic order.
inline std::optional<std::map<std::string, int>> solve(const std::vector<Clause>& clauses,
                                                       const std::vector<std::string>& variables) {
    if (variables.size() > kMaxBooleanVariables) throw error("too many boolean variables for brute force");
    std::vector<std::vector<std::size_t>> pos;
    for (const auto& c : clauses) {
        std::vector<std::size_t> p;
        for (const auto& v : c.vars) {
            auto it = std::find(variables.begin(), variables.end(), v);
            if (it == variables.end()) throw error("clause mentions undeclared variable " + v);
            p.push_back(static_cast<std::size_t>(it - variables.begin()));
        }
        pos.push_back(std::move(p));
    }
    const std::size_t n = variables.size();
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
        bool ok = true;
        for (std::size_t c = 0; c < clauses.size() && ok; ++c) {
            std::size_t idx = 0;
            for (auto p : pos[c]) idx = (idx << 1U) | static_cast<std::size_t>((a >> (n - 1 - p)) & 1U);
            ok = clauses[c].allowed[idx];
        }
        if (ok) {
            std::map<std::string, int> model;
            for (std::size_t i = 0; i < n; ++i) model[variables[i]] = static_cast<int>((a >> (n - 1 - i)) & 1U);
            return model;
        }
    }
    return std::nullopt;
}

inline std::vector<std::string> clause_variables(const std::vector<Clause>& clauses) {
    std::vector<std::string> out;
    for (const auto& c : clauses)
        for (const auto& v : c.vars)
            if (!detail::contains(out, v)) out.push_back(v);
    return out;
}

// Decides the clauses; on UNSAT shrinks to a minimal core by deleting
// clauses one at a time in order.
inline Verdict decide(std::vector<Clause> clauses) {
    Verdict v;
    v.variables = clause_variables(clauses);
    v.active = std::move(clauses);
    if (auto m = solve(v.active, v.variables)) {
        v.sat = true;
        v.model = std::move(*m);
        return v;
    }
    std::vector<std::size_t> keep(v.active.size());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
    for (std::size_t i = 0; i < v.active.size(); ++i) {
        std::vector<Clause> trial;
        std::vector<std::size_t> trial_idx;
        for (auto k : keep)
            if (k != i) {
                trial.push_back(v.active[k]);
                trial_idx.push_back(k);
            }
        if (!solve(trial, clause_variables(trial))) keep = std::move(trial_idx);
    }
    v.certificate = std::move(keep);
    return v;
}

// Active statements and equalities become clauses: one variable per
// measurement, or per (agent, measurement) under PERSONAL_KNOWLEDGE.
inline Verdict check_consistency(const std::vector<Statement>& statements, const std::vector<Equality>& equalities,
                                 const AssumptionSet& flags) {
    flags.validate();
    const bool per_agent = flags.personal_knowledge;
    std::vector<Clause> clauses;
    for (const auto& s : statements) {
        if (!detail::statement_active(s, flags)) continue;
        std::vector<std::string> names;
        for (const auto& m : s.scope()) names.push_back(variable_name(s.owner, m, per_agent));
        clauses.push_back(detail::make_clause(detail::render_constraint(s.constraint, names), names, s.constraint));
    }
    if (per_agent && flags.classical_agreement) {
        for (const auto& e : equalities) {
            std::vector<std::string> names{variable_name(e.first, e.measurement, true),
                                           variable_name(e.second, e.measurement, true)};
            const Constraint eq = Parity{{e.measurement, e.measurement}, 0};
            clauses.push_back(detail::make_clause(names[0] + " = " + names[1], names, eq));
        }
    }
    return decide(std::move(clauses));
}

struct Gf2Sum {
    bool lhs_cancels = false;
    int rhs = 0;
    bool contradiction() const { return lhs_cancels && rhs == 1; }
};

// Sums parity clauses over GF(2).
inline Gf2Sum gf2_sum(const std::vector<Clause>& clauses) {
    std::map<std::string, int> count;
    Gf2Sum out{true, 0};
    for (const auto& c : clauses) {
        if (!c.parity) return {false, 0};
        for (const auto& v : c.vars) count[v] ^= 1;
        out.rhs ^= c.parity->rhs;
    }
    out.lhs_cancels = std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 0; });
    return out;
}

inline std::vector<Clause> certificate_clauses(const Verdict& v) {
    std::vector<Clause> out;
    for (auto i : v.certificate) out.push_back(v.active[i]);
    return out;
}

// ---------------------------------------------------------------------------
// FR reasoning

struct ChainStep {
    Context context;
    std::string given;
    int given_value = 0;
    std::string derived;               // empty when nothing is forced
    std::optional<int> derived_value;
};

struct FrChain {
    double probability = 0.0;  // of the post-selected (u, w)
    std::vector<ChainStep> steps;
    bool contradiction = false;
    Verdict verdict;
};

// Unit propagation from u through (U,B), (A,B), (A,W), compared against the
// post-selected w. Outcome 0 is ok, 1 is fail.
inline FrChain fr_chain(int u, int w, double eps = kPossibilisticEps) {
    const Protocol p = fr_protocol();
    const auto uw = joint_distribution(p, {"U", "W"});
    FrChain out;
    out.probability = uw.probability({u, w});
    if (out.probability < eps) throw error("post-selected event has probability below eps and cannot occur");

    const std::vector<Context> path{{"U", "B"}, {"A", "B"}, {"A", "W"}};
    std::string known = "U";
    int value = u;
    std::vector<Statement> statements{observation(p, "U", u), observation(p, "W", w)};
    for (const auto& c : path) {
        const auto support = detail::binary_support(p, c, eps);
        const auto constraint = detail::predict(support, c, {{known, value}});
        if (constraint) statements.push_back({"Ursula", *constraint, std::nullopt, {{known, value}}, Origin::BornRule, {}});
        const std::string other = c[0] == known ? c[1] : c[0];
        ChainStep step{c, known, value, {}, std::nullopt};
        std::set<int> vals{0, 1};
        if (constraint) vals = detail::allowed_values(*constraint, {{known, value}}, other);
        if (vals.size() == 1) {
            step.derived = other;
            step.derived_value = *vals.begin();
        }
        out.steps.push_back(step);
        if (!step.derived_value) break;
        known = other;
        value = *step.derived_value;
    }
    const auto& last = out.steps.back();
    out.contradiction = last.derived == "W" && last.derived_value && *last.derived_value != w;
    out.verdict = check_consistency(statements, {}, AssumptionSet::truth());
    return out;
}

struct ZeroPrediction {
    std::string agent;
    std::string description;
    double probability = 0.0;
    Statement statement;
};

struct ModifiedFr {
    std::vector<ZeroPrediction> predictions;
    Verdict verdict;
};

// Three vanishing projections of the FR state after the friends' steps, each
// read as an exclusion by one classical agent, plus the observed u = w = ok.
inline ModifiedFr modified_fr() {
    const Protocol p = fr_protocol();
    const StateVector psi = run_protocol(p).state;
    const auto okf = ok_fail_basis();
    const std::vector<std::string> targets{"S_A", "L_A", "S_B", "L_B"};
    auto product = [](std::span<const Amp> a, std::span<const Amp> b) {
        AmpVector out;
        for (auto x : a)
            for (auto y : b) out.push_back(x * y);
        return out;
    };
    const AmpVector e00{1.0, 0.0, 0.0, 0.0};
    const AmpVector e11{0.0, 0.0, 0.0, 1.0};
    const auto ok = okf.vector(0);

    ModifiedFr out;
    out.predictions.push_back({"Ursula", "<ok|_A <00|_B psi: u = ok excludes b = 0",
                               project(psi, product(ok, e00), targets).probability,
                               {"Ursula", ForbiddenSet{{"U", "B"}, {{0, 0}}}, std::nullopt, {}, Origin::BornRule, {}}});
    out.predictions.push_back({"Wigner", "<11|_A <ok|_B psi: w = ok excludes a = 1",
                               project(psi, product(e11, ok), targets).probability,
                               {"Wigner", ForbiddenSet{{"A", "W"}, {{1, 0}}}, std::nullopt, {}, Origin::BornRule, {}}});
    out.predictions.push_back({"Zeno", "<00|_A <11|_B psi: a = 0 and b = 1 never occur together",
                               project(psi, product(e00, e11), targets).probability,
                               {"Zeno", ForbiddenSet{{"A", "B"}, {{0, 1}}}, std::nullopt, {}, Origin::BornRule, {}}});
    std::vector<Statement> statements{observation(p, "U", 0), observation(p, "W", 0)};
    for (const auto& z : out.predictions) statements.push_back(z.statement);
    out.verdict = check_consistency(statements, {}, AssumptionSet::truth());
    return out;
}

// ---------------------------------------------------------------------------
// Specker triangle

struct SpeckerTriangle {
    std::vector<Statement> parities;
    Verdict verdict;
};

// With (u, v, w) fixed, the superobservers' parities leave three pairwise
// constraints on (a, b, c).
inline SpeckerTriangle specker_triangle(int u, int v, int w) {
    for (int x : {u, v, w})
        if (x != 0 && x != 1) throw error("outcomes must be 0 or 1");
    if ((u ^ v ^ w) != 0) throw error("(u, v, w) has odd parity and never occurs");
    SpeckerTriangle out;
    out.parities = {
        {"Ursula", Parity{{"B", "C"}, 1 ^ u}, std::nullopt, {{"U", u}}, Origin::BornRule, {}},
        {"Valentina", Parity{{"A", "C"}, 1 ^ v}, std::nullopt, {{"V", v}}, Origin::BornRule, {}},
        {"Wigner", Parity{{"A", "B"}, 1 ^ w}, std::nullopt, {{"W", w}}, Origin::BornRule, {}},
    };
    out.verdict = check_consistency(out.parities, {}, AssumptionSet::truth());
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string outcome_label(const Protocol& p, const std::string& m, int v) {
    if (const auto* s = p.super_step(m)) return s->basis.label(static_cast<std::size_t>(v));
    return std::to_string(v);
}

inline std::string symbol(const std::string& m) { return variable_name("", m, false); }

namespace detail {

inline std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += i + 1 == names.size() ? " and " : ", ";
        out += names[i];
    }
    return out;
}

}  // namespace detail

// A claim in the protocol's outcome labels. Parities keep the owner's own
// outcomes on the right-hand side.
inline std::string render_claim(const Protocol& p, const Statement& s) {
    const auto& scope = s.scope();
    std::vector<std::string> free_vars;
    for (const auto& m : scope)
        if (!s.premise.contains(m)) free_vars.push_back(m);
    if (const auto* par = std::get_if<Parity>(&s.constraint)) {
        std::vector<std::string> lhs, rhs;
        for (const auto& m : par->vars) {
            const auto& who = p.measurement(m).agent;
            (who == s.owner ? rhs : lhs).push_back(symbol(m));
        }
        if (lhs.empty()) std::swap(lhs, rhs);
        std::string out;
        for (std::size_t i = 0; i < lhs.size(); ++i) out += (i ? " ⊕ " : "") + lhs[i];
        out += " = " + std::to_string(par->rhs);
        for (const auto& r : rhs) out += " ⊕ " + r;
        return out;
    }
    std::vector<std::string> forced;
    for (const auto& m : free_vars) {
        auto vals = detail::allowed_values(s.constraint, s.premise, m);
        if (vals.size() == 1) forced.push_back(symbol(m) + " = " + outcome_label(p, m, *vals.begin()));
    }
    if (!forced.empty()) return detail::join_names(forced);
    std::vector<std::string> names;
    for (const auto& m : scope) names.push_back(symbol(m));
    return detail::render_constraint(s.constraint, names);
}

struct RenderedStatement {
    std::string owner;
    std::vector<std::string> scope;
    std::string condition;
    std::string claim;
    std::string caveat;
    std::string text;
    Statement machine;
};

inline constexpr const char* kMemoryCaveat = "provided no memory holding these outcomes is altered in the meantime";

inline std::vector<RenderedStatement> render_resolution_statements(const Protocol& p, const std::string& agent,
                                                                   const std::vector<Statement>& statements) {
    std::vector<RenderedStatement> out;
    for (const auto& s : statements) {
        if (s.owner != agent || !s.gather) continue;
        const auto& g = *s.gather;
        std::vector<std::string> whom;
        for (const auto& m : g.targets) {
            const auto& who = p.measurement(m).agent;
            if (!detail::contains(whom, who)) whom.push_back(who);
        }
        std::string cond;
        const std::string subject = g.gatherer == agent ? "I (" + agent + ")" : g.gatherer;
        std::vector<std::string> held;
        for (const auto& [m, v] : s.premise)
            if (p.measurement(m).agent == g.gatherer) held.push_back(symbol(m) + " = " + outcome_label(p, m, v));
        if (held.empty()) cond = "if " + subject + " ask" + (g.gatherer == agent ? "" : "s") + " " +
                                 detail::join_names(whom) + " for the outcome";
        else cond = "if " + subject + " obtain" + (g.gatherer == agent ? "" : "s") + " " + detail::join_names(held) +
                    " and ask" + (g.gatherer == agent ? "" : "s") + " " + detail::join_names(whom) + " for the outcome";
        if (whom.size() > 1) cond += "s";
        RenderedStatement r{agent, s.scope(), cond, render_claim(p, s), kMemoryCaveat, {}, s};
        r.text = cond + ", then " + r.claim + " (" + r.caveat + ").";
        r.text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(r.text[0])));
        out.push_back(std::move(r));
    }
    return out;
}

// Conditional statements of one agent with default contexts, ready to render.
inline std::vector<RenderedStatement> render_resolution_statements(const Protocol& p, const std::string& agent,
                                                                   const std::map<std::string, int>& observed = {}) {
    const Agent a = make_agent(p, agent);
    return render_resolution_statements(p, agent, derive_statements(p, a, agent_contexts(p, a), observed, true));
}

// ---------------------------------------------------------------------------
// No-go pipelines

enum class NoGoVariant { Truth, Agreement, Practicality };

inline std::string to_string(NoGoVariant v) {
    switch (v) {
        case NoGoVariant::Truth: return "truth";
        case NoGoVariant::Agreement: return "agreement";
        case NoGoVariant::Practicality: return "practicality";
    }
    return "?";
}

inline NoGoVariant parse_variant(const std::string& s) {
    if (s == "truth") return NoGoVariant::Truth;
    if (s == "agreement") return NoGoVariant::Agreement;
    if (s == "practicality") return NoGoVariant::Practicality;
    throw parse_error("unknown no-go variant '" + s + "' (expected truth, agreement or practicality)");
}

inline AssumptionSet default_assumptions(NoGoVariant v) {
    switch (v) {
        case NoGoVariant::Truth: return AssumptionSet::truth();
        case NoGoVariant::Agreement: return AssumptionSet::agreement();
        case NoGoVariant::Practicality: return AssumptionSet::practicality();
    }
    return {};
}

struct NoGoReport {
    NoGoVariant variant = NoGoVariant::Truth;
    AssumptionSet flags;
    std::vector<Statement> statements;
    std::vector<Equality> equalities;
    std::vector<std::string> trace;
    Verdict verdict;
    std::vector<RenderedStatement> rendered;
    bool expected_sat = false;

    bool reproduced() const { return verdict.sat == expected_sat; }
};

// Every classical agent derives its statements (conditioned on `observed`),
// classical agents exchange them when agreement is assumed, and the result
// is checked. Superobservers talk pairwise first, then report to external
// observers.
inline NoGoReport run_nogo(const Protocol& p, NoGoVariant variant, std::optional<AssumptionSet> flags = std::nullopt,
                           const std::map<std::string, int>& observed = {}) {
    NoGoReport r;
    r.variant = variant;
    r.flags = flags.value_or(default_assumptions(variant));
    r.flags.validate();
    r.expected_sat = variant == NoGoVariant::Practicality;
    const bool conditional = r.flags.born_practicality;

    std::vector<Agent> classical;
    for (auto& a : protocol_agents(p))
        if (a.classical) classical.push_back(std::move(a));
    for (const auto& [m, v] : observed) r.statements.push_back(observation(p, m, v));
    for (const auto& a : classical) {
        auto derived = derive_statements(p, a, agent_contexts(p, a), observed, conditional);
        for (auto& s : derived) r.statements.push_back(std::move(s));
    }

    if (r.flags.personal_knowledge) {
        std::vector<const Agent*> supers, others;
        for (const auto& a : classical) {
            if (assignment_scope(a.name, r.statements).empty()) continue;
            const bool super = std::any_of(a.own.begin(), a.own.end(),
                                           [&](const auto& m) { return p.super_step(m) != nullptr; });
            (super ? supers : others).push_back(&a);
        }
        std::vector<std::pair<const Agent*, const Agent*>> pattern;
        for (std::size_t i = 0; i < supers.size(); ++i)
            for (std::size_t j = i + 1; j < supers.size(); ++j) pattern.emplace_back(supers[i], supers[j]);
        for (const auto* o : others)
            for (const auto* s : supers) pattern.emplace_back(s, o);
        for (const auto& [s, t] : pattern) {
            if (!r.flags.classical_agreement) {
                r.trace.push_back(s->name + " -> " + t->name + ": skipped (no classical agreement)");
                continue;
            }
            auto c = communicate(r.flags, *s, *t, std::move(r.statements), r.equalities);
            r.statements = std::move(c.statements);
            std::string line = s->name + " -> " + t->name + ":";
            for (const auto& e : c.equalities) {
                line += " " + variable_name(e.first, e.measurement, true) + " = " +
                        variable_name(e.second, e.measurement, true) + ";";
                r.equalities.push_back(e);
            }
            r.trace.push_back(line);
        }
    }

    r.verdict = check_consistency(r.statements, r.equalities, r.flags);
    if (conditional)
        for (const auto& a : classical) {
            auto rs = render_resolution_statements(p, a.name, r.statements);
            for (auto& x : rs) r.rendered.push_back(std::move(x));
        }
    return r;
}

}  // namespace ewfs
