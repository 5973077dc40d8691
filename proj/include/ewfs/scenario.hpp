#pragma once

// Extended Wigner's-friend protocols: declarative description, execution,
// the canonical FR and GHZ-FR constructions, and the Bell-scenario compiler.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ewfs/error.hpp"
#include "ewfs/qsim.hpp"

namespace ewfs {

enum class MeasurementKind { Friend, Super };

struct MeasurementId {
    std::string name;
    MeasurementKind kind = MeasurementKind::Friend;
    std::string agent;

    bool operator==(const MeasurementId&) const = default;
};

// A friend inside a sealed lab measuring `system` and recording in `lab`.
struct FriendMeasure {
    std::string measurement;
    std::string agent;
    std::string system;
    std::string lab;
    OrthonormalBasis basis;

    bool operator==(const FriendMeasure&) const = default;
};

// A superobserver measuring the (system, lab) pair of an earlier friend.
struct SuperMeasure {
    std::string measurement;
    std::string agent;
    std::string friend_measurement;
    OrthonormalBasis basis;  // over (system, lab), complete

    bool operator==(const SuperMeasure&) const = default;
};

// `asker` learns the outcome recorded in `lab` (makes it a classical record).
struct Ask {
    std::string asker;
    std::string lab;

    bool operator==(const Ask&) const = default;
};

using Step = std::variant<FriendMeasure, SuperMeasure, Ask>;

using Context = std::vector<std::string>;

class Protocol {
public:
    // `initial` spans a subset of `registers`; every other register starts in |0>.
    Protocol(std::vector<std::string> registers, StateVector initial, std::vector<Step> steps,
             std::vector<std::string> observers = {}, std::vector<Context> contexts = {})
        : registers_(std::move(registers)),
          initial_(std::move(initial)),
          steps_(std::move(steps)),
          observers_(std::move(observers)),
          contexts_(std::move(contexts)) {
        validate();
    }

    const std::vector<std::string>& registers() const { return registers_; }
    const StateVector& initial() const { return initial_; }
    const std::vector<Step>& steps() const { return steps_; }
    const std::vector<std::string>& observers() const { return observers_; }
    const std::vector<Context>& contexts() const { return contexts_; }

    std::vector<MeasurementId> measurements() const {
        std::vector<MeasurementId> out;
        for (const auto& s : steps_) {
            if (const auto* f = std::get_if<FriendMeasure>(&s)) {
                out.push_back({f->measurement, MeasurementKind::Friend, f->agent});
            } else if (const auto* m = std::get_if<SuperMeasure>(&s)) {
                out.push_back({m->measurement, MeasurementKind::Super, m->agent});
            }
        }
        return out;
    }

    bool has_measurement(std::string_view name) const {
        return friend_step(name) != nullptr || super_step(name) != nullptr;
    }

    MeasurementId measurement(std::string_view name) const {
        if (const auto* f = friend_step(name)) return {f->measurement, MeasurementKind::Friend, f->agent};
        if (const auto* m = super_step(name)) return {m->measurement, MeasurementKind::Super, m->agent};
        throw error("unknown measurement '" + std::string(name) + "'");
    }

    const FriendMeasure* friend_step(std::string_view name) const {
        for (const auto& s : steps_)
            if (const auto* f = std::get_if<FriendMeasure>(&s); f && f->measurement == name) return f;
        return nullptr;
    }

    const SuperMeasure* super_step(std::string_view name) const {
        for (const auto& s : steps_)
            if (const auto* m = std::get_if<SuperMeasure>(&s); m && m->measurement == name) return m;
        return nullptr;
    }

    const FriendMeasure* friend_on_lab(std::string_view lab) const {
        for (const auto& s : steps_)
            if (const auto* f = std::get_if<FriendMeasure>(&s); f && f->lab == lab) return f;
        return nullptr;
    }

    const SuperMeasure* super_on_lab(std::string_view lab) const {
        for (const auto& s : steps_)
            if (const auto* m = std::get_if<SuperMeasure>(&s)) {
                if (friend_step(m->friend_measurement)->lab == lab) return m;
            }
        return nullptr;
    }

    // The lab whose contents a measurement is about.
    const std::string& lab_of(std::string_view name) const {
        if (const auto* f = friend_step(name)) return f->lab;
        if (const auto* m = super_step(name)) return friend_step(m->friend_measurement)->lab;
        throw error("unknown measurement '" + std::string(name) + "'");
    }

    // Agents whose lab is supermeasured are modelled quantumly; all others
    // (superobservers, external observers, unobserved friends) are classical.
    bool is_classical(std::string_view agent) const {
        for (const auto& s : steps_)
            if (const auto* f = std::get_if<FriendMeasure>(&s); f && f->agent == agent) {
                return super_on_lab(f->lab) == nullptr;
            }
        return true;
    }

    std::vector<std::string> agents() const {
        std::vector<std::string> out;
        auto add = [&](const std::string& a) {
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
        };
        for (const auto& s : steps_) {
            if (const auto* f = std::get_if<FriendMeasure>(&s)) add(f->agent);
            if (const auto* m = std::get_if<SuperMeasure>(&s)) add(m->agent);
            if (const auto* a = std::get_if<Ask>(&s)) add(a->asker);
        }
        for (const auto& o : observers_) add(o);
        return out;
    }

    // Full initial state psi^{t=1} over registers(), lab memories in |0>.
    StateVector initial_full_state() const {
        std::vector<std::string> rest;
        for (const auto& r : registers_)
            if (!initial_.has_register(r)) rest.push_back(r);
        StateVector full = tensor(initial_, basis_state(rest, 0));
        return reorder(full, registers_);
    }

    bool operator==(const Protocol& o) const {
        return registers_ == o.registers_ && initial_.registers() == o.initial_.registers() &&
               std::equal(initial_.amplitudes().begin(), initial_.amplitudes().end(),
                          o.initial_.amplitudes().begin(), o.initial_.amplitudes().end()) &&
               steps_ == o.steps_ && observers_ == o.observers_ && contexts_ == o.contexts_;
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < registers_.size(); ++i)
            for (std::size_t j = i + 1; j < registers_.size(); ++j)
                if (registers_[i] == registers_[j]) throw error("Protocol: duplicate register " + registers_[i]);
        auto known = [&](const std::string& r) {
            return std::find(registers_.begin(), registers_.end(), r) != registers_.end();
        };
        for (const auto& r : initial_.registers())
            if (!known(r)) throw error("Protocol: initial state register '" + r + "' not declared");
        if (std::abs(initial_.norm_squared() - 1.0) > kNormTolerance) {
            throw error("Protocol: initial state is not normalized");
        }

        std::vector<std::string> names;
        std::vector<std::string> friend_labs;
        std::vector<std::string> super_labs;
        auto claim_name = [&](const std::string& n) {
            if (n.empty()) throw error("Protocol: empty measurement name");
            if (std::find(names.begin(), names.end(), n) != names.end()) {
                throw error("Protocol: duplicate measurement name '" + n + "'");
            }
            names.push_back(n);
        };
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            const auto& s = steps_[i];
            if (const auto* f = std::get_if<FriendMeasure>(&s)) {
                claim_name(f->measurement);
                if (!known(f->system) || !known(f->lab)) {
                    throw error("Protocol: friend measurement " + f->measurement + " uses an undeclared register");
                }
                if (f->system == f->lab) throw error("Protocol: system and lab registers coincide");
                if (f->basis.dim() != 2) throw error("Protocol: friend basis must be single-qubit");
                if (initial_.has_register(f->lab)) {
                    throw error("Protocol: lab register " + f->lab + " must start in |0>");
                }
                if (std::find(friend_labs.begin(), friend_labs.end(), f->lab) != friend_labs.end()) {
                    throw error("Protocol: lab " + f->lab + " targeted by more than one friend measurement");
                }
                friend_labs.push_back(f->lab);
            } else if (const auto* m = std::get_if<SuperMeasure>(&s)) {
                claim_name(m->measurement);
                const auto* f = friend_step(m->friend_measurement);
                if (f == nullptr || std::find(friend_labs.begin(), friend_labs.end(), f->lab) == friend_labs.end()) {
                    throw error("Protocol: supermeasurement " + m->measurement +
                                " must follow the friend measurement it targets");
                }
                if (std::find(super_labs.begin(), super_labs.end(), f->lab) != super_labs.end()) {
                    throw error("Protocol: lab " + f->lab + " supermeasured twice");
                }
                if (m->basis.dim() != 4) throw error("Protocol: supermeasurement basis must span system and lab");
                super_labs.push_back(f->lab);
            } else {
                const auto& a = std::get<Ask>(s);
                if (std::find(friend_labs.begin(), friend_labs.end(), a.lab) == friend_labs.end()) {
                    throw error("Protocol: ask targets " + a.lab + ", which holds no recorded outcome yet");
                }
                if (std::find(super_labs.begin(), super_labs.end(), a.lab) != super_labs.end()) {
                    throw error("Protocol: ask on " + a.lab + " after it was supermeasured");
                }
            }
        }
        for (const auto& c : contexts_)
            for (const auto& v : c)
                if (std::find(names.begin(), names.end(), v) == names.end()) {
                    throw error("Protocol: context mentions unknown measurement '" + v + "'");
                }
    }

    std::vector<std::string> registers_;
    StateVector initial_;
    std::vector<Step> steps_;
    std::vector<std::string> observers_;
    std::vector<Context> contexts_;
};

// ---------------------------------------------------------------------------
// Execution

struct ProtocolRun {
    StateVector state;
    std::vector<Ask> records;  // asks executed so far
};

// Applies the first `step_count` steps (all when absent). Friend steps apply
// their unitary; supermeasurements are left to distribution queries; asks
// only mark classical records.
inline ProtocolRun run_protocol(const Protocol& p, std::optional<std::size_t> step_count = std::nullopt) {
    const std::size_t n = std::min(step_count.value_or(p.steps().size()), p.steps().size());
    ProtocolRun run{p.initial_full_state(), {}};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = p.steps()[i];
        if (const auto* f = std::get_if<FriendMeasure>(&s)) {
            run.state = apply_unitary(run.state, friend_unitary(f->basis), {f->system, f->lab});
        } else if (const auto* a = std::get_if<Ask>(&s)) {
            run.records.push_back(*a);
        }
    }
    return run;
}

// Returns a description of why the variables cannot be brought together, or
// nullopt when they can. A friend's outcome and the supermeasurement of that
// friend's lab are never co-available.
inline std::optional<std::string> validate_context(const Protocol& p, const Context& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!p.has_measurement(vars[i])) throw error("unknown measurement '" + vars[i] + "'");
        for (std::size_t j = 0; j < i; ++j)
            if (vars[i] == vars[j]) throw error("measurement '" + vars[i] + "' listed twice");
    }
    for (const auto& v : vars) {
        const auto* m = p.super_step(v);
        if (m == nullptr) continue;
        if (std::find(vars.begin(), vars.end(), m->friend_measurement) != vars.end()) {
            return m->measurement + " supermeasures the lab of " + m->friend_measurement +
                   "; their outcomes can never be stored together";
        }
    }
    return std::nullopt;
}

// Born distribution over a tuple of outcomes, one radix per variable.
struct JointDistribution {
    std::vector<std::string> variables;
    std::vector<std::size_t> radices;
    std::vector<double> probabilities;  // mixed-radix, first variable most significant

    std::size_t index_of(const std::vector<int>& outcome) const {
        if (outcome.size() != radices.size()) throw error("JointDistribution: arity mismatch");
        std::size_t idx = 0;
        for (std::size_t i = 0; i < radices.size(); ++i) {
            if (outcome[i] < 0 || static_cast<std::size_t>(outcome[i]) >= radices[i]) {
                throw error("JointDistribution: outcome out of range");
            }
            idx = idx * radices[i] + static_cast<std::size_t>(outcome[i]);
        }
        return idx;
    }

    std::vector<int> outcome_at(std::size_t idx) const {
        std::vector<int> out(radices.size());
        for (std::size_t i = radices.size(); i-- > 0;) {
            out[i] = static_cast<int>(idx % radices[i]);
            idx /= radices[i];
        }
        return out;
    }

    double probability(const std::vector<int>& outcome) const { return probabilities[index_of(outcome)]; }

    double total() const {
        double s = 0.0;
        for (double x : probabilities) s += x;
        return s;
    }

    JointDistribution marginal(const std::vector<std::string>& keep) const {
        JointDistribution m;
        std::vector<std::size_t> pos;
        for (const auto& k : keep) {
            auto it = std::find(variables.begin(), variables.end(), k);
            if (it == variables.end()) throw error("marginal: unknown variable " + k);
            pos.push_back(static_cast<std::size_t>(it - variables.begin()));
            m.variables.push_back(k);
            m.radices.push_back(radices[pos.back()]);
        }
        std::size_t total = 1;
        for (auto r : m.radices) total *= r;
        m.probabilities.assign(total, 0.0);
        for (std::size_t idx = 0; idx < probabilities.size(); ++idx) {
            const auto o = outcome_at(idx);
            std::vector<int> sub;
            for (auto q : pos) sub.push_back(o[q]);
            m.probabilities[m.index_of(sub)] += probabilities[idx];
        }
        return m;
    }
};

// Joint distribution of a gatherable variable set, evaluated on the minimal
// sub-protocol producing it: friend unitaries for the friend variables and for
// the labs of the super variables, then one product measurement. Other
// supermeasurements are left out.
inline JointDistribution joint_distribution(const Protocol& p, const Context& vars) {
    if (auto why = validate_context(p, vars)) throw error("context not gatherable: " + *why);
    std::vector<std::string> needed;
    for (const auto& v : vars) {
        if (p.friend_step(v)) needed.push_back(v);
        else needed.push_back(p.super_step(v)->friend_measurement);
    }
    StateVector state = p.initial_full_state();
    for (const auto& s : p.steps()) {
        const auto* f = std::get_if<FriendMeasure>(&s);
        if (f && std::find(needed.begin(), needed.end(), f->measurement) != needed.end()) {
            state = apply_unitary(state, friend_unitary(f->basis), {f->system, f->lab});
        }
    }
    const OrthonormalBasis memory = z_basis();
    std::vector<LocalMeasurement> ms;
    JointDistribution d;
    d.variables = vars;
    for (const auto& v : vars) {
        if (const auto* fm = p.friend_step(v)) {
            ms.push_back({&memory, {fm->lab}});
            d.radices.push_back(2);
        } else {
            const auto* m = p.super_step(v);
            const auto* f = p.friend_step(m->friend_measurement);
            ms.push_back({&m->basis, {f->system, f->lab}});
            d.radices.push_back(m->basis.dim());
        }
    }
    d.probabilities = joint_probabilities(state, ms);
    return d;
}

// ---------------------------------------------------------------------------
// Canonical protocols

namespace detail {

inline AmpVector lift_through(const Unitary& u, std::span<const Amp> system_vec) {
    // U (|v>_S |0>_L), with (S, L) ordered big-endian.
    AmpVector in(4);
    in[0] = system_vec[0];
    in[2] = system_vec[1];
    return u.apply(in);
}

}  // namespace detail

// Supermeasurement basis {U|b>|0> : b in setting} completed to the full
// (system, lab) space, labelled like the setting.
inline OrthonormalBasis lifted_basis(const OrthonormalBasis& friend_basis, const OrthonormalBasis& setting) {
    const Unitary u = friend_unitary(friend_basis);
    return complete_basis({detail::lift_through(u, setting.vector(0)), detail::lift_through(u, setting.vector(1))},
                          {setting.label(0), setting.label(1)});
}

// |ok> = (|00> - |11>)/sqrt2, |fail> = (|00> + |11>)/sqrt2, completed.
inline OrthonormalBasis ok_fail_basis() {
    const double h = 1.0 / std::sqrt(2.0);
    return complete_basis({{h, 0.0, 0.0, -h}, {h, 0.0, 0.0, h}}, {"ok", "fail"});
}

inline StateVector hardy_state(std::vector<std::string> registers = {"S_A", "S_B"}) {
    return make_state(std::move(registers), {1.0, 0.0, 1.0, 1.0});
}

inline StateVector ghz_state(std::vector<std::string> registers = {"S_A", "S_B", "S_C"}) {
    return make_state(std::move(registers), {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
}

// Entanglement version of the FR protocol: friends Alice and Bob measure Z,
// Ursula and Wigner supermeasure in the ok/fail basis (ok is outcome 0).
inline Protocol fr_protocol() {
    const auto z = z_basis();
    const auto okf = ok_fail_basis();
    std::vector<Step> steps{
        FriendMeasure{"A", "Alice", "S_A", "L_A", z},
        FriendMeasure{"B", "Bob", "S_B", "L_B", z},
        SuperMeasure{"U", "Ursula", "A", okf},
        SuperMeasure{"W", "Wigner", "B", okf},
    };
    return Protocol({"S_A", "L_A", "S_B", "L_B"}, hardy_state(), std::move(steps), {"Zeno"},
                    {{"A", "B"}, {"A", "W"}, {"U", "B"}, {"U", "W"}});
}

// GHZ-FR: friends measure Y on a GHZ state; superobservers measure in the
// yes/no basis U|+>|0>, U|->|0> (outcomes 0, 1).
inline Protocol ghz_fr_protocol() {
    const auto y = y_basis();
    const auto x = x_basis();
    const auto yes_no = [&] {
        const Unitary u = friend_unitary(y);
        return complete_basis({detail::lift_through(u, x.vector(0)), detail::lift_through(u, x.vector(1))},
                              {"yes", "no"});
    }();
    std::vector<Step> steps{
        FriendMeasure{"A", "Alice", "S_A", "L_A", y},
        FriendMeasure{"B", "Bob", "S_B", "L_B", y},
        FriendMeasure{"C", "Charlie", "S_C", "L_C", y},
        SuperMeasure{"U", "Ursula", "A", yes_no},
        SuperMeasure{"V", "Valentina", "B", yes_no},
        SuperMeasure{"W", "Wigner", "C", yes_no},
    };
    return Protocol({"S_A", "L_A", "S_B", "L_B", "S_C", "L_C"}, ghz_state(), std::move(steps), {"Zeno"},
                    {{"U", "B", "C"}, {"A", "V", "C"}, {"A", "B", "W"}, {"U", "V", "W"}});
}

// ---------------------------------------------------------------------------
// Bell scenarios and the Bell -> extended Wigner's friend compiler

struct BellParty {
    std::string friend_measurement;  // setting 0, performed by the friend
    std::string friend_agent;
    std::string super_measurement;   // setting 1, performed by the superobserver
    std::string super_agent;
    std::string setting0_name;       // measurement names in the Bell model
    std::string setting1_name;
    OrthonormalBasis setting0;
    OrthonormalBasis setting1;

    bool operator==(const BellParty&) const = default;
};

struct BellScenario {
    std::vector<BellParty> parties;
    StateVector shared_state;  // one system register per party, in party order
    std::vector<std::string> observers;

    void validate() const {
        if (parties.empty()) throw error("BellScenario: no parties");
        if (shared_state.num_qubits() != parties.size()) {
            throw error("BellScenario: shared state must hold one qubit per party");
        }
        for (const auto& q : parties) {
            if (q.setting0.dim() != 2 || q.setting1.dim() != 2) {
                throw error("BellScenario: every party needs two dichotomic single-qubit settings");
            }
        }
        if (std::abs(shared_state.norm_squared() - 1.0) > kNormTolerance) {
            throw error("BellScenario: shared state not normalized");
        }
    }

    // All setting choices, first party most significant, setting 0 before 1.
    std::vector<std::vector<int>> all_settings() const {
        std::vector<std::vector<int>> out;
        const std::size_t n = parties.size();
        for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
            std::vector<int> s(n);
            for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<int>((idx >> (n - 1 - i)) & 1U);
            out.push_back(std::move(s));
        }
        return out;
    }

    Context bell_context(const std::vector<int>& settings) const {
        Context c;
        for (std::size_t i = 0; i < parties.size(); ++i)
            c.push_back(settings[i] == 0 ? parties[i].setting0_name : parties[i].setting1_name);
        return c;
    }
};

// Direct Born statistics of one Bell context.
inline JointDistribution bell_distribution(const BellScenario& bell, const std::vector<int>& settings) {
    bell.validate();
    if (settings.size() != bell.parties.size()) throw error("bell_distribution: one setting per party required");
    std::vector<LocalMeasurement> ms;
    JointDistribution d;
    d.variables = bell.bell_context(settings);
    for (std::size_t i = 0; i < bell.parties.size(); ++i) {
        const auto& q = bell.parties[i];
        ms.push_back({settings[i] == 0 ? &q.setting0 : &q.setting1, {bell.shared_state.registers()[i]}});
        d.radices.push_back(2);
    }
    d.probabilities = joint_probabilities(bell.shared_state, ms);
    return d;
}

struct ContextMapping {
    std::vector<int> settings;
    Context bell_variables;
    Context ewfs_variables;
};

struct CompiledProtocol {
    Protocol protocol;
    std::vector<ContextMapping> contexts;
};

// Each party's setting 0 becomes a friend measurement, setting 1 a
// supermeasurement in the basis {U|b>|0> : b in setting 1}.
inline CompiledProtocol compile_bell_to_ewfs(const BellScenario& bell) {
    bell.validate();
    std::vector<std::string> registers;
    std::vector<Step> friends;
    std::vector<Step> supers;
    for (std::size_t i = 0; i < bell.parties.size(); ++i) {
        const auto& q = bell.parties[i];
        const std::string& sys = bell.shared_state.registers()[i];
        const std::string lab = "L_" + q.friend_measurement;
        registers.push_back(sys);
        registers.push_back(lab);
        friends.push_back(FriendMeasure{q.friend_measurement, q.friend_agent, sys, lab, q.setting0});
        supers.push_back(SuperMeasure{q.super_measurement, q.super_agent, q.friend_measurement,
                                      lifted_basis(q.setting0, q.setting1)});
    }
    std::vector<Step> steps = std::move(friends);
    steps.insert(steps.end(), supers.begin(), supers.end());

    std::vector<ContextMapping> mapping;
    std::vector<Context> contexts;
    for (const auto& s : bell.all_settings()) {
        ContextMapping m{s, bell.bell_context(s), {}};
        for (std::size_t i = 0; i < s.size(); ++i)
            m.ewfs_variables.push_back(s[i] == 0 ? bell.parties[i].friend_measurement
                                                 : bell.parties[i].super_measurement);
        contexts.push_back(m.ewfs_variables);
        mapping.push_back(std::move(m));
    }
    return {Protocol(std::move(registers), bell.shared_state, std::move(steps), bell.observers, std::move(contexts)),
            std::move(mapping)};
}

// Largest per-entry difference between compiled-protocol statistics and the
// direct Bell statistics over all contexts. Extra supermeasurement outcomes
// from basis completion count as deviation.
inline double compiled_deviation(const BellScenario& bell, const CompiledProtocol& compiled) {
    double dev = 0.0;
    for (const auto& m : compiled.contexts) {
        const auto direct = bell_distribution(bell, m.settings);
        const auto ewfs = joint_distribution(compiled.protocol, m.ewfs_variables);
        for (std::size_t idx = 0; idx < ewfs.probabilities.size(); ++idx) {
            const auto o = ewfs.outcome_at(idx);
            const bool in_range = std::all_of(o.begin(), o.end(), [](int x) { return x < 2; });
            const double ref = in_range ? direct.probability(o) : 0.0;
            dev = std::max(dev, std::abs(ewfs.probabilities[idx] - ref));
        }
    }
    return dev;
}

// Hardy model: state (|00>+|10>+|11>)/sqrt3, settings Z and the X basis
// ordered {|->, |+>} so that outcome 0 is `ok` as in the FR protocol.
inline BellScenario hardy_bell() {
    const double h = 1.0 / std::sqrt(2.0);
    const auto okfail = OrthonormalBasis::make({{h, -h}, {h, h}}, {"ok", "fail"});
    return BellScenario{{BellParty{"A", "Alice", "U", "Ursula", "A", "U", z_basis(), okfail},
                         BellParty{"B", "Bob", "W", "Wigner", "B", "W", z_basis(), okfail}},
                        hardy_state(),
                        {"Zeno"}};
}

// GHZ-Mermin model: setting 0 is Y (friend), setting 1 is X (superobserver).
inline BellScenario ghz_bell() {
    return BellScenario{{BellParty{"A", "Alice", "U", "Ursula", "Y_A", "X_A", y_basis(), x_basis()},
                         BellParty{"B", "Bob", "V", "Valentina", "Y_B", "X_B", y_basis(), x_basis()},
                         BellParty{"C", "Charlie", "W", "Wigner", "Y_C", "X_C", y_basis(), x_basis()}},
                        ghz_state(),
                        {"Zeno"}};
}

// CHSH at Tsirelson settings: singlet, A in Z / X, B in the eigenbases of
// (Z + X)/sqrt2 and (Z - X)/sqrt2.
inline BellScenario chsh_bell() {
    const double c = std::cos(M_PI / 8.0);
    const double s = std::sin(M_PI / 8.0);
    const auto b0 = OrthonormalBasis::make({{c, s}, {-s, c}}, {"0", "1"});
    const auto b1 = OrthonormalBasis::make({{c, -s}, {s, c}}, {"0", "1"});
    return BellScenario{{BellParty{"A", "Alice", "U", "Ursula", "A0", "A1", z_basis(), x_basis()},
                         BellParty{"B", "Bob", "W", "Wigner", "B0", "B1", b0, b1}},
                        make_state({"S_A", "S_B"}, {0.0, 1.0, -1.0, 0.0}),
                        {}};
}

// Product state |00> with Z and X settings on both sides.
inline BellScenario product_bell() {
    return BellScenario{{BellParty{"A", "Alice", "U", "Ursula", "A0", "A1", z_basis(), x_basis()},
                         BellParty{"B", "Bob", "W", "Wigner", "B0", "B1", z_basis(), x_basis()}},
                        basis_state({"S_A", "S_B"}, 0),
                        {}};
}

}  // namespace ewfs
