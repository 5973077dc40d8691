#pragma once

// Line-based text format for protocols and Bell scenarios.
//
//   protocol
//   register S_A                      (one per register, in index order)
//   initial registers=S_A,S_B amps=1,0,1,1
//   friend A agent=Alice system=S_A lab=L_A basis=z
//   super U agent=Ursula of=A basis=okfail
//   ask Ursula L_B
//   observer Zeno
//   context U,B
//
//   bell
//   state registers=S_A,S_B amps=1,0,1,1
//   party friend=A:Alice super=U:Ursula names=A,U basis0=z basis1=x labels1=ok,fail
//   observer Zeno
//
// Amplitudes are `re` or `re:im`. A basis is a name (z, x, y, okfail; for a
// supermeasurement also lift:<single-qubit basis>) or explicit vectors
// `re:im,re:im;re:im,re:im`. `labels=` overrides outcome labels. The writer
// emits explicit values with 17 significant digits, so parse(write(x)) == x.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ewfs/error.hpp"
#include "ewfs/qsim.hpp"
#include "ewfs/scenario.hpp"

namespace ewfs::io {

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string format_amp(Amp a) {
    if (a.imag() == 0.0) return format_double(a.real());
    return format_double(a.real()) + ":" + format_double(a.imag());
}

inline double parse_double(const std::string& s, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

inline Amp parse_amp(const std::string& s, int line) {
    const auto parts = split(s, ':');
    if (parts.size() == 1) return {parse_double(parts[0], line), 0.0};
    if (parts.size() == 2) return {parse_double(parts[0], line), parse_double(parts[1], line)};
    throw parse_error("line " + std::to_string(line) + ": bad amplitude '" + s + "'");
}

inline AmpVector parse_amps(const std::string& s, int line) {
    AmpVector out;
    for (const auto& t : split(s, ',')) out.push_back(parse_amp(t, line));
    return out;
}

inline std::string format_amps(std::span<const Amp> v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_amp(v[i]);
    return out;
}

inline std::string format_basis(const OrthonormalBasis& b) {
    std::string out;
    for (std::size_t k = 0; k < b.dim(); ++k) out += (k ? ";" : "") + format_amps(b.vector(k));
    out += " labels=";
    for (std::size_t k = 0; k < b.dim(); ++k) out += (k ? "," : "") + b.label(k);
    return out;
}

inline std::string join(const std::vector<std::string>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? std::string(1, sep) : "") + v[i];
    return out;
}

// Tokens of one line: a keyword, positional words, and key=value pairs.
struct Line {
    int number = 0;
    std::string keyword;
    std::vector<std::string> words;
    std::map<std::string, std::string> keys;

    const std::string& need(const std::string& k) const {
        auto it = keys.find(k);
        if (it == keys.end()) throw parse_error("line " + std::to_string(number) + ": missing " + k + "=");
        return it->second;
    }
    std::string get(const std::string& k, std::string fallback = {}) const {
        auto it = keys.find(k);
        return it == keys.end() ? fallback : it->second;
    }
    const std::string& word(std::size_t i) const {
        if (i >= words.size()) throw parse_error("line " + std::to_string(number) + ": too few fields");
        return words[i];
    }
};

inline std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::string tok;
        Line line;
        line.number = number;
        while (ls >> tok) {
            if (line.keyword.empty()) {
                line.keyword = tok;
            } else if (auto eq = tok.find('='); eq != std::string::npos) {
                line.keys[tok.substr(0, eq)] = tok.substr(eq + 1);
            } else {
                line.words.push_back(tok);
            }
        }
        if (!line.keyword.empty()) out.push_back(std::move(line));
    }
    return out;
}

inline OrthonormalBasis with_labels(const OrthonormalBasis& b, const std::string& labels, int line) {
    if (labels.empty()) return b;
    auto l = split(labels, ',');
    if (l.size() != b.dim()) throw parse_error("line " + std::to_string(line) + ": label count mismatch");
    return OrthonormalBasis::make(b.vectors(), std::move(l));
}

inline OrthonormalBasis single_qubit_basis(const std::string& spec, int line) {
    if (spec == "z") return z_basis();
    if (spec == "x") return x_basis();
    if (spec == "y") return y_basis();
    std::vector<AmpVector> vs;
    for (const auto& v : split(spec, ';')) vs.push_back(parse_amps(v, line));
    try {
        auto b = OrthonormalBasis::make(std::move(vs));
        if (b.dim() != 2) throw parse_error("line " + std::to_string(line) + ": expected a single-qubit basis");
        return b;
    } catch (const parse_error&) {
        throw;
    } catch (const error& e) {
        throw parse_error("line " + std::to_string(line) + ": " + e.what());
    }
}

inline OrthonormalBasis super_basis(const std::string& spec, const OrthonormalBasis& friend_basis, int line) {
    if (spec == "okfail") return ok_fail_basis();
    if (spec.starts_with("lift:")) return lifted_basis(friend_basis, single_qubit_basis(spec.substr(5), line));
    std::vector<AmpVector> vs;
    for (const auto& v : split(spec, ';')) vs.push_back(parse_amps(v, line));
    try {
        return OrthonormalBasis::make(std::move(vs));
    } catch (const error& e) {
        throw parse_error("line " + std::to_string(line) + ": " + e.what());
    }
}

// Keeps amplitudes bit-exact when already normalized.
inline StateVector read_state(const Line& l) {
    auto regs = split(l.need("registers"), ',');
    if (l.get("amps") == "ghz") return ghz_state(std::move(regs));
    if (l.get("amps") == "hardy") return hardy_state(std::move(regs));
    auto amps = parse_amps(l.need("amps"), l.number);
    try {
        if (std::abs(ewfs::detail::norm_squared(amps) - 1.0) <= kNormTolerance) return StateVector(std::move(regs), std::move(amps));
        return make_state(std::move(regs), std::move(amps));
    } catch (const error& e) {
        throw parse_error("line " + std::to_string(l.number) + ": " + e.what());
    }
}

inline std::string write_state(const char* keyword, const StateVector& s) {
    return std::string(keyword) + " registers=" + join(s.registers(), ',') + " amps=" + format_amps(s.amplitudes()) + "\n";
}

}  // namespace detail

using ScenarioFile = std::variant<Protocol, BellScenario>;

inline Protocol parse_protocol_lines(const std::vector<detail::Line>& lines) {
    std::vector<std::string> registers;
    std::optional<StateVector> initial;
    std::vector<Step> steps;
    std::vector<std::string> observers;
    std::vector<Context> contexts;
    std::map<std::string, OrthonormalBasis> friend_bases;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.keyword == "register") {
            registers.push_back(l.word(0));
        } else if (l.keyword == "initial") {
            initial = detail::read_state(l);
        } else if (l.keyword == "friend") {
            auto b = detail::with_labels(detail::single_qubit_basis(l.get("basis", "z"), l.number), l.get("labels"), l.number);
            friend_bases.insert_or_assign(l.word(0), b);
            steps.push_back(FriendMeasure{l.word(0), l.need("agent"), l.need("system"), l.need("lab"), std::move(b)});
        } else if (l.keyword == "super") {
            const auto& of = l.need("of");
            auto fb = friend_bases.find(of);
            if (fb == friend_bases.end()) {
                throw parse_error("line " + std::to_string(l.number) + ": super targets unknown friend measurement " + of);
            }
            auto b = detail::with_labels(detail::super_basis(l.need("basis"), fb->second, l.number), l.get("labels"), l.number);
            steps.push_back(SuperMeasure{l.word(0), l.need("agent"), of, std::move(b)});
        } else if (l.keyword == "ask") {
            steps.push_back(Ask{l.word(0), l.word(1)});
        } else if (l.keyword == "observer") {
            observers.push_back(l.word(0));
        } else if (l.keyword == "context") {
            contexts.push_back(detail::split(l.word(0), ','));
        } else {
            throw parse_error("line " + std::to_string(l.number) + ": unknown keyword '" + l.keyword + "'");
        }
    }
    if (!initial) throw parse_error("protocol: missing initial state");
    try {
        return Protocol(std::move(registers), std::move(*initial), std::move(steps), std::move(observers),
                        std::move(contexts));
    } catch (const parse_error&) {
        throw;
    } catch (const error& e) {
        throw parse_error(e.what());
    }
}

inline BellScenario parse_bell_lines(const std::vector<detail::Line>& lines) {
    std::vector<BellParty> parties;
    std::optional<StateVector> state;
    std::vector<std::string> observers;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.keyword == "state") {
            state = detail::read_state(l);
        } else if (l.keyword == "party") {
            const auto fr = detail::split(l.need("friend"), ':');
            const auto su = detail::split(l.need("super"), ':');
            const auto names = detail::split(l.need("names"), ',');
            if (fr.size() != 2 || su.size() != 2 || names.size() != 2) {
                throw parse_error("line " + std::to_string(l.number) + ": expected friend=M:agent super=M:agent names=s0,s1");
            }
            parties.push_back(BellParty{
                fr[0], fr[1], su[0], su[1], names[0], names[1],
                detail::with_labels(detail::single_qubit_basis(l.need("basis0"), l.number), l.get("labels0"), l.number),
                detail::with_labels(detail::single_qubit_basis(l.need("basis1"), l.number), l.get("labels1"), l.number)});
        } else if (l.keyword == "observer") {
            observers.push_back(l.word(0));
        } else {
            throw parse_error("line " + std::to_string(l.number) + ": unknown keyword '" + l.keyword + "'");
        }
    }
    if (!state) throw parse_error("bell: missing state");
    BellScenario b{std::move(parties), std::move(*state), std::move(observers)};
    try {
        b.validate();
    } catch (const error& e) {
        throw parse_error(e.what());
    }
    return b;
}

inline ScenarioFile parse_scenario(std::string_view text) {
    const auto lines = detail::tokenize(text);
    if (lines.empty()) throw parse_error("empty scenario");
    if (lines[0].keyword == "protocol") return parse_protocol_lines(lines);
    if (lines[0].keyword == "bell") return parse_bell_lines(lines);
    throw parse_error("first line must be 'protocol' or 'bell'");
}

inline Protocol parse_protocol(std::string_view text) {
    auto f = parse_scenario(text);
    if (auto* p = std::get_if<Protocol>(&f)) return std::move(*p);
    throw parse_error("expected a protocol, found a Bell scenario");
}

inline BellScenario parse_bell(std::string_view text) {
    auto f = parse_scenario(text);
    if (auto* b = std::get_if<BellScenario>(&f)) return std::move(*b);
    throw parse_error("expected a Bell scenario, found a protocol");
}

inline std::string write_protocol(const Protocol& p) {
    std::string out = "protocol\n";
    for (const auto& r : p.registers()) out += "register " + r + "\n";
    out += detail::write_state("initial", p.initial());
    for (const auto& s : p.steps()) {
        if (const auto* f = std::get_if<FriendMeasure>(&s)) {
            out += "friend " + f->measurement + " agent=" + f->agent + " system=" + f->system + " lab=" + f->lab +
                   " basis=" + detail::format_basis(f->basis) + "\n";
        } else if (const auto* m = std::get_if<SuperMeasure>(&s)) {
            out += "super " + m->measurement + " agent=" + m->agent + " of=" + m->friend_measurement +
                   " basis=" + detail::format_basis(m->basis) + "\n";
        } else {
            const auto& a = std::get<Ask>(s);
            out += "ask " + a.asker + " " + a.lab + "\n";
        }
    }
    for (const auto& o : p.observers()) out += "observer " + o + "\n";
    for (const auto& c : p.contexts()) out += "context " + detail::join(c, ',') + "\n";
    return out;
}

inline std::string write_bell(const BellScenario& b) {
    std::string out = "bell\n";
    out += detail::write_state("state", b.shared_state);
    auto basis = [](const OrthonormalBasis& x, const char* n) {
        std::string s;
        for (std::size_t k = 0; k < x.dim(); ++k) s += (k ? ";" : "") + detail::format_amps(x.vector(k));
        return std::string(" basis") + n + "=" + s + " labels" + n + "=" + detail::join(x.labels(), ',');
    };
    for (const auto& q : b.parties) {
        out += "party friend=" + q.friend_measurement + ":" + q.friend_agent + " super=" + q.super_measurement + ":" +
               q.super_agent + " names=" + q.setting0_name + "," + q.setting1_name + basis(q.setting0, "0") +
               basis(q.setting1, "1") + "\n";
    }
    for (const auto& o : b.observers) out += "observer " + o + "\n";
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ewfs::io
