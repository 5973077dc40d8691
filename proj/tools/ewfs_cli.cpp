// ewfs: command-line front end.
//
// Exit codes: 0 expected result, 1 other failure, 2 parse error,
// 3 verdict mismatch, 4 numeric tolerance breach.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ewfs/contextuality.hpp"
#include "ewfs/empirical.hpp"
#include "ewfs/reasoning.hpp"
#include "ewfs/report.hpp"
#include "ewfs/scenario.hpp"
#include "ewfs/scenario_io.hpp"

namespace {

using namespace ewfs;
using report::json;

enum Exit { kOk = 0, kOther = 1, kParse = 2, kMismatch = 3, kTolerance = 4 };

constexpr double kCompileTolerance = 1e-12;

struct Options {
    bool json = false;
    double eps = kPossibilisticEps;
    std::optional<long> seed;  // accepted for interface stability; nothing is random
};

struct Output {
    json result;
    std::string text;
    int code = kOk;
};

struct Input {
    std::string name;
    std::string content;  // file contents, empty for built-in names
};

Input load(const std::string& name) {
    static const std::vector<std::string> builtins{"hardy", "ghz", "chsh", "product", "fr", "ghz-fr"};
    if (std::find(builtins.begin(), builtins.end(), name) != builtins.end()) return {name, {}};
    return {name, io::read_file(name)};
}

EmpiricalModel model_of(const Input& in) {
    if (in.content.empty()) {
        if (in.name == "hardy") return hardy_model();
        if (in.name == "ghz") return ghz_model();
        if (in.name == "chsh") return chsh_model();
        if (in.name == "product") return product_model();
        if (in.name == "fr") {
            const auto p = fr_protocol();
            return model_from_protocol(p, p.contexts());
        }
        const auto p = ghz_fr_protocol();
        return model_from_protocol(p, p.contexts());
    }
    const auto first = in.content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && in.content[first] == '{') {
        try {
            return empirical_from_json(json::parse(in.content));
        } catch (const json::exception& e) {
            throw parse_error(std::string("model JSON: ") + e.what());
        }
    }
    auto f = io::parse_scenario(in.content);
    if (auto* b = std::get_if<BellScenario>(&f)) return model_from_bell(*b);
    const auto& p = std::get<Protocol>(f);
    if (p.contexts().empty()) throw parse_error("protocol declares no contexts");
    return model_from_protocol(p, p.contexts());
}

Protocol protocol_of(const Input& in) {
    if (in.content.empty()) {
        if (in.name == "fr") return fr_protocol();
        if (in.name == "ghz-fr" || in.name == "ghz") return ghz_fr_protocol();
        throw parse_error("'" + in.name + "' is not a protocol (use fr, ghz-fr or a file)");
    }
    return io::parse_protocol(in.content);
}

BellScenario bell_of(const Input& in) {
    if (in.content.empty()) {
        if (in.name == "hardy") return hardy_bell();
        if (in.name == "ghz") return ghz_bell();
        if (in.name == "chsh") return chsh_bell();
        if (in.name == "product") return product_bell();
        throw parse_error("'" + in.name + "' is not a Bell scenario (use hardy, ghz, chsh, product or a file)");
    }
    return io::parse_bell(in.content);
}

int outcome_value(const std::string& s, const std::string& what) {
    if (s == "ok" || s == "0") return 0;
    if (s == "fail" || s == "1") return 1;
    throw parse_error(what + " must be ok or fail, got '" + s + "'");
}

Output cmd_tables(const Input& in, bool probabilities, const Options& o) {
    const auto m = model_of(in);
    return {report::table_json(m, probabilities, o.eps), report::render_table(m, probabilities, o.eps), kOk};
}

Output cmd_classify(const Input& in, const Options& o) {
    const auto m = model_of(in);
    const auto r = classify_report(m, o.eps);
    return {report::classification_json(m, r), report::render_classification(m, r), kOk};
}

Output cmd_nogo(const std::string& variant_name, const Input& in, const std::vector<std::string>& without,
                const std::vector<std::string>& observe) {
    const auto variant = parse_variant(variant_name);
    const Protocol p = protocol_of(in);
    auto flags = default_assumptions(variant);
    for (const auto& w : without) {
        if (w == "AOE") flags.aoe = flags.born_compat_aoe = false;
        else if (w == "BORN_COMPAT_AOE") flags.born_compat_aoe = false;
        else if (w == "PERSONAL_KNOWLEDGE") flags.personal_knowledge = flags.born_compat_persk = false;
        else if (w == "CLASSICAL_AGREEMENT") flags.classical_agreement = false;
        else if (w == "BORN_COMPAT_PERSK") flags.born_compat_persk = false;
        else if (w == "BORN_PRACTICALITY") flags.born_practicality = false;
        else throw parse_error("unknown assumption '" + w + "'");
    }
    std::map<std::string, int> observed;
    if (in.content.empty() && in.name == "fr") observed = {{"U", 0}, {"W", 0}};  // the FR post-selection
    for (const auto& kv : observe) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw parse_error("--observe expects M=value, got '" + kv + "'");
        observed[kv.substr(0, eq)] = outcome_value(kv.substr(eq + 1), kv.substr(0, eq));
    }
    auto r = run_nogo(p, variant, flags, observed);
    if (!without.empty()) r.expected_sat = true;  // every assumption is needed for the contradiction
    return {report::nogo_json(p, r), report::render_nogo(p, r), r.reproduced() ? kOk : kMismatch};
}

Output cmd_fr(const std::string& variant, const std::string& u_str, const std::string& w_str, const Options& o) {
    if (variant == "original") {
        const int u = outcome_value(u_str, "--u");
        const int w = outcome_value(w_str, "--w");
        const auto c = fr_chain(u, w, o.eps);
        const auto p = fr_protocol();
        auto label = [&](const std::string& m, int v) { return symbol(m) + " = " + outcome_label(p, m, v); };
        std::string text = "post-selection " + label("U", u) + ", " + label("W", w) +
                           " has probability " + report::format_fraction(c.probability) + "\nchain:\n";
        json steps = json::array();
        for (const auto& s : c.steps) {
            text += "  (" + report::context_label(s.context) + "): " + label(s.given, s.given_value) + " ⇒ " +
                    (s.derived_value ? label(s.derived, *s.derived_value) : std::string("nothing forced")) + "\n";
            json step{{"context", s.context}, {"given", {{s.given, s.given_value}}}};
            if (s.derived_value) step["derived"] = {{s.derived, *s.derived_value}};
            steps.push_back(step);
        }
        text += std::string("contradiction with the post-selection: ") + (c.contradiction ? "yes" : "no") + "\n";
        text += report::render_verdict(c.verdict);
        json j{{"variant", "original"},
               {"postselect", {{"u", u}, {"w", w}}},
               {"probability", c.probability},
               {"probability_fraction", report::format_fraction(c.probability)},
               {"chain", steps},
               {"contradiction", c.contradiction},
               {"verdict", report::verdict_json(c.verdict)}};
        const bool expected = u == 0 && w == 0;
        return {j, text, c.contradiction == expected && c.verdict.sat != expected ? kOk : kMismatch};
    }
    if (variant == "modified") {
        const auto m = modified_fr();
        std::string text = "vanishing projections:\n";
        json preds = json::array();
        bool small = true;
        for (const auto& z : m.predictions) {
            text += "  " + z.agent + ": " + z.description + "  (probability " + report::format_number(z.probability) + ")\n";
            preds.push_back({{"agent", z.agent}, {"description", z.description}, {"probability", z.probability}});
            small = small && z.probability < 1e-12;
        }
        text += "given u = ok and w = ok:\n" + report::render_verdict(m.verdict);
        json j{{"variant", "modified"}, {"predictions", preds}, {"verdict", report::verdict_json(m.verdict)}};
        if (!small) return {j, text, kTolerance};
        return {j, text, m.verdict.sat ? kMismatch : kOk};
    }
    throw parse_error("fr variant must be original or modified");
}

Output cmd_compile(const Input& in, const std::string& out_path, const Options& o) {
    const auto bell = bell_of(in);
    const auto compiled = compile_bell_to_ewfs(bell);
    const double dev = compiled_deviation(bell, compiled);
    const std::string text_protocol = io::write_protocol(compiled.protocol);
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw error("cannot write '" + out_path + "'");
        f << text_protocol;
    }
    const auto level = classify(model_from_bell(bell), o.eps);
    json mapping = json::array();
    for (const auto& m : compiled.contexts) mapping.push_back({{"bell", m.bell_variables}, {"ewfs", m.ewfs_variables}});
    json j{{"max_deviation", dev}, {"tolerance", kCompileTolerance}, {"contexts", mapping},
           {"classification", to_string(level)}, {"protocol", text_protocol}};
    std::string text = out_path.empty() ? text_protocol : "wrote " + out_path + "\n";
    text += "contexts:\n";
    for (const auto& m : compiled.contexts)
        text += "  " + report::context_label(m.bell_variables) + " -> " + report::context_label(m.ewfs_variables) + "\n";
    text += "max per-context deviation from direct Bell statistics: " + report::format_number(dev) + "\n";
    text += "classification of the Bell model: " + to_string(level) + "\n";
    return {j, text, dev < kCompileTolerance ? kOk : kTolerance};
}

void emit(const Output& out, const std::vector<std::string>& argv, const std::string& digest_input, const Options& o) {
    report::Report r{argv, report::fnv1a_hex(digest_input), out.result, report::kVersion};
    const std::string dumped = report::to_json(r).dump(2) + "\n";
    if (o.json) std::cout << dumped;
    else std::cout << out.text;
    if (const char* dir = std::getenv("EWFS_REPORT_DIR"); dir != nullptr && *dir != '\0') {
        std::filesystem::create_directories(dir);
        const std::string name = (argv.size() > 1 ? argv[1] : std::string("report")) + "-" + r.inputs_digest + ".json";
        std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
        f << dumped;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extended Wigner's friend simulator and no-go checker"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(report::kVersion));
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_flag("--json", o.json, "Print the JSON report");
        sub->add_option("--eps", o.eps, "Possibilistic zero threshold")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "Reserved; all computations are deterministic");
    };

    std::string model = "hardy";
    bool probabilities = false;
    auto* tables = app.add_subcommand("tables", "Print a support or probability table");
    tables->add_option("model", model, "hardy, ghz, chsh, product, fr, ghz-fr or a scenario file")->required();
    tables->add_flag("--probabilities", probabilities, "Print probabilities as exact fractions where they snap");
    common(tables);

    auto* classify_cmd = app.add_subcommand("classify", "Place a model in the contextuality hierarchy");
    classify_cmd->add_option("model", model, "hardy, ghz, chsh, product, fr, ghz-fr or a scenario file")->required();
    common(classify_cmd);

    std::string variant;
    std::string protocol = "ghz-fr";
    std::vector<std::string> without, observe;
    auto* nogo = app.add_subcommand("nogo", "Run a no-go derivation");
    nogo->add_option("variant", variant, "truth, agreement or practicality")->required();
    nogo->add_option("--protocol", protocol, "ghz-fr, fr or a protocol file");
    nogo->add_option("--without", without, "Drop an assumption (AOE, BORN_COMPAT_AOE, PERSONAL_KNOWLEDGE, "
                                           "CLASSICAL_AGREEMENT, BORN_COMPAT_PERSK, BORN_PRACTICALITY)");
    nogo->add_option("--observe", observe, "Recorded outcome M=value conditioning the predictions");
    common(nogo);

    std::string fr_variant, u = "ok", w = "ok";
    auto* fr = app.add_subcommand("fr", "FR reasoning chain or its modified form");
    fr->add_option("variant", fr_variant, "original or modified")->required();
    fr->add_option("--u", u, "Post-selected u (ok or fail)");
    fr->add_option("--w", w, "Post-selected w (ok or fail)");
    common(fr);

    std::string bell_name, out_path;
    auto* compile = app.add_subcommand("compile", "Compile a Bell scenario to an extended Wigner's friend protocol");
    compile->add_option("bell", bell_name, "hardy, ghz, chsh, product or a Bell scenario file")->required();
    compile->add_option("--out", out_path, "Write the compiled protocol here");
    common(compile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kParse;
    }

    std::vector<std::string> args(argv, argv + argc);
    args.erase(args.begin());
    args.insert(args.begin(), "ewfs");
    try {
        Output out;
        std::string digest;
        for (std::size_t i = 1; i < args.size(); ++i) digest += args[i] + '\n';
        if (tables->parsed()) {
            const auto in = load(model);
            digest += in.content;
            out = cmd_tables(in, probabilities, o);
        } else if (classify_cmd->parsed()) {
            const auto in = load(model);
            digest += in.content;
            out = cmd_classify(in, o);
        } else if (nogo->parsed()) {
            const auto in = load(protocol);
            digest += in.content;
            out = cmd_nogo(variant, in, without, observe);
        } else if (fr->parsed()) {
            out = cmd_fr(fr_variant, u, w, o);
        } else {
            const auto in = load(bell_name);
            digest += in.content;
            out = cmd_compile(in, out_path, o);
        }
        emit(out, args, digest, o);
        return out.code;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const tolerance_error& e) {
        std::cerr << "tolerance breach: " << e.what() << "\n";
        return kTolerance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
}
