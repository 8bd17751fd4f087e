#pragma once

// Command-line front end. `qfa::cli::run_main` takes the argument list
// without the program name so tests can drive it directly.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qfa/qfa.hpp"

namespace qfa::cli {

enum exit_code : int { ok = 0, negative = 1, failure = 2 };

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw error("cannot write '" + path + "'");
    out << text;
}

inline std::string g17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline Gpfa load_gpfa(const std::string& path)
{
    const auto m = parse(read_file(path));
    if (const auto* g = std::get_if<Gpfa>(&m))
        return *g;
    if (const auto* p = std::get_if<Pfa>(&m))
        return pfa_to_gpfa(*p);
    throw error("'" + path + "' holds a " + kind_name(m) + ", expected gpfa or pfa (see `convert --to gpfa`)");
}

inline int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Simulate, convert and compare quantum and generalized probabilistic finite automata", "qfa"};
    app.require_subcommand(1);

    std::string model_file, second_file, word_text, target, out_file, symbol, kind;
    bool trace = false, exact = false, csv = false;
    double lambda = 0.0;
    std::size_t max_len = 0, states = 2, alphabet_size = 1;
    std::uint64_t seed = 0;

    auto* run_cmd = app.add_subcommand("run", "Acceptance probability of a word");
    run_cmd->add_option("model", model_file, "Automaton document")->required();
    run_cmd->add_option("--word", word_text, "Comma-separated symbols; \"\" is the empty word")->required();
    run_cmd->add_flag("--trace", trace, "Print the per-step table");

    auto* convert_cmd = app.add_subcommand("convert", "Convert to another model kind");
    convert_cmd->add_option("model", model_file, "Automaton document")->required();
    convert_cmd->add_option("--to", target, "Target kind")->required()->check(CLI::IsMember({"gpfa", "nqfa", "qfc"}));
    convert_cmd->add_option("--out", out_file, "Output document")->required();

    auto* equiv_cmd = app.add_subcommand("equiv", "Decide functional equivalence of two GPFAs");
    equiv_cmd->add_option("first", model_file, "GPFA document")->required();
    equiv_cmd->add_option("second", second_file, "GPFA document")->required();
    equiv_cmd->add_flag("--exact", exact, "Exact rational arithmetic");

    auto* member_cmd = app.add_subcommand("member", "Strict cutpoint membership");
    member_cmd->add_option("model", model_file, "GPFA document")->required();
    member_cmd->add_option("--cutpoint", lambda, "Cutpoint in [0, 1)")->required();
    member_cmd->add_option("--word", word_text, "Comma-separated symbols")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "Values on symbol^k for k = 0..max-len");
    sweep_cmd->add_option("model", model_file, "Automaton document")->required();
    sweep_cmd->add_option("--symbol", symbol, "Input symbol")->required();
    sweep_cmd->add_option("--max-len", max_len, "Largest exponent")->required();
    sweep_cmd->add_flag("--csv", csv, "CSV output");

    auto* random_cmd = app.add_subcommand("random", "Generate a seeded random automaton");
    random_cmd->add_option("--kind", kind, "Model kind")
        ->required()
        ->check(CLI::IsMember({"nqfa", "kwqfa", "qfc", "gpfa", "pfa"}));
    random_cmd->add_option("--states", states, "State count")->required();
    random_cmd->add_option("--alphabet", alphabet_size, "Input alphabet size")->required();
    random_cmd->add_option("--seed", seed, "RNG seed")->required();
    random_cmd->add_option("--out", out_file, "Output document")->required();

    auto* validate_cmd = app.add_subcommand("validate", "List every invariant violation");
    validate_cmd->add_option("model", model_file, "Automaton document")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }

    try {
        if (run_cmd->parsed()) {
            const auto m = parse(read_file(model_file));
            const auto r = run(m, parse_word(word_text));
            out << g17(r.accept) << "\n";
            if (trace) {
                out << "step\tsymbol\taccept\treject\tsurviving\n";
                for (std::size_t i = 0; i < r.trace.size(); ++i) {
                    const auto& s = r.trace[i];
                    out << i << "\t" << s.symbol << "\t" << g17(s.accept) << "\t" << g17(s.reject) << "\t"
                        << g17(s.surviving) << "\n";
                }
            }
            return ok;
        }
        if (convert_cmd->parsed()) {
            const auto doc = parse_document(read_file(model_file));
            write_file(out_file, serialize(convert_to(doc.model, target), doc.metadata));
            return ok;
        }
        if (equiv_cmd->parsed()) {
            const auto v = gpfa_equivalent(load_gpfa(model_file), load_gpfa(second_file),
                                           exact ? EquivalenceMode::exact : EquivalenceMode::numeric);
            out << (v.equivalent ? "equivalent" : "inequivalent") << "\n";
            if (v.witness)
                out << "witness: \"" << format_word(*v.witness) << "\"\n";
            out << "max_gap: " << g17(v.max_observed_gap) << "\n";
            return v.equivalent ? ok : negative;
        }
        if (member_cmd->parsed()) {
            const bool member = cutpoint_member(load_gpfa(model_file), Cutpoint(lambda), parse_word(word_text));
            out << (member ? "true" : "false") << "\n";
            return member ? ok : negative;
        }
        if (sweep_cmd->parsed()) {
            const auto rows = sweep(parse(read_file(model_file)), symbol, max_len);
            out << (csv ? "k,value\n" : "k\tvalue\n");
            for (const auto& r : rows)
                out << r.length << (csv ? "," : "\t") << g17(r.value) << "\n";
            return ok;
        }
        if (random_cmd->parsed()) {
            RandomSpec spec;
            spec.seed = seed;
            spec.states = states;
            spec.alphabet_size = alphabet_size;
            Model m = kind == "nqfa"    ? Model(random_nqfa(spec))
                      : kind == "kwqfa" ? Model(random_kwqfa(spec))
                      : kind == "qfc"   ? Model(random_qfc(spec))
                      : kind == "gpfa"  ? Model(random_gpfa(spec))
                                        : Model(random_pfa(spec));
            Metadata meta;
            meta.name = "random " + kind;
            meta.seed = seed;
            write_file(out_file, serialize(m, meta));
            return ok;
        }
        if (validate_cmd->parsed()) {
            const auto doc = parse_description(read_file(model_file));
            const auto problems = check(doc);
            if (problems.empty()) {
                out << "valid " << doc.kind << "\n";
                return ok;
            }
            for (const auto& p : problems)
                out << (p.path.empty() ? "" : p.path + ": ") << p.message << "\n";
            return negative;
        }
    } catch (const validation_error& e) {
        for (const auto& v : e.violations())
            err << "error: " << (v.path.empty() ? "" : v.path + ": ") << v.message << "\n";
        return failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
    return failure;
}

} // namespace qfa::cli
