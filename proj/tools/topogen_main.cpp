// topogen: command-line front end for the topology-generating-automaton
// library. Subcommands mirror the library modules; inputs are JSON files,
// "-" for stdin, or corpus:<name> fixtures. Errors go to stderr as JSON:
// exit 0 = success, 1 = domain error, 2 = usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topogen/analysis.hpp"
#include "topogen/approximation.hpp"
#include "topogen/automaton.hpp"
#include "topogen/common.hpp"
#include "topogen/corpus.hpp"
#include "topogen/enumerate.hpp"
#include "topogen/exact_geometry.hpp"
#include "topogen/json_io.hpp"
#include "topogen/multi_address.hpp"
#include "topogen/render.hpp"

namespace {

using namespace topogen;

std::string read_input_text(const std::string& source) {
    if (source == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(source);
    if (!in) throw UsageError("cannot open input file: " + source);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// corpus:<name> -> fixture name; corpus:<name>.ifs selects the IFS side.
struct ResolvedInput {
    bool from_corpus = false;
    bool wants_ifs = false;
    std::string corpus_name;
    std::string text;  // file/stdin content otherwise
};

ResolvedInput resolve(const std::string& source) {
    ResolvedInput r;
    if (source.rfind("corpus:", 0) == 0) {
        r.from_corpus = true;
        r.corpus_name = source.substr(7);
        if (r.corpus_name.size() > 4 &&
            r.corpus_name.substr(r.corpus_name.size() - 4) == ".ifs") {
            r.wants_ifs = true;
            r.corpus_name.resize(r.corpus_name.size() - 4);
        }
        return r;
    }
    r.text = read_input_text(source);
    if (r.text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw UsageError("empty input");
    return r;
}

RawAutomaton load_raw(const std::string& source) {
    ResolvedInput r = resolve(source);
    if (r.from_corpus) {
        const CorpusEntry& e = corpus_entry(r.corpus_name);
        if (!e.automaton) throw UsageError("corpus entry \"" + r.corpus_name + "\" has no automaton");
        return *e.automaton;
    }
    return raw_automaton_from_json(r.text);
}

Automaton load_automaton(const std::string& source) { return compile(load_raw(source)); }

IfsSystem load_ifs(const std::string& source) {
    ResolvedInput r = resolve(source);
    if (r.from_corpus) {
        const CorpusEntry& e = corpus_entry(r.corpus_name);
        if (!e.ifs) throw UsageError("corpus entry \"" + r.corpus_name + "\" has no IFS");
        return *e.ifs;
    }
    return ifs_from_json(r.text);
}

std::string input_stem(const std::string& source) {
    ResolvedInput probe;
    if (source.rfind("corpus:", 0) == 0) {
        std::string name = source.substr(7);
        if (name.size() > 4 && name.substr(name.size() - 4) == ".ifs")
            name.resize(name.size() - 4);
        return name;
    }
    if (source == "-") return "stdin";
    return std::filesystem::path(source).stem().string();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot open output file: " + out_path);
    out << text;
}

RenderFormat parse_format(const std::string& f) {
    if (f == "dot") return RenderFormat::dot;
    if (f == "svg") return RenderFormat::svg;
    throw UsageError("format must be dot or svg for rendering");
}

PreperiodicAddress parse_address_arg(const std::string& text) {
    return PreperiodicAddress::parse(text);
}

Word parse_word_arg(const std::string& text) {
    Word w;
    std::string token;
    bool comma = text.find(',') != std::string::npos;
    if (comma) {
        std::istringstream in(text);
        while (std::getline(in, token, ',')) w.push_back(std::stoi(token));
    } else {
        for (char c : text) {
            if (c < '0' || c > '9') throw UsageError("words are digit strings");
            w.push_back(c - '0');
        }
    }
    return w;
}

std::string set_text(const std::set<int>& K) {
    std::string out = "{";
    bool first = true;
    for (int k : K) {
        if (!first) out += ",";
        out += std::to_string(k);
        first = false;
    }
    return out + "}";
}

int run(int argc, char** argv) {
    CLI::App app{"topology-generating automaton toolkit"};
    app.require_subcommand(1);

    std::string input, out_path, format = "json", address1, address2;
    int level = 1, num_states = 0, alphabet = 2;
    std::size_t bound = 16;
    bool flag_finite_class = false, flag_connected = false;

    auto* validate_cmd = app.add_subcommand("validate", "check the axioms of an automaton");
    validate_cmd->add_option("input", input)->required();
    validate_cmd->add_option("--out", out_path);

    auto* accept_cmd = app.add_subcommand("accept", "test a pair of addresses or words");
    accept_cmd->add_option("input", input)->required();
    accept_cmd->add_option("first", address1)->required();
    accept_cmd->add_option("second", address2)->required();
    accept_cmd->add_option("--out", out_path);

    auto* class_cmd = app.add_subcommand("class", "equivalence class of an address");
    class_cmd->add_option("input", input)->required();
    class_cmd->add_option("address", address1)->required();
    class_cmd->add_option("--bound", bound);
    class_cmd->add_option("--out", out_path);

    auto* enum_cmd = app.add_subcommand("enumerate", "enumerate small automata");
    enum_cmd->add_option("states", num_states)->required();
    enum_cmd->add_option("digits", alphabet)->required();
    enum_cmd->add_flag("--finite-class", flag_finite_class,
                       "keep only automata passing the finite-class conditions");
    enum_cmd->add_flag("--connected", flag_connected, "keep only automata with connected X^1");
    enum_cmd->add_option("--out", out_path);

    auto* pcf_cmd = app.add_subcommand("pcf", "post-critical finiteness check");
    pcf_cmd->add_option("input", input)->required();
    pcf_cmd->add_option("--out", out_path);

    auto* diag_cmd = app.add_subcommand("diagonal", "diagonal structure and set equations");
    diag_cmd->add_option("input", input)->required();
    diag_cmd->add_option("--out", out_path);

    auto* multi_cmd = app.add_subcommand("multi", "multi-address automaton family");
    multi_cmd->add_option("input", input)->required();
    multi_cmd->add_option("--bound", bound);
    multi_cmd->add_option("--out", out_path, "directory for the per-arity JSON files");

    auto* approx_cmd = app.add_subcommand("approx", "finite approximation space");
    approx_cmd->add_option("input", input)->required();
    approx_cmd->add_option("--level", level)->required();
    approx_cmd->add_option("--bound", bound);
    approx_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot", "svg"}));
    approx_cmd->add_option("--out", out_path);

    auto* props_cmd = app.add_subcommand("props", "summary of standard properties");
    props_cmd->add_option("input", input)->required();
    props_cmd->add_option("--out", out_path);

    auto* nbr_cmd = app.add_subcommand("neighbors", "neighbor automaton of an IFS");
    nbr_cmd->add_option("input", input)->required();
    nbr_cmd->add_option("--out", out_path);

    auto* rep_cmd = app.add_subcommand("verify-rep", "verify an isometry representation");
    rep_cmd->add_option("input", input)->required();
    rep_cmd->add_option("--out", out_path);

    auto* render_cmd = app.add_subcommand("render", "draw an automaton, space or word graph");
    render_cmd->add_option("input", input)->required();
    render_cmd->add_option("--level", level, "render the level-n word graph instead");
    auto* render_level = render_cmd->get_option("--level");
    render_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "dot", "svg"}));
    render_cmd->add_option("--out", out_path);

    auto* corpus_cmd = app.add_subcommand("corpus", "list bundled examples");
    std::string corpus_name;
    corpus_cmd->add_option("name", corpus_name, "print one fixture as JSON");
    corpus_cmd->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << error_to_json("usage", e.what()) << "\n";
        return 2;
    }

    if (*validate_cmd) {
        ValidationReport rep = validate(load_raw(input));
        write_output(validation_to_json(rep), out_path);
        return rep.ok ? 0 : 1;
    }
    if (*accept_cmd) {
        Automaton a = load_automaton(input);
        bool accepted;
        if (address1.find('(') != std::string::npos ||
            address2.find('(') != std::string::npos) {
            accepted = accept_address_pair(a, parse_address_arg(address1),
                                           parse_address_arg(address2));
        } else {
            accepted = accept_word_pair(a, parse_word_arg(address1), parse_word_arg(address2))
                           .accepted;
        }
        write_output(std::string("{\"accepted\": ") + (accepted ? "true" : "false") + "}",
                     out_path);
        return 0;
    }
    if (*class_cmd) {
        Automaton a = load_automaton(input);
        EquivalenceClass cls = class_of(a, parse_address_arg(address1), bound);
        write_output(class_to_json(cls), out_path);
        return 0;
    }
    if (*enum_cmd) {
        EnumerationConstraints c{flag_finite_class, flag_connected};
        std::vector<Automaton> found = enumerate_automata(num_states, alphabet, c);
        std::ostringstream buf;
        buf << "[";
        for (std::size_t i = 0; i < found.size(); ++i) {
            if (i) buf << ",";
            buf << "\n" << automaton_to_json(found[i]);
        }
        buf << "\n]";
        std::cout << found.size() << " automata\n";
        write_output(buf.str(), out_path);
        return 0;
    }
    if (*pcf_cmd) {
        write_output(pcf_to_json(is_pcf(load_automaton(input))), out_path);
        return 0;
    }
    if (*diag_cmd) {
        write_output(diagonal_to_json(diagonal_structure(load_automaton(input))), out_path);
        return 0;
    }
    if (*multi_cmd) {
        Automaton a = load_automaton(input);
        FamilyResult fam = compute_family(a, static_cast<int>(bound));
        std::cout << "K = " << set_text(fam.K) << "\n";
        for (const auto& [k, gk] : fam.automata)
            std::cout << "G" << k << ": " << gk.states.size() << " states, "
                      << gk.transitions.size() << " edges\n";
        if (fam.bound_error) std::cout << "note: " << *fam.bound_error << "\n";
        const std::string stem = input_stem(input);
        for (const auto& [k, gk] : fam.automata) {
            if (k < 3 || !fam.K.count(k)) continue;
            std::filesystem::path dir = out_path.empty() ? "." : out_path;
            std::filesystem::create_directories(dir);
            std::filesystem::path file = dir / (stem + "_G" + std::to_string(k) + ".json");
            std::ofstream out(file);
            if (!out) throw UsageError("cannot open output file: " + file.string());
            out << tuple_to_json(gk);
            std::cout << "wrote " << file.string() << "\n";
        }
        return 0;
    }
    if (*approx_cmd) {
        Automaton a = load_automaton(input);
        FamilyResult fam = compute_family(a, static_cast<int>(bound));
        FiniteSpace space = build_space(fam, level);
        auto components = connectedness(space);
        std::cout << "X^" << level << ": " << space.points.size() << " points ("
                  << space.word_count << " words, "
                  << space.points.size() - space.word_count << " atoms), "
                  << components.size() << " component"
                  << (components.size() == 1 ? "" : "s") << "\n";
        if (format == "json")
            write_output(space_to_json(space), out_path);
        else
            write_output(render_space(space, parse_format(format)), out_path);
        return 0;
    }
    if (*props_cmd) {
        RawAutomaton raw = load_raw(input);
        ValidationReport rep = validate(raw);
        std::ostringstream buf;
        buf << "{\n  \"valid\": " << (rep.ok ? "true" : "false");
        if (rep.ok) {
            Automaton a = compile(raw);
            buf << ",\n  \"finite_class_clean\": "
                << (check_finite_class_necessary_conditions(a).clean ? "true" : "false");
            buf << ",\n  \"pcf\": " << (is_pcf(a).pcf ? "true" : "false");
            try {
                FamilyResult fam = compute_family(a, static_cast<int>(bound));
                buf << ",\n  \"K\": " << set_text(fam.K);
                FiniteSpace x1 = build_space(fam, 1);
                buf << ",\n  \"connected\": "
                    << (connectedness(x1).size() <= 1 ? "true" : "false");
            } catch (const std::runtime_error& e) {
                buf << ",\n  \"family_error\": \"" << e.what() << "\"";
            }
        }
        buf << "\n}";
        write_output(buf.str(), out_path);
        return 0;
    }
    if (*nbr_cmd) {
        IfsSystem ifs = load_ifs(input);
        NeighborGraphResult res = neighbor_graph(ifs);
        std::cout << res.automaton.size() - 1 << " states beside the root, "
                  << [&] {
                         std::size_t edges = 0;
                         for (const auto& row : res.automaton.next) edges += row.size();
                         return edges;
                     }()
                  << " labeled transitions\n";
        write_output(neighbor_graph_to_json(res), out_path);
        return 0;
    }
    if (*rep_cmd) {
        ResolvedInput r = resolve(input);
        if (!r.from_corpus)
            throw UsageError("verify-rep expects a corpus fixture with a stored representation");
        const CorpusEntry& e = corpus_entry(r.corpus_name);
        if (!e.automaton || !e.ifs || !e.representation)
            throw UsageError("corpus entry \"" + r.corpus_name +
                             "\" has no stored representation");
        RepresentationCheck check =
            verify_representation(compile(*e.automaton), *e.ifs, *e.representation);
        std::ostringstream buf;
        buf << "{\"ok\": " << (check.ok ? "true" : "false") << ", \"witness\": \""
            << check.witness << "\"}";
        write_output(buf.str(), out_path);
        return check.ok ? 0 : 1;
    }
    if (*render_cmd) {
        if (format == "json") format = "dot";  // drawing formats only here
        RenderFormat f = parse_format(format);
        ResolvedInput r = resolve(input);
        std::string doc;
        if (r.from_corpus) {
            Automaton a = load_automaton(input);
            doc = *render_level ? render_word_graph(a, level, f) : render_automaton(a, f);
        } else {
            // sniff the object kind from its fields
            if (r.text.find("\"pair_automaton\"") != std::string::npos) {
                doc = render_tuple(tuple_from_json(r.text), f);
            } else if (r.text.find("\"points\"") != std::string::npos) {
                doc = render_space(space_from_json(r.text), f);
            } else {
                Automaton a = compile(raw_automaton_from_json(r.text));
                doc = *render_level ? render_word_graph(a, level, f) : render_automaton(a, f);
            }
        }
        write_output(doc, out_path);
        return 0;
    }
    if (*corpus_cmd) {
        if (!corpus_name.empty()) {
            bool wants_ifs = false;
            std::string name = corpus_name;
            if (name.size() > 4 && name.substr(name.size() - 4) == ".ifs") {
                wants_ifs = true;
                name.resize(name.size() - 4);
            }
            const CorpusEntry& e = corpus_entry(name);
            if (wants_ifs) {
                if (!e.ifs) throw UsageError("corpus entry \"" + name + "\" has no IFS");
                write_output(ifs_to_json(*e.ifs), out_path);
            } else {
                if (!e.automaton)
                    throw UsageError("corpus entry \"" + name + "\" has no automaton");
                write_output(automaton_to_json(*e.automaton), out_path);
            }
            return 0;
        }
        std::ostringstream buf;
        for (const CorpusEntry& e : corpus()) {
            buf << e.name;
            if (e.ifs) buf << " (+ifs)";
            buf << " - " << e.description << "\n";
        }
        write_output(buf.str(), out_path);
        return 0;
    }
    return 2;  // unreachable: a subcommand is required
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const topogen::UsageError& e) {
        std::cerr << error_to_json("usage", e.what()) << "\n";
        return 2;
    } catch (const topogen::DomainError& e) {
        std::cerr << error_to_json("domain", e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << error_to_json("internal", e.what()) << "\n";
        return 1;
    }
}
