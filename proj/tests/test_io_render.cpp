#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "topogen/approximation.hpp"
#include "topogen/automaton.hpp"
#include "topogen/common.hpp"
#include "topogen/corpus.hpp"
#include "topogen/exact_geometry.hpp"
#include "topogen/json_io.hpp"
#include "topogen/multi_address.hpp"
#include "topogen/render.hpp"

using namespace topogen;

namespace {

const Automaton& fixture(const std::string& name) {
    static std::map<std::string, Automaton> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, compile(*corpus_entry(name).automaton)).first;
    return it->second;
}

const FamilyResult& family(const std::string& name) {
    static std::map<std::string, FamilyResult> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, compute_family(fixture(name))).first;
    return it->second;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("automaton JSON round-trips byte-identically") {
    for (const CorpusEntry& e : corpus()) {
        if (!e.automaton) continue;
        CAPTURE(e.name);
        std::string once = automaton_to_json(*e.automaton);
        RawAutomaton back = raw_automaton_from_json(once);
        CHECK(automaton_to_json(back) == once);
        CHECK(canonical_key_fixed_digits(compile(back)) ==
              canonical_key_fixed_digits(fixture(e.name)));
        // compiled-form serialization is a fixpoint
        std::string canon = automaton_to_json(fixture(e.name));
        CHECK(automaton_to_json(automaton_from_json(canon)) == canon);
    }
    std::string weak = automaton_to_json(*corpus_entry("weak_axiom4").automaton);
    CHECK(count_of(weak, "weak_axiom4") == 1);
    CHECK(count_of(automaton_to_json(*corpus_entry("binary").automaton), "weak_axiom4") == 0);
}

TEST_CASE("malformed automaton JSON is refused") {
    CHECK_THROWS_AS(raw_automaton_from_json("not json"), UsageError);
    CHECK_THROWS_AS(raw_automaton_from_json("{}"), UsageError);
    CHECK_THROWS_AS(raw_automaton_from_json("[1,2,3]"), UsageError);
    // structurally valid JSON with bad content fails at the compile step
    CHECK_THROWS_AS(automaton_from_json(R"({"m":2,"states":["o"],"initial":"x",)"
                                        R"("inverse":{},"edges":[]})"),
                    DomainError);
    CHECK_THROWS_AS(automaton_from_json(R"({"m":2,"states":["o","o"],"initial":"o",)"
                                        R"("inverse":{},"edges":[]})"),
                    DomainError);
    // trailing garbage after the document
    CHECK_THROWS_AS(raw_automaton_from_json(automaton_to_json(*corpus_entry("binary").automaton) +
                                            "x"),
                    UsageError);
    // automaton_from_json also compiles, so axiom violations surface
    CHECK_THROWS_AS(automaton_from_json(R"({"m":2,"states":["o","p"],"initial":"o",)"
                                        R"("inverse":{},)"
                                        R"("edges":[{"from":"o","to":"o",)"
                                        R"("labels":[[0,0],[1,1]]}]})"),
                    DomainError);
}

TEST_CASE("tuple JSON round-trips byte-identically") {
    std::vector<TupleAutomaton> tuples;
    tuples.push_back(build_G3(fixture("triangle")));
    tuples.push_back(family("square_complete").automata.at(2));
    tuples.push_back(family("triangle").automata.at(4));
    tuples.push_back(build_G3(fixture("binary")));  // empty
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        CAPTURE(i);
        const TupleAutomaton& t = tuples[i];
        std::string once = tuple_to_json(t);
        TupleAutomaton back = tuple_from_json(once);
        CHECK(tuple_to_json(back) == once);
        CHECK(back.k == t.k);
        CHECK(back.m == t.m);
        CHECK(back.initial == t.initial);
        REQUIRE(back.size() == t.size());
        for (int s = 0; s < t.size(); ++s) {
            CHECK(back.states[s].name == t.states[s].name);
            CHECK(back.states[s].tree == t.states[s].tree);
            CHECK(back.states[s].stage == t.states[s].stage);
            CHECK(back.states[s].complete == t.states[s].complete);
        }
        CHECK(back.transitions == t.transitions);
    }
}

TEST_CASE("malformed tuple JSON is refused") {
    std::string good = tuple_to_json(build_G3(fixture("triangle")));
    CHECK_THROWS_AS(tuple_from_json("{}"), UsageError);
    CHECK_THROWS_AS(tuple_from_json("null"), UsageError);
    std::string bad = good;
    bad.replace(bad.find("\"oo\""), 4, "\"o!\"");  // first state name no longer matches edges
    CHECK_THROWS_AS(tuple_from_json(bad), UsageError);
}

TEST_CASE("space JSON round-trips byte-identically") {
    for (auto [name, level] : std::vector<std::pair<const char*, int>>{
             {"binary", 2}, {"square_complete", 1}, {"exotic", 3}}) {
        CAPTURE(name);
        FiniteSpace sp = build_space(family(name), level);
        std::string once = space_to_json(sp);
        FiniteSpace back = space_from_json(once);
        CHECK(space_to_json(back) == once);
        CHECK(back.n == sp.n);
        CHECK(back.m == sp.m);
        CHECK(back.K == sp.K);
        CHECK(back.word_count == sp.word_count);
        REQUIRE(back.points.size() == sp.points.size());
        for (std::size_t i = 0; i < sp.points.size(); ++i) CHECK(back.points[i] == sp.points[i]);
        CHECK(back.nbhd == sp.nbhd);
    }
    CHECK_THROWS_AS(space_from_json("{}"), UsageError);
}

TEST_CASE("ifs JSON round-trips byte-identically") {
    for (const CorpusEntry& e : corpus()) {
        if (!e.ifs) continue;
        CAPTURE(e.name);
        std::string once = ifs_to_json(*e.ifs);
        IfsSystem back = ifs_from_json(once);
        CHECK(ifs_to_json(back) == once);
        CHECK(back.field_n == e.ifs->field_n);
        REQUIRE(back.maps.size() == e.ifs->maps.size());
        for (std::size_t i = 0; i < back.maps.size(); ++i)
            CHECK(back.maps[i] == e.ifs->maps[i]);
    }
    CHECK_THROWS_AS(ifs_from_json(R"({"maps":[]})"), UsageError);
    CHECK_THROWS_AS(ifs_from_json(R"({"field_N":0,"maps":[{"alpha":[1,2,0,1],)"
                                  R"("beta":[0,1,0,1],"conj":false}]})"),
                    UsageError);
    CHECK_THROWS_AS(ifs_from_json(R"({"field_N":1,"maps":[{"alpha":[1,0,0,1],)"
                                  R"("beta":[0,1,0,1],"conj":false}]})"),
                    UsageError);  // zero denominator
}

TEST_CASE("neighbor graph JSON embeds the exact maps") {
    NeighborGraphResult r = neighbor_graph(*corpus_entry("binary").ifs);
    std::string text = neighbor_graph_to_json(r);
    CHECK(count_of(text, "\"state_map\"") == 1);
    CHECK(count_of(text, "\"prune_bound\"") == 1);
    CHECK(count_of(text, "\"alpha\"") == 3);
    // the embedded automaton parses on its own
    RawAutomaton back = raw_automaton_from_json(text);
    CHECK(canonical_key_fixed_digits(compile(back)) ==
          canonical_key_fixed_digits(r.automaton));
}

TEST_CASE("report serializers emit the advertised shapes") {
    EquivalenceClass cls = class_of(fixture("binary"), PreperiodicAddress::parse("0(1)"));
    std::string cj = class_to_json(cls);
    CHECK(count_of(cj, "0(1)") >= 1);
    CHECK(count_of(cj, "1(0)") == 1);

    std::string pj = pcf_to_json(is_pcf(fixture("square_complete")));
    CHECK(count_of(pj, "false") >= 1);

    std::string dj = diagonal_to_json(diagonal_structure(fixture("binary")));
    CHECK(count_of(dj, "h_0") >= 1);

    std::string vj = validation_to_json(validate(*corpus_entry("binary").automaton));
    CHECK(count_of(vj, "\"ok\"") == 1);

    CHECK(error_to_json("usage", "empty input") ==
          R"({"error":{"kind":"usage","message":"empty input"}})");
}

TEST_CASE("DOT output is canonical and stable") {
    std::string dot = render_automaton(fixture("binary"), RenderFormat::dot);
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(count_of(dot, "\"o\" -> \"o\" [label=\"(0,0),(1,1)\"]") == 1);
    CHECK(count_of(dot, "\"right\" -> \"right\" [label=\"(1,0)\"]") == 1);
    CHECK(dot == render_automaton(fixture("binary"), RenderFormat::dot));
    CHECK(dot == render_automaton(compile(fixture("binary").to_raw()), RenderFormat::dot));

    // complete tuple states are double-circled
    std::string g2 = render_tuple(family("square_complete").automata.at(2), RenderFormat::dot);
    CHECK(count_of(g2, "peripheries=2") >= 4);

    std::string g3 = render_tuple(build_G3(fixture("triangle")), RenderFormat::dot);
    CHECK(count_of(g3, "\"oo\"") >= 1);
    CHECK(count_of(g3, "digraph") == 1);

    // an empty tuple renders an empty graph rather than failing
    std::string none = render_tuple(build_G3(fixture("binary")), RenderFormat::dot);
    CHECK(count_of(none, "digraph") == 1);
}

TEST_CASE("SVG output is self-contained and stable") {
    std::string svg = render_automaton(fixture("binary"), RenderFormat::svg);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count_of(svg, "xmlns") >= 1);
    CHECK(count_of(svg, "<text") >= 3);
    CHECK(svg == render_automaton(fixture("binary"), RenderFormat::svg));

    std::string space_svg =
        render_space(build_space(family("binary"), 2), RenderFormat::svg);
    CHECK(space_svg.rfind("<svg", 0) == 0);
}

TEST_CASE("space and word graph renderings") {
    FiniteSpace sp = build_space(family("binary"), 2);
    std::string dot = render_space(sp, RenderFormat::dot);
    CHECK(count_of(dot, "\"01\"") >= 1);
    CHECK(count_of(dot, "{01,10}") >= 1);

    std::string wg = render_word_graph(fixture("exotic"), 3, RenderFormat::dot);
    CHECK(wg.rfind("graph", 0) == 0);
    CHECK(count_of(wg, " -- ") == 42);
    // 27 nodes: count label-free node declarations by their line ends
    CHECK(count_of(wg, "\"000\"") == 1 + count_of(wg, "\"000\" -- "));

    CHECK_THROWS_AS(render_word_graph(fixture("binary"), 20, RenderFormat::dot), DomainError);
}
