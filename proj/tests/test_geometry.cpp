#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "topogen/automaton.hpp"
#include "topogen/common.hpp"
#include "topogen/corpus.hpp"
#include "topogen/exact_geometry.hpp"

using namespace topogen;

namespace {

ExactComplex ec(long n, Rational x, Rational y) { return {std::move(x), std::move(y), n}; }

// every labeled (from, (i,j), to) transition, root diagonal loops excluded
int arrow_count(const Automaton& a) {
    int count = 0;
    for (int s = 0; s < a.size(); ++s)
        for (const auto& [label, to] : a.next[s]) {
            if (s == a.initial && label.first == label.second) continue;
            ++count;
        }
    return count;
}

}  // namespace

TEST_CASE("field arithmetic is exact") {
    ExactComplex a = ec(3, 1, 2);  // 1 + 2*sqrt(3)i
    ExactComplex b = ec(3, Rational(1, 2), Rational(-1, 3));

    CHECK(a + b == ec(3, Rational(3, 2), Rational(5, 3)));
    CHECK(a - b == ec(3, Rational(1, 2), Rational(7, 3)));
    CHECK(a * a == ec(3, -11, 4));
    CHECK(a.norm_sq() == Rational(13));
    CHECK((a * b).norm_sq() == a.norm_sq() * b.norm_sq());
    CHECK(a * a.conj() == ec(3, 13, 0));
    CHECK(a * a.inverse() == ExactComplex::one(3));
    CHECK(b.inverse() * b == ExactComplex::one(3));
    CHECK_THROWS_AS(ExactComplex::zero(3).inverse(), DomainError);
}

TEST_CASE("similitudes compose and invert exactly") {
    Similitude f{ec(1, Rational(1, 2), 0), ec(1, 1, 0), false};
    Similitude g{ec(1, 0, 1), ec(1, Rational(-1, 3), 0), true};
    ExactComplex z = ec(1, Rational(2, 7), Rational(5, 11));

    CHECK(f.apply(z) == z * ec(1, Rational(1, 2), 0) + ec(1, 1, 0));
    CHECK(g.apply(z) == z.conj() * ec(1, 0, 1) + ec(1, Rational(-1, 3), 0));
    CHECK(f.compose(g).apply(z) == f.apply(g.apply(z)));
    CHECK(g.compose(f).apply(z) == g.apply(f.apply(z)));
    CHECK(g.compose(g).apply(z) == g.apply(g.apply(z)));
    CHECK(f.compose(f.inverse()) == Similitude::identity(1));
    CHECK(f.inverse().compose(f) == Similitude::identity(1));
    CHECK(g.compose(g.inverse()) == Similitude::identity(1));
    CHECK(Similitude::identity(1).apply(z) == z);
}

TEST_CASE("interval systems reproduce their bundled automata") {
    for (const char* name : {"binary", "base_neg2", "tent"}) {
        CAPTURE(name);
        const CorpusEntry& e = corpus_entry(name);
        REQUIRE(e.ifs.has_value());
        NeighborGraphResult r = neighbor_graph(*e.ifs);
        CHECK(r.automaton.size() == 3);
        CHECK(canonical_key_fixed_digits(r.automaton) ==
              canonical_key_fixed_digits(compile(*e.automaton)));
        RepresentationCheck rep = verify_representation(r.automaton, *e.ifs, r.state_map);
        CHECK(rep.ok);
    }
    // the interval carry states are the unit translations
    NeighborGraphResult bin = neighbor_graph(*corpus_entry("binary").ifs);
    std::set<std::string> maps;
    for (int s = 0; s < bin.automaton.size(); ++s)
        if (s != bin.automaton.initial) maps.insert(bin.state_map[s].str());
    std::set<std::string> expected;
    expected.insert(Similitude{ec(1, 1, 0), ec(1, 1, 0), false}.str());
    expected.insert(Similitude{ec(1, 1, 0), ec(1, -1, 0), false}.str());
    CHECK(maps == expected);
}

TEST_CASE("square and gasket systems reproduce their bundled automata") {
    for (const char* name : {"square_complete", "gasket"}) {
        CAPTURE(name);
        const CorpusEntry& e = corpus_entry(name);
        NeighborGraphResult r = neighbor_graph(*e.ifs);
        CHECK(canonical_key_fixed_digits(r.automaton) ==
              canonical_key_fixed_digits(compile(*e.automaton)));
        CHECK(verify_representation(r.automaton, *e.ifs, r.state_map).ok);
    }
}

TEST_CASE("triangle system counts") {
    const CorpusEntry& e = corpus_entry("triangle");
    REQUIRE(e.ifs.has_value());
    NeighborGraphResult r = neighbor_graph(*e.ifs);
    CHECK(r.automaton.size() == 17);  // 16 beside the root
    CHECK(arrow_count(r.automaton) == 42);
    CHECK(verify_representation(r.automaton, *e.ifs, r.state_map).ok);
    CHECK(validate(r.automaton.to_raw()).ok);
}

TEST_CASE("bundled triangle representation verifies") {
    const CorpusEntry& e = corpus_entry("triangle");
    REQUIRE(e.representation.has_value());
    Automaton a = compile(*e.automaton);
    CHECK(verify_representation(a, *e.ifs, *e.representation).ok);

    // perturbing one state map is caught and named
    std::vector<Similitude> broken = *e.representation;
    broken[2].beta = broken[2].beta + ExactComplex::one(e.ifs->field_n);
    RepresentationCheck rep = verify_representation(a, *e.ifs, broken);
    CHECK_FALSE(rep.ok);
    CHECK(!rep.witness.empty());
}

TEST_CASE("reflection generators satisfy their relations") {
    const CorpusEntry& e = corpus_entry("triangle");
    const std::vector<Similitude>& rep = *e.representation;
    const Automaton a = compile(*e.automaton);
    auto at = [&](const char* name) { return rep[*a.state_index(name)]; };
    Similitude g = e.extra_maps.at("g");

    std::vector<RelationResult> res = coxeter_relation_check(at("a"), at("b"), at("c"), g);
    REQUIRE(!res.empty());
    for (const RelationResult& rr : res) {
        CAPTURE(rr.name);
        CHECK(rr.holds);
    }

    // swapping two generators breaks at least one relation
    std::vector<RelationResult> bad = coxeter_relation_check(at("b"), at("a"), at("c"), g);
    CHECK(std::any_of(bad.begin(), bad.end(),
                      [](const RelationResult& rr) { return !rr.holds; }));
}

TEST_CASE("dog carpet constants and containment") {
    const CorpusEntry& e = corpus_entry("dog_carpet");
    const long N = 15;
    ExactComplex lambda = ec(N, Rational(3, 2), Rational(1, 2));
    ExactComplex a = ec(N, Rational(1, 4), Rational(1, 4));

    // lambda solves x^2 - 3x + 6 = 0, and |a| = 1
    ExactComplex three = ec(N, 3, 0), six = ec(N, 6, 0);
    CHECK(lambda * lambda - three * lambda + six == ExactComplex::zero(N));
    CHECK(a.norm_sq() == Rational(1));
    CHECK(lambda.norm_sq() == Rational(6));

    REQUIRE(e.automaton.has_value());
    REQUIRE(e.ifs.has_value());
    REQUIRE(e.representation.has_value());
    Automaton fixture = compile(*e.automaton);
    CHECK(verify_representation(fixture, *e.ifs, *e.representation).ok);

    NeighborGraphResult computed = neighbor_graph(*e.ifs);
    CHECK(verify_representation(computed.automaton, *e.ifs, computed.state_map).ok);

    // two of the stated maps appear among the computed states
    std::set<std::string> maps;
    for (const Similitude& s : computed.state_map) maps.insert(s.str());
    CHECK(maps.count(Similitude{ec(N, -1, 0), ExactComplex::zero(N), false}.str()));
    CHECK(maps.count(Similitude{a, ExactComplex::one(N), false}.str()));

    // every pair the bundled automaton accepts, the computed one accepts:
    // walk all runs up to length 6
    long long checked = 0;
    std::function<void(int, Word&, Word&)> walk = [&](int s, Word& u, Word& v) {
        if (!u.empty()) {
            WordPairResult got = accept_word_pair(computed.automaton, u, v);
            REQUIRE(got.accepted);
            ++checked;
        }
        if (u.size() == 6) return;
        for (const auto& [label, to] : fixture.next[s]) {
            u.push_back(label.first);
            v.push_back(label.second);
            walk(to, u, v);
            u.pop_back();
            v.pop_back();
        }
    };
    Word u, v;
    walk(fixture.initial, u, v);
    CHECK(checked > 1000);
}

TEST_CASE("five-piece carpet keeps six of the square's neighbor states") {
    const CorpusEntry& e = corpus_entry("fractal_square");
    REQUIRE(e.ifs.has_value());
    NeighborGraphResult r = neighbor_graph(*e.ifs);
    REQUIRE(r.automaton.size() == 7);

    std::set<std::pair<Rational, Rational>> offsets;
    for (int s = 0; s < r.automaton.size(); ++s) {
        if (s == r.automaton.initial) continue;
        const Similitude& h = r.state_map[s];
        CHECK(h.alpha == ExactComplex::one(1));
        CHECK_FALSE(h.conjugating);
        offsets.insert({h.beta.x, h.beta.y});
    }
    // four side contacts plus the two diagonal contacts the L-shape allows
    std::set<std::pair<Rational, Rational>> expected = {
        {Rational(1), Rational(0)},  {Rational(-1), Rational(0)}, {Rational(0), Rational(1)},
        {Rational(0), Rational(-1)}, {Rational(1), Rational(1)},  {Rational(-1), Rational(-1)},
    };
    CHECK(offsets == expected);
    CHECK(verify_representation(r.automaton, *e.ifs, r.state_map).ok);
    CHECK(validate(r.automaton.to_raw()).ok);
}

TEST_CASE("prune bound can be overridden but must dominate") {
    const CorpusEntry& e = corpus_entry("binary");
    NeighborGraphOptions opt;
    opt.prune_bound = Rational(100);
    NeighborGraphResult wide = neighbor_graph(*e.ifs, opt);
    CHECK(wide.prune_bound == Rational(100));
    CHECK(wide.automaton.size() == 3);  // extra slack finds no extra states

    NeighborGraphOptions tight;
    tight.max_states = 1;
    try {
        neighbor_graph(*corpus_entry("triangle").ifs, tight);
        FAIL("expected the state guard to trip");
    } catch (const DomainError& ex) {
        std::string msg = ex.what();
        CHECK(msg.find("not finite type within bound") != std::string::npos);
    }
}
