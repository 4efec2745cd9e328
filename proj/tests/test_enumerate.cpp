#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "topogen/automaton.hpp"
#include "topogen/common.hpp"
#include "topogen/corpus.hpp"
#include "topogen/enumerate.hpp"

using namespace topogen;

TEST_CASE("census of 2-state, 2-digit automata under both filters") {
    EnumerationConstraints c;
    c.require_finite_class_conditions = true;
    c.require_connected_x1 = true;
    std::vector<Automaton> found = enumerate_automata(2, 2, c);
    REQUIRE(found.size() == 3);

    std::set<std::string> keys;
    for (const Automaton& a : found) {
        CHECK(validate(a.to_raw()).ok);
        CHECK(a.size() == 3);
        keys.insert(canonical_key(a));
    }
    std::set<std::string> expected;
    for (const char* name : {"binary", "base_neg2", "tent"})
        expected.insert(canonical_key(compile(*corpus_entry(name).automaton)));
    CHECK(keys == expected);
}

TEST_CASE("zero extra states leaves only the root automaton") {
    for (int m : {1, 2, 3}) {
        CAPTURE(m);
        std::vector<Automaton> found = enumerate_automata(0, m);
        REQUIRE(found.size() == 1);
        CHECK(found[0].size() == 1);
        CHECK(found[0].m == m);
    }
}

TEST_CASE("constraints only shrink the census") {
    EnumerationConstraints none;
    EnumerationConstraints fin;
    fin.require_finite_class_conditions = true;
    EnumerationConstraints both = fin;
    both.require_connected_x1 = true;

    std::vector<Automaton> all = enumerate_automata(2, 2, none);
    std::vector<Automaton> f = enumerate_automata(2, 2, fin);
    std::vector<Automaton> b = enumerate_automata(2, 2, both);
    CHECK(all.size() >= f.size());
    CHECK(f.size() >= b.size());
    CHECK(b.size() == 3);

    std::set<std::string> all_keys;
    for (const Automaton& a : all) all_keys.insert(canonical_key(a));
    CHECK(all_keys.size() == all.size());  // canonical dedup means keys are unique
    for (const Automaton& a : b) CHECK(all_keys.count(canonical_key(a)) == 1);
}

TEST_CASE("oversized searches are refused with the estimate named") {
    try {
        enumerate_automata(4, 4);
        FAIL("expected a refusal");
    } catch (const UsageError& e) {
        std::string msg = e.what();
        CHECK(msg.find("candidate") != std::string::npos);
    }
    CHECK_THROWS_AS(enumerate_automata(5, 2), UsageError);
    CHECK_THROWS_AS(enumerate_automata(2, 5), UsageError);
    CHECK_THROWS_AS(enumerate_automata(-1, 2), UsageError);
    CHECK_THROWS_AS(enumerate_automata(2, 0), UsageError);
}

TEST_CASE("every enumerated automaton satisfies the axioms") {
    EnumerationConstraints c;
    std::vector<Automaton> found = enumerate_automata(1, 2, c);
    CHECK(!found.empty());
    for (const Automaton& a : found) {
        CHECK(validate(a.to_raw()).ok);
        for (int s = 0; s < a.size(); ++s) CHECK(!a.next[s].empty());
    }
}
