#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "topogen/address.hpp"
#include "topogen/common.hpp"

using namespace topogen;

TEST_CASE("canonical form reduces period powers") {
    PreperiodicAddress a({0}, {1, 1});
    CHECK(a.period() == Word{1});
    CHECK(a.str() == "0(1)");
}

TEST_CASE("canonical form slides the preperiod boundary") {
    // 01(01) spells the same sequence as (01)
    PreperiodicAddress a({0, 1}, {0, 1});
    CHECK(a == PreperiodicAddress({}, {0, 1}));
    CHECK(a.preperiod().empty());

    // 0(0) is the constant sequence (0)
    PreperiodicAddress b({0}, {0});
    CHECK(b.str() == "(0)");

    // 100(10) slides one step: 1 0 | 0 1 0 1 ... = 10(01)
    PreperiodicAddress c({1, 0, 0}, {1, 0});
    CHECK(c == PreperiodicAddress::parse("10(01)"));
    CHECK(c.str() == "10(01)");
}

TEST_CASE("structural equality decides sequence equality") {
    CHECK(PreperiodicAddress({0, 1}, {2, 1}) == PreperiodicAddress::parse("01(21)"));
    CHECK(PreperiodicAddress({0, 1, 2}, {1, 2}) == PreperiodicAddress::parse("0(12)"));
    CHECK(PreperiodicAddress::parse("0(12)") != PreperiodicAddress::parse("0(21)"));
}

TEST_CASE("parse and str round-trip") {
    for (const char* text : {"(0)", "0(1)", "011(10)", "2(01)", "(012)"}) {
        PreperiodicAddress a = PreperiodicAddress::parse(text);
        CHECK(PreperiodicAddress::parse(a.str()) == a);
    }
    // round-trip with multi-digit symbols uses commas
    PreperiodicAddress wide({10, 2}, {11});
    CHECK(wide.str() == "10,2(11)");
    CHECK(PreperiodicAddress::parse(wide.str()) == wide);
}

TEST_CASE("parse rejects malformed text") {
    CHECK_THROWS_AS(PreperiodicAddress::parse(""), UsageError);
    CHECK_THROWS_AS(PreperiodicAddress::parse("01"), UsageError);
    CHECK_THROWS_AS(PreperiodicAddress::parse("0()"), UsageError);
    CHECK_THROWS_AS(PreperiodicAddress::parse("(1)2"), UsageError);
    CHECK_THROWS_AS(PreperiodicAddress::parse("0(1"), UsageError);
}

TEST_CASE("digit_at walks preperiod then period") {
    PreperiodicAddress a = PreperiodicAddress::parse("01(23)");
    const int expect[] = {0, 1, 2, 3, 2, 3, 2, 3};
    for (std::size_t i = 0; i < 8; ++i) CHECK(a.digit_at(i) == expect[i]);
}

TEST_CASE("prepend and shift are inverse") {
    PreperiodicAddress a = PreperiodicAddress::parse("0(1)");
    CHECK(a.prepend(5).str() == "50(1)");
    CHECK(a.prepend(5).shift() == a);
    CHECK(a.shift() == PreperiodicAddress::parse("(1)"));
    // shifting a pure period rotates it
    CHECK(PreperiodicAddress::parse("(01)").shift() == PreperiodicAddress::parse("(10)"));
    // shift after the canonical boundary keeps canonical form
    PreperiodicAddress b = PreperiodicAddress::parse("(0)");
    CHECK(b.shift() == b);
}

TEST_CASE("prefix and min_alphabet") {
    PreperiodicAddress a = PreperiodicAddress::parse("01(23)");
    CHECK(a.prefix(6) == Word{0, 1, 2, 3, 2, 3});
    CHECK(a.prefix(0) == Word{});
    CHECK(a.min_alphabet() == 4);
    CHECK(PreperiodicAddress::parse("(0)").min_alphabet() == 1);
}

TEST_CASE("ordering is total and consistent with equality") {
    PreperiodicAddress a = PreperiodicAddress::parse("(0)");
    PreperiodicAddress b = PreperiodicAddress::parse("0(1)");
    CHECK(((a < b) != (b < a)));
    CHECK(a == PreperiodicAddress({0}, {0}));
}
