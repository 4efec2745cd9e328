#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "topogen/analysis.hpp"
#include "topogen/automaton.hpp"
#include "topogen/corpus.hpp"
#include "topogen/exact_geometry.hpp"
#include "topogen/multi_address.hpp"

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

std::vector<Word> words_of(int m, int len) {
    std::vector<Word> out;
    Word w(len, 0);
    while (true) {
        out.push_back(w);
        int p = len - 1;
        while (p >= 0 && w[p] == m - 1) w[p--] = 0;
        if (p < 0) break;
        ++w[p];
    }
    if (len == 0) out.resize(1);
    return out;
}

int sweep_level(int m) { return m == 2 ? 5 : m == 3 ? 4 : 3; }

// Deduplicated pool of short eventually periodic addresses.
std::vector<PreperiodicAddress> address_pool(int m, int max_stem, int max_period) {
    std::set<PreperiodicAddress> out;
    for (int ls = 0; ls <= max_stem; ++ls)
        for (const Word& s : words_of(m, ls))
            for (int lp = 1; lp <= max_period; ++lp)
                for (const Word& p : words_of(m, lp)) out.insert(PreperiodicAddress(s, p));
    return {out.begin(), out.end()};
}

struct Sweep {
    int failures = 0;
    std::string first;
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (failures == 0) first = what;
        ++failures;
    }
};

// --- numeric geometry helpers -------------------------------------------

std::complex<double> cnum(const ExactComplex& z) {
    const double x = z.x.convert_to<double>();
    const double y = z.y.convert_to<double>();
    return {x, y * std::sqrt(static_cast<double>(z.field_n))};
}

std::complex<double> apply_num(const Similitude& f, std::complex<double> z) {
    if (f.conjugating) z = std::conj(z);
    return cnum(f.alpha) * z + cnum(f.beta);
}

std::complex<double> apply_word_num(const IfsSystem& ifs, const Word& w,
                                    std::complex<double> z) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) z = apply_num(ifs.maps[*it], z);
    return z;
}

// Smallest interval [lo, hi] with f(I) ⊆ I for every map; equals the hull of
// the invariant set for systems living on the real axis.
std::pair<double, double> attractor_interval(const IfsSystem& ifs) {
    double lo = -10, hi = 10;
    for (int it = 0; it < 200; ++it) {
        double nlo = 1e30, nhi = -1e30;
        for (const Similitude& f : ifs.maps) {
            double a = apply_num(f, {lo, 0}).real();
            double b = apply_num(f, {hi, 0}).real();
            nlo = std::min(nlo, std::min(a, b));
            nhi = std::max(nhi, std::max(a, b));
        }
        lo = nlo;
        hi = nhi;
    }
    return {lo, hi};
}

constexpr double kGeomTol = 1e-9;

}  // namespace

TEST_CASE("pair language is symmetric, prefix closed, and diagonal-shift invariant") {
    Sweep sweep;
    for (const CorpusEntry& e : corpus()) {
        if (!e.automaton) continue;
        const Automaton& a = fixture(e.name);
        const int L = sweep_level(a.m);
        const std::vector<Word> ws = words_of(a.m, L);
        for (std::size_t i = 0; i < ws.size(); ++i)
            for (std::size_t j = i + 1; j < ws.size(); ++j) {
                const bool uv = accept_word_pair(a, ws[i], ws[j]).accepted;
                sweep.expect(uv == accept_word_pair(a, ws[j], ws[i]).accepted,
                             e.name + ": pair acceptance is not symmetric");
                if (!uv) continue;
                for (int p = 1; p < L; ++p) {
                    Word u(ws[i].begin(), ws[i].begin() + p);
                    Word v(ws[j].begin(), ws[j].begin() + p);
                    sweep.expect(accept_word_pair(a, u, v).accepted,
                                 e.name + ": accepted pair with rejected prefix");
                }
            }
        // prepending one equal digit never changes acceptance (full axiom 4
        // roots only: a weak root may leave the start state on the diagonal)
        if (a.weak_axiom4) continue;
        const std::vector<Word> shorter = words_of(a.m, L - 1);
        for (std::size_t i = 0; i < shorter.size(); ++i)
            for (std::size_t j = i; j < shorter.size(); ++j) {
                const bool base = accept_word_pair(a, shorter[i], shorter[j]).accepted;
                for (int d = 0; d < a.m; ++d) {
                    Word u = shorter[i], v = shorter[j];
                    u.insert(u.begin(), d);
                    v.insert(v.begin(), d);
                    sweep.expect(accept_word_pair(a, u, v).accepted == base,
                                 e.name + ": diagonal shift changed acceptance");
                }
            }
    }
    CHECK_MESSAGE(sweep.failures == 0, sweep.first, " (", sweep.failures, " failures)");
}

TEST_CASE("address classes partition and agree with pair acceptance") {
    Sweep sweep;
    for (const CorpusEntry& e : corpus()) {
        if (!e.automaton) continue;
        const Automaton& a = fixture(e.name);
        const int max_stem = a.m >= 5 ? 1 : 2;
        const std::vector<PreperiodicAddress> pool = address_pool(a.m, max_stem, 2);
        std::map<PreperiodicAddress, std::vector<PreperiodicAddress>> classes;
        for (const PreperiodicAddress& x : pool) {
            EquivalenceClass cls = class_of(a, x);
            sweep.expect(std::find(cls.members.begin(), cls.members.end(), x) !=
                             cls.members.end(),
                         e.name + ": " + x.str() + " missing from its own class");
            // members are pairwise distinct sequences
            std::set<PreperiodicAddress> uniq(cls.members.begin(), cls.members.end());
            sweep.expect(uniq.size() == cls.members.size(),
                         e.name + ": class of " + x.str() + " repeats a member");
            for (const PreperiodicAddress& y : cls.members) {
                sweep.expect(accept_address_pair(a, x, y),
                             e.name + ": class member " + y.str() + " of " + x.str() +
                                 " fails pair acceptance");
                EquivalenceClass back = class_of(a, y);
                sweep.expect(std::set<PreperiodicAddress>(back.members.begin(),
                                                          back.members.end()) == uniq,
                             e.name + ": classes of " + x.str() + " and " + y.str() +
                                 " disagree");
            }
            classes.emplace(x, cls.members);
        }
        // acceptance over the pool matches class membership exactly
        for (const PreperiodicAddress& x : pool) {
            const std::vector<PreperiodicAddress>& mem = classes.at(x);
            for (const PreperiodicAddress& y : pool) {
                const bool in_class =
                    std::find(mem.begin(), mem.end(), y) != mem.end();
                sweep.expect(accept_address_pair(a, x, y) == in_class,
                             e.name + ": acceptance and class membership disagree on (" +
                                 x.str() + ", " + y.str() + ")");
            }
        }
        // prepending one equal digit preserves equivalence and inequivalence
        if (a.weak_axiom4) continue;
        const int step = a.m >= 4 ? a.m - 1 : 1;
        for (const PreperiodicAddress& x : pool)
            for (const PreperiodicAddress& y : pool) {
                const bool base = accept_address_pair(a, x, y);
                for (int d = 0; d < a.m; d += step)
                    sweep.expect(
                        accept_address_pair(a, x.prepend(d), y.prepend(d)) == base,
                        e.name + ": diagonal prepend changed equivalence of (" + x.str() +
                            ", " + y.str() + ")");
            }
    }
    CHECK_MESSAGE(sweep.failures == 0, sweep.first, " (", sweep.failures, " failures)");
}

TEST_CASE("interval systems: pairs are accepted exactly when values coincide") {
    Sweep sweep;
    for (const std::string name : {"binary", "base_neg2", "tent"}) {
        const CorpusEntry& e = corpus_entry(name);
        const Automaton& a = fixture(name);
        // exact rational value of an address under the real affine system
        auto value = [&](const PreperiodicAddress& x) {
            auto aff_of = [&](int d) {
                const Similitude& f = e.ifs->maps[d];
                REQUIRE(f.alpha.y == 0);
                REQUIRE(f.beta.y == 0);
                return std::pair<Rational, Rational>{f.alpha.x, f.beta.x};
            };
            auto after = [](std::pair<Rational, Rational> o, std::pair<Rational, Rational> i) {
                return std::pair<Rational, Rational>{o.first * i.first,
                                                     o.first * i.second + o.second};
            };
            std::pair<Rational, Rational> per{1, 0};
            for (int d : x.period()) per = after(per, aff_of(d));
            const Rational zstar = per.second / (Rational(1) - per.first);
            std::pair<Rational, Rational> pre{1, 0};
            for (int d : x.preperiod()) pre = after(pre, aff_of(d));
            return pre.first * zstar + pre.second;
        };
        const std::vector<PreperiodicAddress> pool = address_pool(a.m, 2, 2);
        for (const PreperiodicAddress& x : pool)
            for (const PreperiodicAddress& y : pool)
                sweep.expect(accept_address_pair(a, x, y) == (value(x) == value(y)),
                             name + ": acceptance disagrees with exact values on (" +
                                 x.str() + ", " + y.str() + ")");
        if (name == "binary")
            CHECK(value(PreperiodicAddress::parse("0(1)")) == Rational(1, 2));
        if (name == "base_neg2") {
            const PreperiodicAddress x = PreperiodicAddress::parse("00(10)");
            const PreperiodicAddress y = PreperiodicAddress::parse("11(01)");
            CHECK(value(x) == Rational(1, 6));
            CHECK(value(y) == Rational(1, 6));
            CHECK(accept_address_pair(a, x, y));
        }
    }
    CHECK_MESSAGE(sweep.failures == 0, sweep.first, " (", sweep.failures, " failures)");
}

TEST_CASE("word pairs are accepted exactly when their cells touch") {
    Sweep sweep;
    // 1-D tile systems: cells are intervals
    for (const std::string name : {"binary", "base_neg2", "tent"}) {
        const CorpusEntry& e = corpus_entry(name);
        const Automaton& a = fixture(name);
        auto [lo, hi] = attractor_interval(*e.ifs);
        for (int level = 1; level <= 4; ++level) {
            const std::vector<Word> ws = words_of(a.m, level);
            std::vector<std::pair<double, double>> cell(ws.size());
            for (std::size_t i = 0; i < ws.size(); ++i) {
                double p = apply_word_num(*e.ifs, ws[i], {lo, 0}).real();
                double q = apply_word_num(*e.ifs, ws[i], {hi, 0}).real();
                cell[i] = {std::min(p, q), std::max(p, q)};
            }
            for (std::size_t i = 0; i < ws.size(); ++i)
                for (std::size_t j = i + 1; j < ws.size(); ++j) {
                    const bool touch = std::max(cell[i].first, cell[j].first) <=
                                       std::min(cell[i].second, cell[j].second) + kGeomTol;
                    sweep.expect(accept_word_pair(a, ws[i], ws[j]).accepted == touch,
                                 name + ": interval overlap disagrees at level " +
                                     std::to_string(level));
                }
        }
    }
    // axis-aligned square cells
    {
        const CorpusEntry& e = corpus_entry("square_complete");
        const Automaton& a = fixture("square_complete");
        for (int level = 1; level <= 4; ++level) {
            const std::vector<Word> ws = words_of(a.m, level);
            std::vector<std::array<double, 4>> box(ws.size());  // x0 y0 x1 y1
            for (std::size_t i = 0; i < ws.size(); ++i) {
                auto c0 = apply_word_num(*e.ifs, ws[i], {0, 0});
                auto c1 = apply_word_num(*e.ifs, ws[i], {1, 1});
                box[i] = {c0.real(), c0.imag(), c1.real(), c1.imag()};
            }
            for (std::size_t i = 0; i < ws.size(); ++i)
                for (std::size_t j = i + 1; j < ws.size(); ++j) {
                    const bool touch =
                        std::max(box[i][0], box[j][0]) <=
                            std::min(box[i][2], box[j][2]) + kGeomTol &&
                        std::max(box[i][1], box[j][1]) <=
                            std::min(box[i][3], box[j][3]) + kGeomTol;
                    sweep.expect(accept_word_pair(a, ws[i], ws[j]).accepted == touch,
                                 std::string("square_complete: box overlap disagrees "
                                             "at level ") +
                                     std::to_string(level));
                }
        }
    }
    // gasket cells touch exactly at shared corner images
    {
        const CorpusEntry& e = corpus_entry("gasket");
        const Automaton& a = fixture("gasket");
        std::vector<std::complex<double>> verts;
        for (const Similitude& f : e.ifs->maps) {
            // fixed point of a non-conjugating contraction
            verts.push_back(cnum(f.beta) / (std::complex<double>(1, 0) - cnum(f.alpha)));
        }
        for (int level = 1; level <= 4; ++level) {
            const std::vector<Word> ws = words_of(a.m, level);
            std::vector<std::vector<std::complex<double>>> cv(ws.size());
            for (std::size_t i = 0; i < ws.size(); ++i)
                for (const auto& v : verts)
                    cv[i].push_back(apply_word_num(*e.ifs, ws[i], v));
            for (std::size_t i = 0; i < ws.size(); ++i)
                for (std::size_t j = i + 1; j < ws.size(); ++j) {
                    bool touch = false;
                    for (const auto& p : cv[i])
                        for (const auto& q : cv[j]) touch |= std::abs(p - q) <= kGeomTol;
                    sweep.expect(accept_word_pair(a, ws[i], ws[j]).accepted == touch,
                                 std::string("gasket: corner contact disagrees at "
                                             "level ") +
                                     std::to_string(level));
                }
        }
    }
    CHECK_MESSAGE(sweep.failures == 0, sweep.first, " (", sweep.failures, " failures)");
}

TEST_CASE("complete sampled tuples carry distinct, mutually equivalent addresses") {
    for (auto [name, k] : std::vector<std::pair<const char*, int>>{
             {"hata_complete", 3}, {"exotic", 3}, {"square_complete", 4}, {"triangle", 6}}) {
        CAPTURE(name);
        const Automaton& g2 = fixture(name);
        const TupleAutomaton& gk = family(name).automata.at(k);
        int usable = 0;
        for (const TupleRunSample& s : sample_tuple_runs(gk, 300)) {
            if (!s.complete) continue;
            std::set<PreperiodicAddress> uniq(s.addresses.begin(), s.addresses.end());
            if (uniq.size() != s.addresses.size()) continue;  // degenerate diagonal ride
            ++usable;
            CHECK(accept_complete_tuple(gk, s.addresses));
            for (std::size_t i = 0; i < s.addresses.size(); ++i)
                for (std::size_t j = i + 1; j < s.addresses.size(); ++j)
                    CHECK(accept_address_pair(g2, s.addresses[i], s.addresses[j]));
            EquivalenceClass cls = class_of(g2, s.addresses.front());
            CHECK(cls.size() == k);
            CHECK(std::set<PreperiodicAddress>(cls.members.begin(), cls.members.end()) ==
                  uniq);
        }
        CHECK(usable > 0);
    }
}
