#include "topogen/automaton.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "topogen/common.hpp"

namespace topogen {

std::optional<int> Automaton::step(int state, PairLabel label) const {
    const auto& row = next[state];
    auto it = row.find(label);
    if (it == row.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Automaton::state_index(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

RawAutomaton Automaton::to_raw() const {
    RawAutomaton raw;
    raw.m = m;
    raw.states = names;
    raw.initial = names[initial];
    raw.weak_axiom4 = weak_axiom4;
    for (int s = 0; s < size(); ++s)
        if (inverse[s] >= s) raw.inverse[names[s]] = names[inverse[s]];
    for (int s = 0; s < size(); ++s) {
        std::map<int, std::vector<PairLabel>> grouped;
        for (const auto& [lab, tgt] : next[s]) grouped[tgt].push_back(lab);
        for (const auto& [tgt, labs] : grouped) raw.edges.push_back({names[s], names[tgt], labs});
    }
    return raw;
}

namespace {

struct Builder {
    const RawAutomaton& raw;
    ValidationReport report;
    std::map<std::string, int> index;
    std::vector<std::map<PairLabel, int>> next;
    std::vector<int> inverse;
    int initial = -1;

    void issue(const std::string& axiom, const std::string& msg) {
        report.issues.push_back({axiom, msg});
    }

    bool build_structure() {
        if (raw.m < 1) {
            issue("input", "alphabet size m must be at least 1");
            return false;
        }
        if (raw.states.empty()) {
            issue("input", "state list is empty");
            return false;
        }
        for (const auto& s : raw.states) {
            if (index.count(s)) {
                issue("input", "duplicate state name '" + s + "'");
                return false;
            }
            index[s] = static_cast<int>(index.size());
        }
        auto it = index.find(raw.initial);
        if (it == index.end()) {
            issue("input", "initial state '" + raw.initial + "' is not in the state list");
            return false;
        }
        initial = it->second;

        next.assign(raw.states.size(), {});
        bool ok = true;
        for (const auto& e : raw.edges) {
            auto fi = index.find(e.from);
            auto ti = index.find(e.to);
            if (fi == index.end() || ti == index.end()) {
                issue("input", "edge references unknown state '" +
                                   (fi == index.end() ? e.from : e.to) + "'");
                ok = false;
                continue;
            }
            for (auto [i, j] : e.labels) {
                if (i < 0 || j < 0 || i >= raw.m || j >= raw.m) {
                    issue("input", "label (" + std::to_string(i) + "," + std::to_string(j) +
                                       ") out of range for m=" + std::to_string(raw.m));
                    ok = false;
                    continue;
                }
                auto [pos, inserted] = next[fi->second].try_emplace({i, j}, ti->second);
                if (!inserted && pos->second != ti->second) {
                    issue("axiom2", "state '" + e.from + "' has two targets for label (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
                    ok = false;
                }
            }
        }

        inverse.assign(raw.states.size(), -1);
        for (const auto& [s, t] : raw.inverse) {
            auto si = index.find(s);
            auto ti = index.find(t);
            if (si == index.end() || ti == index.end()) {
                issue("input", "inverse map references unknown state");
                ok = false;
                continue;
            }
            if (inverse[si->second] != -1 && inverse[si->second] != ti->second) {
                issue("axiom3", "state '" + s + "' given two involution partners");
                ok = false;
                continue;
            }
            inverse[si->second] = ti->second;
            if (inverse[ti->second] != -1 && inverse[ti->second] != si->second) {
                issue("axiom3", "state '" + t + "' given two involution partners");
                ok = false;
                continue;
            }
            inverse[ti->second] = si->second;
        }
        // Unlisted states are self-inverse.
        for (auto& v : inverse)
            if (v == -1) v = static_cast<int>(&v - inverse.data());
        return ok;
    }

    void check_axioms() {
        const int n = static_cast<int>(raw.states.size());
        // Involution must fix the root.
        if (inverse[initial] != initial)
            issue("axiom3", "initial state must be its own involution partner");

        // Axiom 3: edge symmetry b -(i,j)-> c  <=>  b~ -(j,i)-> c~.
        for (int s = 0; s < n; ++s) {
            for (const auto& [lab, tgt] : next[s]) {
                auto mirror = next[inverse[s]].find({lab.second, lab.first});
                if (mirror == next[inverse[s]].end() || mirror->second != inverse[tgt]) {
                    issue("axiom3", "edge " + raw.states[s] + " -(" + std::to_string(lab.first) +
                                        "," + std::to_string(lab.second) +
                                        ")-> " + raw.states[tgt] + " has no mirror edge");
                }
            }
        }

        // Axiom 1a: outgoing edge everywhere.
        for (int s = 0; s < n; ++s)
            if (next[s].empty()) issue("axiom1", "state '" + raw.states[s] + "' has no outgoing edge");

        // Axiom 1b: reachability from the root.
        std::vector<char> seen(n, 0);
        std::deque<int> bfs{initial};
        seen[initial] = 1;
        while (!bfs.empty()) {
            int s = bfs.front();
            bfs.pop_front();
            for (const auto& [lab, tgt] : next[s])
                if (!seen[tgt]) {
                    seen[tgt] = 1;
                    bfs.push_back(tgt);
                }
        }
        for (int s = 0; s < n; ++s)
            if (!seen[s]) issue("axiom1", "state '" + raw.states[s] + "' unreachable from the root");

        if (!raw.weak_axiom4) {
            // Axiom 4: the root carries every diagonal loop.
            for (int i = 0; i < raw.m; ++i) {
                auto it = next[initial].find({i, i});
                if (it == next[initial].end() || it->second != initial)
                    issue("axiom4", "root lacks the (" + std::to_string(i) + "," +
                                        std::to_string(i) + ") loop");
            }
        }
        // The weak variant drops the root-loop requirement entirely; analyses
        // that need a total diagonal action check for it themselves.

        // Root isolation: no incoming edges except the root's own diagonal loops.
        for (int s = 0; s < n; ++s) {
            for (const auto& [lab, tgt] : next[s]) {
                if (tgt != initial) continue;
                bool own_diag = (s == initial) && lab.first == lab.second;
                if (!own_diag)
                    issue("root", "edge from '" + raw.states[s] + "' re-enters the root with (" +
                                      std::to_string(lab.first) + "," +
                                      std::to_string(lab.second) + ")");
            }
        }
    }
};

}  // namespace

ValidationReport validate(const RawAutomaton& raw) {
    Builder b{raw};
    if (b.build_structure()) b.check_axioms();
    b.report.ok = b.report.issues.empty();
    return b.report;
}

Automaton compile(const RawAutomaton& raw) {
    Builder b{raw};
    bool structural = b.build_structure();
    if (structural) b.check_axioms();
    if (!b.report.issues.empty() || !structural) {
        std::ostringstream os;
        os << "automaton does not validate:";
        for (const auto& iss : b.report.issues) os << "\n  [" << iss.axiom << "] " << iss.message;
        throw DomainError(os.str());
    }
    Automaton a;
    a.m = raw.m;
    a.initial = b.initial;
    a.weak_axiom4 = raw.weak_axiom4;
    a.names = raw.states;
    a.inverse = b.inverse;
    a.next = b.next;
    return a;
}

WordPairResult accept_word_pair(const Automaton& a, const Word& u, const Word& v) {
    if (u.size() != v.size()) throw UsageError("word pair has mismatched lengths");
    for (int d : u)
        if (d < 0 || d >= a.m) throw UsageError("word digit out of range");
    for (int d : v)
        if (d < 0 || d >= a.m) throw UsageError("word digit out of range");
    int state = a.initial;
    for (std::size_t i = 0; i < u.size(); ++i) {
        auto nxt = a.step(state, {u[i], v[i]});
        if (!nxt) return {false, -1};
        state = *nxt;
    }
    return {true, state};
}

bool accept_address_pair(const Automaton& a, const PreperiodicAddress& s,
                         const PreperiodicAddress& t) {
    if (s.min_alphabet() > a.m || t.min_alphabet() > a.m)
        throw UsageError("address digit out of range for this automaton");
    // Configuration: (state, position in s's lasso, position in t's lasso).
    // Positions wrap inside the periodic part, so the configuration space is
    // finite and a repeat means acceptance.
    const std::size_t slen = s.preperiod().size() + s.period().size();
    const std::size_t tlen = t.preperiod().size() + t.period().size();
    auto advance = [](std::size_t pos, std::size_t pre, std::size_t len) {
        ++pos;
        if (pos >= len) pos = pre + (pos - pre) % (len - pre);
        return pos;
    };
    // Wrapped positions agree with absolute positions on the digit they index.
    std::set<std::tuple<int, std::size_t, std::size_t>> seen;
    int state = a.initial;
    std::size_t ps = 0, pt = 0;
    while (true) {
        if (!seen.insert({state, ps, pt}).second) return true;
        auto nxt = a.step(state, {s.digit_at(ps), t.digit_at(pt)});
        if (!nxt) return false;
        state = *nxt;
        ps = advance(ps, s.preperiod().size(), slen);
        pt = advance(pt, t.preperiod().size(), tlen);
    }
}

namespace {

// Enumerates lassos: simple path from the root followed by a simple cycle,
// both bounded, and hands the label streams to the sink.
struct LassoScan {
    const Automaton& a;
    std::size_t max_len;
    // sink(path_labels, cycle_labels) -> keep scanning?
    std::function<bool(const std::vector<PairLabel>&, const std::vector<PairLabel>&)> sink;

    std::vector<PairLabel> path, cycle;
    std::vector<char> on_path, on_cycle;
    bool stop = false;

    void run() {
        on_path.assign(a.size(), 0);
        on_cycle.assign(a.size(), 0);
        walk(a.initial);
    }

    void walk(int state) {
        if (stop) return;
        // Try closing a cycle from here.
        spin(state, state, true);
        if (stop) return;
        if (path.size() >= max_len) return;
        on_path[state] = 1;
        for (const auto& [lab, tgt] : a.next[state]) {
            if (on_path[tgt]) continue;
            path.push_back(lab);
            walk(tgt);
            path.pop_back();
            if (stop) return;
        }
        on_path[state] = 0;
    }

    void spin(int origin, int state, bool first) {
        if (stop) return;
        if (!first && state == origin) {
            if (!sink(path, cycle)) stop = true;
            return;
        }
        if (cycle.size() >= max_len) return;
        if (!first && on_cycle[state]) return;
        on_cycle[state] = 1;
        for (const auto& [lab, tgt] : a.next[state]) {
            cycle.push_back(lab);
            spin(origin, tgt, false);
            cycle.pop_back();
            if (stop) return;
        }
        on_cycle[state] = 0;
    }
};

PreperiodicAddress stream(const std::vector<PairLabel>& path, const std::vector<PairLabel>& cycle,
                          bool second) {
    Word pre, per;
    for (auto [i, j] : path) pre.push_back(second ? j : i);
    for (auto [i, j] : cycle) per.push_back(second ? j : i);
    return PreperiodicAddress(std::move(pre), std::move(per));
}

bool shift_related(const PreperiodicAddress& s, const PreperiodicAddress& t) {
    std::size_t bound = s.preperiod().size() + s.period().size();
    PreperiodicAddress cur = s;
    for (std::size_t k = 1; k <= bound; ++k) {
        cur = cur.shift();
        if (cur == t) return true;
    }
    return false;
}

}  // namespace

FiniteClassReport check_finite_class_necessary_conditions(const Automaton& a) {
    FiniteClassReport rep;
    std::set<std::pair<std::string, std::string>> seen;
    LassoScan scan{a, static_cast<std::size_t>(2 * a.size() + 2),
                   [&](const std::vector<PairLabel>& path, const std::vector<PairLabel>& cycle) {
                       PreperiodicAddress s = stream(path, cycle, false);
                       PreperiodicAddress t = stream(path, cycle, true);
                       if (s == t) return true;
                       // shift-relatedness is the sharper diagnosis when a
                       // stream is also purely periodic
                       std::string reason;
                       if (shift_related(s, t) || shift_related(t, s))
                           reason = "shift";
                       else if (s.preperiod().empty() || t.preperiod().empty())
                           reason = "periodic";
                       if (!reason.empty() && seen.insert({s.str(), t.str()}).second)
                           rep.violations.push_back({s, t, reason});
                       return rep.violations.size() < 64;
                   }};
    scan.run();
    rep.clean = rep.violations.empty();
    return rep;
}

namespace {

std::string key_under(const Automaton& a, const std::vector<int>& digit_perm,
                      const std::vector<int>& state_perm) {
    // state_perm maps old index -> new index; serialize edges sorted.
    std::vector<std::tuple<int, int, int, int>> edges;
    for (int s = 0; s < a.size(); ++s)
        for (const auto& [lab, tgt] : a.next[s])
            edges.emplace_back(state_perm[s], digit_perm[lab.first], digit_perm[lab.second],
                               state_perm[tgt]);
    std::sort(edges.begin(), edges.end());
    std::vector<std::pair<int, int>> inv;
    for (int s = 0; s < a.size(); ++s)
        if (s <= a.inverse[s]) inv.emplace_back(state_perm[s], state_perm[a.inverse[s]]);
    std::sort(inv.begin(), inv.end());
    std::ostringstream os;
    os << a.m << '|' << state_perm[a.initial] << '|';
    for (auto [x, y] : inv) os << x << '~' << y << ';';
    os << '|';
    for (auto [s, i, j, t] : edges) os << s << ',' << i << ',' << j << ',' << t << ';';
    return os.str();
}

void state_perms(const Automaton& a, std::vector<std::vector<int>>& out) {
    // All root-fixing bijections. The induced involution is part of the
    // serialized key, so no compatibility filter is needed: two automata match
    // under some bijection iff their minimal serializations coincide.
    const int n = a.size();
    std::vector<int> base;
    for (int s = 0; s < n; ++s)
        if (s != a.initial) base.push_back(s);
    if (base.size() > 8) throw DomainError("automaton too large for canonical form (over 8 states)");
    std::vector<int> targets = base;
    std::sort(targets.begin(), targets.end());
    do {
        std::vector<int> perm(n, -1);
        perm[a.initial] = a.initial;
        for (std::size_t i = 0; i < base.size(); ++i) perm[base[i]] = targets[i];
        out.push_back(std::move(perm));
    } while (std::next_permutation(targets.begin(), targets.end()));
}

}  // namespace

std::string canonical_key(const Automaton& a) {
    std::vector<int> digits(a.m);
    std::iota(digits.begin(), digits.end(), 0);
    std::vector<std::vector<int>> sperms;
    state_perms(a, sperms);
    std::string best;
    std::vector<int> dperm(a.m);
    std::iota(dperm.begin(), dperm.end(), 0);
    do {
        for (const auto& sp : sperms) {
            std::string k = key_under(a, dperm, sp);
            if (best.empty() || k < best) best = k;
        }
    } while (std::next_permutation(dperm.begin(), dperm.end()));
    return best;
}

std::string canonical_key_fixed_digits(const Automaton& a) {
    std::vector<int> dperm(a.m);
    std::iota(dperm.begin(), dperm.end(), 0);
    std::vector<std::vector<int>> sperms;
    state_perms(a, sperms);
    std::string best;
    for (const auto& sp : sperms) {
        std::string k = key_under(a, dperm, sp);
        if (best.empty() || k < best) best = k;
    }
    return best;
}

}  // namespace topogen
