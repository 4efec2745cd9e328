#include "topogen/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "topogen/common.hpp"

namespace topogen {
namespace {

constexpr long long kCandidateBudget = 200000000;

const char* kStateNames[] = {"o", "a", "b", "c", "d"};

struct SlotOrbit {
    int state, i, j;   // primary slot
    bool self = false;  // single-slot orbit: target must be its own partner
};

}  // namespace

std::vector<Automaton> enumerate_automata(int num_states, int m,
                                          const EnumerationConstraints& constraints) {
    if (num_states < 0 || num_states > 4)
        throw UsageError("state count beside the root must be between 0 and 4");
    if (m < 1 || m > 4) throw UsageError("alphabet size must be between 1 and 4");
    const int q = num_states;

    // all involutions over states 1..q (state 0 is the root, fixed)
    std::vector<std::vector<int>> pairings;
    {
        std::vector<int> inv(q + 1, -1);
        inv[0] = 0;
        std::function<void(int)> rec = [&](int s) {
            while (s <= q && inv[s] >= 0) ++s;
            if (s > q) {
                pairings.push_back(inv);
                return;
            }
            inv[s] = s;
            rec(s + 1);
            inv[s] = -1;
            for (int t = s + 1; t <= q; ++t)
                if (inv[t] < 0) {
                    inv[s] = t;
                    inv[t] = s;
                    rec(s + 1);
                    inv[s] = inv[t] = -1;
                }
        };
        rec(1);
    }

    auto orbits_for = [&](const std::vector<int>& inv) {
        std::vector<SlotOrbit> orbits;
        std::set<std::tuple<int, int, int>> seen;
        for (int s = 0; s <= q; ++s)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    if (s == 0 && i == j) continue;  // fixed root loops
                    if (seen.count({s, i, j})) continue;
                    seen.insert({s, i, j});
                    const int ps = inv[s];
                    const bool self = ps == s && i == j;
                    if (!self) seen.insert({ps, j, i});
                    orbits.push_back({s, i, j, self});
                }
        return orbits;
    };

    // refuse searches whose candidate count would be unreasonable
    long long estimate = 0;
    for (const auto& inv : pairings) {
        int self_states = 0;
        for (int s = 1; s <= q; ++s)
            if (inv[s] == s) ++self_states;
        long long prod = 1;
        for (const SlotOrbit& ob : orbits_for(inv)) {
            const int choices = 1 + (ob.self ? self_states : q);
            prod *= choices;
            if (prod > kCandidateBudget) break;
        }
        estimate += prod;
        if (estimate > kCandidateBudget)
            throw UsageError("enumeration would examine more than " +
                             std::to_string(kCandidateBudget) +
                             " candidates for " + std::to_string(q) + " states over " +
                             std::to_string(m) + " digits; narrow the request");
    }

    std::map<std::string, Automaton> results;  // canonical key -> automaton
    for (const auto& inv : pairings) {
        auto orbits = orbits_for(inv);
        std::vector<int> self_targets;
        for (int s = 1; s <= q; ++s)
            if (inv[s] == s) self_targets.push_back(s);
        // tgt[s][i*m+j] = target state, -1 = absent
        std::vector<std::vector<int>> tgt(q + 1, std::vector<int>(m * m, -1));

        auto finalize = [&] {
            // every non-root state needs an outgoing edge
            for (int s = 1; s <= q; ++s) {
                bool any = false;
                for (int x : tgt[s]) any |= x >= 0;
                if (!any) return;
            }
            // and must be reachable from the root
            std::vector<char> reach(q + 1, 0);
            std::deque<int> bfs{0};
            reach[0] = 1;
            while (!bfs.empty()) {
                int s = bfs.front();
                bfs.pop_front();
                for (int x : tgt[s])
                    if (x >= 0 && !reach[x]) {
                        reach[x] = 1;
                        bfs.push_back(x);
                    }
            }
            for (int s = 1; s <= q; ++s)
                if (!reach[s]) return;

            RawAutomaton raw;
            raw.m = m;
            raw.initial = kStateNames[0];
            for (int s = 0; s <= q; ++s) {
                raw.states.push_back(kStateNames[s]);
                raw.inverse[kStateNames[s]] = kStateNames[inv[s]];
            }
            std::map<std::pair<int, int>, std::vector<PairLabel>> grouped;
            for (int i = 0; i < m; ++i) grouped[{0, 0}].push_back({i, i});
            for (int s = 0; s <= q; ++s)
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        int x = tgt[s][i * m + j];
                        if (x >= 0) grouped[{s, x}].push_back({i, j});
                    }
            for (const auto& [key, labels] : grouped)
                raw.edges.push_back(
                    {kStateNames[key.first], kStateNames[key.second], labels});
            Automaton a;
            try {
                a = compile(raw);
            } catch (const DomainError&) {
                return;  // should not happen; skip defensively
            }
            if (constraints.require_finite_class_conditions &&
                !check_finite_class_necessary_conditions(a).clean)
                return;
            if (constraints.require_connected_x1 && m > 1) {
                std::vector<int> comp(m);
                for (int i = 0; i < m; ++i) comp[i] = i;
                std::function<int(int)> find = [&](int x) {
                    return comp[x] == x ? x : comp[x] = find(comp[x]);
                };
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        if (i != j && tgt[0][i * m + j] >= 0) comp[find(i)] = find(j);
                for (int i = 1; i < m; ++i)
                    if (find(i) != find(0)) return;
            }
            results.try_emplace(canonical_key(a), std::move(a));
        };

        std::function<void(std::size_t)> rec = [&](std::size_t oi) {
            if (oi == orbits.size()) {
                finalize();
                return;
            }
            const SlotOrbit& ob = orbits[oi];
            const int pi = ob.j, pj = ob.i, ps = inv[ob.state];
            auto apply = [&](int c) {
                tgt[ob.state][ob.i * m + ob.j] = c;
                if (!ob.self) tgt[ps][pi * m + pj] = c < 0 ? -1 : inv[c];
                rec(oi + 1);
                tgt[ob.state][ob.i * m + ob.j] = -1;
                if (!ob.self) tgt[ps][pi * m + pj] = -1;
            };
            apply(-1);
            if (ob.self)
                for (int c : self_targets) apply(c);
            else
                for (int c = 1; c <= q; ++c) apply(c);
        };
        rec(0);
    }

    std::vector<Automaton> out;
    for (auto& [key, a] : results) out.push_back(std::move(a));
    return out;
}

}  // namespace topogen
