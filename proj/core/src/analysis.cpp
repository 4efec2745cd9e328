#include "topogen/analysis.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "topogen/common.hpp"

namespace topogen {

namespace {

// Product of the automaton with the forced left-hand address: node (state,
// phase into s), edges pick the free right-hand digit. Infinite paths from
// the start node are exactly the partners of s.
struct PartnerGraph {
    const Automaton& a;
    const PreperiodicAddress& s;
    int phases;      // |preperiod| + |period|
    int wrap_to;     // first periodic phase
    std::vector<std::vector<std::pair<int, int>>> out;  // node -> (digit j, node)
    std::vector<char> live, reach;

    static int node_id(int q, int p, int phases) { return q * phases + p; }

    PartnerGraph(const Automaton& a_, const PreperiodicAddress& s_) : a(a_), s(s_) {
        phases = static_cast<int>(s.preperiod().size() + s.period().size());
        wrap_to = static_cast<int>(s.preperiod().size());
        int n = a.size() * phases;
        out.assign(n, {});
        for (int q = 0; q < a.size(); ++q) {
            for (int p = 0; p < phases; ++p) {
                int i = s.digit_at(p);
                int pn = p + 1 < phases ? p + 1 : wrap_to;
                for (int j = 0; j < a.m; ++j)
                    if (auto qn = a.step(q, {i, j}))
                        out[node_id(q, p, phases)].push_back({j, node_id(*qn, pn, phases)});
            }
        }
        trim();
        mark_reachable();
    }

    void trim() {
        int n = static_cast<int>(out.size());
        std::vector<int> outdeg(n, 0);
        std::vector<std::vector<int>> preds(n);
        for (int v = 0; v < n; ++v)
            for (auto& [j, w] : out[v]) {
                ++outdeg[v];
                preds[w].push_back(v);
            }
        live.assign(n, 1);
        std::deque<int> dying;
        for (int v = 0; v < n; ++v)
            if (outdeg[v] == 0) dying.push_back(v);
        while (!dying.empty()) {
            int v = dying.front();
            dying.pop_front();
            if (!live[v]) continue;
            live[v] = 0;
            for (int u : preds[v])
                if (live[u] && --outdeg[u] == 0) dying.push_back(u);
        }
    }

    void mark_reachable() {
        reach.assign(out.size(), 0);
        int start = node_id(a.initial, 0, phases);
        if (!live[start]) return;
        std::deque<int> q{start};
        reach[start] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (auto& [j, w] : out[v])
                if (live[w] && !reach[w]) {
                    reach[w] = 1;
                    q.push_back(w);
                }
        }
    }

    int live_outdeg(int v) const {
        int d = 0;
        for (auto& [j, w] : out[v])
            if (live[w]) ++d;
        return d;
    }

    // True when some reachable live node sits on a cycle and still branches:
    // then distinct right-hand digit strings are uncountable in number.
    bool has_infinite_branching() const {
        int n = static_cast<int>(out.size());
        // Tarjan over the live reachable subgraph.
        std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
        std::vector<char> on_stack(n, 0);
        std::vector<int> stack;
        std::vector<char> self_loop(n, 0);
        int counter = 0, ncomp = 0;
        std::vector<std::pair<int, std::size_t>> call;
        for (int root = 0; root < n; ++root) {
            if (idx[root] != -1 || !live[root] || !reach[root]) continue;
            call.push_back({root, 0});
            while (!call.empty()) {
                auto& [v, ei] = call.back();
                if (ei == 0) {
                    idx[v] = low[v] = counter++;
                    stack.push_back(v);
                    on_stack[v] = 1;
                }
                bool descended = false;
                while (ei < out[v].size()) {
                    auto [j, w] = out[v][ei];
                    ++ei;
                    if (!live[w] || !reach[w]) continue;
                    if (w == v) self_loop[v] = 1;
                    if (idx[w] == -1) {
                        call.push_back({w, 0});
                        descended = true;
                        break;
                    }
                    if (on_stack[w]) low[v] = std::min(low[v], idx[w]);
                }
                if (descended) continue;
                if (low[v] == idx[v]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp[w] = ncomp;
                    } while (w != v);
                    ++ncomp;
                }
                int child = v;
                call.pop_back();
                if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[child]);
            }
        }
        std::vector<int> comp_size(ncomp, 0);
        for (int v = 0; v < n; ++v)
            if (comp[v] != -1) ++comp_size[comp[v]];
        for (int v = 0; v < n; ++v) {
            if (comp[v] == -1) continue;
            bool on_cycle = comp_size[comp[v]] > 1 || self_loop[v];
            if (on_cycle && live_outdeg(v) >= 2) return true;
        }
        return false;
    }

    // Enumerates all partners. Precondition: has_infinite_branching() is
    // false, so every walk becomes deterministic once it closes a cycle.
    std::vector<PreperiodicAddress> enumerate(std::size_t cap) const {
        std::vector<PreperiodicAddress> found;
        int start = node_id(a.initial, 0, phases);
        if (!live[start] || !reach[start])
            throw DomainError("internal: partner search lost its start node");
        std::vector<int> stack_nodes;
        std::vector<int> digits;
        std::vector<int> pos_on_stack(out.size(), -1);
        auto dfs = [&](auto&& self, int v) -> void {
            if (pos_on_stack[v] != -1) {
                int r = pos_on_stack[v];
                Word pre(digits.begin(), digits.begin() + r);
                Word per(digits.begin() + r, digits.end());
                found.push_back(PreperiodicAddress(pre, per));
                if (found.size() > cap)
                    throw DomainError("equivalence class exceeds bound " + std::to_string(cap));
                return;
            }
            pos_on_stack[v] = static_cast<int>(stack_nodes.size());
            stack_nodes.push_back(v);
            auto edges = out[v];
            std::sort(edges.begin(), edges.end());
            for (auto& [j, w] : edges) {
                if (!live[w]) continue;
                digits.push_back(j);
                self(self, w);
                digits.pop_back();
            }
            stack_nodes.pop_back();
            pos_on_stack[v] = -1;
        };
        dfs(dfs, start);
        return found;
    }
};

std::vector<PreperiodicAddress> partners(const Automaton& a, const PreperiodicAddress& s,
                                         std::size_t cap) {
    PartnerGraph g(a, s);
    if (g.has_infinite_branching())
        throw DomainError("infinitely many addresses equivalent to " + s.str());
    return g.enumerate(cap);
}

}  // namespace

EquivalenceClass class_of(const Automaton& a, const PreperiodicAddress& s, std::size_t bound) {
    if (s.min_alphabet() > a.m)
        throw UsageError("address digit out of range for " + std::to_string(a.m) + " digits");
    EquivalenceClass cls{s, {}};
    std::map<std::string, PreperiodicAddress> seen;
    std::deque<PreperiodicAddress> work;
    seen.emplace(s.str(), s);
    work.push_back(s);
    while (!work.empty()) {
        PreperiodicAddress u = work.front();
        work.pop_front();
        for (auto& t : partners(a, u, bound)) {
            if (seen.emplace(t.str(), t).second) {
                if (seen.size() > bound)
                    throw DomainError("equivalence class exceeds bound " + std::to_string(bound));
                work.push_back(t);
            }
        }
    }
    for (auto& [k, v] : seen) cls.members.push_back(v);
    return cls;
}

namespace {

// Labeled edges of the automaton minus the root's diagonal loops.
struct CycleGraph {
    int n = 0;
    std::vector<std::vector<int>> succ;        // structural successors (dedup)
    std::vector<int> labeled_out;              // labeled out-degree per state
    std::vector<std::vector<int>> labeled_to;  // per state: targets, one per label

    explicit CycleGraph(const Automaton& a) : n(a.size()) {
        succ.assign(n, {});
        labeled_out.assign(n, 0);
        labeled_to.assign(n, {});
        for (int q = 0; q < n; ++q) {
            std::set<int> targets;
            for (auto& [label, to] : a.next[q]) {
                if (q == a.initial && label.first == label.second && to == a.initial) continue;
                ++labeled_out[q];
                labeled_to[q].push_back(to);
                targets.insert(to);
            }
            succ[q].assign(targets.begin(), targets.end());
        }
    }
};

struct SccResult {
    std::vector<int> comp;  // state -> component id
    int ncomp = 0;
};

SccResult scc_of(const CycleGraph& g) {
    SccResult r;
    r.comp.assign(g.n, -1);
    std::vector<int> idx(g.n, -1), low(g.n, 0);
    std::vector<char> on_stack(g.n, 0);
    std::vector<int> stack;
    int counter = 0;
    std::vector<std::pair<int, std::size_t>> call;
    for (int root = 0; root < g.n; ++root) {
        if (idx[root] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, ei] = call.back();
            if (ei == 0) {
                idx[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (ei < g.succ[v].size()) {
                int w = g.succ[v][ei];
                ++ei;
                if (idx[w] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], idx[w]);
            }
            if (descended) continue;
            if (low[v] == idx[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    r.comp[w] = r.ncomp;
                } while (w != v);
                ++r.ncomp;
            }
            int child = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[child]);
        }
    }
    return r;
}

}  // namespace

PcfReport is_pcf(const Automaton& a) {
    CycleGraph g(a);
    SccResult scc = scc_of(g);

    std::vector<int> comp_nodes(scc.ncomp, 0), comp_edges(scc.ncomp, 0);
    std::vector<char> comp_cyclic(scc.ncomp, 0);
    std::vector<int> comp_sample(scc.ncomp, -1);
    for (int v = 0; v < g.n; ++v) {
        int c = scc.comp[v];
        ++comp_nodes[c];
        comp_sample[c] = v;
        for (int w : g.labeled_to[v])
            if (scc.comp[w] == c) ++comp_edges[c];
    }
    for (int c = 0; c < scc.ncomp; ++c) comp_cyclic[c] = comp_edges[c] > 0;

    PcfReport report;
    for (int c = 0; c < scc.ncomp; ++c) {
        if (comp_edges[c] > comp_nodes[c]) {
            // Two labeled cycles share this component; name its states.
            for (int v = 0; v < g.n; ++v)
                if (scc.comp[v] == c) report.witness.push_back(a.names[v]);
            report.pcf = false;
            return report;
        }
    }

    // Path from one cycle component into a different one?
    for (int c = 0; c < scc.ncomp; ++c) {
        if (!comp_cyclic[c]) continue;
        // BFS from the cycle states of c through the structural graph.
        std::vector<int> parent(g.n, -2);
        std::deque<int> q;
        for (int v = 0; v < g.n; ++v)
            if (scc.comp[v] == c) {
                parent[v] = -1;
                q.push_back(v);
            }
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            if (scc.comp[v] != c && comp_cyclic[scc.comp[v]]) {
                for (int u = v; u != -1; u = parent[u]) report.witness.push_back(a.names[u]);
                std::reverse(report.witness.begin(), report.witness.end());
                report.pcf = false;
                return report;
            }
            for (int w : g.succ[v])
                if (parent[w] == -2) {
                    parent[w] = v;
                    q.push_back(w);
                }
        }
    }

    report.pcf = true;
    return report;
}

DiagonalStructure diagonal_structure(const Automaton& a) {
    DiagonalStructure out;
    std::vector<char> seen(a.size(), 0);
    std::deque<int> q{a.initial};
    seen[a.initial] = 1;
    std::vector<int> order;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        order.push_back(v);
        for (int i = 0; i < a.m; ++i) {
            auto w = a.step(v, {i, i});
            if (!w)
                throw DomainError("state " + a.names[v] + " lacks the (" + std::to_string(i) + "," +
                                  std::to_string(i) + ") edge needed by the diagonal structure");
            if (!seen[*w]) {
                seen[*w] = 1;
                q.push_back(*w);
            }
        }
    }

    auto set_symbol = [&](int v) {
        return v == a.initial ? std::string("X") : "X^" + a.names[v];
    };
    auto map_symbol = [&](int v, int i) {
        std::string s = "h_" + std::to_string(i);
        if (v != a.initial) s += "^" + a.names[v];
        return s;
    };
    for (int v : order) {
        out.states.push_back(a.names[v]);
        std::string eq = set_symbol(v) + " = ";
        for (int i = 0; i < a.m; ++i) {
            int w = *a.step(v, {i, i});
            out.d[{a.names[v], i}] = a.names[w];
            if (i) eq += " ∪ ";
            eq += map_symbol(v, i) + "(" + set_symbol(w) + ")";
        }
        out.equations.push_back(eq);
    }
    return out;
}

}  // namespace topogen
