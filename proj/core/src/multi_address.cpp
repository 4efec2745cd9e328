#include "topogen/multi_address.hpp"

#include <algorithm>
#include <bitset>
#include <cassert>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "topogen/common.hpp"

namespace topogen {
namespace {

using PairMask = std::bitset<kMaxTupleArity * kMaxTupleArity>;

int pair_bit(int a, int b) {
    if (a > b) std::swap(a, b);
    return a * kMaxTupleArity + b;
}

PairMask all_pairs(int k) {
    PairMask m;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) m.set(pair_bit(a, b));
    return m;
}

PairMask equal_digit_pairs(const std::vector<int>& label) {
    PairMask m;
    const int k = static_cast<int>(label.size());
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (label[a] == label[b]) m.set(pair_bit(a, b));
    return m;
}

PairMask transport(const PairMask& m, const std::vector<int>& perm, int k) {
    PairMask r;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (m.test(pair_bit(a, b))) r.set(pair_bit(perm[a], perm[b]));
    return r;
}

PairMask transport_back(const PairMask& m, const std::vector<int>& perm, int k) {
    PairMask r;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (m.test(pair_bit(perm[a], perm[b]))) r.set(pair_bit(a, b));
    return r;
}

// Neighbor lists; the stored edge state is read a->b, the reverse direction
// uses the involution partner.
std::vector<std::vector<std::pair<int, int>>> adjacency(const CouplingTree& t,
                                                        const Automaton& g2) {
    std::vector<std::vector<std::pair<int, int>>> adj(t.k);
    for (const TreeEdge& e : t.edges) {
        adj[e.a].push_back({e.b, e.state});
        adj[e.b].push_back({e.a, g2.inverse[e.state]});
    }
    return adj;
}

std::string encode_rooted(int v, int parent,
                          const std::vector<std::vector<std::pair<int, int>>>& adj) {
    std::vector<std::string> toks;
    for (auto [c, s] : adj[v])
        if (c != parent) toks.push_back(std::to_string(s) + ":" + encode_rooted(c, v, adj));
    std::sort(toks.begin(), toks.end());
    std::string out = "(";
    for (const auto& t : toks) {
        out += t;
        out += ',';
    }
    out += ')';
    return out;
}

void assign_canonical(int v, int parent,
                      const std::vector<std::vector<std::pair<int, int>>>& adj,
                      std::vector<int>& sigma, int& next) {
    sigma[v] = next++;
    std::vector<std::tuple<std::string, int>> kids;
    for (auto [c, s] : adj[v])
        if (c != parent)
            kids.push_back({std::to_string(s) + ":" + encode_rooted(c, v, adj), c});
    std::sort(kids.begin(), kids.end());
    for (auto& [tok, c] : kids) assign_canonical(c, v, adj, sigma, next);
}

struct CanonTree {
    std::string key;
    std::vector<int> sigma;  // input coordinate -> canonical coordinate
    CouplingTree tree;
};

// Canonical form of a labeled free tree: root at the (encoding-minimal)
// center, children ordered by subtree encoding. Isomorphic inputs share the
// key and the canonical edge list.
CanonTree canonicalize_tree(const CouplingTree& in, const Automaton& g2) {
    auto adj = adjacency(in, g2);
    std::vector<int> deg(in.k);
    for (int v = 0; v < in.k; ++v) deg[v] = static_cast<int>(adj[v].size());
    std::vector<char> gone(in.k, 0);
    int remaining = in.k;
    std::vector<int> layer;
    for (int v = 0; v < in.k; ++v)
        if (deg[v] <= 1) layer.push_back(v);
    while (remaining > 2) {
        std::vector<int> nxt;
        for (int v : layer) {
            gone[v] = 1;
            --remaining;
            for (auto [c, s] : adj[v])
                if (!gone[c] && --deg[c] == 1) nxt.push_back(c);
        }
        layer = std::move(nxt);
    }
    std::vector<int> centers;
    for (int v = 0; v < in.k; ++v)
        if (!gone[v]) centers.push_back(v);
    int root = centers[0];
    if (centers.size() == 2) {
        std::string e0 = encode_rooted(centers[0], -1, adj);
        std::string e1 = encode_rooted(centers[1], -1, adj);
        root = e1 < e0 ? centers[1] : centers[0];
    }
    CanonTree out;
    out.sigma.assign(in.k, -1);
    int next = 0;
    assign_canonical(root, -1, adj, out.sigma, next);
    out.tree.k = in.k;
    for (const TreeEdge& e : in.edges) {
        int na = out.sigma[e.a], nb = out.sigma[e.b];
        if (na < nb)
            out.tree.edges.push_back({na, nb, e.state});
        else
            out.tree.edges.push_back({nb, na, g2.inverse[e.state]});
    }
    std::sort(out.tree.edges.begin(), out.tree.edges.end());
    out.key = "k" + std::to_string(in.k) + encode_rooted(root, -1, adj);
    return out;
}

bool is_chain(const CouplingTree& t) {
    if (t.k <= 2) return true;
    std::vector<int> deg(t.k, 0);
    for (const TreeEdge& e : t.edges) {
        ++deg[e.a];
        ++deg[e.b];
    }
    return std::all_of(deg.begin(), deg.end(), [](int d) { return d <= 2; });
}

std::string join_state_names(const std::vector<std::string>& parts) {
    bool single = std::all_of(parts.begin(), parts.end(),
                              [](const std::string& p) { return p.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i && !single) out += '-';
        out += parts[i];
    }
    return out;
}

// Edge states read along the path, lexicographically smaller orientation.
std::string chain_name(const CouplingTree& t, const Automaton& g2) {
    if (t.k == 2) {
        const std::string& f = g2.names[t.edges[0].state];
        const std::string& r = g2.names[g2.inverse[t.edges[0].state]];
        return std::min(f, r);
    }
    auto adj = adjacency(t, g2);
    std::vector<int> ends;
    for (int v = 0; v < t.k; ++v)
        if (adj[v].size() == 1) ends.push_back(v);
    std::vector<std::string> best;
    for (int e : ends) {
        std::vector<std::string> walk;
        int prev = -1, cur = e;
        while (static_cast<int>(walk.size()) < t.k - 1) {
            for (auto [c, s] : adj[cur])
                if (c != prev) {
                    walk.push_back(g2.names[s]);
                    prev = cur;
                    cur = c;
                    break;
                }
        }
        if (best.empty() || walk < best) best = std::move(walk);
    }
    return join_state_names(best);
}

struct Namer {
    std::map<std::string, int> used;
    std::string get(const std::string& base) {
        int& n = used[base];
        ++n;
        return n == 1 ? base : base + "#" + std::to_string(n);
    }
};

std::vector<std::vector<int>> index_out(const TupleAutomaton& t) {
    std::vector<std::vector<int>> out(t.states.size());
    for (std::size_t i = 0; i < t.transitions.size(); ++i)
        out[t.transitions[i].from].push_back(static_cast<int>(i));
    return out;
}

CouplingTree all_root_chain(int k, int root_state) {
    CouplingTree t;
    t.k = k;
    for (int i = 0; i + 1 < k; ++i) t.edges.push_back({i, i + 1, root_state});
    return t;
}

CouplingTree attach_chain(int k, int root_state, int leaf_state) {
    CouplingTree t = all_root_chain(k - 1, root_state);
    t.k = k;
    t.edges.push_back({k - 2, k - 1, leaf_state});
    std::sort(t.edges.begin(), t.edges.end());
    return t;
}

void finish_transitions(TupleAutomaton& t, std::set<TupleTransition>&& acc) {
    t.transitions.assign(acc.begin(), acc.end());
}

}  // namespace

std::vector<std::vector<int>> TupleAutomaton::out_index() const {
    return index_out(*this);
}

TupleAutomaton tuple_cleanup(TupleAutomaton t) {
    if (t.empty()) {
        t.states.clear();
        t.transitions.clear();
        t.initial = -1;
        return t;
    }
    const int n = t.size();
    const int k = t.k;
    std::vector<char> alive(n, 1);
    auto make_empty = [&] {
        t.states.clear();
        t.transitions.clear();
        t.initial = -1;
        return t;
    };
    const PairMask kAll = all_pairs(k);
    bool changed = true;
    while (changed) {
        changed = false;
        auto live_edge = [&](const TupleTransition& e) {
            return alive[e.from] && alive[e.to];
        };
        // reachability from the start state
        {
            std::vector<char> seen(n, 0);
            std::deque<int> bfs{t.initial};
            seen[t.initial] = 1;
            while (!bfs.empty()) {
                int v = bfs.front();
                bfs.pop_front();
                for (const TupleTransition& e : t.transitions)
                    if (e.from == v && live_edge(e) && !seen[e.to]) {
                        seen[e.to] = 1;
                        bfs.push_back(e.to);
                    }
            }
            for (int v = 0; v < n; ++v)
                if (alive[v] && !seen[v]) {
                    alive[v] = 0;
                    changed = true;
                }
        }
        // trim states with no live outgoing edge (the start state included)
        {
            bool trimmed = true;
            while (trimmed) {
                trimmed = false;
                std::vector<char> has_out(n, 0);
                for (const TupleTransition& e : t.transitions)
                    if (live_edge(e)) has_out[e.from] = 1;
                for (int v = 0; v < n; ++v)
                    if (alive[v] && !has_out[v]) {
                        alive[v] = 0;
                        trimmed = true;
                        changed = true;
                    }
            }
        }
        if (!alive[t.initial]) return make_empty();
        // remove states where some coordinate pair is equal along every
        // access path and every continuation (all runs through the state
        // would repeat an address)
        {
            std::vector<PairMask> in(n, kAll), out(n, kAll);
            bool more = true;
            while (more) {
                more = false;
                for (const TupleTransition& e : t.transitions) {
                    if (!alive[e.from] || !alive[e.to]) continue;
                    if (e.to == t.initial) continue;  // only its own launch loops
                    PairMask contrib =
                        transport(in[e.from] & equal_digit_pairs(e.label), e.perm, k);
                    PairMask nv = in[e.to] & contrib;
                    if (nv != in[e.to]) {
                        in[e.to] = nv;
                        more = true;
                    }
                }
            }
            more = true;
            while (more) {
                more = false;
                for (int v = 0; v < n; ++v) {
                    if (!alive[v]) continue;
                    PairMask nv = kAll;
                    for (const TupleTransition& e : t.transitions)
                        if (e.from == v && alive[e.to])
                            nv &= equal_digit_pairs(e.label) &
                                  transport_back(out[e.to], e.perm, k);
                    if (nv != out[v]) {
                        out[v] = nv;
                        more = true;
                    }
                }
            }
            for (int v = 0; v < n; ++v)
                if (alive[v] && (in[v] & out[v]).any()) {
                    alive[v] = 0;
                    changed = true;
                }
            if (!alive[t.initial]) return make_empty();
        }
    }
    // compact
    std::vector<int> remap(n, -1);
    int nn = 0;
    for (int v = 0; v < n; ++v)
        if (alive[v]) remap[v] = nn++;
    std::vector<TupleState> states;
    states.reserve(nn);
    for (int v = 0; v < n; ++v)
        if (alive[v]) states.push_back(std::move(t.states[v]));
    std::vector<TupleTransition> trans;
    for (TupleTransition& e : t.transitions)
        if (alive[e.from] && alive[e.to]) {
            e.from = remap[e.from];
            e.to = remap[e.to];
            trans.push_back(std::move(e));
        }
    std::sort(trans.begin(), trans.end());
    trans.erase(std::unique(trans.begin(), trans.end()), trans.end());
    t.states = std::move(states);
    t.transitions = std::move(trans);
    t.initial = remap[t.initial];
    return t;
}

TupleAutomaton as_tuple(const Automaton& g2) {
    TupleAutomaton t;
    t.m = g2.m;
    t.k = 2;
    t.pair_automaton = g2;
    t.initial = g2.initial;
    for (int i = 0; i < g2.size(); ++i) {
        TupleState s;
        s.name = g2.names[i];
        s.tree = CouplingTree{2, {{0, 1, i}}};
        s.stage = i == g2.initial ? StreamStage::launch : StreamStage::committed;
        t.states.push_back(std::move(s));
    }
    for (int i = 0; i < g2.size(); ++i)
        for (const auto& [label, j] : g2.next[i])
            t.transitions.push_back({i, j, {label.first, label.second}, {0, 1}});
    std::sort(t.transitions.begin(), t.transitions.end());
    return tuple_cleanup(std::move(t));
}

namespace {

constexpr std::size_t kStateBudget = 1000000;

struct CandState {
    std::string key;
    CouplingTree tree;
    StreamStage stage = StreamStage::committed;
    int attach_state = -1;  // pair state on the attach edge, attach stage only
};

}  // namespace

TupleAutomaton extend(const TupleAutomaton& gk, const Automaton& g2) {
    const int k = gk.k;
    const int K = k + 1;
    TupleAutomaton cand;
    cand.m = g2.m;
    cand.k = K;
    cand.pair_automaton = g2;
    cand.initial = -1;
    if (gk.empty()) return cand;
    if (K > kMaxTupleArity)
        throw DomainError("tuple arity " + std::to_string(K) + " exceeds engine limit");

    const int root = g2.initial;
    auto gk_out = index_out(gk);

    std::vector<CandState> states;
    std::map<std::string, int> by_key;
    auto ensure = [&](CandState s) {
        auto it = by_key.find(s.key);
        if (it != by_key.end()) return it->second;
        if (states.size() >= kStateBudget)
            throw DomainError("tuple automaton construction exceeded state budget");
        int id = static_cast<int>(states.size());
        by_key.emplace(s.key, id);
        states.push_back(std::move(s));
        return id;
    };

    // states keyed so that the all-equal launch state and the attach states
    // (one split-off stream, the rest interchangeable) are identified across
    // every way of arranging their equal coordinates
    auto ensure_launch = [&] {
        CandState s;
        s.key = "L";
        s.tree = all_root_chain(K, root);
        s.stage = StreamStage::launch;
        return ensure(std::move(s));
    };
    auto ensure_attach = [&](int q) {
        CandState s;
        s.key = "A:" + std::to_string(q);
        s.tree = attach_chain(K, root, q);
        s.stage = StreamStage::attach;
        s.attach_state = q;
        return ensure(std::move(s));
    };
    struct Prov {
        int T = -1;  // source-automaton state the first k coordinates are in
        int j = -1;  // coordinate the new stream is attached to
        int q = -1;  // pair state of the attach edge
        std::vector<int> rho;  // layout (0..k-1, leaf k) -> canonical coords
    };
    auto ensure_committed = [&](const CouplingTree& layout) {
        CanonTree c = canonicalize_tree(layout, g2);
        CandState s;
        s.key = "C:" + c.key;
        s.tree = std::move(c.tree);
        s.stage = StreamStage::committed;
        int id = ensure(std::move(s));
        return std::pair<int, std::vector<int>>(id, std::move(c.sigma));
    };

    std::set<TupleTransition> acc;
    std::set<std::tuple<int, int, int>> seen_prov;
    std::deque<std::pair<int, Prov>> work;  // committed provenance entries
    std::deque<int> attach_work;            // attach states by pair state
    std::set<int> attach_seen;

    const int launch_id = ensure_launch();
    cand.initial = launch_id;

    auto committed_target = [&](int Tp, int jp, int qp) {
        CouplingTree layout = gk.states[Tp].tree;
        layout.k = K;
        layout.edges.push_back({jp, k, qp});
        std::sort(layout.edges.begin(), layout.edges.end());
        auto [cid, sigma] = ensure_committed(layout);
        if (seen_prov.emplace(Tp, jp, qp).second)
            work.push_back({cid, Prov{Tp, jp, qp, sigma}});
        return std::pair<int, std::vector<int>>(cid, std::move(sigma));
    };

    // transitions out of the launch state and the attach states; the first k
    // coordinates run through the source automaton's start state, the leaf
    // pair evolves on its own until the block commits
    auto process_symmetric = [&](int from_id, int leaf_state) {
        for (int ti : gk_out[gk.initial]) {
            const TupleTransition& e = gk.transitions[ti];
            if (e.to == gk.initial) {
                const int c = e.label[0];
                for (int d = 0; d < g2.m; ++d) {
                    auto q2 = g2.step(leaf_state, {c, d});
                    if (!q2) continue;
                    std::vector<int> label(K - 1, c);
                    label.push_back(d);
                    std::vector<int> perm(K);
                    std::iota(perm.begin(), perm.end(), 0);
                    int to;
                    if (*q2 == root) {
                        to = launch_id;
                    } else {
                        to = ensure_attach(*q2);
                        if (attach_seen.insert(*q2).second) attach_work.push_back(*q2);
                    }
                    acc.insert({from_id, to, std::move(label), std::move(perm)});
                }
            } else {
                for (int j = 0; j < k; ++j)
                    for (int d = 0; d < g2.m; ++d) {
                        auto q2 = g2.step(leaf_state, {e.label[j], d});
                        if (!q2) continue;
                        auto [cid, sigma] = committed_target(e.to, e.perm[j], *q2);
                        std::vector<int> label = e.label;
                        label.push_back(d);
                        std::vector<int> perm(K);
                        for (int c = 0; c < k; ++c) perm[c] = sigma[e.perm[c]];
                        perm[k] = sigma[k];
                        acc.insert({from_id, cid, std::move(label), std::move(perm)});
                    }
            }
        }
    };

    process_symmetric(launch_id, root);
    while (!attach_work.empty() || !work.empty()) {
        if (!attach_work.empty()) {
            int q = attach_work.front();
            attach_work.pop_front();
            process_symmetric(by_key.at("A:" + std::to_string(q)), q);
            continue;
        }
        auto [cid, prov] = std::move(work.front());
        work.pop_front();
        for (int ti : gk_out[prov.T]) {
            const TupleTransition& e = gk.transitions[ti];
            for (int d = 0; d < g2.m; ++d) {
                auto q2 = g2.step(prov.q, {e.label[prov.j], d});
                if (!q2) continue;
                auto [cid2, sigma2] = committed_target(e.to, e.perm[prov.j], *q2);
                std::vector<int> label(K), perm(K);
                for (int c = 0; c < k; ++c) {
                    label[prov.rho[c]] = e.label[c];
                    perm[prov.rho[c]] = sigma2[e.perm[c]];
                }
                label[prov.rho[k]] = d;
                perm[prov.rho[k]] = sigma2[k];
                acc.insert({cid, cid2, std::move(label), std::move(perm)});
            }
        }
    }

    Namer namer;
    for (std::size_t i = 0; i < states.size(); ++i) {
        TupleState s;
        s.tree = std::move(states[i].tree);
        s.stage = states[i].stage;
        s.name = namer.get(is_chain(s.tree) ? chain_name(s.tree, g2)
                                            : "y" + std::to_string(i));
        cand.states.push_back(std::move(s));
    }
    finish_transitions(cand, std::move(acc));
    return tuple_cleanup(std::move(cand));
}

TupleAutomaton build_G3(const Automaton& g2) {
    // Plain product: chains 1-2-3 over ordered state pairs, no symmetry
    // quotient. Cleanup then drops the degenerate part.
    TupleAutomaton t;
    t.m = g2.m;
    t.k = 3;
    t.pair_automaton = g2;
    const int n = g2.size();
    std::vector<int> index(static_cast<std::size_t>(n) * n, -1);
    std::deque<std::pair<int, int>> work;
    auto ensure = [&](int s1, int s2) {
        int& ix = index[static_cast<std::size_t>(s1) * n + s2];
        if (ix < 0) {
            ix = t.size();
            TupleState st;
            st.name = join_state_names({g2.names[s1], g2.names[s2]});
            st.tree.k = 3;
            st.tree.edges = {{0, 1, s1}, {1, 2, s2}};
            st.stage = StreamStage::committed;
            t.states.push_back(std::move(st));
            work.push_back({s1, s2});
        }
        return ix;
    };
    t.initial = ensure(g2.initial, g2.initial);
    while (!work.empty()) {
        auto [s1, s2] = work.front();
        work.pop_front();
        const int from = index[static_cast<std::size_t>(s1) * n + s2];
        for (const auto& [l1, t1] : g2.next[s1])
            for (const auto& [l2, t2] : g2.next[s2])
                if (l1.second == l2.first)
                    t.transitions.push_back({from, ensure(t1, t2),
                                             {l1.first, l1.second, l2.second},
                                             {0, 1, 2}});
    }
    std::sort(t.transitions.begin(), t.transitions.end());
    return tuple_cleanup(std::move(t));
}

TupleAutomaton duplicate_collapse(TupleAutomaton t) {
    // First contract coordinate pairs that are forced equal on every run
    // (arity drops), then clean per-state degeneracies.
    while (true) {
        t = [&] {  // reach + trim only, keep degenerate components for now
            if (t.empty()) return std::move(t);
            const int n = t.size();
            std::vector<char> alive(n, 1);
            bool more = true;
            while (more) {
                more = false;
                std::vector<char> seen(n, 0), has_out(n, 0);
                std::deque<int> bfs{t.initial};
                if (alive[t.initial]) seen[t.initial] = 1;
                while (!bfs.empty()) {
                    int v = bfs.front();
                    bfs.pop_front();
                    for (const TupleTransition& e : t.transitions)
                        if (e.from == v && alive[e.to] && !seen[e.to]) {
                            seen[e.to] = 1;
                            bfs.push_back(e.to);
                        }
                }
                for (const TupleTransition& e : t.transitions)
                    if (alive[e.from] && alive[e.to] && seen[e.from]) has_out[e.from] = 1;
                for (int v = 0; v < n; ++v)
                    if (alive[v] && (!seen[v] || !has_out[v])) {
                        alive[v] = 0;
                        more = true;
                    }
            }
            if (!alive[t.initial]) {
                t.states.clear();
                t.transitions.clear();
                t.initial = -1;
                return std::move(t);
            }
            std::vector<int> remap(n, -1);
            int nn = 0;
            for (int v = 0; v < n; ++v)
                if (alive[v]) remap[v] = nn++;
            std::vector<TupleState> ns;
            for (int v = 0; v < n; ++v)
                if (alive[v]) ns.push_back(std::move(t.states[v]));
            std::vector<TupleTransition> ne;
            for (TupleTransition& e : t.transitions)
                if (alive[e.from] && alive[e.to]) {
                    e.from = remap[e.from];
                    e.to = remap[e.to];
                    ne.push_back(std::move(e));
                }
            std::sort(ne.begin(), ne.end());
            t.states = std::move(ns);
            t.transitions = std::move(ne);
            t.initial = remap[t.initial];
            return std::move(t);
        }();
        if (t.empty() || t.k <= 2) break;
        const int n = t.size();
        const int k = t.k;
        // pairs equal along every infinite run from the start
        std::vector<PairMask> out(n, all_pairs(k));
        bool more = true;
        while (more) {
            more = false;
            for (int v = 0; v < n; ++v) {
                PairMask nv = all_pairs(k);
                for (const TupleTransition& e : t.transitions)
                    if (e.from == v)
                        nv &= equal_digit_pairs(e.label) & transport_back(out[e.to], e.perm, k);
                if (nv != out[v]) {
                    out[v] = nv;
                    more = true;
                }
            }
        }
        int pa = -1, pb = -1;
        for (int a = 0; a < k && pa < 0; ++a)
            for (int b = a + 1; b < k; ++b)
                if (out[t.initial].test(pair_bit(a, b))) {
                    pa = a;
                    pb = b;
                    break;
                }
        if (pa < 0) break;
        // carry the pair along runs; collapse only when each state sees one
        std::vector<std::set<std::pair<int, int>>> at(n);
        at[t.initial].insert({pa, pb});
        std::deque<int> bfs{t.initial};
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            for (const TupleTransition& e : t.transitions)
                if (e.from == v)
                    for (auto [a, b] : at[v]) {
                        int na = e.perm[a], nb = e.perm[b];
                        if (na > nb) std::swap(na, nb);
                        if (at[e.to].insert({na, nb}).second) bfs.push_back(e.to);
                    }
        }
        bool ambiguous = std::any_of(at.begin(), at.end(),
                                     [](const auto& s) { return s.size() > 1; });
        if (ambiguous) break;
        std::vector<int> keep(n), drop(n);
        for (int v = 0; v < n; ++v) {
            auto [a, b] = *at[v].begin();
            keep[v] = a;
            drop[v] = b;
        }
        // project the dropped coordinate out of every state and transition
        for (int v = 0; v < n; ++v) {
            CouplingTree& tr = t.states[v].tree;
            std::vector<TreeEdge> edges;
            // re-hang edges of the dropped node onto the kept one, skipping
            // any edge that would close a cycle
            std::vector<int> uf(k);
            std::iota(uf.begin(), uf.end(), 0);
            std::function<int(int)> find = [&](int x) {
                return uf[x] == x ? x : uf[x] = find(uf[x]);
            };
            std::vector<TreeEdge> moved;
            for (TreeEdge e : tr.edges) {
                int na = e.a == drop[v] ? keep[v] : e.a;
                int nb = e.b == drop[v] ? keep[v] : e.b;
                int st = e.state;
                if (na == nb) continue;  // the collapsed pair's own edge
                if (na > nb) {
                    std::swap(na, nb);
                    st = t.pair_automaton.inverse[st];
                }
                moved.push_back({na, nb, st});
            }
            std::sort(moved.begin(), moved.end());
            for (const TreeEdge& e : moved) {
                int ra = find(e.a), rb = find(e.b);
                if (ra == rb) continue;
                uf[ra] = rb;
                edges.push_back(e);
            }
            // reindex coordinates above the dropped one
            for (TreeEdge& e : edges) {
                if (e.a > drop[v]) --e.a;
                if (e.b > drop[v]) --e.b;
                if (e.a > e.b) {
                    std::swap(e.a, e.b);
                    e.state = t.pair_automaton.inverse[e.state];
                }
            }
            std::sort(edges.begin(), edges.end());
            tr.k = k - 1;
            tr.edges = std::move(edges);
        }
        std::vector<TupleTransition> trans;
        for (const TupleTransition& e : t.transitions) {
            TupleTransition ne;
            ne.from = e.from;
            ne.to = e.to;
            for (int c = 0; c < k; ++c) {
                if (c == drop[e.from]) continue;
                int vto = e.perm[c];
                if (vto == drop[e.to]) vto = keep[e.to];
                if (vto > drop[e.to]) --vto;
                ne.label.push_back(e.label[c]);
                ne.perm.push_back(vto);
            }
            trans.push_back(std::move(ne));
        }
        std::sort(trans.begin(), trans.end());
        trans.erase(std::unique(trans.begin(), trans.end()), trans.end());
        t.transitions = std::move(trans);
        t.k = k - 1;
        Namer namer;
        for (std::size_t i = 0; i < t.states.size(); ++i)
            t.states[i].name = namer.get(is_chain(t.states[i].tree)
                                             ? chain_name(t.states[i].tree, t.pair_automaton)
                                             : "y" + std::to_string(i));
    }
    return tuple_cleanup(std::move(t));
}

namespace {

// One way a run could still lift into the candidate: the candidate state it
// would be in, plus where the tracked streams sit among its coordinates.
// Streams that have read identical digits so far are interchangeable, so
// placements are stored per equality class as slot sets; at the candidate's
// launch state any placement works and at an attach state only the identity
// of the stream on the attach edge matters.
struct Config {
    int u = -1;
    int owner = -2;  // attach stage: class on the attach edge, -1 = the new stream
    std::vector<std::vector<int>> slots;  // committed stage: class -> slot set
    // Tracked class whose digit history the extra stream still matches, or -1
    // once it has differed from every tracked stream. Only a dup==-1 lift can
    // close into an extension by a genuinely new address, and -1 is absorbing.
    int dup = 0;
    friend auto operator<=>(const Config&, const Config&) = default;
};

using Witness = std::vector<Config>;  // sorted, unique

struct Refinement {
    std::vector<int> target_class;            // per target coordinate
    std::map<std::pair<int, int>, int> id;    // (source class, digit) -> target class
    int classes = 0;
};

Refinement refine_partition(const std::vector<int>& P, const std::vector<int>& label,
                            const std::vector<int>& perm) {
    const int k = static_cast<int>(P.size());
    std::vector<int> inv(k);
    for (int c = 0; c < k; ++c) inv[perm[c]] = c;
    Refinement r;
    r.target_class.assign(k, -1);
    for (int tc = 0; tc < k; ++tc) {
        int src = inv[tc];
        auto key = std::pair<int, int>(P[src], label[src]);
        auto it = r.id.find(key);
        if (it == r.id.end()) it = r.id.emplace(key, r.classes++).first;
        r.target_class[tc] = it->second;
    }
    return r;
}

struct ClassNeed {
    int new_id = 0;
    int digit = 0;
    int size = 0;
};

constexpr std::size_t kWitnessBudget = 200000;

// Distributes the needed classes over distinct slots whose label digit
// matches, one subset choice at a time.
void distribute(const std::vector<ClassNeed>& needs, std::size_t idx,
                const std::vector<int>& slot_digits, const std::vector<int>& allowed,
                std::vector<char>& used, std::vector<std::vector<int>>& acc,
                const std::function<void()>& emit, std::size_t& budget) {
    if (idx == needs.size()) {
        if (budget-- == 0)
            throw DomainError("completeness analysis exceeded witness budget");
        emit();
        return;
    }
    const ClassNeed& need = needs[idx];
    std::vector<int> pool;
    for (int s : allowed)
        if (!used[s] && slot_digits[s] == need.digit) pool.push_back(s);
    if (static_cast<int>(pool.size()) < need.size) return;
    std::vector<int> pick(need.size);
    std::function<void(int, int)> choose = [&](int from, int got) {
        if (got == need.size) {
            for (int s : pick) used[s] = 1;
            acc[need.new_id] = pick;
            distribute(needs, idx + 1, slot_digits, allowed, used, acc, emit, budget);
            for (int s : pick) used[s] = 0;
            acc[need.new_id].clear();
            return;
        }
        for (int i = from; i <= static_cast<int>(pool.size()) - (need.size - got); ++i) {
            pick[got] = pool[i];
            choose(i + 1, got + 1);
        }
    };
    choose(0, 0);
}

struct CandView {
    const TupleAutomaton* a = nullptr;
    std::vector<std::vector<int>> out;
    int K = 0;
    bool empty() const { return a == nullptr || a->empty(); }
};

// Advances one lift across one transition of the tracked automaton;
// placements are re-derived through digit matching and every successor is
// handed to the sink. The tracked transition's own permutation is already
// folded into the refinement.
template <typename Sink>
void evolve_config(const CandView& cand, const Config& cf, const std::vector<int>& L,
                   const std::vector<int>& P, const std::vector<std::vector<int>>& members,
                   const Refinement& R, std::size_t& budget, const Sink& sink) {
    const TupleAutomaton& ca = *cand.a;
    const int k = static_cast<int>(P.size());
    const int K = cand.K;

    // per-class digit needs under this label
    std::map<std::pair<int, int>, int> need_count;  // (old class, digit) -> streams
    for (int c = 0; c < k; ++c) ++need_count[{P[c], L[c]}];
    std::vector<ClassNeed> all_needs;
    for (const auto& [key, cnt] : need_count)
        all_needs.push_back({R.id.at(key), key.second, cnt});

    bool l_constant = std::all_of(L.begin(), L.end(), [&](int d) { return d == L[0]; });

    // Class the extra stream keeps matching when it reads digit d now, having
    // matched class `from` so far; -1 once the digit histories part ways.
    auto dup_step = [&](int from, int d) {
        if (from < 0) return -1;
        bool matched = false;
        for (int c : members[from])
            if (L[c] == d) matched = true;
        auto it = R.id.find({from, d});
        return matched && it != R.id.end() ? it->second : -1;
    };

    StreamStage st = ca.states[cf.u].stage;
    for (int ti : cand.out[cf.u]) {
        const TupleTransition& e = ca.transitions[ti];
        StreamStage tst = ca.states[e.to].stage;
        if (st == StreamStage::launch) {
            // the tracked streams form a single class here: while the lift
            // sits at the candidate's launch state, all its streams (the
            // extra one included) have read the same digits
            if (tst == StreamStage::launch) {
                if (l_constant && e.label[0] == L[0])
                    sink(Config{e.to, -2, {}, dup_step(cf.dup, L[0])});
            } else if (tst == StreamStage::attach) {
                const int c = e.label[0], d = e.label[K - 1];
                if (l_constant && L[0] == c) {
                    // the extra stream rides the attach edge: it has now read
                    // a digit no tracked stream read
                    sink(Config{e.to, -1, {}, -1});
                } else {
                    // exactly one stream off the block digit, reading d
                    int x = -1;
                    bool ok = true;
                    for (int s = 0; s < k; ++s)
                        if (L[s] != c) {
                            if (x >= 0) ok = false;
                            x = s;
                        }
                    if (ok && x >= 0 && L[x] == d)
                        sink(Config{e.to, R.id.at({P[x], L[x]}), {}, dup_step(cf.dup, c)});
                }
            } else {
                std::vector<int> allowed(K);
                std::iota(allowed.begin(), allowed.end(), 0);
                std::vector<char> used(K, 0);
                std::vector<std::vector<int>> acc(R.classes);
                distribute(all_needs, 0, e.label, allowed, used, acc,
                           [&] {
                               int leftover = -1;
                               for (int s = 0; s < K; ++s)
                                   if (!used[s]) leftover = s;
                               Config c2{e.to, -2, acc, dup_step(cf.dup, e.label[leftover])};
                               for (auto& v : c2.slots) {
                                   for (int& s : v) s = e.perm[s];
                                   std::sort(v.begin(), v.end());
                               }
                               sink(std::move(c2));
                           },
                           budget);
            }
        } else if (st == StreamStage::attach) {
            if (tst == StreamStage::attach) {
                const int c = e.label[0], d = e.label[K - 1];
                if (cf.owner == -1) {
                    if (l_constant && L[0] == c) sink(Config{e.to, -1, {}, -1});
                } else {
                    const auto& mem = members[cf.owner];
                    if (mem.size() == 1) {
                        int x = mem[0];
                        bool ok = L[x] == d;
                        for (int s = 0; s < k && ok; ++s)
                            if (s != x && L[s] != c) ok = false;
                        if (ok)
                            sink(Config{e.to, R.id.at({P[x], L[x]}), {}, dup_step(cf.dup, c)});
                    }
                }
            } else if (tst == StreamStage::committed) {
                std::vector<int> allowed(K - 1);
                std::iota(allowed.begin(), allowed.end(), 0);
                std::vector<char> used(K, 0);
                std::vector<std::vector<int>> acc(R.classes);
                std::vector<ClassNeed> needs;
                int leaf_new = -1;
                bool ok = true;
                if (cf.owner == -1) {
                    needs = all_needs;
                } else {
                    const auto& mem = members[cf.owner];
                    if (mem.size() != 1) ok = false;
                    if (ok) {
                        int x = mem[0];
                        if (e.label[K - 1] != L[x]) ok = false;
                        leaf_new = ok ? R.id.at({P[x], L[x]}) : -1;
                        for (const ClassNeed& n : all_needs) {
                            if (n.new_id == leaf_new) {
                                if (n.size != 1) ok = false;
                            } else {
                                needs.push_back(n);
                            }
                        }
                    }
                }
                if (ok)
                    distribute(needs, 0, e.label, allowed, used, acc,
                               [&] {
                                   int dup = -1;
                                   if (cf.owner != -1) {
                                       // the extra stream fills the one block
                                       // slot no tracked stream claimed
                                       int leftover = -1;
                                       for (int s = 0; s < K - 1; ++s)
                                           if (!used[s]) leftover = s;
                                       dup = dup_step(cf.dup, e.label[leftover]);
                                   }
                                   Config c2{e.to, -2, acc, dup};
                                   if (leaf_new >= 0) c2.slots[leaf_new] = {K - 1};
                                   for (auto& v : c2.slots) {
                                       for (int& s : v) s = e.perm[s];
                                       std::sort(v.begin(), v.end());
                                   }
                                   sink(std::move(c2));
                               },
                               budget);
            }
        } else {
            // committed: placements are pinned, digits must match per class
            bool ok = tst == StreamStage::committed;
            std::vector<std::vector<int>> acc(R.classes);
            for (std::size_t cl = 0; cl < cf.slots.size() && ok; ++cl) {
                std::map<int, int> have, want;
                for (int s : cf.slots[cl]) ++have[e.label[s]];
                for (int c : members[cl]) ++want[L[c]];
                if (have != want) {
                    ok = false;
                    break;
                }
                for (int s : cf.slots[cl])
                    acc[R.id.at({static_cast<int>(cl), e.label[s]})].push_back(e.perm[s]);
            }
            if (ok) {
                int leftover = -1;
                std::vector<char> taken(K, 0);
                for (const auto& v : cf.slots)
                    for (int s : v) taken[s] = 1;
                for (int s = 0; s < K; ++s)
                    if (!taken[s]) leftover = s;
                for (auto& v : acc) std::sort(v.begin(), v.end());
                if (budget-- == 0)
                    throw DomainError("completeness analysis exceeded witness budget");
                sink(Config{e.to, -2, std::move(acc), dup_step(cf.dup, e.label[leftover])});
            }
        }
    }
}

// Advances every lift in the witness across one transition of the tracked
// automaton.
Witness evolve_witness(const CandView& cand, const Witness& w,
                       const std::vector<int>& L, const std::vector<int>& P,
                       const std::vector<std::vector<int>>& members,
                       const Refinement& R) {
    if (cand.empty()) return {};
    std::set<Config> nw;
    std::size_t budget = kWitnessBudget;
    for (const Config& cf : w)
        evolve_config(cand, cf, L, P, members, R, budget,
                      [&](Config c2) { nw.insert(std::move(c2)); });
    return Witness(nw.begin(), nw.end());
}

}  // namespace

SplitResult completeness_split(const TupleAutomaton& gk,
                               const TupleAutomaton& gk1_candidate) {
    SplitResult res;
    res.remainder = gk1_candidate;
    if (gk.empty()) {
        res.final_gk = gk;
        return res;
    }
    if (!gk1_candidate.empty() && gk1_candidate.k != gk.k + 1)
        throw UsageError("candidate arity must exceed the automaton arity by one");

    CandView cand;
    if (!gk1_candidate.empty()) {
        cand.a = &gk1_candidate;
        cand.out = index_out(gk1_candidate);
        cand.K = gk1_candidate.k;
    }
    const int k = gk.k;
    auto gk_out = index_out(gk);

    using AnnKey = std::tuple<int, std::vector<int>, Witness>;
    std::map<AnnKey, int> ids;
    struct AnnState {
        int T;
        std::vector<int> P;
        Witness W;
    };
    std::vector<AnnState> states;
    std::deque<int> work;
    auto ensure = [&](int T, std::vector<int> P, Witness W) {
        AnnKey key{T, P, W};
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        if (states.size() >= 300000)
            throw DomainError("completeness annotation exceeded state budget");
        int id = static_cast<int>(states.size());
        ids.emplace(std::move(key), id);
        states.push_back({T, std::move(P), std::move(W)});
        work.push_back(id);
        return id;
    };

    Witness w0;
    if (!cand.empty()) w0.push_back(Config{gk1_candidate.initial, -2, {}});
    ensure(gk.initial, std::vector<int>(k, 0), std::move(w0));

    std::vector<TupleTransition> trans;
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        const AnnState cur = states[id];  // copy: states may reallocate
        std::vector<std::vector<int>> members;
        {
            int nc = *std::max_element(cur.P.begin(), cur.P.end()) + 1;
            members.assign(nc, {});
            for (int c = 0; c < k; ++c) members[cur.P[c]].push_back(c);
        }
        for (int ti : gk_out[cur.T]) {
            const TupleTransition& e = gk.transitions[ti];
            Refinement R = refine_partition(cur.P, e.label, e.perm);
            Witness W2 = evolve_witness(cand, cur.W, e.label, cur.P, members, R);
            int to = ensure(e.to, R.target_class, std::move(W2));
            trans.push_back({id, to, e.label, e.perm});
        }
    }

    std::sort(trans.begin(), trans.end());
    trans.erase(std::unique(trans.begin(), trans.end()), trans.end());

    std::vector<char> sep(states.size(), 0);
    for (std::size_t i = 0; i < states.size(); ++i)
        sep[i] = *std::max_element(states[i].P.begin(), states[i].P.end()) + 1 == k;

    // Per-transition evolution of every lift configuration, as indices into
    // the target witness set. Both analyses below walk these lists.
    std::vector<std::size_t> off(states.size() + 1, 0);
    for (std::size_t i = 0; i < states.size(); ++i)
        off[i + 1] = off[i] + states[i].W.size();
    std::vector<std::vector<std::vector<int>>> esucc(trans.size());
    for (std::size_t ei = 0; ei < trans.size(); ++ei) {
        const TupleTransition& e = trans[ei];
        const AnnState& A = states[e.from];
        if (A.W.empty()) continue;
        const AnnState& B = states[e.to];
        std::vector<std::vector<int>> members;
        {
            int nc = *std::max_element(A.P.begin(), A.P.end()) + 1;
            members.assign(nc, {});
            for (int c = 0; c < k; ++c) members[A.P[c]].push_back(c);
        }
        Refinement R = refine_partition(A.P, e.label, e.perm);
        esucc[ei].resize(A.W.size());
        for (std::size_t ci = 0; ci < A.W.size(); ++ci) {
            std::size_t budget = kWitnessBudget;
            evolve_config(cand, A.W[ci], e.label, A.P, members, R, budget,
                          [&](Config c2) {
                              auto it = std::lower_bound(B.W.begin(), B.W.end(), c2);
                              if (it == B.W.end() || *it != c2) return;
                              esucc[ei][ci].push_back(
                                  static_cast<int>(it - B.W.begin()));
                          });
        }
    }

    // A lift realizes an extra address only once its extra stream has
    // diverged from every tracked stream (dup == -1) and it then survives
    // forever. Freedom is absorbing, so trim the free configurations to
    // those with an everlasting free future; one of them sitting at a state
    // whose tracked streams are pairwise distinct shows a genuinely larger
    // tuple still growing somewhere past this arity.
    {
        const std::size_t n = off.back();
        std::vector<char> live(n, 0);
        std::vector<int> free_succ(n, 0);
        std::vector<std::vector<int>> pred(n);
        for (std::size_t i = 0; i < states.size(); ++i)
            for (std::size_t ci = 0; ci < states[i].W.size(); ++ci)
                live[off[i] + ci] = states[i].W[ci].dup == -1;
        for (std::size_t ei = 0; ei < trans.size(); ++ei) {
            const TupleTransition& e = trans[ei];
            for (std::size_t ci = 0; ci < esucc[ei].size(); ++ci) {
                int u = static_cast<int>(off[e.from] + ci);
                if (!live[u]) continue;
                for (int cj : esucc[ei][ci]) {
                    int v = static_cast<int>(off[e.to] + cj);
                    if (live[v]) {
                        ++free_succ[u];
                        pred[v].push_back(u);
                    }
                }
            }
        }
        std::deque<int> kill;
        for (std::size_t v = 0; v < n; ++v)
            if (live[v] && free_succ[v] == 0) kill.push_back(static_cast<int>(v));
        while (!kill.empty()) {
            int v = kill.front();
            kill.pop_front();
            live[v] = 0;
            for (int u : pred[v])
                if (live[u] && --free_succ[u] == 0) kill.push_back(u);
        }
        for (std::size_t i = 0; i < states.size() && !res.extending_separated;
             ++i) {
            if (!sep[i]) continue;
            for (std::size_t ci = 0; ci < states[i].W.size(); ++ci)
                if (live[off[i] + ci]) {
                    res.extending_separated = true;
                    break;
                }
        }
    }

    // Completeness is a property of runs, not of reachability: a state counts
    // as complete when some run through it separates the tracked streams and
    // sustains no lift, even if other runs through the same state do extend.
    // Follow every run while watching the batch of currently free lifts;
    // when the watched batch dies out entirely, the watch resets to the free
    // lifts present at that moment. A run sustains no lift exactly when such
    // wipeouts recur forever, so completeness asks for a reachable cycle of
    // separated states around which the watch is wiped out.
    std::vector<char> complete(states.size(), 0);
    {
        std::vector<std::vector<int>> freeset(states.size());
        for (std::size_t i = 0; i < states.size(); ++i)
            for (std::size_t ci = 0; ci < states[i].W.size(); ++ci)
                if (states[i].W[ci].dup == -1)
                    freeset[i].push_back(static_cast<int>(ci));
        std::vector<std::vector<int>> ann_out(states.size());
        for (std::size_t ei = 0; ei < trans.size(); ++ei)
            ann_out[trans[ei].from].push_back(static_cast<int>(ei));

        std::map<std::pair<int, std::vector<int>>, int> pids;
        std::vector<std::pair<int, std::vector<int>>> pnodes;
        std::vector<std::vector<std::pair<int, char>>> pout;
        std::deque<int> pwork;
        auto ensure_p = [&](int ann, std::vector<int> watch) {
            auto key = std::make_pair(ann, std::move(watch));
            auto it = pids.find(key);
            if (it != pids.end()) return it->second;
            if (pnodes.size() >= 300000)
                throw DomainError("completeness cycle analysis exceeded state budget");
            int id = static_cast<int>(pnodes.size());
            pids.emplace(key, id);
            pnodes.push_back(std::move(key));
            pout.emplace_back();
            pwork.push_back(id);
            return id;
        };
        ensure_p(0, freeset[0]);
        while (!pwork.empty()) {
            int pid = pwork.front();
            pwork.pop_front();
            const auto cur = pnodes[pid];  // copy: pnodes may reallocate
            for (int ei : ann_out[cur.first]) {
                const TupleTransition& e = trans[ei];
                std::set<int> nxt;
                for (int ci : cur.second)
                    nxt.insert(esucc[ei][ci].begin(), esucc[ei][ci].end());
                bool wiped = nxt.empty();
                std::vector<int> watch =
                    wiped ? freeset[e.to]
                          : std::vector<int>(nxt.begin(), nxt.end());
                int q = ensure_p(e.to, std::move(watch));
                pout[pid].push_back({q, wiped ? char(1) : char(0)});
            }
        }

        // strongly connected components of the watch product
        const int pn = static_cast<int>(pnodes.size());
        std::vector<int> comp(pn, -1), low(pn, 0), idx(pn, -1), stk;
        std::vector<char> onstk(pn, 0);
        int counter = 0, ncomp = 0;
        for (int s = 0; s < pn; ++s) {
            if (idx[s] >= 0) continue;
            std::vector<std::pair<int, std::size_t>> dfs{{s, 0}};
            idx[s] = low[s] = counter++;
            stk.push_back(s);
            onstk[s] = 1;
            while (!dfs.empty()) {
                auto& [v, pos] = dfs.back();
                if (pos < pout[v].size()) {
                    int w = pout[v][pos].first;
                    ++pos;
                    if (idx[w] < 0) {
                        idx[w] = low[w] = counter++;
                        stk.push_back(w);
                        onstk[w] = 1;
                        dfs.push_back({w, 0});
                    } else if (onstk[w]) {
                        low[v] = std::min(low[v], idx[w]);
                    }
                } else {
                    if (low[v] == idx[v]) {
                        while (true) {
                            int w = stk.back();
                            stk.pop_back();
                            onstk[w] = 0;
                            comp[w] = ncomp;
                            if (w == v) break;
                        }
                        ++ncomp;
                    }
                    int done = v;
                    dfs.pop_back();
                    if (!dfs.empty()) {
                        int p = dfs.back().first;
                        low[p] = std::min(low[p], low[done]);
                    }
                }
            }
        }
        // a component closes the family at this arity when some watch
        // wipeout stays inside it and its states are separated
        std::vector<char> goodc(ncomp, 0);
        for (int v = 0; v < pn; ++v)
            for (auto [w, bp] : pout[v])
                if (bp && comp[v] == comp[w] && sep[pnodes[v].first])
                    goodc[comp[v]] = 1;
        std::vector<std::vector<int>> ppred(pn);
        for (int v = 0; v < pn; ++v)
            for (auto [w, bp] : pout[v]) ppred[w].push_back(v);
        std::vector<char> reach(pn, 0);
        std::deque<int> bfs;
        for (int v = 0; v < pn; ++v)
            if (goodc[comp[v]]) {
                reach[v] = 1;
                bfs.push_back(v);
            }
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            for (int u : ppred[v])
                if (!reach[u]) {
                    reach[u] = 1;
                    bfs.push_back(u);
                }
        }
        for (int v = 0; v < pn; ++v)
            if (reach[v]) complete[pnodes[v].first] = 1;
    }

    for (std::size_t i = 0; i < states.size(); ++i)
        if (sep[i] && complete[i]) {
            res.complete_separated = true;
            break;
        }

    TupleAutomaton fin;
    fin.m = gk.m;
    fin.k = k;
    fin.pair_automaton = gk.pair_automaton;
    fin.initial = 0;
    Namer namer;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const AnnState& s = states[i];
        TupleState ts;
        ts.name = namer.get(gk.states[s.T].name);
        ts.tree = gk.states[s.T].tree;
        ts.stage = gk.states[s.T].stage;
        ts.complete = complete[i] != 0;
        fin.states.push_back(std::move(ts));
    }
    fin.transitions = std::move(trans);
    res.final_gk = std::move(fin);
    return res;
}

namespace {

// Drops candidate states that can take part in no fully separated run: from
// them the coordinate partition never refines to singletons, so every run
// through them repeats some coordinate forever. Such states host nothing
// genuine at this or any later arity, while their repeated coordinates give
// every further extension a factorial permutation fan-out. Free lifts at
// separated states always sit at fully refined candidate states, so the
// completeness and extension flags are unaffected.
TupleAutomaton prune_nonseparating(TupleAutomaton t) {
    if (t.empty()) return t;
    const int k = t.k;
    auto out = t.out_index();
    std::map<std::pair<int, std::vector<int>>, int> ids;
    std::vector<std::pair<int, std::vector<int>>> nodes;
    std::vector<std::vector<int>> succ;
    std::deque<int> work;
    auto ensure = [&](int s, std::vector<int> P) {
        auto key = std::make_pair(s, std::move(P));
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        if (nodes.size() >= 300000)
            throw DomainError("separation analysis exceeded state budget");
        int id = static_cast<int>(nodes.size());
        ids.emplace(key, id);
        nodes.push_back(std::move(key));
        succ.emplace_back();
        work.push_back(id);
        return id;
    };
    ensure(t.initial, std::vector<int>(k, 0));
    while (!work.empty()) {
        int id = work.front();
        work.pop_front();
        const auto cur = nodes[id];  // copy: nodes may reallocate
        for (int ti : out[cur.first]) {
            const TupleTransition& e = t.transitions[ti];
            Refinement R = refine_partition(cur.second, e.label, e.perm);
            int q = ensure(e.to, R.target_class);  // may grow succ
            succ[id].push_back(q);
        }
    }
    const int n = static_cast<int>(nodes.size());
    std::vector<std::vector<int>> pred(n);
    for (int v = 0; v < n; ++v)
        for (int w : succ[v]) pred[w].push_back(v);
    std::vector<char> good(n, 0);
    std::deque<int> bfs;
    for (int v = 0; v < n; ++v) {
        const std::vector<int>& P = nodes[v].second;
        if (*std::max_element(P.begin(), P.end()) + 1 == k) {
            good[v] = 1;
            bfs.push_back(v);
        }
    }
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop_front();
        for (int u : pred[v])
            if (!good[u]) {
                good[u] = 1;
                bfs.push_back(u);
            }
    }
    std::vector<char> keep(t.states.size(), 0);
    for (int v = 0; v < n; ++v)
        if (good[v]) keep[nodes[v].first] = 1;
    if (!keep[t.initial]) {
        t.states.clear();
        t.transitions.clear();
        t.initial = -1;
        return t;
    }
    std::vector<int> remap(t.states.size(), -1);
    int kept = 0;
    for (std::size_t i = 0; i < t.states.size(); ++i)
        if (keep[i]) remap[i] = kept++;
    if (kept == static_cast<int>(t.states.size())) return t;
    std::vector<TupleState> ns(kept);
    for (std::size_t i = 0; i < t.states.size(); ++i)
        if (keep[i]) ns[remap[i]] = std::move(t.states[i]);
    std::vector<TupleTransition> nt;
    for (TupleTransition& e : t.transitions)
        if (keep[e.from] && keep[e.to]) {
            e.from = remap[e.from];
            e.to = remap[e.to];
            nt.push_back(std::move(e));
        }
    std::sort(nt.begin(), nt.end());
    t.states = std::move(ns);
    t.transitions = std::move(nt);
    t.initial = remap[t.initial];
    return t;
}

}  // namespace

FamilyResult compute_family(const Automaton& g2, int bound) {
    if (bound < 2) throw UsageError("class bound must be at least 2");
    FamilyResult res;
    res.m = g2.m;
    FiniteClassReport fc = check_finite_class_necessary_conditions(g2);
    if (!fc.clean) {
        std::string msg = "finite-class necessary conditions fail";
        if (!fc.violations.empty())
            msg += ": " + fc.violations.front().s.str() + " ~ " +
                   fc.violations.front().t.str() + " (" + fc.violations.front().reason + ")";
        throw DomainError(msg);
    }
    TupleAutomaton cur = as_tuple(g2);
    if (cur.empty()) return res;
    int arity = 2;
    TupleAutomaton cand = prune_nonseparating(extend(cur, g2));
    while (true) {
        auto S0 = std::chrono::steady_clock::now();
        SplitResult split = completeness_split(cur, cand);
        std::fprintf(stderr, "[DBG] split %d: final %d st %.1fs\n", arity,
                     split.final_gk.size(),
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - S0).count());
        // Only states whose tracked streams are pairwise distinct decide the
        // family: completeness there realizes a tuple of exactly this arity,
        // and incompleteness there means a genuine tuple still grows.
        if (split.complete_separated) res.K.insert(arity);
        bool extends = split.extending_separated;
        res.automata.emplace(arity, std::move(split.final_gk));
        if (cand.empty() || !extends) break;
        if (arity + 1 > bound) {
            res.bound_error = "class bound exceeded: tuples extend beyond arity " +
                              std::to_string(bound);
            break;
        }
        cur = std::move(cand);
        ++arity;
        {
            auto T0 = std::chrono::steady_clock::now();
            TupleAutomaton raw = extend(cur, g2);
            auto T1 = std::chrono::steady_clock::now();
            std::fprintf(stderr, "[DBG] extend %d: %zu st %zu tr %.1fs\n", arity + 1,
                         raw.states.size(), raw.transitions.size(),
                         std::chrono::duration<double>(T1 - T0).count());
            cand = prune_nonseparating(std::move(raw));
            auto T2 = std::chrono::steady_clock::now();
            std::fprintf(stderr, "[DBG] prune %d: %zu st %zu tr %.1fs\n", arity + 1,
                         cand.states.size(), cand.transitions.size(),
                         std::chrono::duration<double>(T2 - T1).count());
        }
    }
    return res;
}

bool accept_complete_tuple(const TupleAutomaton& final_gk,
                           const std::vector<PreperiodicAddress>& tuple) {
    if (final_gk.empty()) return false;
    const int k = final_gk.k;
    if (static_cast<int>(tuple.size()) != k)
        throw UsageError("tuple arity mismatch: automaton expects " + std::to_string(k));
    if (k > 8) throw UsageError("tuple acceptance supports arity up to 8");
    for (const PreperiodicAddress& a : tuple)
        if (a.min_alphabet() > final_gk.m)
            throw UsageError("address digit out of range for the automaton alphabet");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (tuple[i] == tuple[j]) return false;

    auto out = index_out(final_gk);
    std::vector<int> span(k);
    for (int i = 0; i < k; ++i)
        span[i] = static_cast<int>(tuple[i].preperiod().size() + tuple[i].period().size());
    auto advance = [&](int addr, int pos) {
        return pos + 1 < span[addr] ? pos + 1
                                    : static_cast<int>(tuple[addr].preperiod().size());
    };

    std::vector<int> assign(k);
    std::iota(assign.begin(), assign.end(), 0);
    do {
        // coordinate c carries (address, position within its lasso)
        using Conf = std::vector<std::pair<int, int>>;
        std::map<std::pair<int, Conf>, int> ids;
        std::vector<std::pair<int, Conf>> confs;
        std::vector<std::vector<int>> succ;
        std::deque<int> bfs;
        auto ensure = [&](int state, Conf c) {
            std::pair<int, Conf> key{state, std::move(c)};
            auto it = ids.find(key);
            if (it != ids.end()) return it->second;
            if (confs.size() >= 2000000)
                throw DomainError("tuple acceptance exceeded configuration budget");
            int id = static_cast<int>(confs.size());
            ids.emplace(key, id);
            confs.push_back(std::move(key));
            succ.emplace_back();
            bfs.push_back(id);
            return id;
        };
        Conf c0(k);
        for (int c = 0; c < k; ++c) c0[c] = {assign[c], 0};
        ensure(final_gk.initial, std::move(c0));
        while (!bfs.empty()) {
            int id = bfs.front();
            bfs.pop_front();
            auto [state, conf] = confs[id];
            for (int ti : out[state]) {
                const TupleTransition& e = final_gk.transitions[ti];
                bool ok = true;
                for (int c = 0; c < k && ok; ++c)
                    if (tuple[conf[c].first].digit_at(conf[c].second) != e.label[c])
                        ok = false;
                if (!ok) continue;
                Conf nc(k);
                for (int c = 0; c < k; ++c)
                    nc[e.perm[c]] = {conf[c].first, advance(conf[c].first, conf[c].second)};
                succ[id].push_back(ensure(e.to, std::move(nc)));
            }
        }
        // accepted-as-complete iff a cycle through complete states is reachable
        const int n = static_cast<int>(confs.size());
        std::vector<int> color(n, 0);
        bool found = false;
        for (int r = 0; r < n && !found; ++r) {
            if (color[r] != 0 || !final_gk.states[confs[r].first].complete) continue;
            std::vector<std::pair<int, std::size_t>> dfs{{r, 0}};
            color[r] = 1;
            while (!dfs.empty() && !found) {
                auto& [v, i] = dfs.back();
                if (i >= succ[v].size()) {
                    color[v] = 2;
                    dfs.pop_back();
                    continue;
                }
                int w = succ[v][i++];
                if (!final_gk.states[confs[w].first].complete) continue;
                if (color[w] == 1) {
                    found = true;
                } else if (color[w] == 0) {
                    color[w] = 1;
                    dfs.push_back({w, 0});
                }
            }
        }
        if (found) return true;
    } while (std::next_permutation(assign.begin(), assign.end()));
    return false;
}

std::vector<TupleRunSample> sample_tuple_runs(const TupleAutomaton& t,
                                              std::size_t max_samples) {
    std::vector<TupleRunSample> out;
    if (t.empty() || max_samples == 0) return out;
    const int k = t.k;
    auto oi = index_out(t);

    auto realize = [&](const std::vector<int>& stem, const std::vector<int>& cycle) {
        std::vector<int> pos(k);
        std::iota(pos.begin(), pos.end(), 0);
        std::vector<Word> pre(k), per(k);
        for (int ti : stem) {
            const TupleTransition& e = t.transitions[ti];
            for (int i = 0; i < k; ++i) {
                pre[i].push_back(e.label[pos[i]]);
                pos[i] = e.perm[pos[i]];
            }
        }
        std::vector<int> rho(k);
        std::iota(rho.begin(), rho.end(), 0);
        for (int ti : cycle) {
            const TupleTransition& e = t.transitions[ti];
            for (int i = 0; i < k; ++i) rho[i] = e.perm[rho[i]];
        }
        // repeat the cycle until the net coordinate permutation closes
        int reps = 1;
        {
            std::vector<int> acc = rho;
            auto is_identity = [&] {
                for (int i = 0; i < k; ++i)
                    if (acc[i] != i) return false;
                return true;
            };
            while (!is_identity()) {
                std::vector<int> nxt(k);
                for (int i = 0; i < k; ++i) nxt[i] = rho[acc[i]];
                acc = std::move(nxt);
                ++reps;
            }
        }
        for (int r = 0; r < reps; ++r)
            for (int ti : cycle) {
                const TupleTransition& e = t.transitions[ti];
                for (int i = 0; i < k; ++i) {
                    per[i].push_back(e.label[pos[i]]);
                    pos[i] = e.perm[pos[i]];
                }
            }
        TupleRunSample s;
        for (int i = 0; i < k; ++i) s.addresses.emplace_back(pre[i], per[i]);
        s.complete = true;
        for (int ti : cycle)
            if (!t.states[t.transitions[ti].from].complete) s.complete = false;
        out.push_back(std::move(s));
    };

    // iterative DFS over stack-simple paths; a transition to an on-stack
    // state closes a lasso
    std::vector<int> depth_of(t.states.size(), -1);
    std::vector<std::pair<int, std::size_t>> stack;  // (state, next out idx)
    std::vector<int> path;                           // transition ids
    stack.push_back({t.initial, 0});
    depth_of[t.initial] = 0;
    std::size_t steps = 0;
    while (!stack.empty() && out.size() < max_samples && steps < 500000) {
        auto& [state, idx] = stack.back();
        if (idx >= oi[state].size()) {
            depth_of[state] = -1;
            stack.pop_back();
            if (!path.empty()) path.pop_back();
            continue;
        }
        ++steps;
        int ti = oi[state][idx++];
        const TupleTransition& e = t.transitions[ti];
        if (depth_of[e.to] >= 0) {
            int d = depth_of[e.to];
            std::vector<int> stem(path.begin(), path.begin() + d);
            std::vector<int> cycle(path.begin() + d, path.end());
            cycle.push_back(ti);
            realize(stem, cycle);
        } else {
            int cur_state = e.to;  // copy before the push may reallocate
            path.push_back(ti);
            depth_of[cur_state] = static_cast<int>(stack.size());
            stack.push_back({cur_state, 0});
        }
    }
    return out;
}

}  // namespace topogen
