#include "topogen/approximation.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "topogen/common.hpp"

namespace topogen {
namespace {

constexpr long long kMaxWordPoints = 1000000;
constexpr long long kWorkBudget = 10000000;

bool strict_subset(const std::vector<Word>& a, const std::vector<Word>& b) {
    return a.size() < b.size() &&
           std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool in_sorted(const std::vector<int>& v, int x) {
    return std::binary_search(v.begin(), v.end(), x);
}

std::vector<std::vector<int>> components_excluding(const FiniteSpace& space,
                                                   int skip) {
    const int n = static_cast<int>(space.points.size());
    // symmetric comparability adjacency
    std::vector<std::vector<int>> adj(n);
    for (int v = 0; v < n; ++v) {
        if (v == skip) continue;
        for (int w : space.nbhd[v]) {
            if (w == v || w == skip) continue;
            adj[v].push_back(w);
            adj[w].push_back(v);
        }
    }
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> comps;
    for (int v = 0; v < n; ++v) {
        if (seen[v] || v == skip) continue;
        std::vector<int> comp;
        std::deque<int> bfs{v};
        seen[v] = 1;
        while (!bfs.empty()) {
            int x = bfs.front();
            bfs.pop_front();
            comp.push_back(x);
            for (int y : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    bfs.push_back(y);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

}  // namespace

std::optional<int> FiniteSpace::word_index(const Word& w) const {
    if (static_cast<int>(w.size()) != n) return std::nullopt;
    long long id = 0;
    for (int d : w) {
        if (d < 0 || d >= m) return std::nullopt;
        id = id * m + d;
    }
    return static_cast<int>(id);
}

std::optional<int> FiniteSpace::atom_index(const std::vector<Word>& word_set) const {
    for (int i = word_count; i < static_cast<int>(points.size()); ++i)
        if (points[i].word_set == word_set) return i;
    return std::nullopt;
}

FiniteSpace build_space(const FamilyResult& family, int n) {
    if (n < 1) throw UsageError("level must be at least 1");
    if (family.m <= 0) throw UsageError("family carries no alphabet");
    FiniteSpace sp;
    sp.n = n;
    sp.m = family.m;
    sp.K = family.K;
    long long total = 1;
    for (int i = 0; i < n; ++i) {
        total *= family.m;
        if (total > kMaxWordPoints)
            throw DomainError("level approximation would exceed " +
                              std::to_string(kMaxWordPoints) + " word points");
    }
    // word points in lexicographic order (ids are base-m values)
    {
        Word w(n, 0);
        while (true) {
            SpacePoint p;
            p.is_word = true;
            p.word = w;
            sp.points.push_back(std::move(p));
            int i = n - 1;
            while (i >= 0 && w[i] == family.m - 1) w[i--] = 0;
            if (i < 0) break;
            ++w[i];
        }
    }
    sp.word_count = static_cast<int>(sp.points.size());

    // atoms: word-sets of length-n runs that can still reach a complete state
    std::map<std::vector<Word>, int> arity_of;
    long long work = 0;
    for (int k : family.K) {
        const TupleAutomaton& a = family.automata.at(k);
        if (a.empty()) continue;
        std::vector<char> can(a.size(), 0);
        {
            std::deque<int> bfs;
            for (int v = 0; v < a.size(); ++v)
                if (a.states[v].complete) {
                    can[v] = 1;
                    bfs.push_back(v);
                }
            while (!bfs.empty()) {
                int v = bfs.front();
                bfs.pop_front();
                for (const TupleTransition& e : a.transitions)
                    if (e.to == v && !can[e.from]) {
                        can[e.from] = 1;
                        bfs.push_back(e.from);
                    }
            }
        }
        auto out = a.out_index();
        std::vector<int> pos(k);
        std::iota(pos.begin(), pos.end(), 0);
        std::vector<Word> stream(k);
        std::function<void(int, int)> go = [&](int state, int depth) {
            if (++work > kWorkBudget)
                throw DomainError("level approximation exceeded work budget");
            if (depth == n) {
                if (!can[state]) return;
                std::vector<Word> ws = stream;
                std::sort(ws.begin(), ws.end());
                ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
                if (ws.size() < 2) return;
                auto [it, fresh] = arity_of.try_emplace(std::move(ws), k);
                if (!fresh) it->second = std::min(it->second, k);
                return;
            }
            for (int ti : out[state]) {
                const TupleTransition& e = a.transitions[ti];
                std::vector<int> save = pos;
                for (int i = 0; i < k; ++i) {
                    stream[i].push_back(e.label[pos[i]]);
                    pos[i] = e.perm[pos[i]];
                }
                go(e.to, depth + 1);
                pos = std::move(save);
                for (int i = 0; i < k; ++i) stream[i].pop_back();
            }
        };
        go(a.initial, 0);
    }
    for (const auto& [ws, arity] : arity_of) {
        SpacePoint p;
        p.is_word = false;
        p.word_set = ws;
        p.arity = arity;
        sp.points.push_back(std::move(p));
    }

    // minimal neighborhoods
    sp.nbhd.assign(sp.points.size(), {});
    for (int i = 0; i < sp.word_count; ++i) sp.nbhd[i] = {i};
    for (int i = sp.word_count; i < static_cast<int>(sp.points.size()); ++i) {
        std::vector<int> nb{i};
        for (const Word& w : sp.points[i].word_set) nb.push_back(*sp.word_index(w));
        for (int j = sp.word_count; j < static_cast<int>(sp.points.size()); ++j)
            if (j != i && sp.points[j].arity < sp.points[i].arity &&
                strict_subset(sp.points[j].word_set, sp.points[i].word_set))
                nb.push_back(j);
        std::sort(nb.begin(), nb.end());
        sp.nbhd[i] = std::move(nb);
    }
    return sp;
}

Projection project(const FiniteSpace& finer, const FiniteSpace& coarser) {
    if (finer.n != coarser.n + 1 || finer.m != coarser.m || finer.K != coarser.K)
        throw UsageError("projection requires adjacent levels of one family");
    Projection p;
    p.source_level = finer.n;
    p.target_level = coarser.n;
    p.map.resize(finer.points.size());
    for (int i = 0; i < static_cast<int>(finer.points.size()); ++i) {
        const SpacePoint& pt = finer.points[i];
        if (pt.is_word) {
            Word pre(pt.word.begin(), pt.word.begin() + coarser.n);
            p.map[i] = *coarser.word_index(pre);
        } else {
            std::vector<Word> ws;
            for (const Word& w : pt.word_set)
                ws.emplace_back(w.begin(), w.begin() + coarser.n);
            std::sort(ws.begin(), ws.end());
            ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
            if (ws.size() == 1) {
                p.map[i] = *coarser.word_index(ws[0]);
            } else {
                auto id = coarser.atom_index(ws);
                if (!id)
                    throw UsageError(
                        "spaces disagree: projected atom missing from the coarser level");
                p.map[i] = *id;
            }
        }
    }
    // continuity: the image of a minimal neighborhood stays minimal
    for (int i = 0; i < static_cast<int>(finer.points.size()); ++i)
        for (int q : finer.nbhd[i])
            if (!in_sorted(coarser.nbhd[p.map[i]], p.map[q]))
                throw DomainError("projection between the given levels is not continuous");
    return p;
}

std::vector<std::vector<int>> connectedness(const FiniteSpace& space) {
    return components_excluding(space, -1);
}

bool cut_point_evidence(const FiniteSpace& space, int point) {
    if (point < 0 || point >= static_cast<int>(space.points.size()))
        throw UsageError("point id out of range");
    if (space.points[point].is_word)
        throw UsageError("cut point evidence requires an atom point");
    std::size_t base = components_excluding(space, -1).size();
    std::size_t after = components_excluding(space, point).size();
    return after > base;
}

KuratowskiReport verify_kuratowski_witness(const FiniteSpace& space,
                                           const std::vector<int>& vertices,
                                           const std::vector<std::vector<int>>& arcs) {
    KuratowskiReport rep;
    auto fail = [&](std::string d) {
        rep.ok = false;
        rep.diagnostic = std::move(d);
        return rep;
    };
    const int np = static_cast<int>(space.points.size());
    for (int v : vertices)
        if (v < 0 || v >= np) return fail("vertex id out of range");
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (int v : arcs[i])
            if (v < 0 || v >= np)
                return fail("arc " + std::to_string(i) + " has a point id out of range");
    if (vertices.size() != 5 && vertices.size() != 6)
        return fail("witness must name 5 or 6 vertices");
    std::set<int> vset(vertices.begin(), vertices.end());
    if (vset.size() != vertices.size()) return fail("vertices repeat");
    const bool five = vertices.size() == 5;
    const std::size_t want_arcs = five ? 10 : 9;
    if (arcs.size() != want_arcs)
        return fail(std::string(five ? "K5" : "K33") + " witness needs " +
                    std::to_string(want_arcs) + " arcs, got " +
                    std::to_string(arcs.size()));
    auto comparable = [&](int x, int y) {
        return in_sorted(space.nbhd[x], y) || in_sorted(space.nbhd[y], x);
    };
    std::set<std::pair<int, int>> endpoint_pairs;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const std::vector<int>& arc = arcs[i];
        if (arc.size() < 2) return fail("arc " + std::to_string(i) + " is too short");
        if (std::set<int>(arc.begin(), arc.end()).size() != arc.size())
            return fail("arc " + std::to_string(i) + " repeats a point");
        if (!vset.count(arc.front()) || !vset.count(arc.back()))
            return fail("arc " + std::to_string(i) + " does not join two vertices");
        for (std::size_t j = 0; j + 1 < arc.size(); ++j)
            if (!comparable(arc[j], arc[j + 1]))
                return fail("arc " + std::to_string(i) + " is not connecting between positions " +
                            std::to_string(j) + " and " + std::to_string(j + 1));
        if (std::none_of(arc.begin(), arc.end(),
                         [&](int v) { return space.points[v].is_word; }))
            return fail("arc " + std::to_string(i) + " contains no word point");
        int a = arc.front(), b = arc.back();
        if (a > b) std::swap(a, b);
        if (!endpoint_pairs.emplace(a, b).second)
            return fail("two arcs join the same vertex pair");
    }
    for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j) {
            std::set<int> si(arcs[i].begin(), arcs[i].end());
            std::set<int> shared_ends;
            for (int e : {arcs[i].front(), arcs[i].back()})
                if (e == arcs[j].front() || e == arcs[j].back()) shared_ends.insert(e);
            for (int p : arcs[j])
                if (si.count(p) && !shared_ends.count(p))
                    return fail("arcs " + std::to_string(i) + " and " + std::to_string(j) +
                                " meet away from a shared endpoint");
        }
    if (five) {
        if (endpoint_pairs.size() != 10)
            return fail("arc endpoints do not cover all vertex pairs");
        rep.kind = "K5";
    } else {
        // each vertex must have degree 3 and the graph must be complete
        // bipartite over a 3+3 split
        std::map<int, std::set<int>> nbr;
        for (auto [a, b] : endpoint_pairs) {
            nbr[a].insert(b);
            nbr[b].insert(a);
        }
        for (int v : vertices)
            if (nbr[v].size() != 3)
                return fail("arc endpoints do not form K33: a vertex misses degree 3");
        std::set<int> side{vertices[0]};
        for (int v : vertices)
            if (v != vertices[0] && !nbr[vertices[0]].count(v)) side.insert(v);
        if (side.size() != 3)
            return fail("arc endpoints do not form K33: no 3+3 split");
        for (auto [a, b] : endpoint_pairs)
            if (side.count(a) == side.count(b))
                return fail("arc endpoints do not form K33: an arc stays on one side");
        rep.kind = "K33";
    }
    rep.ok = true;
    return rep;
}

std::vector<std::size_t> component_size_probe(const FamilyResult& family, int n) {
    if (n < 1) throw UsageError("level must be at least 1");
    std::vector<std::size_t> sizes;
    for (int level = 1; level <= n; ++level) {
        FiniteSpace sp = build_space(family, level);
        std::size_t best = 0;
        for (const auto& comp : connectedness(sp)) best = std::max(best, comp.size());
        sizes.push_back(best);
    }
    return sizes;
}

}  // namespace topogen
