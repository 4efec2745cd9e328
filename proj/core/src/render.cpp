#include "topogen/render.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "topogen/common.hpp"

namespace topogen {
namespace {

constexpr std::size_t kSvgNodeGuard = 1500;
constexpr std::size_t kSvgEdgeGuard = 6000;
constexpr std::size_t kDotNodeGuard = 200000;

struct GraphNode {
    std::string id;
    bool emphasized = false;  // completeness ring / atom shading
};

struct GraphEdge {
    int a = 0, b = 0;
    std::string label;
};

// Neutral graph form shared by the DOT and SVG writers. Node order is the
// drawing order and is always sorted by the builder.
struct Graph {
    bool directed = true;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;  // sorted by (a, b, label)
    int root = -1;                 // layout anchor for directed graphs
};

std::string digits_joined(const std::vector<int>& ds) {
    std::string out;
    bool wide = false;
    for (int d : ds) wide |= d > 9;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i && wide) out += ',';
        out += std::to_string(ds[i]);
    }
    return out;
}

std::string pair_label_text(const std::vector<PairLabel>& labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ',';
        out += "(" + std::to_string(labels[i].first) + "," +
               std::to_string(labels[i].second) + ")";
    }
    return out;
}

std::string point_name(const SpacePoint& p) {
    if (p.is_word) return digits_joined(p.word);
    std::string out = "{";
    for (std::size_t i = 0; i < p.word_set.size(); ++i) {
        if (i) out += ',';
        out += digits_joined(p.word_set[i]);
    }
    return out + "}";
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void sort_edges(Graph& g) {
    std::sort(g.edges.begin(), g.edges.end(), [&](const GraphEdge& x, const GraphEdge& y) {
        return std::tie(g.nodes[x.a].id, g.nodes[x.b].id, x.label) <
               std::tie(g.nodes[y.a].id, g.nodes[y.b].id, y.label);
    });
}

std::string to_dot(const Graph& g) {
    if (g.nodes.size() > kDotNodeGuard)
        throw DomainError("graph too large to render");
    std::ostringstream out;
    out << (g.directed ? "digraph" : "graph") << " G {\n";
    for (const GraphNode& n : g.nodes) {
        out << "  " << dot_quote(n.id);
        if (n.emphasized) out << " [peripheries=2]";
        out << ";\n";
    }
    const char* arrow = g.directed ? " -> " : " -- ";
    for (const GraphEdge& e : g.edges) {
        out << "  " << dot_quote(g.nodes[e.a].id) << arrow << dot_quote(g.nodes[e.b].id);
        if (!e.label.empty()) out << " [label=" << dot_quote(e.label) << "]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

// Fixed layered layout: directed graphs take breadth-first depth from the
// root as the layer, everything else falls back to a near-square grid. Nodes
// within a layer keep builder order. No randomness anywhere.
std::string to_svg(const Graph& g) {
    if (g.nodes.size() > kSvgNodeGuard || g.edges.size() > kSvgEdgeGuard)
        throw DomainError("graph too large to lay out as SVG; use the DOT format instead");
    std::vector<std::vector<int>> layers;
    if (g.directed && g.root >= 0) {
        std::vector<int> depth(g.nodes.size(), -1);
        std::deque<int> bfs{g.root};
        depth[g.root] = 0;
        std::vector<std::vector<int>> adj(g.nodes.size());
        for (const GraphEdge& e : g.edges) adj[e.a].push_back(e.b);
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            for (int w : adj[v])
                if (depth[w] < 0) {
                    depth[w] = depth[v] + 1;
                    bfs.push_back(w);
                }
        }
        int deepest = 0;
        for (int d : depth) deepest = std::max(deepest, d);
        layers.assign(deepest + 2, {});
        for (std::size_t v = 0; v < g.nodes.size(); ++v)
            layers[depth[v] < 0 ? deepest + 1 : depth[v]].push_back(static_cast<int>(v));
        while (!layers.empty() && layers.back().empty()) layers.pop_back();
    } else {
        const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(
                                         static_cast<double>(g.nodes.size())))));
        layers.assign((g.nodes.size() + cols - 1) / std::max<std::size_t>(cols, 1), {});
        for (std::size_t v = 0; v < g.nodes.size(); ++v)
            layers[v / cols].push_back(static_cast<int>(v));
    }

    // node box sized by the longest id
    std::size_t longest = 1;
    for (const GraphNode& n : g.nodes) longest = std::max(longest, n.id.size());
    const int nw = static_cast<int>(24 + 8 * longest), nh = 30;
    const int dx = nw + 40, dy = nh + 70;
    std::size_t widest = 1;
    for (const auto& l : layers) widest = std::max(widest, l.size());
    const int width = static_cast<int>(widest) * dx + 40;
    const int height = std::max<int>(static_cast<int>(layers.size()), 1) * dy + 40;

    std::vector<std::pair<int, int>> pos(g.nodes.size());
    for (std::size_t li = 0; li < layers.size(); ++li)
        for (std::size_t i = 0; i < layers[li].size(); ++i)
            pos[layers[li][i]] = {40 + static_cast<int>(i) * dx + nw / 2,
                                  40 + static_cast<int>(li) * dy + nh / 2};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<style>text{font-family:monospace;font-size:12px}"
        << ".lbl{font-size:10px;fill:#555}</style>\n";
    if (g.directed)
        out << "<defs><marker id=\"arr\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" "
               "refY=\"3\" orient=\"auto\"><path d=\"M0,0 L7,3 L0,6 z\"/></marker></defs>\n";
    const char* marker = g.directed ? " marker-end=\"url(#arr)\"" : "";
    for (const GraphEdge& e : g.edges) {
        auto [x1, y1] = pos[e.a];
        auto [x2, y2] = pos[e.b];
        if (e.a == e.b) {
            out << "<path d=\"M" << x1 - 10 << "," << y1 - nh / 2 << " C" << x1 - 22 << ","
                << y1 - nh - 12 << " " << x1 + 22 << "," << y1 - nh - 12 << " " << x1 + 10
                << "," << y1 - nh / 2 << "\" fill=\"none\" stroke=\"#333\"" << marker
                << "/>\n";
            if (!e.label.empty())
                out << "<text class=\"lbl\" x=\"" << x1 << "\" y=\"" << y1 - nh - 14
                    << "\" text-anchor=\"middle\">" << xml_escape(e.label) << "</text>\n";
        } else {
            out << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\""
                << y2 << "\" stroke=\"#333\"" << marker << "/>\n";
            if (!e.label.empty())
                out << "<text class=\"lbl\" x=\"" << (x1 + x2) / 2 + 4 << "\" y=\""
                    << (y1 + y2) / 2 - 4 << "\">" << xml_escape(e.label) << "</text>\n";
        }
    }
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        auto [x, y] = pos[v];
        out << "<rect x=\"" << x - nw / 2 << "\" y=\"" << y - nh / 2 << "\" width=\"" << nw
            << "\" height=\"" << nh << "\" rx=\"12\" fill=\"#fff\" stroke=\"#000\"";
        if (g.nodes[v].emphasized) out << " stroke-width=\"3\"";
        out << "/>\n<text x=\"" << x << "\" y=\"" << y + 4 << "\" text-anchor=\"middle\">"
            << xml_escape(g.nodes[v].id) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string emit(const Graph& g, RenderFormat f) {
    return f == RenderFormat::dot ? to_dot(g) : to_svg(g);
}

}  // namespace

std::string render_automaton(const Automaton& a, RenderFormat format) {
    Graph g;
    g.directed = true;
    std::vector<int> order(a.size());
    for (int i = 0; i < a.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return a.names[x] < a.names[y]; });
    std::vector<int> where(a.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        where[order[i]] = static_cast<int>(i);
        g.nodes.push_back({a.names[order[i]], false});
    }
    if (a.size() > 0) g.root = where[a.initial];
    std::map<std::pair<int, int>, std::vector<PairLabel>> grouped;
    for (int s = 0; s < a.size(); ++s)
        for (const auto& [label, t] : a.next[s]) grouped[{where[s], where[t]}].push_back(label);
    for (auto& [key, labels] : grouped) {
        std::sort(labels.begin(), labels.end());
        g.edges.push_back({key.first, key.second, pair_label_text(labels)});
    }
    sort_edges(g);
    return emit(g, format);
}

std::string render_tuple(const TupleAutomaton& t, RenderFormat format) {
    Graph g;
    g.directed = true;
    std::vector<int> order(t.states.size());
    for (std::size_t i = 0; i < t.states.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return t.states[x].name < t.states[y].name; });
    std::vector<int> where(t.states.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        where[order[i]] = static_cast<int>(i);
        g.nodes.push_back({t.states[order[i]].name, t.states[order[i]].complete});
    }
    if (t.initial >= 0) g.root = where[t.initial];
    std::map<std::tuple<int, int, std::vector<int>>, std::vector<std::vector<int>>> grouped;
    for (const TupleTransition& e : t.transitions)
        grouped[{where[e.from], where[e.to], e.perm}].push_back(e.label);
    for (auto& [key, labels] : grouped) {
        std::sort(labels.begin(), labels.end());
        std::string text;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (i) text += ',';
            text += digits_joined(labels[i]);
        }
        const std::vector<int>& perm = std::get<2>(key);
        bool identity = true;
        for (std::size_t c = 0; c < perm.size(); ++c) identity &= perm[c] == static_cast<int>(c);
        if (!identity) text += " [" + digits_joined(perm) + "]";
        g.edges.push_back({std::get<0>(key), std::get<1>(key), std::move(text)});
    }
    sort_edges(g);
    return emit(g, format);
}

std::string render_space(const FiniteSpace& s, RenderFormat format) {
    Graph g;
    g.directed = false;
    std::vector<int> order(s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<std::string> names(s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) names[i] = point_name(s.points[i]);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return names[x] < names[y]; });
    std::vector<int> where(s.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        where[order[i]] = static_cast<int>(i);
        g.nodes.push_back({names[order[i]], !s.points[order[i]].is_word});
    }
    std::set<std::pair<int, int>> seen;
    for (std::size_t p = 0; p < s.nbhd.size(); ++p)
        for (int q : s.nbhd[p]) {
            if (static_cast<std::size_t>(q) == p) continue;
            int a = where[p], b = where[q];
            if (a > b) std::swap(a, b);
            if (seen.insert({a, b}).second) g.edges.push_back({a, b, ""});
        }
    sort_edges(g);
    return emit(g, format);
}

std::string render_word_graph(const Automaton& a, int level, RenderFormat format) {
    if (level < 0) throw UsageError("level must be nonnegative");
    double count = 1;
    for (int i = 0; i < level; ++i) count *= a.m;
    if (count > 100000) throw DomainError("word graph too large to render");
    const int n = static_cast<int>(count);
    std::vector<Word> words(n);
    for (int v = 0; v < n; ++v) {
        Word w(level);
        int x = v;
        for (int p = level - 1; p >= 0; --p) {
            w[p] = x % a.m;
            x /= a.m;
        }
        words[v] = std::move(w);
    }
    Graph g;
    g.directed = false;
    for (const Word& w : words) g.nodes.push_back({digits_joined(w), false});
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (accept_word_pair(a, words[u], words[v]).accepted)
                g.edges.push_back({u, v, ""});
    sort_edges(g);
    return emit(g, format);
}

}  // namespace topogen
