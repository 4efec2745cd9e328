#include "topogen/corpus.hpp"

#include "topogen/common.hpp"

namespace topogen {

namespace {

ExactComplex ec(long n, Rational x, Rational y) { return {std::move(x), std::move(y), n}; }

Similitude sim(long n, Rational ax, Rational ay, Rational bx, Rational by, bool conj = false) {
    return {ec(n, std::move(ax), std::move(ay)), ec(n, std::move(bx), std::move(by)), conj};
}

RawAutomaton binary_automaton(int m) {
    RawAutomaton r;
    r.m = m;
    r.states = {"o", "right", "left"};
    r.initial = "o";
    r.inverse = {{"right", "left"}, {"left", "right"}};
    std::vector<PairLabel> diag;
    for (int i = 0; i < m; ++i) diag.push_back({i, i});
    r.edges = {{"o", "o", diag},
               {"o", "right", {{0, 1}}},
               {"o", "left", {{1, 0}}},
               {"right", "right", {{1, 0}}},
               {"left", "left", {{0, 1}}}};
    return r;
}

RawAutomaton all_pairs_touch_automaton(int m) {
    RawAutomaton r;
    r.m = m;
    r.states = {"o"};
    r.initial = "o";
    std::vector<PairLabel> diag;
    for (int i = 0; i < m; ++i) diag.push_back({i, i});
    r.edges.push_back({"o", "o", diag});
    auto name = [](int i, int j) { return std::to_string(i) + std::to_string(j); };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            r.states.push_back(name(i, j));
            r.inverse[name(i, j)] = name(j, i);
            r.edges.push_back({"o", name(i, j), {{i, j}}});
            r.edges.push_back({name(i, j), name(i, j), {{j, i}}});
        }
    return r;
}

IfsSystem translation_ifs(long field_n, Rational ratio, std::vector<ExactComplex> offsets) {
    IfsSystem s;
    s.field_n = field_n;
    for (auto& d : offsets)
        s.maps.push_back({ec(field_n, ratio, 0), ec(field_n, d.x * ratio, d.y * ratio), false});
    return s;
}

std::vector<CorpusEntry> build_corpus() {
    std::vector<CorpusEntry> out;

    {
        CorpusEntry e;
        e.name = "binary";
        e.description = "two half-scale translations of an interval";
        e.automaton = binary_automaton(2);
        e.ifs = translation_ifs(1, Rational(1, 2), {ec(1, 0, 0), ec(1, 1, 0)});
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "base_neg2";
        e.description = "two ratio -1/2 maps tiling an interval";
        RawAutomaton r;
        r.m = 2;
        r.states = {"o", "b", "c"};
        r.initial = "o";
        r.inverse = {{"b", "c"}, {"c", "b"}};
        r.edges = {{"o", "o", {{0, 0}, {1, 1}}},
                   {"o", "c", {{0, 1}}},
                   {"o", "b", {{1, 0}}},
                   {"c", "b", {{0, 1}}},
                   {"b", "c", {{1, 0}}}};
        e.automaton = r;
        IfsSystem s;
        s.field_n = 1;
        s.maps = {sim(1, Rational(-1, 2), 0, 0, 0), sim(1, Rational(-1, 2), 0, Rational(1, 2), 0)};
        e.ifs = s;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "tent";
        e.description = "interval pieces glued with one orientation flip";
        RawAutomaton r;
        r.m = 2;
        r.states = {"o", "b", "c"};
        r.initial = "o";
        r.edges = {{"o", "o", {{0, 0}, {1, 1}}},
                   {"o", "b", {{0, 1}, {1, 0}}},
                   {"b", "c", {{1, 1}}},
                   {"c", "c", {{0, 0}}}};
        e.automaton = r;
        IfsSystem s;
        s.field_n = 1;
        s.maps = {sim(1, Rational(1, 2), 0, 0, 0), sim(1, Rational(-1, 2), 0, Rational(1, 2), 0)};
        e.ifs = s;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "disconnected";
        e.description = "interval pieces plus an isolated third digit";
        e.automaton = binary_automaton(3);
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "hata_incomplete";
        e.description = "three-map tree-like system, pair contacts only";
        RawAutomaton r = binary_automaton(3);
        r.edges[1].labels.push_back({0, 2});  // o -> right
        r.edges[2].labels.push_back({2, 0});  // o -> left
        e.automaton = r;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "hata_complete";
        e.description = "three-map tree-like system with its triple point";
        RawAutomaton r = binary_automaton(3);
        r.edges[1].labels.push_back({0, 2});
        r.edges[2].labels.push_back({2, 0});
        r.states.push_back("d");
        r.edges.push_back({"o", "d", {{1, 2}, {2, 1}}});
        r.edges.push_back({"d", "d", {{0, 0}}});
        e.automaton = r;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "exotic";
        e.description = "three digits glued along one branching state";
        RawAutomaton r;
        r.m = 3;
        r.states = {"o", "b", "c"};
        r.initial = "o";
        r.edges = {{"o", "o", {{0, 0}, {1, 1}, {2, 2}}},
                   {"o", "b", {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}},
                   {"b", "c", {{1, 1}}},
                   {"c", "c", {{0, 0}, {2, 2}}}};
        e.automaton = r;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "weak_axiom4";
        e.description = "diagonal action spread over two states";
        RawAutomaton r;
        r.m = 2;
        r.states = {"o", "c", "right", "left"};
        r.initial = "o";
        r.inverse = {{"right", "left"}, {"left", "right"}};
        r.weak_axiom4 = true;
        r.edges = {{"o", "o", {{0, 0}}},
                   {"o", "c", {{1, 1}}},
                   {"c", "c", {{0, 0}, {1, 1}}},
                   {"c", "right", {{0, 1}}},
                   {"c", "left", {{1, 0}}},
                   {"right", "right", {{1, 0}}},
                   {"left", "left", {{0, 1}}}};
        e.automaton = r;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "gasket";
        e.description = "three half-scale maps with pairwise touching pieces";
        e.automaton = all_pairs_touch_automaton(3);
        e.ifs = translation_ifs(3, Rational(1, 2),
                                {ec(3, 0, 0), ec(3, 1, 0), ec(3, Rational(1, 2), Rational(1, 2))});
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "tetrahedron";
        e.description = "four maps, every pair of pieces touching";
        e.automaton = all_pairs_touch_automaton(4);
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "square_complete";
        e.description = "four quarter squares with side and corner contacts";
        RawAutomaton r;
        r.m = 4;
        r.states = {"o", "E", "W", "N", "S", "NE", "SE", "NW", "SW"};
        r.initial = "o";
        r.inverse = {{"E", "W"},   {"W", "E"},   {"N", "S"},   {"S", "N"},
                     {"NE", "SW"}, {"SW", "NE"}, {"SE", "NW"}, {"NW", "SE"}};
        r.edges = {{"o", "o", {{0, 0}, {1, 1}, {2, 2}, {3, 3}}},
                   {"o", "N", {{0, 2}, {1, 3}}},
                   {"o", "S", {{2, 0}, {3, 1}}},
                   {"o", "E", {{0, 1}, {2, 3}}},
                   {"o", "W", {{1, 0}, {3, 2}}},
                   {"o", "NE", {{0, 3}}},
                   {"o", "SE", {{2, 1}}},
                   {"o", "NW", {{1, 2}}},
                   {"o", "SW", {{3, 0}}},
                   {"E", "E", {{1, 0}, {3, 2}}},
                   {"E", "NE", {{1, 2}}},
                   {"E", "SE", {{3, 0}}},
                   {"W", "W", {{0, 1}, {2, 3}}},
                   {"W", "NW", {{0, 3}}},
                   {"W", "SW", {{2, 1}}},
                   {"N", "N", {{2, 0}, {3, 1}}},
                   {"N", "NE", {{2, 1}}},
                   {"N", "NW", {{3, 0}}},
                   {"S", "S", {{0, 2}, {1, 3}}},
                   {"S", "SE", {{0, 3}}},
                   {"S", "SW", {{1, 2}}},
                   {"NE", "NE", {{3, 0}}},
                   {"SE", "SE", {{1, 2}}},
                   {"NW", "NW", {{2, 1}}},
                   {"SW", "SW", {{0, 3}}}};
        e.automaton = r;
        e.ifs = translation_ifs(1, Rational(1, 2),
                                {ec(1, 0, 0), ec(1, 1, 0), ec(1, 0, 1), ec(1, 1, 1)});
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "square_incomplete";
        e.description = "four quarter squares, side contacts only";
        RawAutomaton r;
        r.m = 4;
        r.states = {"o", "E", "W", "N", "S"};
        r.initial = "o";
        r.inverse = {{"E", "W"}, {"W", "E"}, {"N", "S"}, {"S", "N"}};
        r.edges = {{"o", "o", {{0, 0}, {1, 1}, {2, 2}, {3, 3}}},
                   {"o", "N", {{0, 2}, {1, 3}}},
                   {"o", "S", {{2, 0}, {3, 1}}},
                   {"o", "E", {{0, 1}, {2, 3}}},
                   {"o", "W", {{1, 0}, {3, 2}}},
                   {"E", "E", {{1, 0}, {3, 2}}},
                   {"W", "W", {{0, 1}, {2, 3}}},
                   {"N", "N", {{2, 0}, {3, 1}}},
                   {"S", "S", {{0, 2}, {1, 3}}}};
        e.automaton = r;
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "triangle";
        e.description = "right triangle cut into three similar copies";
        RawAutomaton r;
        r.m = 3;
        r.states = {"o", "a", "b", "c"};
        r.initial = "o";
        r.edges = {{"o", "o", {{0, 0}, {1, 1}, {2, 2}}},
                   {"o", "c", {{0, 1}, {1, 0}}},
                   {"o", "a", {{1, 2}, {2, 1}}},
                   {"c", "b", {{1, 1}, {2, 2}}},
                   {"a", "b", {{0, 0}}},
                   {"b", "a", {{0, 0}}},
                   {"b", "c", {{2, 2}}}};
        e.automaton = r;
        IfsSystem s;
        s.field_n = 3;
        s.maps = {sim(3, 0, Rational(-1, 3), 1, Rational(1, 3), true),
                  sim(3, Rational(-1, 2), Rational(-1, 6), 1, Rational(1, 3), false),
                  sim(3, Rational(1, 2), Rational(1, 6), 0, 0, true)};
        e.ifs = s;
        e.representation = {Similitude::identity(3), sim(3, -1, 0, 2, 0, true),
                            sim(3, 1, 0, 0, 0, true),
                            sim(3, Rational(1, 2), Rational(1, 2), 0, 0, true)};
        e.extra_maps.emplace("g", sim(3, Rational(-3, 2), Rational(1, 2), 2, 0, false));
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "dog_carpet";
        e.description = "five-map carpet over the discriminant -15 field";
        RawAutomaton r;
        r.m = 5;
        r.states = {"o", "p", "p_inv", "h", "q", "q_inv"};
        r.initial = "o";
        r.inverse = {{"p", "p_inv"}, {"p_inv", "p"}, {"q", "q_inv"}, {"q_inv", "q"}};
        r.edges = {{"o", "o", {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}},
                   {"o", "p", {{2, 0}, {3, 2}}},
                   {"o", "p_inv", {{0, 2}, {2, 3}}},
                   {"o", "h", {{3, 4}, {4, 3}}},
                   {"p", "p", {{0, 1}}},
                   {"p_inv", "p_inv", {{1, 0}}},
                   {"h", "h", {{2, 2}, {0, 1}, {1, 0}}},
                   {"p", "q", {{3, 4}}},
                   {"q", "p_inv", {{1, 4}}},
                   {"p_inv", "q_inv", {{4, 3}}},
                   {"q_inv", "p", {{4, 1}}}};
        e.automaton = r;
        // Maps built exactly from lambda with lambda^2 = 3*lambda - 6 and the
        // unit a = (lambda - 1)/2:
        //   (a z + 1)/lambda, (a z - 1)/lambda, z/lambda,
        //   conj(a) (z - 1)/lambda, -conj(a) (z + 1)/lambda.
        const ExactComplex lambda = ec(15, Rational(3, 2), Rational(1, 2));
        const ExactComplex inv_l = lambda.inverse();
        const ExactComplex a = ec(15, Rational(1, 4), Rational(1, 4));
        const ExactComplex minus_one = ec(15, -1, 0);
        IfsSystem s;
        s.field_n = 15;
        s.maps = {{a * inv_l, inv_l, false},
                  {a * inv_l, inv_l * minus_one, false},
                  {inv_l, ec(15, 0, 0), false},
                  {a.conj() * inv_l, a.conj() * inv_l * minus_one, false},
                  {a.conj() * inv_l * minus_one, a.conj() * inv_l * minus_one, false}};
        e.ifs = s;
        e.representation = {Similitude::identity(15),
                            {a, ec(15, 1, 0), false},
                            {a.conj(), a.conj() * minus_one, false},
                            {minus_one, ec(15, 0, 0), false},
                            {a * minus_one, ec(15, Rational(-3, 4), Rational(1, 4)), false},
                            {a.conj() * minus_one, ec(15, Rational(3, 4), Rational(1, 4)), false}};
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "fractal_square";
        e.description = "five of nine third-scale squares";
        e.ifs = translation_ifs(1, Rational(1, 3),
                                {ec(1, 0, 0), ec(1, 1, 0), ec(1, 2, 0), ec(1, 2, 1), ec(1, 2, 2)});
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.name = "fractal_triangle";
        e.description = "thirteen quarter-scale triangles, seven upright and six inverted";
        IfsSystem s;
        s.field_n = 3;
        auto omega_pt = [](int x, int y) {
            // x + y*omega with omega = 1/2 + (1/2) sqrt(3) i.
            return ec(3, Rational(2 * x + y, 2), Rational(y, 2));
        };
        const std::vector<std::pair<int, int>> upright = {{1, 0}, {2, 0}, {0, 1}, {1, 1},
                                                          {2, 1}, {0, 2}, {1, 2}};
        const std::vector<std::pair<int, int>> inverted = {{0, 0}, {1, 0}, {2, 0},
                                                           {0, 1}, {1, 1}, {0, 2}};
        const ExactComplex quarter = ec(3, Rational(1, 4), 0);
        for (auto [x, y] : upright) s.maps.push_back({quarter, quarter * omega_pt(x, y), false});
        for (auto [x, y] : inverted) {
            ExactComplex shift = omega_pt(x + 1, y + 1);
            s.maps.push_back({quarter * ec(3, -1, 0), quarter * shift, false});
        }
        e.ifs = s;
        out.push_back(std::move(e));
    }

    return out;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = build_corpus();
    return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
    for (const auto& e : corpus())
        if (e.name == name) return e;
    throw UsageError("unknown corpus entry: " + name);
}

}  // namespace topogen
