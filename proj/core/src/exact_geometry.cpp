#include "topogen/exact_geometry.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>

#include "topogen/common.hpp"

namespace topogen {

namespace {

void require_same_field(long a, long b) {
    if (a != b) throw DomainError("exact complex operands from different fields");
}

std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

}  // namespace

ExactComplex ExactComplex::operator+(const ExactComplex& o) const {
    require_same_field(field_n, o.field_n);
    return {x + o.x, y + o.y, field_n};
}

ExactComplex ExactComplex::operator-(const ExactComplex& o) const {
    require_same_field(field_n, o.field_n);
    return {x - o.x, y - o.y, field_n};
}

ExactComplex ExactComplex::operator*(const ExactComplex& o) const {
    require_same_field(field_n, o.field_n);
    // (x1 + y1 s)(x2 + y2 s) with s^2 = -N.
    return {x * o.x - field_n * (y * o.y), x * o.y + y * o.x, field_n};
}

Rational ExactComplex::norm_sq() const { return x * x + field_n * (y * y); }

ExactComplex ExactComplex::inverse() const {
    Rational n = norm_sq();
    if (n == 0) throw DomainError("division by zero exact complex");
    return {x / n, -y / n, field_n};
}

bool ExactComplex::operator==(const ExactComplex& o) const {
    return field_n == o.field_n && x == o.x && y == o.y;
}

std::string ExactComplex::str() const {
    if (y == 0) return rat_str(x);
    std::string ys = rat_str(y);
    std::string tail = field_n == 1 ? "i" : "sqrt(-" + std::to_string(field_n) + ")";
    if (x == 0) return ys + "*" + tail;
    return rat_str(x) + (y > 0 ? "+" : "") + ys + "*" + tail;
}

Similitude Similitude::identity(long field_n) {
    return {ExactComplex::one(field_n), ExactComplex::zero(field_n), false};
}

ExactComplex Similitude::apply(const ExactComplex& z) const {
    return alpha * (conjugating ? z.conj() : z) + beta;
}

Similitude Similitude::compose(const Similitude& inner) const {
    // (this o inner)(z) = alpha * K(alpha_g * K_g(z) + beta_g) + beta.
    ExactComplex a = conjugating ? inner.alpha.conj() : inner.alpha;
    ExactComplex b = conjugating ? inner.beta.conj() : inner.beta;
    return {alpha * a, alpha * b + beta, conjugating != inner.conjugating};
}

Similitude Similitude::inverse() const {
    ExactComplex ai = alpha.inverse();
    if (!conjugating) return {ai, (ai * beta) * ExactComplex{-1, 0, alpha.field_n}, false};
    // w = a*conj(z)+b  =>  z = conj(w/a) - conj(b/a).
    return {ai.conj(), (ai * beta).conj() * ExactComplex{-1, 0, alpha.field_n}, true};
}

bool Similitude::operator==(const Similitude& o) const {
    return conjugating == o.conjugating && alpha == o.alpha && beta == o.beta;
}

std::string Similitude::str() const {
    std::string arg = conjugating ? "conj(z)" : "z";
    std::string out = "(" + alpha.str() + ")*" + arg;
    if (!beta.is_zero()) out += " + (" + beta.str() + ")";
    return out;
}

NeighborGraphResult neighbor_graph(const IfsSystem& ifs, const NeighborGraphOptions& opt) {
    const long n = ifs.field_n;
    const std::size_t m = ifs.maps.size();
    if (m < 2) throw DomainError("need at least two maps");

    Rational rho2 = ifs.maps.front().alpha.norm_sq();
    for (const auto& f : ifs.maps) {
        if (f.alpha.field_n != n || f.beta.field_n != n)
            throw DomainError("map coefficients disagree with declared field");
        if (f.alpha.norm_sq() != rho2) throw DomainError("maps must share one contraction ratio");
    }
    if (rho2 == 0) throw DomainError("degenerate map with ratio zero");
    if (rho2 >= 1) throw DomainError("maps must be contracting");

    Rational bound;
    if (opt.prune_bound) {
        bound = *opt.prune_bound;
    } else {
        // Rational q >= sqrt(rho2), q < 1, via binary search on k/2^32; then
        // 4*max|f(0)|^2 / (1-q)^2 dominates (2R)^2 for the attractor radius
        // R = max|f(0)| / (1-r). Every isometry h with X meeting hX has
        // |h(0)| <= 2R, so pruning |h(0)|^2 > bound never severs a state of
        // the true neighbor graph.
        using boost::multiprecision::cpp_int;
        const cpp_int scale = cpp_int(1) << 32;
        const cpp_int p = numerator(rho2), q = denominator(rho2);
        cpp_int lo = 0, hi = scale;  // (hi/scale)^2 >= rho2 invariant
        while (lo + 1 < hi) {
            cpp_int mid = (lo + hi) / 2;
            if (mid * mid * q >= p * scale * scale)
                hi = mid;
            else
                lo = mid;
        }
        Rational qr(hi, scale);
        if (qr >= 1) throw DomainError("ratio too close to one; supply an explicit bound");
        Rational max_b = 0;
        for (const auto& f : ifs.maps) max_b = std::max(max_b, f.beta.norm_sq());
        Rational one_minus = 1 - qr;
        bound = 4 * max_b / (one_minus * one_minus);
    }

    std::vector<Similitude> inv_maps;
    inv_maps.reserve(m);
    for (const auto& f : ifs.maps) inv_maps.push_back(f.inverse());

    std::vector<Similitude> states;
    std::map<std::tuple<bool, Rational, Rational, Rational, Rational>, std::size_t> index;
    auto intern = [&](const Similitude& h) {
        auto k = h.key();
        auto it = index.find(k);
        if (it != index.end()) return std::pair(it->second, false);
        if (states.size() >= opt.max_states)
            throw DomainError("not finite type within bound (" + std::to_string(opt.max_states) +
                              " states)");
        std::size_t id = states.size();
        states.push_back(h);
        index.emplace(std::move(k), id);
        return std::pair(id, true);
    };

    struct EdgeRec {
        std::size_t from, to;
        int i, j;
    };
    std::vector<EdgeRec> edges;
    std::deque<std::size_t> queue;
    queue.push_back(intern(Similitude::identity(n)).first);
    while (!queue.empty()) {
        std::size_t b = queue.front();
        queue.pop_front();
        const Similitude hb = states[b];  // copy: states grows below
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                Similitude hc = inv_maps[i].compose(hb).compose(ifs.maps[j]);
                if (hc.beta.norm_sq() > bound) continue;  // |h(0)| too large to touch X
                auto [c, fresh] = intern(hc);
                if (fresh) queue.push_back(c);
                edges.push_back({b, c, static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }

    // Trim states without outgoing edges (no infinite continuation, so no
    // witness point); iterate to the exact fixpoint. The root is exempt.
    std::vector<int> outdeg(states.size(), 0);
    std::vector<std::vector<std::size_t>> preds(states.size());
    for (const auto& e : edges) {
        ++outdeg[e.from];
        preds[e.to].push_back(e.from);
    }
    std::vector<char> alive(states.size(), 1);
    std::deque<std::size_t> dying;
    for (std::size_t s = 1; s < states.size(); ++s)
        if (outdeg[s] == 0) dying.push_back(s);
    while (!dying.empty()) {
        std::size_t s = dying.front();
        dying.pop_front();
        if (!alive[s]) continue;
        alive[s] = 0;
        for (std::size_t f : preds[s])
            if (alive[f] && --outdeg[f] == 0 && f != 0) dying.push_back(f);
    }

    // Assemble the automaton over surviving states, root first in scan order.
    std::vector<int> rename(states.size(), -1);
    RawAutomaton raw;
    raw.m = static_cast<int>(m);
    std::vector<Similitude> state_map;
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (!alive[s]) continue;
        rename[s] = static_cast<int>(raw.states.size());
        raw.states.push_back(s == 0 ? "o" : "h" + std::to_string(raw.states.size()));
        state_map.push_back(states[s]);
    }
    raw.initial = "o";
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (!alive[s]) continue;
        auto it = index.find(states[s].inverse().key());
        if (it == index.end() || !alive[it->second])
            throw DomainError("internal: neighbor graph not closed under inversion");
        raw.inverse[raw.states[rename[s]]] = raw.states[rename[it->second]];
    }
    std::map<std::pair<int, int>, std::vector<PairLabel>> grouped;
    for (const auto& e : edges)
        if (alive[e.from] && alive[e.to]) grouped[{rename[e.from], rename[e.to]}].push_back({e.i, e.j});
    for (auto& [ft, labels] : grouped) {
        std::sort(labels.begin(), labels.end());
        raw.edges.push_back({raw.states[ft.first], raw.states[ft.second], labels});
    }

    return {compile(raw), std::move(state_map), bound};
}

RepresentationCheck verify_representation(const Automaton& a, const IfsSystem& ifs,
                                          const std::vector<Similitude>& state_map) {
    if (state_map.size() != static_cast<std::size_t>(a.size()))
        return {false, "state map covers " + std::to_string(state_map.size()) + " of " +
                           std::to_string(a.size()) + " states"};
    if (ifs.maps.size() < static_cast<std::size_t>(a.m))
        return {false, "fewer maps than digits"};
    if (!(state_map[a.initial] == Similitude::identity(ifs.field_n)))
        return {false, "root is not the identity"};
    for (int b = 0; b < a.size(); ++b) {
        if (!(state_map[a.inverse[b]] == state_map[b].inverse()))
            return {false, "involution mismatch at " + a.names[b]};
        for (const auto& [label, c] : a.next[b]) {
            Similitude want =
                ifs.maps[label.first].inverse().compose(state_map[b]).compose(ifs.maps[label.second]);
            if (!(state_map[c] == want))
                return {false, "edge " + a.names[b] + " -(" + std::to_string(label.first) + "," +
                                   std::to_string(label.second) + ")-> " + a.names[c] +
                                   " breaks the recursion"};
        }
    }
    return {true, ""};
}

std::vector<RelationResult> coxeter_relation_check(const Similitude& a, const Similitude& b,
                                                   const Similitude& c, const Similitude& g) {
    const Similitude id = Similitude::identity(a.alpha.field_n);
    auto power = [&](const Similitude& f, int k) {
        Similitude r = id;
        for (int t = 0; t < k; ++t) r = r.compose(f);
        return r;
    };
    auto conj_by_g = [&](const Similitude& f) { return g.compose(f).compose(g.inverse()); };
    std::vector<RelationResult> out;
    out.push_back({"a^2 = id", power(a, 2) == id});
    out.push_back({"b^2 = id", power(b, 2) == id});
    out.push_back({"c^2 = id", power(c, 2) == id});
    out.push_back({"ab = ba", a.compose(b) == b.compose(a)});
    out.push_back({"(ac)^3 = id", power(a.compose(c), 3) == id});
    out.push_back({"(cb)^6 = id", power(c.compose(b), 6) == id});
    out.push_back({"g a g^-1 = cbc", conj_by_g(a) == c.compose(b).compose(c)});
    out.push_back({"g b g^-1 = cac", conj_by_g(b) == c.compose(a).compose(c)});
    out.push_back({"g c g^-1 = b", conj_by_g(c) == b});
    return out;
}

}  // namespace topogen
