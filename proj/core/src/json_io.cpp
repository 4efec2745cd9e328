#include "topogen/json_io.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <tuple>

#include <json.hpp>

#include "topogen/common.hpp"

namespace topogen {
namespace {

using Json = nlohmann::ordered_json;

Json parse_json(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw UsageError("input is not valid JSON");
    return j;
}

const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw UsageError(std::string("missing field \"") + name + "\"");
    return *it;
}

using BigInt = boost::multiprecision::cpp_int;

Json big_to_json(const BigInt& v) {
    static const BigInt lo = std::numeric_limits<std::int64_t>::min();
    static const BigInt hi = std::numeric_limits<std::int64_t>::max();
    if (v >= lo && v <= hi) return static_cast<std::int64_t>(v);
    return v.str();
}

BigInt big_from_json(const Json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    throw UsageError("expected an integer or integer string");
}

Json complex_to_json(const ExactComplex& z) {
    return Json::array({big_to_json(numerator(z.x)), big_to_json(denominator(z.x)),
                        big_to_json(numerator(z.y)), big_to_json(denominator(z.y))});
}

ExactComplex complex_from_json(const Json& j, long field_n) {
    if (!j.is_array() || j.size() != 4)
        throw UsageError("expected [x_num, x_den, y_num, y_den]");
    BigInt xd = big_from_json(j[1]), yd = big_from_json(j[3]);
    if (xd == 0 || yd == 0) throw UsageError("zero denominator");
    return {Rational(big_from_json(j[0]), xd), Rational(big_from_json(j[2]), yd),
            field_n};
}

Json raw_to_obj(const RawAutomaton& raw) {
    Json j;
    j["m"] = raw.m;
    j["states"] = raw.states;
    j["initial"] = raw.initial;
    Json inv = Json::object();
    for (const auto& [a, b] : raw.inverse) inv[a] = b;
    j["inverse"] = std::move(inv);
    Json edges = Json::array();
    for (const RawEdge& e : raw.edges) {
        Json labels = Json::array();
        for (const auto& [a, b] : e.labels) labels.push_back(Json::array({a, b}));
        edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"labels", std::move(labels)}});
    }
    j["edges"] = std::move(edges);
    if (raw.weak_axiom4) j["weak_axiom4"] = true;
    return j;
}

RawAutomaton raw_from_obj(const Json& j) {
    if (!j.is_object()) throw UsageError("automaton JSON must be an object");
    RawAutomaton raw;
    raw.m = field(j, "m").get<int>();
    for (const Json& s : field(j, "states")) raw.states.push_back(s.get<std::string>());
    raw.initial = field(j, "initial").get<std::string>();
    for (const auto& [a, b] : field(j, "inverse").items())
        raw.inverse[a] = b.get<std::string>();
    for (const Json& e : field(j, "edges")) {
        RawEdge edge;
        edge.from = field(e, "from").get<std::string>();
        edge.to = field(e, "to").get<std::string>();
        for (const Json& l : field(e, "labels")) {
            if (!l.is_array() || l.size() != 2) throw UsageError("labels must be digit pairs");
            edge.labels.push_back({l[0].get<int>(), l[1].get<int>()});
        }
        raw.edges.push_back(std::move(edge));
    }
    raw.weak_axiom4 = j.value("weak_axiom4", false);
    return raw;
}

const char* stage_name(StreamStage s) {
    switch (s) {
        case StreamStage::launch: return "launch";
        case StreamStage::attach: return "attach";
        default: return "committed";
    }
}

StreamStage stage_from(const std::string& s) {
    if (s == "launch") return StreamStage::launch;
    if (s == "attach") return StreamStage::attach;
    if (s == "committed") return StreamStage::committed;
    throw UsageError("unknown stream stage \"" + s + "\"");
}

Json space_point_to_json(const SpacePoint& p) {
    Json o;
    if (p.is_word) {
        o["kind"] = "word";
        o["word"] = p.word;
    } else {
        o["kind"] = "atom";
        Json ws = Json::array();
        for (const Word& w : p.word_set) ws.push_back(w);
        o["word_set"] = std::move(ws);
        o["arity"] = p.arity;
    }
    return o;
}

}  // namespace

std::string automaton_to_json(const RawAutomaton& raw) { return raw_to_obj(raw).dump(2); }

std::string automaton_to_json(const Automaton& a) { return automaton_to_json(a.to_raw()); }

RawAutomaton raw_automaton_from_json(const std::string& text) {
    return raw_from_obj(parse_json(text));
}

Automaton automaton_from_json(const std::string& text) {
    return compile(raw_automaton_from_json(text));
}

std::string class_to_json(const EquivalenceClass& cls) {
    Json j;
    j["input"] = cls.input.str();
    Json members = Json::array();
    for (const PreperiodicAddress& a : cls.members) members.push_back(a.str());
    j["members"] = std::move(members);
    j["size"] = cls.size();
    return j.dump(2);
}

std::string diagonal_to_json(const DiagonalStructure& d) {
    Json j;
    j["states"] = d.states;
    Json action = Json::array();
    for (const auto& [key, target] : d.d)
        action.push_back(Json{{"state", key.first}, {"digit", key.second}, {"to", target}});
    j["action"] = std::move(action);
    j["equations"] = d.equations;
    return j.dump(2);
}

std::string pcf_to_json(const PcfReport& r) {
    Json j;
    j["pcf"] = r.pcf;
    j["witness"] = r.witness;
    return j.dump(2);
}

std::string validation_to_json(const ValidationReport& r) {
    Json j;
    j["ok"] = r.ok;
    Json issues = Json::array();
    for (const ValidationIssue& i : r.issues)
        issues.push_back(Json{{"axiom", i.axiom}, {"message", i.message}});
    j["issues"] = std::move(issues);
    return j.dump(2);
}

std::string tuple_to_json(const TupleAutomaton& t) {
    Json j;
    j["m"] = t.m;
    j["k"] = t.k;
    if (t.initial >= 0)
        j["initial"] = t.states[t.initial].name;
    else
        j["initial"] = nullptr;
    Json states = Json::array();
    for (const TupleState& s : t.states) {
        Json tree = Json::array();
        for (const TreeEdge& e : s.tree.edges)
            tree.push_back(Json::array(
                {e.a + 1, e.b + 1, t.pair_automaton.names.at(e.state)}));
        states.push_back(Json{{"name", s.name},
                              {"stage", stage_name(s.stage)},
                              {"complete", s.complete},
                              {"tree", std::move(tree)}});
    }
    j["states"] = std::move(states);
    // group parallel transitions; sort for canonical output
    std::map<std::tuple<int, int, std::vector<int>>, std::vector<std::vector<int>>> grouped;
    for (const TupleTransition& e : t.transitions)
        grouped[{e.from, e.to, e.perm}].push_back(e.label);
    Json edges = Json::array();
    for (auto& [key, labels] : grouped) {
        std::sort(labels.begin(), labels.end());
        Json jl = Json::array();
        for (const auto& l : labels) jl.push_back(l);
        edges.push_back(Json{{"from", t.states[std::get<0>(key)].name},
                             {"to", t.states[std::get<1>(key)].name},
                             {"perm", std::get<2>(key)},
                             {"labels", std::move(jl)}});
    }
    j["edges"] = std::move(edges);
    if (t.pair_automaton.size() > 0)
        j["pair_automaton"] = raw_to_obj(t.pair_automaton.to_raw());
    else
        j["pair_automaton"] = nullptr;
    return j.dump(2);
}

TupleAutomaton tuple_from_json(const std::string& text) {
    Json j = parse_json(text);
    if (!j.is_object()) throw UsageError("tuple automaton JSON must be an object");
    TupleAutomaton t;
    t.m = field(j, "m").get<int>();
    t.k = field(j, "k").get<int>();
    const Json& pa = field(j, "pair_automaton");
    if (!pa.is_null()) t.pair_automaton = compile(raw_from_obj(pa));
    std::map<std::string, int> index;
    for (const Json& s : field(j, "states")) {
        TupleState st;
        st.name = field(s, "name").get<std::string>();
        st.stage = stage_from(field(s, "stage").get<std::string>());
        st.complete = field(s, "complete").get<bool>();
        st.tree.k = t.k;
        for (const Json& e : field(s, "tree")) {
            if (!e.is_array() || e.size() != 3)
                throw UsageError("tree entries must be [a, b, state]");
            auto q = t.pair_automaton.state_index(e[2].get<std::string>());
            if (!q) throw UsageError("tree edge names unknown pair state");
            st.tree.edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1, *q});
        }
        if (!index.try_emplace(st.name, static_cast<int>(t.states.size())).second)
            throw UsageError("duplicate state name \"" + st.name + "\"");
        t.states.push_back(std::move(st));
    }
    const Json& init = field(j, "initial");
    if (!init.is_null()) {
        auto it = index.find(init.get<std::string>());
        if (it == index.end()) throw UsageError("initial names an unknown state");
        t.initial = it->second;
    }
    for (const Json& e : field(j, "edges")) {
        auto from = index.find(field(e, "from").get<std::string>());
        auto to = index.find(field(e, "to").get<std::string>());
        if (from == index.end() || to == index.end())
            throw UsageError("edge names an unknown state");
        std::vector<int> perm = field(e, "perm").get<std::vector<int>>();
        for (const Json& l : field(e, "labels"))
            t.transitions.push_back(
                {from->second, to->second, l.get<std::vector<int>>(), perm});
    }
    return t;
}

std::string space_to_json(const FiniteSpace& s) {
    Json j;
    j["level"] = s.n;
    j["m"] = s.m;
    j["K"] = s.K;
    Json points = Json::array();
    for (const SpacePoint& p : s.points) points.push_back(space_point_to_json(p));
    j["points"] = std::move(points);
    j["nbhd"] = s.nbhd;
    return j.dump(2);
}

FiniteSpace space_from_json(const std::string& text) {
    Json j = parse_json(text);
    if (!j.is_object()) throw UsageError("space JSON must be an object");
    FiniteSpace s;
    s.n = field(j, "level").get<int>();
    s.m = field(j, "m").get<int>();
    for (const Json& k : field(j, "K")) s.K.insert(k.get<int>());
    for (const Json& p : field(j, "points")) {
        SpacePoint pt;
        const std::string kind = field(p, "kind").get<std::string>();
        if (kind == "word") {
            pt.is_word = true;
            pt.word = field(p, "word").get<Word>();
            ++s.word_count;
        } else if (kind == "atom") {
            pt.is_word = false;
            for (const Json& w : field(p, "word_set")) pt.word_set.push_back(w.get<Word>());
            pt.arity = field(p, "arity").get<int>();
        } else {
            throw UsageError("unknown point kind \"" + kind + "\"");
        }
        s.points.push_back(std::move(pt));
    }
    s.nbhd = field(j, "nbhd").get<std::vector<std::vector<int>>>();
    if (s.nbhd.size() != s.points.size())
        throw UsageError("nbhd length does not match point count");
    return s;
}

std::string ifs_to_json(const IfsSystem& ifs) {
    Json j;
    j["field_N"] = ifs.field_n;
    Json maps = Json::array();
    for (const Similitude& f : ifs.maps)
        maps.push_back(Json{{"alpha", complex_to_json(f.alpha)},
                            {"beta", complex_to_json(f.beta)},
                            {"conj", f.conjugating}});
    j["maps"] = std::move(maps);
    return j.dump(2);
}

IfsSystem ifs_from_json(const std::string& text) {
    Json j = parse_json(text);
    if (!j.is_object()) throw UsageError("IFS JSON must be an object");
    IfsSystem ifs;
    ifs.field_n = field(j, "field_N").get<long>();
    if (ifs.field_n <= 0) throw UsageError("field_N must be positive");
    for (const Json& f : field(j, "maps")) {
        Similitude s;
        s.alpha = complex_from_json(field(f, "alpha"), ifs.field_n);
        s.beta = complex_from_json(field(f, "beta"), ifs.field_n);
        s.conjugating = f.value("conj", false);
        ifs.maps.push_back(std::move(s));
    }
    return ifs;
}

std::string neighbor_graph_to_json(const NeighborGraphResult& res) {
    Json j = raw_to_obj(res.automaton.to_raw());
    Json sm = Json::array();
    for (std::size_t i = 0; i < res.state_map.size(); ++i) {
        const Similitude& f = res.state_map[i];
        sm.push_back(Json{{"state", res.automaton.names[i]},
                          {"alpha", complex_to_json(f.alpha)},
                          {"beta", complex_to_json(f.beta)},
                          {"conj", f.conjugating}});
    }
    j["state_map"] = std::move(sm);
    j["prune_bound"] = Json::array({big_to_json(numerator(res.prune_bound)),
                                    big_to_json(denominator(res.prune_bound))});
    return j.dump(2);
}

std::string error_to_json(const std::string& kind, const std::string& message) {
    return Json{{"error", Json{{"kind", kind}, {"message", message}}}}.dump();
}

}  // namespace topogen
