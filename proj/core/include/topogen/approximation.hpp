#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "topogen/address.hpp"
#include "topogen/multi_address.hpp"

namespace topogen {

// A point of a level-n approximation space: either one of the m^n digit
// words (an open point) or an atom — a junction reached by a run of one of
// the family's automata, keyed by the set of level-n words its streams
// occupy. `arity` is the smallest automaton arity contributing the word-set.
struct SpacePoint {
    bool is_word = true;
    Word word;                   // word points only
    std::vector<Word> word_set;  // atoms only: sorted, at least two words
    int arity = 0;               // atoms only
    friend bool operator==(const SpacePoint&, const SpacePoint&) = default;
};

// Finite topological space; the topology is given by each point's minimal
// open neighborhood. Word points are open; an atom's neighborhood holds
// itself, its words, and every atom of smaller arity whose word-set is a
// strict subset. Immutable once built.
struct FiniteSpace {
    int n = 0;  // level
    int m = 0;  // alphabet size
    std::set<int> K;                     // arity set of the generating family
    std::vector<SpacePoint> points;      // all m^n words first, atoms after
    std::vector<std::vector<int>> nbhd;  // minimal neighborhoods, sorted ids
    int word_count = 0;

    // Words are laid out in lexicographic order, so lookups are direct.
    std::optional<int> word_index(const Word& w) const;
    std::optional<int> atom_index(const std::vector<Word>& word_set) const;
};

// Builds the level-n space from a computed family: all m^n words plus the
// word-sets of length-n runs of each arity-k automaton (k in K) whose end
// state can still reach a complete state. Runs whose streams share a single
// level-n word contribute nothing at this level. Point counts are guarded.
FiniteSpace build_space(const FamilyResult& family, int n);

// Monotone map between adjacent levels: words truncate to their length-n
// prefix; an atom maps to the atom keyed by the prefixes of its word-set,
// or to the shared prefix word when only one remains. Continuity is checked.
struct Projection {
    int source_level = 0;
    int target_level = 0;
    std::vector<int> map;  // source point id -> target point id
};

Projection project(const FiniteSpace& finer, const FiniteSpace& coarser);

// Connected components of the comparability graph (x adjacent to y iff one
// lies in the other's minimal neighborhood), each sorted, ordered by their
// smallest member.
std::vector<std::vector<int>> connectedness(const FiniteSpace& space);

// True iff removing the given atom (restricting all neighborhoods) leaves
// the comparability graph with more components than before. Level-tagged
// evidence about the limit space, not a verdict.
bool cut_point_evidence(const FiniteSpace& space, int point);

struct KuratowskiReport {
    bool ok = false;
    std::string kind;        // "K5" or "K33" when ok
    std::string diagnostic;  // names the failing arc or condition otherwise
};

// Checks a non-planarity witness: every arc must be a discrete arc
// (consecutive points comparable), arcs may meet only at shared endpoints,
// each arc must contain a word point, and the endpoint incidence must form
// K5 (5 vertices, 10 arcs) or K33 (6 vertices, 9 arcs).
KuratowskiReport verify_kuratowski_witness(const FiniteSpace& space,
                                           const std::vector<int>& vertices,
                                           const std::vector<std::vector<int>>& arcs);

// Largest comparability-component size at each level 1..n. Bounded growth is
// evidence toward total disconnectedness; growth tracking the space size is
// evidence of connected pieces. No verdict is claimed.
std::vector<std::size_t> component_size_probe(const FamilyResult& family, int n);

}  // namespace topogen
