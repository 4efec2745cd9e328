#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topogen/address.hpp"

namespace topogen {

// Edge label: a pair of digits from {0..m-1}^2.
using PairLabel = std::pair<int, int>;

// Edge list entry as it appears in input files: labels grouped per
// (from, to) state pair, duplicates and contradictions still possible.
struct RawEdge {
    std::string from, to;
    std::vector<PairLabel> labels;
};

// Unvalidated description, the shape the JSON carries.
struct RawAutomaton {
    int m = 0;
    std::vector<std::string> states;  // initial listed among them
    std::string initial;
    std::map<std::string, std::string> inverse;  // state -> partner
    std::vector<RawEdge> edges;
    bool weak_axiom4 = false;
};

struct ValidationIssue {
    std::string axiom;    // "axiom1", "axiom2", "axiom3", "axiom4", "root", "input"
    std::string message;  // names the offending state/label
};

struct ValidationReport {
    bool ok = false;
    std::vector<ValidationIssue> issues;
};

// A validated topology-generating automaton. States are dense indices,
// transitions deterministic per (state, label). Index 0 is not special;
// `initial` names the root. Invariants established by validate():
//   * every state has an outgoing edge and is reachable from the root;
//   * at most one target per (state, label);
//   * inverse() is an involution compatible with edges and fixing the root;
//   * the root carries all (i,i) loops (or, under weak_axiom4, every
//     diagonal-reachable state has all (i,i) edges);
//   * no edge enters the root except its own diagonal loops.
class Automaton {
  public:
    int m = 0;
    int initial = 0;
    bool weak_axiom4 = false;
    std::vector<std::string> names;
    std::vector<int> inverse;                            // state -> partner state
    std::vector<std::map<PairLabel, int>> next;          // state -> label -> state

    int size() const { return static_cast<int>(names.size()); }
    std::optional<int> step(int state, PairLabel label) const;
    std::optional<int> state_index(const std::string& name) const;

    RawAutomaton to_raw() const;
};

// Checks the axioms and, on success, produces the validated automaton.
ValidationReport validate(const RawAutomaton& raw);
Automaton compile(const RawAutomaton& raw);  // throws DomainError listing issues

struct WordPairResult {
    bool accepted = false;
    int final_state = -1;  // meaningful when accepted
};

// Runs the pair of equal-length words from the root. Length mismatch or digit
// out of range is a usage error.
WordPairResult accept_word_pair(const Automaton& a, const Word& u, const Word& v);

// Runs the pair of infinite addresses; decides via configuration repetition.
bool accept_address_pair(const Automaton& a, const PreperiodicAddress& s,
                         const PreperiodicAddress& t);

// One necessary-condition violation: an accepted pair (s,t), s != t, where s
// is purely periodic or the pair is shift-related (s = u.t or t = u.s).
struct FiniteClassViolation {
    PreperiodicAddress s, t;
    std::string reason;  // "periodic" or "shift"
};

struct FiniteClassReport {
    bool clean = false;
    std::vector<FiniteClassViolation> violations;
};

// Scans lassos (access path + cycle) of the automaton for address pairs that
// force infinite equivalence classes. A clean report is necessary, not
// sufficient, for all classes to be finite.
FiniteClassReport check_finite_class_necessary_conditions(const Automaton& a);

// Canonical key under digit permutations x state permutations that fix the
// root and commute with the involution; equal keys == same language up to
// renaming. Used by enumeration dedup and census membership tests.
std::string canonical_key(const Automaton& a);

// Digit-preserving variant (state renaming only).
std::string canonical_key_fixed_digits(const Automaton& a);

}  // namespace topogen
