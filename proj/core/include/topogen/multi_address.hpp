#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "topogen/address.hpp"
#include "topogen/automaton.hpp"

namespace topogen {

// Hard ceiling on tuple arity; pair masks are sized for it.
inline constexpr int kMaxTupleArity = 18;

// Undirected coupling edge between coordinates a < b. `state` is the
// pair-automaton state reached by reading (digit at a, digit at b);
// reading the edge the other way uses the involution partner.
struct TreeEdge {
    int a = 0;
    int b = 0;
    int state = 0;
    friend auto operator<=>(const TreeEdge&, const TreeEdge&) = default;
};

// Spanning tree over the k coordinates of a tuple state. Each edge carries
// the pair state its two streams are currently in; an edge at the root state
// means those two streams have read equal digits so far.
struct CouplingTree {
    int k = 0;
    std::vector<TreeEdge> edges;  // k-1 edges, kept sorted
    friend auto operator<=>(const CouplingTree&, const CouplingTree&) = default;
};

// How far a state's streams are still interchangeable. `launch`: all k
// streams have read equal digits (the start state). `attach`: the first
// k-1 coordinates are still equal, the last one has split off through the
// tree's final edge. `committed`: coordinates are rigid. Transitions out of
// launch/attach states are stored one representative per arrangement of the
// interchangeable coordinates.
enum class StreamStage { committed, launch, attach };

struct TupleTransition {
    int from = 0;
    int to = 0;
    std::vector<int> label;  // one digit per source coordinate
    std::vector<int> perm;   // perm[c] = target coordinate of source stream c
    friend auto operator<=>(const TupleTransition&, const TupleTransition&) = default;
};

struct TupleState {
    std::string name;
    CouplingTree tree;
    StreamStage stage = StreamStage::committed;
    bool complete = false;  // meaningful after completeness_split
};

// Automaton over digit k-tuples; may be nondeterministic. The accepted runs
// couple k digit streams through the per-state trees; trimmed and cleaned,
// its infinite runs spell k pairwise-equivalent addresses.
struct TupleAutomaton {
    int m = 0;
    int k = 0;
    int initial = -1;  // -1: empty automaton (no states at all)
    Automaton pair_automaton;
    std::vector<TupleState> states;
    std::vector<TupleTransition> transitions;  // sorted

    bool empty() const { return initial < 0; }
    int size() const { return static_cast<int>(states.size()); }
    // Per-state indices into `transitions`.
    std::vector<std::vector<int>> out_index() const;
};

// Views a validated pair automaton as the arity-2 tuple automaton and cleans
// it (for a degenerate automaton with no identifications this is empty).
TupleAutomaton as_tuple(const Automaton& g2);

// Removes states that are unreachable, have no outgoing edge (the start
// state included), or force two coordinates to carry equal sequences on
// every run through them; repeats to a joint fixpoint.
TupleAutomaton tuple_cleanup(TupleAutomaton t);

// Triple-address candidate as the plain chain product: states are ordered
// pairs (s, t) of pair-automaton states (stream 1~2 in s, 2~3 in t), edges
// match on the middle digit, and cleanup drops the degenerate part. No
// symmetry quotient is applied, so mirror chains stay distinct states.
// Empty when no point has three addresses.
TupleAutomaton build_G3(const Automaton& g2);

// Arity k+1 candidate: attaches a fresh stream to every coupling coordinate
// of every state of gk, identifies the all-equal start states, canonicalizes
// coupling trees up to coordinate permutation, and cleans the result.
TupleAutomaton extend(const TupleAutomaton& gk, const Automaton& g2);

// Standalone cleanup operation: removes degenerate components, and when two
// coordinates carry equal sequences on *every* run, projects one of them
// out so the arity drops. Repeats to fixpoint.
TupleAutomaton duplicate_collapse(TupleAutomaton t);

struct SplitResult {
    // Copy of gk annotated per state: `complete` marks states from which no
    // run extends to an arity-(k+1) tuple of pairwise-distinct addresses.
    // States may split when reached with different extension prospects.
    TupleAutomaton final_gk;
    // The candidate, passed through unchanged, to be extended further.
    TupleAutomaton remainder;
    // Whether some annotated state whose tracked streams have pairwise
    // diverged is complete / is incomplete. The first says a tuple of
    // exactly this arity exists; the second says some genuine tuple still
    // extends, so the next arity is worth exploring.
    bool complete_separated = false;
    bool extending_separated = false;
};

// Tracks, along every run of gk, the set of ways the run could still lift
// into the candidate; lifts are kept only while they can become genuine,
// i.e. the extra stream can still diverge from every tracked stream while
// the lift survives forever. States are annotated with those witness sets.
SplitResult completeness_split(const TupleAutomaton& gk,
                               const TupleAutomaton& gk1_candidate);

struct FamilyResult {
    int m = 0;        // alphabet size, kept even when no automaton survives
    std::set<int> K;  // arities whose automaton accepts a complete tuple
    std::map<int, TupleAutomaton> automata;  // arity -> annotated automaton
    std::optional<std::string> bound_error;  // set when the bound cut us off
};

// Iterates extend/cleanup/split from the pair automaton until the candidate
// is empty, nothing genuine extends any further, or the arity bound is hit
// (then `bound_error` is set and the family is partial).
FamilyResult compute_family(const Automaton& g2, int bound = 16);

// True iff the k pairwise-distinct addresses, in some coordinate order, ride
// an infinite run of the annotated automaton that eventually stays in
// complete states. Arity is capped (coordinate orders are enumerated).
bool accept_complete_tuple(const TupleAutomaton& final_gk,
                           const std::vector<PreperiodicAddress>& tuple);

struct TupleRunSample {
    std::vector<PreperiodicAddress> addresses;  // one per coordinate
    bool complete = false;                      // the cycle sits in complete states
};

// Deterministically enumerates lasso runs (simple stem + first repeated
// state) and realizes their addresses; the cycle is repeated until its net
// coordinate permutation closes. For property tests and examples.
std::vector<TupleRunSample> sample_tuple_runs(const TupleAutomaton& t,
                                              std::size_t max_samples);

}  // namespace topogen
