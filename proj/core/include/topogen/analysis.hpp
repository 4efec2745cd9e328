#pragma once

#include <map>
#include <string>
#include <vector>

#include "topogen/automaton.hpp"

namespace topogen {

struct EquivalenceClass {
    PreperiodicAddress input;
    std::vector<PreperiodicAddress> members;  // sorted by text form, includes input
    std::size_t size() const { return members.size(); }
};

// Full equivalence class of the address under the pair language: transitive
// closure of the partner relation. Throws DomainError when the class is
// provably infinite or grows past `bound` members.
EquivalenceClass class_of(const Automaton& a, const PreperiodicAddress& s,
                          std::size_t bound = 16);

struct PcfReport {
    bool pcf = false;
    // When not pcf: states linking two distinct labeled cycles (either one
    // strongly connected component carrying more labeled edges than states,
    // or a path from one cycle component into another).
    std::vector<std::string> witness;
};

// Decides whether, after dropping the root's diagonal loops, the labeled
// graph has only isolated simple cycles (no cycle reaches another and no
// component packs two cycles). Finitely many eventual behaviours iff pcf.
PcfReport is_pcf(const Automaton& a);

struct DiagonalStructure {
    std::vector<std::string> states;  // diagonal-reachable states, root first
    std::map<std::pair<std::string, int>, std::string> d;  // (state, digit) -> target
    std::vector<std::string> equations;  // rendered set equations, one per state
};

// Structure of the diagonal part: states reachable from the root along (i,i)
// edges, the digit action d on them, and the induced set equations. Requires
// every diagonal-reachable state to carry all (i,i) edges; otherwise throws
// DomainError naming the state and the missing digit.
DiagonalStructure diagonal_structure(const Automaton& a);

}  // namespace topogen
