#pragma once

#include <vector>

#include "topogen/automaton.hpp"

namespace topogen {

struct EnumerationConstraints {
    // keep only automata passing the finite-class lasso scan
    bool require_finite_class_conditions = false;
    // keep only automata whose digit pieces form one connected component at
    // level 1 (digits adjacent when the root has an edge over them)
    bool require_connected_x1 = false;
};

// Enumerates all valid automata with exactly `num_states` states beside the
// root, every state reachable, deduplicated up to simultaneous digit
// renaming and state renaming fixing the root (canonical-form order).
// Guards: num_states <= 4, m <= 4, and an overall candidate-count budget;
// a refusal names the estimated search size.
std::vector<Automaton> enumerate_automata(int num_states, int m,
                                          const EnumerationConstraints& constraints = {});

}  // namespace topogen
