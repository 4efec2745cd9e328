#pragma once

#include <string>

#include "topogen/approximation.hpp"
#include "topogen/automaton.hpp"
#include "topogen/multi_address.hpp"

namespace topogen {

enum class RenderFormat { dot, svg };

// All renderers are deterministic: identical input yields byte-identical
// output. DOT output lists nodes and edges in sorted order; SVG uses a fixed
// layered layout. Parallel labels are drawn once, comma-joined. SVG refuses
// graphs past a size guard (DomainError suggesting DOT output); DOT has a
// far larger guard. Empty graphs produce valid empty documents.

std::string render_automaton(const Automaton& a, RenderFormat format);

// Tuple states are annotated with their completeness flag; edges carry the
// digit tuples plus the coordinate permutation when it is not the identity.
std::string render_tuple(const TupleAutomaton& t, RenderFormat format);

// Comparability graph of the space: points are adjacent when either lies in
// the other's minimal neighborhood.
std::string render_space(const FiniteSpace& s, RenderFormat format);

// Level-n word graph: vertices are all length-n words, with an undirected
// edge where the automaton accepts the pair.
std::string render_word_graph(const Automaton& a, int level, RenderFormat format);

}  // namespace topogen
