#pragma once

#include <string>

#include "topogen/analysis.hpp"
#include "topogen/approximation.hpp"
#include "topogen/automaton.hpp"
#include "topogen/exact_geometry.hpp"
#include "topogen/multi_address.hpp"

namespace topogen {

// All serializers emit deterministic, stably ordered JSON; every from_*
// parser accepts exactly what its to_* counterpart writes, so
// parse(serialize(x)) == x. Parse failures throw UsageError.

std::string automaton_to_json(const RawAutomaton& raw);
std::string automaton_to_json(const Automaton& a);
RawAutomaton raw_automaton_from_json(const std::string& text);
// Parses and compiles; malformed JSON is a UsageError, axiom violations a
// DomainError (from compile).
Automaton automaton_from_json(const std::string& text);

std::string class_to_json(const EquivalenceClass& cls);
std::string diagonal_to_json(const DiagonalStructure& d);
std::string pcf_to_json(const PcfReport& r);
std::string validation_to_json(const ValidationReport& r);

// Tuple automata mirror the pair format with k-digit labels; states carry
// their coupling tree (1-based coordinates, edge state by name), stage and
// completeness flag; the pair automaton is embedded.
std::string tuple_to_json(const TupleAutomaton& t);
TupleAutomaton tuple_from_json(const std::string& text);

std::string space_to_json(const FiniteSpace& s);
FiniteSpace space_from_json(const std::string& text);

// Rationals are [x_num, x_den, y_num, y_den] entries; values that fit in 64
// bits are written as JSON numbers, larger ones as decimal strings.
std::string ifs_to_json(const IfsSystem& ifs);
IfsSystem ifs_from_json(const std::string& text);

// Automaton JSON extended with a "state_map" array carrying the exact
// similitude per state, index-aligned with "states".
std::string neighbor_graph_to_json(const NeighborGraphResult& res);

// {"error": {"kind": ..., "message": ...}} for the diagnostics stream.
std::string error_to_json(const std::string& kind, const std::string& message);

}  // namespace topogen
