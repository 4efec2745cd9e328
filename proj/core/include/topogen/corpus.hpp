#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topogen/automaton.hpp"
#include "topogen/exact_geometry.hpp"

namespace topogen {

// One bundled example system. Depending on the entry it carries the pair
// automaton, the iterated function system, an exact similitude per automaton
// state (aligned with the state listing), and auxiliary named maps used by
// the relation checks.
struct CorpusEntry {
    std::string name;
    std::string description;
    std::optional<RawAutomaton> automaton;
    std::optional<IfsSystem> ifs;
    std::optional<std::vector<Similitude>> representation;
    std::map<std::string, Similitude> extra_maps;
};

const std::vector<CorpusEntry>& corpus();

// Throws UsageError when the name is unknown.
const CorpusEntry& corpus_entry(const std::string& name);

}  // namespace topogen
