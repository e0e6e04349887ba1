#pragma once

#include <limits>
#include <variant>
#include <vector>

#include "ctmc/model.hpp"

namespace ctmc {

// The shapes with known closed forms. Hub: every non-root state is entered
// from the root and returns straight to it. Cycle: the states form a single
// directed loop through the root. Tree: any other composition of decision
// and sequential structure. The two-state loop matches both Hub and Cycle
// and reports Cycle.
enum class Pattern { Hub, Cycle, Tree };

const char* pattern_name(Pattern p);  // "hub" | "cycle" | "tree"

// Witness that every non-root state has exactly one incoming transition, so
// each state's probability follows from its unique predecessor by flow
// balance.
struct Decomposition {
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    StateId root = 0;
    // Per state, the index (into Model::transitions()) of its unique incoming
    // transition; npos for the root.
    std::vector<std::size_t> parent_edge;
    // Non-root states in breadth-first order from the root: a state's parent
    // always precedes it.
    std::vector<StateId> order;
    Pattern pattern = Pattern::Tree;
};

// The model falls outside the derivable class; lists every non-root state
// whose in-degree differs from 1. Informative, not an error: the linear
// solver still handles such models.
struct UnsupportedStructure {
    std::vector<StateId> violating;
};

std::variant<Decomposition, UnsupportedStructure> classify(const Model& model);

}  // namespace ctmc
