// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <string>
#include <vector>

#include "latta/concrete.hpp"
#include "latta/engine.hpp"

namespace latta::testing {

/// Finite value universe used when enumerating concretizations.
struct Universe {
    long lo = -2;
    long hi = 2;
};

LocalState point_state(Domain d, Loc loc, const std::vector<Rational>& values);

/// Atom words of L(a) up to max_len letters whose values lie in the universe.
/// Stops after `cap` words.
std::vector<ConcreteConfig> enumerate_language(const Automaton& a, int dims, int max_len, Universe u,
                                               std::size_t cap = 100000);

bool concrete_covers(const GuardElement& g, const ConcreteLocalState& s);

/// Direct word-level interpretation of a rewriting rule on one concrete word.
std::vector<ConcreteConfig> rule_image(const RewriteRule& r, const ConcreteConfig& w, int dims, Universe u);

/// Direct word-level interpretation of a transducer on one concrete word.
std::vector<ConcreteConfig> transducer_image(const Transducer& t, const ConcreteConfig& w, int dims, Universe u);

using Rng = std::mt19937;

LocalState random_label(Rng& rng, Domain d, Loc loc, int dims, Universe u);
Automaton random_automaton(Rng& rng, Domain d, const std::vector<Loc>& locs, int dims, int max_states, Universe u);
Transducer random_transducer(Rng& rng, const std::vector<Loc>& locs, int dims, Universe u);
RewriteRule random_rule(Rng& rng, const std::vector<Loc>& locs, int dims, Universe u);

/// Small loop-bounded program in the analyzer's language, without process creation.
std::string random_program(Rng& rng, int procs);

struct OracleCheck {
    std::size_t concrete = 0;
    std::size_t missed = 0;
    std::string first_missed;
    bool pruned = false;
};

/// Every configuration reachable within `depth` concrete steps is accepted by `reach`.
OracleCheck oracle_included(const Cfg& cfg, const Automaton& reach, int procs, int depth, int max_procs);

} // namespace latta::testing
