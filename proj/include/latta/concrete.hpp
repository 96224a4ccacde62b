// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <optional>
#include <set>
#include <vector>

#include "latta/automaton.hpp"
#include "latta/cfg.hpp"

namespace latta {

/// One process: values[0] is the id, values[i + 1] is variable i.
struct ConcreteLocalState {
    Loc loc = 0;
    std::vector<Rational> values;

    [[nodiscard]] const Rational& id() const { return values.front(); }
    friend bool operator==(const ConcreteLocalState&, const ConcreteLocalState&) = default;
    friend std::strong_ordering operator<=>(const ConcreteLocalState& a, const ConcreteLocalState& b);
};

using ConcreteConfig = std::vector<ConcreteLocalState>;

struct PostResult {
    std::set<ConcreteConfig> successors;
    /// Some process could not move because an expression divided by zero.
    bool division_by_zero = false;
};

/// Every successor of `c` under the program's transition relation. Reduce is a single
/// atomic step for all processes.
PostResult post(const Cfg& cfg, const ConcreteConfig& c);

ConcreteConfig initial_config(const Cfg& cfg, int procs);

struct ReachResult {
    std::set<ConcreteConfig> states;
    /// A successor was dropped because it had more than max_procs processes.
    bool pruned = false;
    /// Some state had no successor within the depth bound yet was not fully explored.
    bool truncated = false;
    bool division_by_zero = false;
};

ReachResult reach_bounded(const Cfg& cfg, const std::vector<ConcreteConfig>& init, int depth, int max_procs);

/// True when no transition applies and some process is not at the exit.
bool is_stuck(const Cfg& cfg, const ConcreteConfig& c);

/// Membership of the concrete word in the language of `a`.
bool accepts(const Automaton& a, const ConcreteConfig& c);

std::string to_string(const ConcreteConfig& c, const Vocabulary& voc);

} // namespace latta
