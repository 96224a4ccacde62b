// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "latta/automaton.hpp"
#include "latta/rewriter.hpp"

namespace latta {

/// Sites where a transfer function may have divided by zero.
struct Diagnostics {
    std::set<std::string> division;
    void merge(const Diagnostics& o) { division.insert(o.division.begin(), o.division.end()); }
};

struct TransducerRule {
    int src = 0;
    int dst = 0;
    std::string name;
    std::vector<GuardElement> guard;
    /// Joint conditions over the matched letters (slot k is guard position k).
    std::vector<ExprPtr> conditions;
    std::vector<RewriterSpec> outputs;
};

struct Transducer {
    int num_states = 1;
    std::vector<int> initial{0};
    std::vector<int> finals{0};
    std::vector<TransducerRule> rules;

    [[nodiscard]] bool is_final(int p) const;
    /// The rule letting any letter stay unchanged.
    static TransducerRule inactivity();
};

/// Image of L(a) by the transducer, normalized.
Automaton apply_transducer(const Transducer& t, const Automaton& a, const Vocabulary& voc,
                           Diagnostics* diag = nullptr);

} // namespace latta
