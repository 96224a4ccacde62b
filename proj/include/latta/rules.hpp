// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latta/cfg.hpp"
#include "latta/transducer.hpp"

namespace latta {

/// Guard g0* w1 g1* ... wn gn* with rewriters f0 h0 f1 ... hn f(n+1). A starred guard
/// with `none` set matches only the empty segment; a missing star rewriter is the
/// identity. Rewriters and conditions see matched letters as slots 0..N-1 in word
/// order and segment lengths via SegLen(i).
struct RewriteRule {
    std::string name;
    std::vector<GuardElement> stars;
    std::vector<std::vector<GuardElement>> words;
    std::vector<ExprPtr> conditions;
    std::vector<std::vector<RewriterSpec>> inserts;
    std::vector<std::optional<RewriterSpec>> star_rewriters;

    [[nodiscard]] int letters() const;
    /// Throws std::invalid_argument when the sequences have inconsistent lengths.
    void validate() const;
    [[nodiscard]] std::string to_string(const Vocabulary& voc) const;
};

Automaton apply_rule(const RewriteRule& r, const Automaton& a, const Vocabulary& voc, Diagnostics* diag = nullptr);

/// Both orderings of a sender and a receiver in the word.
std::vector<RewriteRule> make_send_receive_rules(const CfgEdge& send, const CfgEdge& receive, const Vocabulary& voc);
RewriteRule make_broadcast_rule(const CfgEdge& edge, const Vocabulary& voc);
/// The creator writes the fresh id into the create variable; the new letter starts at
/// `entry` with zero variables.
RewriteRule make_create_rule(const CfgEdge& edge, Loc entry, const Vocabulary& voc);
/// Spawn, sweep and deliver rules of the collector encoding.
std::vector<RewriteRule> make_reduce_rules(const CfgEdge& edge, Loc collector, const Vocabulary& voc);

/// Identity of + and *; nullopt for min and max.
std::optional<Rational> neutral_element(Op op);

} // namespace latta
