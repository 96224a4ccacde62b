// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latta/frontend.hpp"

namespace latta {

struct AnalysisConfig {
    Domain domain = Domain::Interval;
    /// nullopt: unbounded number of processes.
    std::optional<int> procs = 1;
    int widening_delay = 2;
    int shape_k = 1;
    int step_budget = 500;
    /// Iterations after the delay before labels at every location are widened.
    int global_widening_after = 10;
    bool parallel = true;
};

enum class AlarmKind : std::uint8_t { Property, Deadlock, Division };

const char* alarm_kind_name(AlarmKind k);

struct Alarm {
    AlarmKind kind = AlarmKind::Property;
    std::string witness;
    std::vector<Loc> locations;
};

struct AnalysisResult {
    Automaton reach;
    int iterations = 0;
    bool converged = false;
    std::vector<Alarm> alarms;
};

/// normalize(T(S) united with every rule image), rule by rule.
Automaton step_serial(const CompiledSemantics& sem, const Automaton& s, Diagnostics* diag = nullptr);
/// Same result as step_serial; the transducer and each rule run as separate OpenMP tasks.
Automaton step_parallel(const CompiledSemantics& sem, const Automaton& s, Diagnostics* diag = nullptr);

AnalysisResult fixpoint(const CompiledSemantics& sem, const AnalysisConfig& config);

/// Bad-configuration automaton whose transitions carry guards.
struct PropertyAutomaton {
    struct Edge {
        int src = 0;
        GuardElement guard;
        int dst = 0;
    };
    int num_states = 0;
    std::vector<int> initial;
    std::vector<bool> final;
    std::vector<Edge> edges;
};

/// Text form, one item per line:
///   initial <state>     final <state>     <state> -> <state> : <label>
/// where <label> is `true` or a comma list of `loc=<name|any>` and conditions.
/// Throws SourceError on syntax errors and unknown locations or variables.
PropertyAutomaton parse_property(const std::string& text, const Vocabulary& voc);

/// Alarm with the shortest witness when some word of `reach` is accepted by `bad`.
std::optional<Alarm> check_safety(const Automaton& reach, const PropertyAutomaton& bad, const Vocabulary& voc);

/// Words of `reach` (loops unrolled at most once) where every process waits at a
/// blocking location or the exit and no rule or local step applies.
std::vector<Alarm> check_deadlock(const CompiledSemantics& sem, const Automaton& reach, std::size_t max_paths = 200000);

} // namespace latta
