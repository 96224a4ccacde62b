// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "latta/state.hpp"

namespace latta {

struct Transition {
    int src = 0;
    LocalState label;
    int dst = 0;
};

/// Finite automaton whose transitions carry non-bottom local states. Epsilon moves are
/// only used while building; normalize() removes them.
class Automaton {
  public:
    int add_state(bool is_final = false);
    void set_initial(int q);
    void set_final(int q, bool value = true);
    /// Bottom labels are dropped.
    void add_transition(int src, LocalState label, int dst);
    void add_epsilon(int src, int dst);
    /// Copies every state and transition of `o`; returns the offset of its states.
    int embed(const Automaton& o);

    [[nodiscard]] int num_states() const { return num_states_; }
    [[nodiscard]] const std::vector<int>& initial() const { return initial_; }
    [[nodiscard]] bool is_final(int q) const { return final_.at(static_cast<std::size_t>(q)); }
    [[nodiscard]] const std::vector<Transition>& transitions() const { return transitions_; }
    [[nodiscard]] const std::vector<std::pair<int, int>>& epsilons() const { return epsilons_; }
    [[nodiscard]] std::vector<int> finals() const;

    /// Outgoing transition indices per state.
    [[nodiscard]] std::vector<std::vector<int>> out_index() const;

    /// Chain automaton accepting exactly `word` (empty word: single initial final state).
    static Automaton word(const std::vector<LocalState>& word);

    friend bool operator==(const Automaton& a, const Automaton& b);
    [[nodiscard]] std::size_t hash() const;

  private:
    int num_states_ = 0;
    std::vector<int> initial_;
    std::vector<bool> final_;
    std::vector<Transition> transitions_;
    std::vector<std::pair<int, int>> epsilons_;
};

/// Trim, determinize by location (joining labels), minimize, and number states in
/// breadth-first order from the initial state. The empty language gives zero states.
Automaton normalize(const Automaton& a);

Automaton unite(const Automaton& a, const Automaton& b);
/// Normalized union of any number of automata, merged pairwise.
Automaton unite_all(std::vector<Automaton> parts);
Automaton intersect(const Automaton& a, const Automaton& b);
bool is_empty(const Automaton& a);
/// Sound check of L(b) included in L(a); both must be normalized.
bool includes(const Automaton& a, const Automaton& b);

struct MatchTriple {
    int begin = 0;
    std::vector<LocalState> labels;
    int end = 0;
};

std::vector<MatchTriple> matches(const std::vector<GuardElement>& w, const Automaton& a);
/// Every label sequence of length n starting at q, with its end state.
std::vector<std::pair<std::vector<LocalState>, int>> path_enumerate(const Automaton& a, int q, int n);

Automaton sub_automaton(const Automaton& a, int begin, int end);
/// Applies f to every label; transitions whose image is nullopt or bottom disappear.
Automaton map_labels(const Automaton& a, const std::function<std::optional<LocalState>(const LocalState&)>& f);

/// Shortest and longest accepted word length; longest is nullopt when unbounded.
/// Precondition: non-empty language.
std::pair<long, std::optional<long>> length_range(const Automaton& a);

struct ShapeEdge {
    int src;
    Loc key;
    int dst;
    friend bool operator==(const ShapeEdge&, const ShapeEdge&) = default;
};

struct Shape {
    int num_states = 0;
    std::vector<int> initial;
    std::vector<bool> final;
    std::vector<ShapeEdge> edges;
    friend bool operator==(const Shape&, const Shape&) = default;
};

Shape shape(const Automaton& a);

/// Merges states of a normalized automaton that have the same final flag and the same
/// set of incoming location strings of length at most k (short strings carry a start
/// marker). Returns the normalized quotient.
Automaton quotient_by_past(const Automaton& a, int k);

struct WidenOptions {
    std::function<bool(Loc)> widen_label = [](Loc) { return true; };
    int shape_k = 1;
    bool shape_widening = true;
};

/// Upper bound of a and b that stabilizes iterated growth. Both normalized.
Automaton widen(const Automaton& a, const Automaton& b, const WidenOptions& opts);

} // namespace latta
