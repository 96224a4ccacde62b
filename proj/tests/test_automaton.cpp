// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "latta/automaton.hpp"

using namespace latta;

namespace {

Interval iv(long lo, long hi) { return {Bound(lo), Bound(hi)}; }

LocalState ls(Loc loc, long lo, long hi) { return {loc, NumEnv::top(Domain::Interval, 1).restrict(0, iv(lo, hi))}; }

Automaton from_words(const std::vector<std::vector<LocalState>>& words) {
    Automaton u;
    for (const auto& w : words) {
        u = unite(u, Automaton::word(w));
    }
    return u;
}

Automaton parallel(const std::vector<LocalState>& labels) {
    Automaton a;
    const int q0 = a.add_state();
    const int q1 = a.add_state(true);
    a.set_initial(q0);
    for (const auto& l : labels) {
        a.add_transition(q0, l, q1);
    }
    return a;
}

} // namespace

TEST_CASE("parallel edges with the same location normalize to one joined edge") {
    const auto a1 = normalize(parallel({ls(0, 0, 2), ls(0, 2, 4)}));
    const auto a2 = normalize(parallel({ls(0, 0, 3), ls(0, 3, 4)}));
    const auto a3 = normalize(parallel({ls(0, 0, 4)}));
    CHECK(a1 == a2);
    CHECK(a2 == a3);
    REQUIRE(a3.transitions().size() == 1);
    CHECK(a3.transitions()[0].label == ls(0, 0, 4));
}

TEST_CASE("normalize joins same-location letters position by position") {
    const auto a = normalize(Automaton::word({ls(0, 0, 2), ls(0, 2, 4)}));
    const auto b = normalize(Automaton::word({ls(0, 0, 3), ls(0, 3, 4)}));
    const auto c = normalize(Automaton::word({ls(0, 0, 4)}));
    CHECK(a.num_states() == 3);
    CHECK(b.num_states() == 3);
    CHECK_FALSE(a == b);
    CHECK(c.num_states() == 2);
    const auto ab = unite(a, b);
    CHECK(ab.num_states() == 3);
    CHECK(ab.transitions()[0].label == ls(0, 0, 3));
    CHECK(ab.transitions()[1].label == ls(0, 2, 4));
    CHECK(normalize(ab) == ab);
}

TEST_CASE("normalize is idempotent and merges equivalent suffixes") {
    Automaton a;
    const int q0 = a.add_state();
    const int q1 = a.add_state();
    const int q2 = a.add_state();
    const int q3 = a.add_state(true);
    const int q4 = a.add_state(true);
    a.set_initial(q0);
    a.add_epsilon(q0, q1);
    a.add_transition(q0, ls(1, 0, 0), q2);
    a.add_transition(q1, ls(2, 1, 1), q2);
    a.add_transition(q2, ls(3, 5, 5), q3);
    a.add_transition(q2, ls(4, 5, 5), q4);
    a.add_state();
    const auto n = normalize(a);
    CHECK(n.num_states() == 3);
    CHECK(n.transitions().size() == 4);
    CHECK(normalize(n) == n);
    CHECK(n.epsilons().empty());
}

TEST_CASE("empty language has zero states") {
    Automaton a;
    a.add_state();
    a.set_initial(0);
    CHECK(normalize(a).num_states() == 0);
    CHECK(is_empty(a));
    CHECK(includes(normalize(Automaton::word({ls(0, 1, 1)})), normalize(a)));
    CHECK_FALSE(includes(normalize(a), normalize(Automaton::word({ls(0, 1, 1)}))));
}

TEST_CASE("inclusion and intersection") {
    const auto small = normalize(Automaton::word({ls(0, 0, 0), ls(1, 1, 1)}));
    const auto big = from_words({{ls(0, 0, 1), ls(1, 0, 5)}, {ls(0, 3, 3)}});
    CHECK(includes(big, small));
    CHECK_FALSE(includes(small, big));
    CHECK(includes(big, big));
    const auto both = intersect(big, normalize(Automaton::word({ls(0, 1, 4), ls(1, 4, 9)})));
    CHECK(both == normalize(Automaton::word({ls(0, 1, 3), ls(1, 4, 5)})));
    CHECK(is_empty(intersect(small, normalize(Automaton::word({ls(0, 2, 2), ls(1, 1, 1)})))));
}

TEST_CASE("guard matching enumerates sub-words") {
    const auto a = normalize(Automaton::word({ls(0, 0, 0), ls(1, 1, 1), ls(0, 2, 2)}));
    const auto m = matches({GuardElement::at(0)}, a);
    CHECK(m.size() == 2);
    GuardElement g = GuardElement::at(0);
    g.ranges.emplace_back(0, iv(2, 9));
    const auto m2 = matches({GuardElement::any(), g}, a);
    REQUIRE(m2.size() == 1);
    CHECK(m2[0].begin == 1);
    CHECK(m2[0].labels[1] == ls(0, 2, 2));
    CHECK(path_enumerate(a, 0, 2).size() == 1);
    CHECK(matches({GuardElement::bottom()}, a).empty());
}

TEST_CASE("length range") {
    const auto a = from_words({{ls(0, 0, 0)}, {ls(0, 0, 0), ls(1, 0, 0), ls(2, 0, 0)}});
    const auto [lo, hi] = length_range(a);
    CHECK(lo == 1);
    CHECK(hi == 3);
    Automaton loop;
    loop.add_state();
    loop.add_state(true);
    loop.set_initial(0);
    loop.add_transition(0, ls(0, 0, 0), 1);
    loop.add_transition(1, ls(0, 1, 1), 1);
    CHECK_FALSE(length_range(normalize(loop)).second.has_value());
}

TEST_CASE("shape widening stabilizes growing words") {
    std::vector<LocalState> w;
    Automaton cur;
    WidenOptions opts;
    bool stable = false;
    for (long n = 1; n <= 8; ++n) {
        w.push_back(ls(0, n - 1, n - 1));
        const auto next = widen(cur, unite(cur, Automaton::word(w)), opts);
        CHECK(includes(next, cur));
        CHECK(includes(next, normalize(Automaton::word(w))));
        if (next == cur) {
            stable = true;
            break;
        }
        cur = next;
    }
    CHECK(stable);
    CHECK_FALSE(length_range(cur).second.has_value());
    CHECK(includes(cur, normalize(Automaton::word({ls(0, 0, 0), ls(0, 1, 1), ls(0, 2, 2), ls(0, 40, 40)}))));
}

TEST_CASE("label widening on equal shapes") {
    const auto a = normalize(Automaton::word({ls(0, 0, 1)}));
    const auto b = normalize(Automaton::word({ls(0, 0, 2)}));
    const auto w = widen(a, b, {});
    REQUIRE(w.transitions().size() == 1);
    CHECK(w.transitions()[0].label.id() == Interval(Bound(0L), Bound::pos_inf()));
    WidenOptions off;
    off.widen_label = [](Loc) { return false; };
    CHECK(widen(a, b, off) == b);
}
