// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "support.hpp"

using namespace latta;
using namespace latta::testing;

namespace {

const char* const kSum = "rat res, total; res := 1 / 2 ^ (id + 1); reduce(total, res, +, 0)";

AnalysisResult run(const CompiledSemantics& sem, std::optional<int> procs) {
    AnalysisConfig cfg;
    cfg.domain = sem.voc().domain;
    cfg.procs = procs;
    return fixpoint(sem, cfg);
}

} // namespace

TEST_CASE("step of the empty automaton is empty") {
    const CompiledSemantics sem = compile_source(kSum, Domain::Interval, 2);
    CHECK(step_serial(sem, Automaton{}).num_states() == 0);
    CHECK(step_parallel(sem, Automaton{}).num_states() == 0);
}

TEST_CASE("serial and parallel steps agree") {
    const CompiledSemantics sem = compile_source(kSum, Domain::Interval, 3);
    Automaton s = sem.initial;
    for (int i = 0; i < 6; ++i) {
        const Automaton a = step_serial(sem, s);
        CHECK(a == step_parallel(sem, s));
        s = unite(s, a);
    }
}

TEST_CASE("one step from the running example's initial word takes the then-branch") {
    const CompiledSemantics sem = compile_source("if (id == 0) x := 1 else receive(any_id, x); create(next)",
                                                 Domain::Interval, 1);
    const Automaton next = step_serial(sem, sem.initial);
    for (const auto& c : post(sem.cfg, initial_config(sem.cfg, 1)).successors) {
        CHECK(accepts(next, c));
    }
}

TEST_CASE("single assignment reaches two words") {
    const CompiledSemantics sem = compile_source("x := 1", Domain::Interval, 1);
    const AnalysisResult r = run(sem, 1);
    REQUIRE(r.converged);
    const auto words = enumerate_language(r.reach, 2, 2, {0, 1});
    REQUIRE(words.size() == 2);
    CHECK(words[0] == ConcreteConfig{{0, {0, 0}}});
    CHECK(words[1] == ConcreteConfig{{1, {0, 1}}});
}

TEST_CASE("sum program totals are exact") {
    for (int n : {2, 4, 8}) {
        CAPTURE(n);
        const CompiledSemantics sem = compile_source(kSum, Domain::Interval, n);
        const AnalysisResult r = run(sem, n);
        REQUIRE(r.converged);
        CHECK(includes(r.reach, step_serial(sem, r.reach)));
        const Rational expected = Rational(1) - Rational(1, 1L << n);
        bool found = false;
        for (const auto& t : r.reach.transitions()) {
            if (t.label.loc == sem.cfg.exit && t.label.id() == Interval::point(Rational(0))) {
                CHECK(t.label.env.interval_of(2) == Interval::point(expected));
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("iterates grow monotonically") {
    const CompiledSemantics sem = compile_source("while (x < 3) x := x + 1; y := x", Domain::Interval, 2);
    Automaton s = sem.initial;
    for (int i = 0; i < 5; ++i) {
        const Automaton next = unite(s, step_serial(sem, s));
        CHECK(includes(next, s));
        s = next;
    }
}

TEST_CASE("straight-line programs reach the join-only fixpoint") {
    const CompiledSemantics sem = compile_source("x := 2; y := x * 3; if (y > 5) x := 0 else x := 1", Domain::Interval, 2);
    AnalysisConfig widened;
    widened.procs = 2;
    widened.widening_delay = 0;
    AnalysisConfig joined;
    joined.procs = 2;
    joined.widening_delay = 1000;
    CHECK(fixpoint(sem, widened).reach == fixpoint(sem, joined).reach);
}

TEST_CASE("deadlock witnesses") {
    SUBCASE("random send or receive toward each other") {
        const CompiledSemantics sem =
            compile_source("if (nondet()) send(1 - id, id) else receive(1 - id, x)", Domain::Interval, 2);
        const auto alarms = check_deadlock(sem, run(sem, 2).reach);
        REQUIRE(alarms.size() == 2);
        CHECK(alarms[0].locations == std::vector<Loc>{1, 1});
        CHECK(alarms[1].locations == std::vector<Loc>{2, 2});
    }
    SUBCASE("no communication, no deadlock") {
        const CompiledSemantics sem = compile_source("x := 1; while (x < 4) x := x + 1", Domain::Interval, 3);
        CHECK(check_deadlock(sem, run(sem, 3).reach).empty());
    }
    SUBCASE("matched communication does not deadlock") {
        const CompiledSemantics sem = compile_source("if (id == 0) send(1, 7) else receive(0, x)", Domain::Interval, 2);
        CHECK(check_deadlock(sem, run(sem, 2).reach).empty());
    }
}

TEST_CASE("safety check") {
    const CompiledSemantics sem = compile_source("x := id * 2", Domain::Affine, 3);
    const AnalysisResult r = run(sem, 3);
    SUBCASE("empty bad automaton is safe") {
        CHECK_FALSE(check_safety(r.reach, PropertyAutomaton{}, sem.voc()).has_value());
    }
    SUBCASE("relational property") {
        const PropertyAutomaton bad = parse_property(
            "initial a\nfinal b\na -> a : true\na -> b : loc=l1, x != 2 * id\nb -> b : true\n", sem.voc());
        CHECK_FALSE(check_safety(r.reach, bad, sem.voc()).has_value());
    }
    SUBCASE("violated property yields the shortest witness") {
        const PropertyAutomaton bad =
            parse_property("initial a\nfinal b\na -> b : loc=l1\nb -> b : true  # any suffix\n", sem.voc());
        const auto alarm = check_safety(r.reach, bad, sem.voc());
        REQUIRE(alarm.has_value());
        CHECK(alarm->kind == AlarmKind::Property);
        CHECK(alarm->witness.find("l1") != std::string::npos);
    }
    SUBCASE("interval analysis cannot prove the relation") {
        const CompiledSemantics isem = compile_source("x := id * 2", Domain::Interval, std::nullopt);
        const AnalysisResult ir = run(isem, std::nullopt);
        const PropertyAutomaton bad = parse_property(
            "initial a\nfinal b\na -> a : true\na -> b : loc=l1, x != 2 * id\nb -> b : true\n", isem.voc());
        CHECK(check_safety(ir.reach, bad, isem.voc()).has_value());
    }
}

TEST_CASE("property files reject unknown names") {
    const CompiledSemantics sem = compile_source("x := 1", Domain::Interval, 1);
    CHECK_THROWS_AS(parse_property("initial a\na -> a : loc=l9\n", sem.voc()), SourceError);
    CHECK_THROWS_AS(parse_property("initial a\na -> a : z > 1\n", sem.voc()), SourceError);
    CHECK_THROWS_AS(parse_property("initial a\nbogus line\n", sem.voc()), SourceError);
}

TEST_CASE("division by zero raises an alarm") {
    const CompiledSemantics sem = compile_source("x := 1 / id", Domain::Interval, 2);
    const AnalysisResult r = run(sem, 2);
    REQUIRE(r.converged);
    REQUIRE(r.alarms.size() == 1);
    CHECK(r.alarms[0].kind == AlarmKind::Division);
}

TEST_CASE("exhausted budgets are reported") {
    const CompiledSemantics sem = compile_source("while (true) x := x + 1", Domain::Interval, 1);
    AnalysisConfig cfg;
    cfg.step_budget = 2;
    CHECK_FALSE(fixpoint(sem, cfg).converged);
}
