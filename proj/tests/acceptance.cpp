// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace latta;
using namespace latta::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt_seconds(double s) {
    std::ostringstream out;
    out.precision(3);
    out << std::fixed << s << "s";
    return out.str();
}

std::string program(const std::string& name) {
    std::ifstream in(std::string(LATTA_PROGRAMS_DIR) + "/" + name);
    if (!in) {
        throw std::runtime_error("missing program " + name);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AnalysisResult analyze(const CompiledSemantics& sem, std::optional<int> procs) {
    AnalysisConfig cfg;
    cfg.domain = sem.voc().domain;
    cfg.procs = procs;
    return fixpoint(sem, cfg);
}

bool post_fixpoint(const CompiledSemantics& sem, const AnalysisResult& r) {
    return r.converged && includes(r.reach, step_serial(sem, r.reach));
}

LocalState pt(Loc loc, std::vector<Rational> values) { return point_state(Domain::Interval, loc, values); }

Outcome golden_local_step() {
    Vocabulary voc;
    for (int l = 0; l < 9; ++l) {
        voc.locations.push_back({"l" + std::to_string(l)});
    }
    voc.vars = {{"x"}};
    Transducer t;
    TransducerRule r;
    r.name = "l7: x := x + 4";
    r.guard = {GuardElement::at(7)};
    r.outputs = {RewriterSpec::copy(0, 8).assign(1, Expr::binary(Op::Add, Expr::var(0, 1, true), Expr::constant(Rational(4))))};
    t.rules.push_back(r);
    const Automaton in = Automaton::word({pt(7, {0, 1})});
    const Automaton expected = normalize(Automaton::word({pt(8, {0, 5})}));
    Automaton out;
    double best = 1e9;
    for (int i = 0; i < 20; ++i) {
        const auto t0 = Clock::now();
        out = apply_transducer(t, in, voc);
        best = std::min(best, seconds_since(t0));
    }
    return {out == expected && best < 1e-3, "result " + std::string(out == expected ? "exact" : "differs") +
                                                 ", best of 20 runs " + fmt_seconds(best)};
}

Outcome sum_program() {
    const auto t0 = Clock::now();
    const std::string text = program("sum.prog");
    const CompiledSemantics sem = compile_source(text, Domain::Interval, 2);
    const AnalysisResult r = analyze(sem, 2);
    const double elapsed = seconds_since(t0);
    const Vocabulary& voc = sem.voc();
    const Loc collector = *voc.find_location("collector");
    const Rational half(1, 2);
    const Rational quarter(1, 4);
    const Rational total(3, 4);
    const ConcreteConfig final_word = {{sem.cfg.exit, {0, half, total}}, {sem.cfg.exit, {1, quarter, 0}}};
    std::set<Rational> collector_totals;
    bool exact = true;
    for (const auto& t : r.reach.transitions()) {
        if (t.label.loc == collector) {
            const auto v = t.label.env.interval_of(2).singleton();
            exact = exact && v.has_value();
            if (v) {
                collector_totals.insert(*v);
            }
        }
    }
    const bool structure = exact && collector_totals == std::set<Rational>{0, half, total};

    bool closed_form = true;
    std::string sizes;
    for (int n : {2, 4, 8}) {
        const CompiledSemantics s = compile_source(text, Domain::Interval, n);
        const AnalysisResult rn = analyze(s, n);
        const Rational expected = Rational(1) - Rational(1, 1L << n);
        bool found = false;
        for (const auto& t : rn.reach.transitions()) {
            if (t.label.loc == s.cfg.exit && t.label.id() == Interval::point(Rational(0))) {
                found = t.label.env.interval_of(2) == Interval::point(expected);
            }
        }
        closed_form = closed_form && found;
        sizes += " n=" + std::to_string(n) + ":" + (found ? "ok" : "wrong");
    }
    bool oracle = false;
    for (const auto& c : reach_bounded(sem.cfg, {initial_config(sem.cfg, 2)}, 10, 2).states) {
        oracle = oracle || (c[0].loc == sem.cfg.exit && c[0].values[2] == total);
    }
    const bool pass = accepts(r.reach, final_word) && structure && closed_form && oracle && elapsed < 10;
    return {pass, "final word with total=3/4 " + std::string(accepts(r.reach, final_word) ? "present" : "missing") +
                      ", collector totals {0,1/2,3/4} " + (structure ? "match" : "differ") + ", closed form" + sizes +
                      ", oracle " + (oracle ? "agrees" : "disagrees") + ", " + fmt_seconds(elapsed)};
}

Outcome running_example() {
    const auto t0 = Clock::now();
    const std::string text = program("chain.prog");
    const std::string bad_text = program("chain.bad");
    const auto verdict = [&](Domain d, std::optional<int> procs) {
        const CompiledSemantics sem = compile_source(text, d, procs);
        const AnalysisResult r = analyze(sem, procs);
        const PropertyAutomaton bad = parse_property(bad_text, sem.voc());
        return r.converged && !check_safety(r.reach, bad, sem.voc()).has_value();
    };
    const bool affine_safe = verdict(Domain::Affine, std::nullopt);
    const bool interval_safe = verdict(Domain::Interval, std::nullopt);
    const double elapsed = seconds_since(t0);
    const bool single_safe = verdict(Domain::Affine, 1);

    std::string counterexample = "none found";
    const CompiledSemantics sem = compile_source(text, Domain::Interval, 2);
    for (const auto& c : reach_bounded(sem.cfg, {initial_config(sem.cfg, 2)}, 14, 4).states) {
        for (const auto& l : c) {
            if (l.loc == sem.cfg.exit && l.values[1] != Rational(5) + Rational(4) * l.id()) {
                counterexample = to_string(c, sem.voc());
                break;
            }
        }
        if (counterexample != "none found") {
            break;
        }
    }
    const bool pass = affine_safe && !interval_safe && elapsed < 60;
    return {pass, "unbounded affine " + std::string(affine_safe ? "SAFE" : "ALARM") + ", unbounded interval " +
                      (interval_safe ? "SAFE" : "ALARM") + ", " + fmt_seconds(elapsed) + "; single initial process affine " +
                      (single_safe ? "SAFE" : "ALARM") + "; concrete 2-process violation: " + counterexample};
}

Outcome deadlock_witness(const std::string& file, int procs, int oracle_depth, double limit) {
    const auto t0 = Clock::now();
    const CompiledSemantics sem = compile_source(program(file), Domain::Interval, procs);
    const AnalysisResult r = analyze(sem, procs);
    const auto alarms = check_deadlock(sem, r.reach);
    const double elapsed = seconds_since(t0);
    std::set<std::vector<Loc>> witnessed;
    for (const auto& a : alarms) {
        witnessed.insert(a.locations);
    }
    std::string confirmed = "none";
    for (const auto& c : reach_bounded(sem.cfg, {initial_config(sem.cfg, procs)}, oracle_depth, procs).states) {
        std::vector<Loc> locs;
        for (const auto& l : c) {
            locs.push_back(l.loc);
        }
        if (witnessed.count(locs) && is_stuck(sem.cfg, c)) {
            confirmed = to_string(c, sem.voc());
            break;
        }
    }
    const bool pass = r.converged && !alarms.empty() && confirmed != "none" && elapsed < limit;
    return {pass, std::to_string(alarms.size()) + " witness(es), analysis " + fmt_seconds(elapsed) +
                      ", concrete stuck configuration: " + confirmed};
}

Outcome rewriting_suite() {
    const auto t0 = Clock::now();
    Rng rng(20240601);
    const Universe u;
    std::size_t words = 0;
    std::size_t images = 0;
    std::size_t missed = 0;
    const std::vector<std::string> sources = {
        "if (id == 0) send(1, x + 1) else receive(any_id, x)",
        "if (id == 1) receive(0, x) else send(id + 1, id)",
        "create(x)",
        "broadcast(1, x)",
        "reduce(x, x, +, 0)",
        "reduce(x, x, max, 1)",
    };
    const auto check = [&](const Automaton& out, const ConcreteConfig& img) {
        ++images;
        missed += accepts(out, img) ? 0 : 1;
    };
    for (int i = 0; i < 100; ++i) {
        const Domain d = i % 4 == 3 ? Domain::Affine : Domain::Interval;
        if (i % 2 == 0) {
            const CompiledSemantics sem = compile_source(sources[static_cast<std::size_t>(i / 2) % sources.size()], d, 3);
            std::vector<Loc> locs;
            for (Loc l = 0; l < static_cast<Loc>(sem.voc().locations.size()); ++l) {
                locs.push_back(l);
            }
            const RewriteRule& r = sem.rules[static_cast<std::size_t>(i / 2) % sem.rules.size()];
            const Automaton a = random_automaton(rng, d, locs, 2, 3, u);
            const Automaton out = apply_rule(r, a, sem.voc());
            for (const auto& w : enumerate_language(a, 2, 3, u, 3000)) {
                ++words;
                for (const auto& img : rule_image(r, w, 2, u)) {
                    check(out, img);
                }
            }
        } else {
            Vocabulary voc;
            voc.domain = d;
            voc.locations = {{"a"}, {"b"}, {"c"}};
            voc.vars = {{"x"}};
            const RewriteRule r = random_rule(rng, {0, 1, 2}, 2, u);
            const Automaton a = random_automaton(rng, d, {0, 1, 2}, 2, 3, u);
            const Automaton out = apply_rule(r, a, voc);
            for (const auto& w : enumerate_language(a, 2, 3, u, 3000)) {
                ++words;
                for (const auto& img : rule_image(r, w, 2, u)) {
                    check(out, img);
                }
            }
        }
    }
    for (int i = 0; i < 100; ++i) {
        Vocabulary voc;
        voc.domain = i % 4 == 3 ? Domain::Affine : Domain::Interval;
        voc.locations = {{"a"}, {"b"}, {"c"}};
        voc.vars = {{"x"}};
        const Transducer t = random_transducer(rng, {0, 1, 2}, 2, u);
        const Automaton a = random_automaton(rng, voc.domain, {0, 1, 2}, 2, 3, u);
        const Automaton out = apply_transducer(t, a, voc);
        for (const auto& w : enumerate_language(a, 2, 3, u, 3000)) {
            ++words;
            for (const auto& img : transducer_image(t, w, 2, u)) {
                check(out, img);
            }
        }
    }
    const double elapsed = seconds_since(t0);
    return {missed == 0 && elapsed < 60, "200 pairs, " + std::to_string(words) + " input words, " +
                                             std::to_string(images) + " images, " + std::to_string(missed) +
                                             " outside the abstract result, " + fmt_seconds(elapsed)};
}

Outcome soundness_suite() {
    const auto t0 = Clock::now();
    Rng rng(31337);
    int failures = 0;
    int pruned = 0;
    std::size_t configs = 0;
    std::string first;
    for (int i = 0; i < 50; ++i) {
        const int procs = 1 + i % 3;
        const std::string text = random_program(rng, procs);
        const CompiledSemantics sem = compile_source(text, i % 2 ? Domain::Affine : Domain::Interval, procs);
        const AnalysisResult r = analyze(sem, procs);
        const OracleCheck c = oracle_included(sem.cfg, r.reach, procs, 15, procs);
        configs += c.concrete;
        pruned += c.pruned ? 1 : 0;
        if (!r.converged || c.missed > 0) {
            if (failures++ == 0) {
                first = " first failure:\n" + text + "missing " + c.first_missed;
            }
        }
    }
    return {failures == 0 && pruned == 0, "50 programs, " + std::to_string(configs) + " concrete configurations, " +
                                              std::to_string(failures) + " failures, " + std::to_string(pruned) +
                                              " pruned explorations, " + fmt_seconds(seconds_since(t0)) + first};
}

Outcome normalization_golden() {
    const auto lbl = [](long lo, long hi) {
        return LocalState{0, NumEnv::top(Domain::Interval, 1).restrict(0, Interval(Bound(lo), Bound(hi)))};
    };
    const auto parallel = [](const std::vector<LocalState>& labels) {
        Automaton a;
        const int q0 = a.add_state();
        const int q1 = a.add_state(true);
        a.set_initial(q0);
        for (const auto& l : labels) {
            a.add_transition(q0, l, q1);
        }
        return normalize(a);
    };
    const Automaton a1 = parallel({lbl(0, 2), lbl(2, 4)});
    const Automaton a2 = parallel({lbl(0, 3), lbl(3, 4)});
    const Automaton a3 = parallel({lbl(0, 4)});
    const bool pass = a1 == a2 && a2 == a3 && a3.transitions().size() == 1;
    return {pass, std::string(pass ? "all three" : "not all") + " normalize to one edge labelled [0,4]"};
}

Outcome termination() {
    struct Run {
        std::string file;
        Domain domain;
        std::optional<int> procs;
    };
    const std::vector<Run> runs = {
        {"sum.prog", Domain::Interval, 2},           {"sum.prog", Domain::Interval, 4},
        {"sum.prog", Domain::Interval, 8},           {"chain.prog", Domain::Affine, std::nullopt},
        {"chain.prog", Domain::Interval, std::nullopt}, {"chain.prog", Domain::Affine, 1},
        {"deadlock_random.prog", Domain::Interval, 2}, {"philosophers.prog", Domain::Interval, 4},
        {"empty.prog", Domain::Interval, 1},
    };
    int ok = 0;
    std::string detail;
    for (const auto& run : runs) {
        const CompiledSemantics sem = compile_source(program(run.file), run.domain, run.procs);
        const AnalysisResult r = analyze(sem, run.procs);
        const bool good = post_fixpoint(sem, r);
        ok += good ? 1 : 0;
        detail += " " + run.file + "/" + domain_name(run.domain) + "/" + (run.procs ? std::to_string(*run.procs) : "unbounded") +
                  ":" + (good ? std::to_string(r.iterations) : "FAILED");
    }
    return {ok == static_cast<int>(runs.size()),
            std::to_string(ok) + "/" + std::to_string(runs.size()) + " runs are post-fixpoints (iterations)" + detail};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Outcome()>>> list = {
        {"single local step golden", golden_local_step},
        {"sum program reach set", sum_program},
        {"running example safety", running_example},
        {"random deadlock", [] { return deadlock_witness("deadlock_random.prog", 2, 10, 5); }},
        {"dining philosophers", [] { return deadlock_witness("philosophers.prog", 4, 20, 300); }},
        {"rule and transducer soundness", rewriting_suite},
        {"end-to-end soundness", soundness_suite},
        {"normalization golden", normalization_golden},
        {"termination", termination},
    };
    return list;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.push_back(std::stoi(argv[i]));
    }
    if (selected.empty()) {
        for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) {
            selected.push_back(i);
        }
    }
    int failed = 0;
    for (int k : selected) {
        if (k < 1 || k > static_cast<int>(criteria().size())) {
            std::cerr << "no criterion " << k << "\n";
            return 2;
        }
        const auto& [name, fn] = criteria()[static_cast<std::size_t>(k - 1)];
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << k << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << std::endl;
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
