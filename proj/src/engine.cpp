// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include <omp.h>

namespace latta {

const char* alarm_kind_name(AlarmKind k) {
    switch (k) {
    case AlarmKind::Property: return "property";
    case AlarmKind::Deadlock: return "deadlock";
    case AlarmKind::Division: return "division";
    }
    return "?";
}

namespace {

Automaton run_task(const CompiledSemantics& sem, const Automaton& s, std::size_t task, Diagnostics& diag) {
    if (task == 0) {
        return apply_transducer(sem.transducer, s, sem.voc(), &diag);
    }
    return apply_rule(sem.rules[task - 1], s, sem.voc(), &diag);
}

} // namespace

Automaton step_serial(const CompiledSemantics& sem, const Automaton& s, Diagnostics* diag) {
    std::vector<Automaton> parts;
    Diagnostics d;
    for (std::size_t t = 0; t <= sem.rules.size(); ++t) {
        parts.push_back(run_task(sem, s, t, d));
    }
    if (diag) {
        diag->merge(d);
    }
    return unite_all(std::move(parts));
}

Automaton step_parallel(const CompiledSemantics& sem, const Automaton& s, Diagnostics* diag) {
    const auto tasks = static_cast<long>(sem.rules.size() + 1);
    std::vector<Automaton> parts(static_cast<std::size_t>(tasks));
    std::vector<Diagnostics> diags(static_cast<std::size_t>(tasks));
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < tasks; ++t) {
        const auto i = static_cast<std::size_t>(t);
        parts[i] = run_task(sem, s, i, diags[i]);
    }
    if (diag) {
        for (const auto& d : diags) {
            diag->merge(d);
        }
    }
    return unite_all(std::move(parts));
}

AnalysisResult fixpoint(const CompiledSemantics& sem, const AnalysisConfig& config) {
    AnalysisResult res;
    Diagnostics diag;
    const auto step = [&](const Automaton& s) {
        return config.parallel ? step_parallel(sem, s, &diag) : step_serial(sem, s, &diag);
    };
    Automaton s = sem.initial;
    for (int k = 0; k < config.step_budget; ++k) {
        const Automaton next = step(s);
        res.iterations = k + 1;
        if (includes(s, next)) {
            res.converged = true;
            break;
        }
        const Automaton joined = unite(s, next);
        if (k < config.widening_delay) {
            s = joined;
            continue;
        }
        const bool everywhere = k >= config.widening_delay + config.global_widening_after;
        WidenOptions opts;
        opts.shape_k = config.shape_k;
        opts.shape_widening = sem.shape_widening;
        opts.widen_label = [&sem, everywhere](Loc l) { return everywhere || sem.is_widening_point(l); };
        s = widen(s, joined, opts);
    }
    res.reach = s;
    for (const auto& site : diag.division) {
        res.alarms.push_back({AlarmKind::Division, "possible division by zero at " + site, {}});
    }
    return res;
}

// ---------------------------------------------------------------- properties

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_top_level(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (const char c : s) {
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        }
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

} // namespace

PropertyAutomaton parse_property(const std::string& text, const Vocabulary& voc) {
    PropertyAutomaton p;
    std::map<std::string, int> states;
    const auto state = [&](const std::string& name, int line) {
        if (name.empty() || name.find_first_of(" \t") != std::string::npos) {
            throw SourceError("bad state name '" + name + "'", line, 1);
        }
        auto [it, inserted] = states.emplace(name, p.num_states);
        if (inserted) {
            ++p.num_states;
            p.final.push_back(false);
        }
        return it->second;
    };
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string l = raw;
        for (const char* marker : {"//", "#"}) {
            if (auto c = l.find(marker); c != std::string::npos) {
                l = l.substr(0, c);
            }
        }
        l = trim(l);
        if (l.empty()) {
            continue;
        }
        if (l.rfind("initial ", 0) == 0 || l.rfind("final ", 0) == 0) {
            const bool init = l[0] == 'i';
            std::istringstream names(l.substr(init ? 8 : 6));
            std::string n;
            while (names >> n) {
                const int q = state(n, line);
                if (init) {
                    p.initial.push_back(q);
                } else {
                    p.final[static_cast<std::size_t>(q)] = true;
                }
            }
            continue;
        }
        const auto arrow = l.find("->");
        const auto colon = l.find(':', arrow == std::string::npos ? 0 : arrow);
        if (arrow == std::string::npos || colon == std::string::npos) {
            throw SourceError("expected 'initial', 'final' or '<state> -> <state> : <label>'", line, 1);
        }
        PropertyAutomaton::Edge e;
        e.src = state(trim(l.substr(0, arrow)), line);
        e.dst = state(trim(l.substr(arrow + 2, colon - arrow - 2)), line);
        const std::string label = trim(l.substr(colon + 1));
        if (label != "true") {
            for (const auto& part : split_top_level(label)) {
                if (part.rfind("loc", 0) == 0 && part.find('=') != std::string::npos &&
                    trim(part.substr(3, part.find('=') - 3)).empty() && part[part.find('=') + 1] != '=') {
                    const std::string names = trim(part.substr(part.find('=') + 1));
                    if (names == "any") {
                        continue;
                    }
                    std::vector<Loc> locs;
                    std::istringstream alts(names);
                    std::string n;
                    while (std::getline(alts, n, '|')) {
                        const auto loc = voc.find_location(trim(n));
                        if (!loc) {
                            throw SourceError("unknown location '" + trim(n) + "'", line, 1);
                        }
                        locs.push_back(*loc);
                    }
                    e.guard.locs = locs;
                    continue;
                }
                try {
                    e.guard.conds.push_back(parse_expression(part, voc));
                } catch (const SourceError& err) {
                    throw SourceError(std::string("in condition '") + part + "': " + err.what(), line, 1);
                }
            }
        }
        p.edges.push_back(std::move(e));
    }
    if (p.initial.empty()) {
        throw SourceError("property has no initial state", line, 1);
    }
    return p;
}

std::optional<Alarm> check_safety(const Automaton& reach, const PropertyAutomaton& bad, const Vocabulary& voc) {
    if (reach.num_states() == 0) {
        return std::nullopt;
    }
    struct Node {
        int parent;
        std::optional<LocalState> label;
    };
    std::vector<Node> nodes;
    std::map<std::pair<int, int>, int> seen;
    std::deque<std::pair<int, int>> queue;
    for (int qa : reach.initial()) {
        for (int qb : bad.initial) {
            if (seen.emplace(std::make_pair(qa, qb), static_cast<int>(nodes.size())).second) {
                nodes.push_back({-1, std::nullopt});
                queue.emplace_back(qa, qb);
            }
        }
    }
    const auto out = reach.out_index();
    while (!queue.empty()) {
        const auto [qa, qb] = queue.front();
        queue.pop_front();
        const int id = seen.at({qa, qb});
        if (reach.is_final(qa) && bad.final[static_cast<std::size_t>(qb)]) {
            Alarm a{AlarmKind::Property, "", {}};
            std::vector<LocalState> word;
            for (int n = id; nodes[static_cast<std::size_t>(n)].label; n = nodes[static_cast<std::size_t>(n)].parent) {
                word.push_back(*nodes[static_cast<std::size_t>(n)].label);
            }
            std::reverse(word.begin(), word.end());
            for (const auto& l : word) {
                a.witness += l.to_string(voc);
                a.locations.push_back(l.loc);
            }
            if (word.empty()) {
                a.witness = "<empty word>";
            }
            return a;
        }
        for (int ti : out[static_cast<std::size_t>(qa)]) {
            const Transition& t = reach.transitions()[static_cast<std::size_t>(ti)];
            for (const auto& e : bad.edges) {
                if (e.src != qb) {
                    continue;
                }
                auto m = e.guard.meet(t.label);
                if (!m) {
                    continue;
                }
                if (seen.emplace(std::make_pair(t.dst, e.dst), static_cast<int>(nodes.size())).second) {
                    nodes.push_back({id, std::move(m)});
                    queue.emplace_back(t.dst, e.dst);
                }
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- deadlock

namespace {

bool can_move(const CompiledSemantics& sem, const std::vector<LocalState>& word) {
    const Automaton w = Automaton::word(word);
    const Vocabulary& voc = sem.voc();
    for (const auto& r : sem.transducer.rules) {
        if (r.name == "idle") {
            continue;
        }
        const int n = static_cast<int>(r.guard.size());
        for (int start = 0; start + n <= static_cast<int>(word.size()); ++start) {
            std::vector<LocalState> letters;
            for (int i = 0; i < n; ++i) {
                auto m = r.guard[static_cast<std::size_t>(i)].meet(word[static_cast<std::size_t>(start + i)]);
                if (!m) {
                    break;
                }
                letters.push_back(std::move(*m));
            }
            if (static_cast<int>(letters.size()) != n) {
                continue;
            }
            MatchContext ctx(letters, {}, voc.domain, voc.dims());
            ctx.require(r.conditions);
            if (!ctx.is_bottom()) {
                return true;
            }
        }
    }
    return std::any_of(sem.rules.begin(), sem.rules.end(),
                       [&](const RewriteRule& r) { return !is_empty(apply_rule(r, w, voc)); });
}

} // namespace

std::vector<Alarm> check_deadlock(const CompiledSemantics& sem, const Automaton& reach, std::size_t max_paths) {
    std::vector<Alarm> out;
    if (reach.num_states() == 0) {
        return out;
    }
    const Loc exit = sem.cfg.exit;
    const auto idx = reach.out_index();
    std::vector<int> visits(static_cast<std::size_t>(reach.num_states()), 0);
    std::vector<LocalState> word;
    std::set<std::vector<Loc>> reported;
    std::size_t explored = 0;
    const auto stationary = [&](const LocalState& l) { return l.loc == exit || sem.is_blocking(l.loc); };
    const std::function<void(int)> dfs = [&](int q) {
        if (explored >= max_paths) {
            return;
        }
        if (reach.is_final(q) && !word.empty()) {
            ++explored;
            const bool waiting = std::any_of(word.begin(), word.end(), [exit](const LocalState& l) { return l.loc != exit; });
            std::vector<Loc> locs;
            for (const auto& l : word) {
                locs.push_back(l.loc);
            }
            if (waiting && !reported.count(locs) && !can_move(sem, word)) {
                reported.insert(locs);
                Alarm a{AlarmKind::Deadlock, "", locs};
                for (const auto& l : word) {
                    a.witness += l.to_string(sem.voc());
                }
                out.push_back(std::move(a));
            }
        }
        for (int ti : idx[static_cast<std::size_t>(q)]) {
            const Transition& t = reach.transitions()[static_cast<std::size_t>(ti)];
            auto& v = visits[static_cast<std::size_t>(t.dst)];
            if (v >= 2 || !stationary(t.label)) {
                continue;
            }
            ++v;
            word.push_back(t.label);
            dfs(t.dst);
            word.pop_back();
            --v;
        }
    };
    for (int q : reach.initial()) {
        visits[static_cast<std::size_t>(q)] = 1;
        dfs(q);
    }
    return out;
}

} // namespace latta
