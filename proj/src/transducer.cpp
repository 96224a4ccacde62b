// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/transducer.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace latta {

bool Transducer::is_final(int p) const { return std::find(finals.begin(), finals.end(), p) != finals.end(); }

TransducerRule Transducer::inactivity() {
    TransducerRule r;
    r.name = "idle";
    r.guard = {GuardElement::any()};
    r.outputs = {RewriterSpec::copy(0)};
    return r;
}

Automaton apply_transducer(const Transducer& t, const Automaton& a, const Vocabulary& voc, Diagnostics* diag) {
    if (a.num_states() == 0) {
        return {};
    }
    Automaton out;
    std::map<std::pair<int, int>, int> ids;
    std::deque<std::pair<int, int>> queue;
    const auto intern = [&](int p, int q) {
        auto [it, inserted] = ids.emplace(std::make_pair(p, q), 0);
        if (inserted) {
            it->second = out.add_state(t.is_final(p) && a.is_final(q));
            queue.emplace_back(p, q);
        }
        return it->second;
    };
    for (int p : t.initial) {
        for (int q : a.initial()) {
            out.set_initial(intern(p, q));
        }
    }
    while (!queue.empty()) {
        const auto [p, q] = queue.front();
        queue.pop_front();
        const int src = ids.at({p, q});
        for (const auto& rule : t.rules) {
            if (rule.src != p) {
                continue;
            }
            const int n = static_cast<int>(rule.guard.size());
            for (const auto& [labels, end] : path_enumerate(a, q, n)) {
                std::vector<LocalState> letters;
                for (int i = 0; i < n; ++i) {
                    auto m = rule.guard[static_cast<std::size_t>(i)].meet(labels[static_cast<std::size_t>(i)]);
                    if (!m) {
                        break;
                    }
                    letters.push_back(std::move(*m));
                }
                if (static_cast<int>(letters.size()) != n) {
                    continue;
                }
                MatchContext ctx(letters, {}, voc.domain, voc.dims());
                ctx.require(rule.conditions);
                if (ctx.is_bottom()) {
                    continue;
                }
                EvalFlags flags;
                std::vector<LocalState> word;
                for (const auto& f : rule.outputs) {
                    auto img = ctx.produce(f, nullptr, flags);
                    if (!img) {
                        break;
                    }
                    word.push_back(std::move(*img));
                }
                if (flags.division_by_zero && diag) {
                    diag->division.insert(rule.name);
                }
                if (word.size() != rule.outputs.size()) {
                    continue;
                }
                const int dst = intern(rule.dst, end);
                if (word.empty()) {
                    out.add_epsilon(src, dst);
                    continue;
                }
                int cur = src;
                for (std::size_t i = 0; i < word.size(); ++i) {
                    const int next = i + 1 == word.size() ? dst : out.add_state();
                    out.add_transition(cur, std::move(word[i]), next);
                    cur = next;
                }
            }
        }
    }
    return normalize(out);
}

} // namespace latta
