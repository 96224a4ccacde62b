// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

namespace latta {

namespace {

constexpr int kStartMarker = -1000000;

struct DfaEdge {
    Loc key;
    LocalState label;
    int dst;
};

struct Dfa {
    int start = -1;
    std::vector<bool> final;
    std::vector<std::vector<DfaEdge>> delta;
};

std::vector<bool> useful_states(const Automaton& a) {
    const auto n = static_cast<std::size_t>(a.num_states());
    std::vector<std::vector<int>> fwd(n);
    std::vector<std::vector<int>> bwd(n);
    for (const auto& t : a.transitions()) {
        fwd[static_cast<std::size_t>(t.src)].push_back(t.dst);
        bwd[static_cast<std::size_t>(t.dst)].push_back(t.src);
    }
    for (const auto& [s, d] : a.epsilons()) {
        fwd[static_cast<std::size_t>(s)].push_back(d);
        bwd[static_cast<std::size_t>(d)].push_back(s);
    }
    const auto flood = [n](const std::vector<int>& seeds, const std::vector<std::vector<int>>& adj) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack;
        for (int s : seeds) {
            if (!seen[static_cast<std::size_t>(s)]) {
                seen[static_cast<std::size_t>(s)] = true;
                stack.push_back(s);
            }
        }
        while (!stack.empty()) {
            const int q = stack.back();
            stack.pop_back();
            for (int r : adj[static_cast<std::size_t>(q)]) {
                if (!seen[static_cast<std::size_t>(r)]) {
                    seen[static_cast<std::size_t>(r)] = true;
                    stack.push_back(r);
                }
            }
        }
        return seen;
    };
    const auto reach = flood(a.initial(), fwd);
    const auto coreach = flood(a.finals(), bwd);
    std::vector<bool> useful(n);
    for (std::size_t q = 0; q < n; ++q) {
        useful[q] = reach[q] && coreach[q];
    }
    return useful;
}

Dfa determinize(const Automaton& a, const std::vector<bool>& useful) {
    const auto n = static_cast<std::size_t>(a.num_states());
    std::vector<std::vector<int>> eps(n);
    for (const auto& [s, d] : a.epsilons()) {
        if (useful[static_cast<std::size_t>(s)] && useful[static_cast<std::size_t>(d)]) {
            eps[static_cast<std::size_t>(s)].push_back(d);
        }
    }
    const auto out = a.out_index();
    const auto closure = [&eps](std::set<int> s) {
        std::vector<int> stack(s.begin(), s.end());
        while (!stack.empty()) {
            const int q = stack.back();
            stack.pop_back();
            for (int r : eps[static_cast<std::size_t>(q)]) {
                if (s.insert(r).second) {
                    stack.push_back(r);
                }
            }
        }
        return std::vector<int>(s.begin(), s.end());
    };
    Dfa dfa;
    std::set<int> init;
    for (int q : a.initial()) {
        if (useful[static_cast<std::size_t>(q)]) {
            init.insert(q);
        }
    }
    if (init.empty()) {
        return dfa;
    }
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> subsets;
    const auto intern = [&](std::vector<int> s) {
        auto [it, inserted] = ids.emplace(s, static_cast<int>(subsets.size()));
        if (inserted) {
            subsets.push_back(std::move(s));
        }
        return it->second;
    };
    dfa.start = intern(closure(init));
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        const std::vector<int> s = subsets[i];
        bool fin = false;
        std::map<Loc, std::pair<std::optional<LocalState>, std::set<int>>> groups;
        for (int q : s) {
            fin = fin || a.is_final(q);
            for (int ti : out[static_cast<std::size_t>(q)]) {
                const Transition& t = a.transitions()[static_cast<std::size_t>(ti)];
                if (!useful[static_cast<std::size_t>(t.dst)]) {
                    continue;
                }
                auto& g = groups[t.label.loc];
                g.first = g.first ? g.first->join(t.label) : t.label;
                g.second.insert(t.dst);
            }
        }
        std::vector<DfaEdge> edges;
        for (auto& [key, g] : groups) {
            const int dst = intern(closure(g.second));
            edges.push_back({key, *g.first, dst});
        }
        dfa.final.resize(subsets.size(), false);
        dfa.delta.resize(subsets.size());
        dfa.final[i] = fin;
        dfa.delta[i] = std::move(edges);
    }
    dfa.final.resize(subsets.size(), false);
    dfa.delta.resize(subsets.size());
    return dfa;
}

Automaton minimize_canonical(const Dfa& dfa) {
    const std::size_t n = dfa.delta.size();
    std::map<LocalState, int, LocalStateLess> label_ids;
    std::vector<std::vector<std::tuple<Loc, int, int>>> edges(n);
    for (std::size_t q = 0; q < n; ++q) {
        for (const auto& e : dfa.delta[q]) {
            const auto [it, inserted] = label_ids.emplace(e.label, static_cast<int>(label_ids.size()));
            edges[q].emplace_back(e.key, it->second, e.dst);
        }
    }
    std::vector<int> cls(n);
    for (std::size_t q = 0; q < n; ++q) {
        cls[q] = dfa.final[q] ? 1 : 0;
    }
    std::size_t count = 0;
    while (true) {
        std::map<std::pair<int, std::vector<std::tuple<Loc, int, int>>>, int> sigs;
        std::vector<int> next(n);
        for (std::size_t q = 0; q < n; ++q) {
            std::vector<std::tuple<Loc, int, int>> sig;
            for (const auto& [key, lab, dst] : edges[q]) {
                sig.emplace_back(key, lab, cls[static_cast<std::size_t>(dst)]);
            }
            const auto [it, inserted] = sigs.emplace(std::make_pair(cls[q], std::move(sig)), static_cast<int>(sigs.size()));
            next[q] = it->second;
        }
        cls = std::move(next);
        if (sigs.size() == count) {
            break;
        }
        count = sigs.size();
    }
    std::vector<int> rep(count, -1);
    for (std::size_t q = 0; q < n; ++q) {
        if (rep[static_cast<std::size_t>(cls[q])] < 0) {
            rep[static_cast<std::size_t>(cls[q])] = static_cast<int>(q);
        }
    }
    std::vector<int> number(count, -1);
    std::deque<int> queue;
    Automaton out;
    const int start_cls = cls[static_cast<std::size_t>(dfa.start)];
    number[static_cast<std::size_t>(start_cls)] = out.add_state();
    out.set_initial(0);
    queue.push_back(start_cls);
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        const auto q = static_cast<std::size_t>(rep[static_cast<std::size_t>(c)]);
        out.set_final(number[static_cast<std::size_t>(c)], dfa.final[q]);
        for (const auto& e : dfa.delta[q]) {
            const int dc = cls[static_cast<std::size_t>(e.dst)];
            if (number[static_cast<std::size_t>(dc)] < 0) {
                number[static_cast<std::size_t>(dc)] = out.add_state();
                queue.push_back(dc);
            }
            out.add_transition(number[static_cast<std::size_t>(c)], e.label, number[static_cast<std::size_t>(dc)]);
        }
    }
    return out;
}

} // namespace

int Automaton::add_state(bool is_final) {
    final_.push_back(is_final);
    return num_states_++;
}

void Automaton::set_initial(int q) {
    if (std::find(initial_.begin(), initial_.end(), q) == initial_.end()) {
        initial_.push_back(q);
    }
}

void Automaton::set_final(int q, bool value) { final_.at(static_cast<std::size_t>(q)) = value; }

void Automaton::add_transition(int src, LocalState label, int dst) {
    if (label.is_bottom()) {
        return;
    }
    transitions_.push_back({src, std::move(label), dst});
}

void Automaton::add_epsilon(int src, int dst) { epsilons_.emplace_back(src, dst); }

int Automaton::embed(const Automaton& o) {
    const int off = num_states_;
    for (int q = 0; q < o.num_states(); ++q) {
        add_state(o.is_final(q));
    }
    for (const auto& t : o.transitions_) {
        transitions_.push_back({t.src + off, t.label, t.dst + off});
    }
    for (const auto& [s, d] : o.epsilons_) {
        epsilons_.emplace_back(s + off, d + off);
    }
    return off;
}

std::vector<int> Automaton::finals() const {
    std::vector<int> out;
    for (int q = 0; q < num_states_; ++q) {
        if (final_[static_cast<std::size_t>(q)]) {
            out.push_back(q);
        }
    }
    return out;
}

std::vector<std::vector<int>> Automaton::out_index() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(num_states_));
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
        out[static_cast<std::size_t>(transitions_[i].src)].push_back(static_cast<int>(i));
    }
    return out;
}

Automaton Automaton::word(const std::vector<LocalState>& word) {
    Automaton a;
    int q = a.add_state();
    a.set_initial(q);
    for (const auto& l : word) {
        const int r = a.add_state();
        a.add_transition(q, l, r);
        q = r;
    }
    a.set_final(q);
    return a;
}

bool operator==(const Automaton& a, const Automaton& b) {
    if (a.num_states_ != b.num_states_ || a.initial_ != b.initial_ || a.final_ != b.final_ ||
        a.transitions_.size() != b.transitions_.size() || a.epsilons_ != b.epsilons_) {
        return false;
    }
    for (std::size_t i = 0; i < a.transitions_.size(); ++i) {
        const auto& x = a.transitions_[i];
        const auto& y = b.transitions_[i];
        if (x.src != y.src || x.dst != y.dst || !(x.label == y.label)) {
            return false;
        }
    }
    return true;
}

std::size_t Automaton::hash() const {
    std::size_t h = static_cast<std::size_t>(num_states_) * 0x100000001b3ULL;
    for (const auto& t : transitions_) {
        h ^= t.label.hash() + static_cast<std::size_t>(t.src) * 131 + static_cast<std::size_t>(t.dst) * 7919 +
             (h << 6) + (h >> 2);
    }
    return h;
}

Automaton normalize(const Automaton& a) {
    const auto useful = useful_states(a);
    const Dfa dfa = determinize(a, useful);
    if (dfa.start < 0) {
        return {};
    }
    return minimize_canonical(dfa);
}

Automaton unite(const Automaton& a, const Automaton& b) {
    Automaton u;
    const int oa = u.embed(a);
    for (int q : a.initial()) {
        u.set_initial(q + oa);
    }
    const int ob = u.embed(b);
    for (int q : b.initial()) {
        u.set_initial(q + ob);
    }
    return normalize(u);
}

Automaton unite_all(std::vector<Automaton> parts) {
    if (parts.empty()) {
        return {};
    }
    for (auto& p : parts) {
        p = normalize(p);
    }
    while (parts.size() > 1) {
        std::vector<Automaton> next;
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
            next.push_back(unite(parts[i], parts[i + 1]));
        }
        if (parts.size() % 2 == 1) {
            next.push_back(std::move(parts.back()));
        }
        parts = std::move(next);
    }
    return std::move(parts.front());
}

Automaton intersect(const Automaton& a0, const Automaton& b0) {
    const Automaton a = a0.epsilons().empty() ? a0 : normalize(a0);
    const Automaton b = b0.epsilons().empty() ? b0 : normalize(b0);
    const auto oa = a.out_index();
    const auto ob = b.out_index();
    Automaton p;
    std::map<std::pair<int, int>, int> ids;
    std::deque<std::pair<int, int>> queue;
    const auto intern = [&](int x, int y) {
        auto [it, inserted] = ids.emplace(std::make_pair(x, y), 0);
        if (inserted) {
            it->second = p.add_state(a.is_final(x) && b.is_final(y));
            queue.emplace_back(x, y);
        }
        return it->second;
    };
    for (int x : a.initial()) {
        for (int y : b.initial()) {
            p.set_initial(intern(x, y));
        }
    }
    while (!queue.empty()) {
        const auto [x, y] = queue.front();
        queue.pop_front();
        const int src = ids.at({x, y});
        for (int ti : oa[static_cast<std::size_t>(x)]) {
            const Transition& ta = a.transitions()[static_cast<std::size_t>(ti)];
            for (int tj : ob[static_cast<std::size_t>(y)]) {
                const Transition& tb = b.transitions()[static_cast<std::size_t>(tj)];
                if (ta.label.loc != tb.label.loc) {
                    continue;
                }
                LocalState m = ta.label.meet(tb.label);
                if (m.is_bottom()) {
                    continue;
                }
                p.add_transition(src, std::move(m), intern(ta.dst, tb.dst));
            }
        }
    }
    return normalize(p);
}

bool is_empty(const Automaton& a) {
    const auto useful = useful_states(a);
    return std::none_of(a.initial().begin(), a.initial().end(),
                        [&useful](int q) { return useful[static_cast<std::size_t>(q)]; });
}

bool includes(const Automaton& a, const Automaton& b) {
    if (b.num_states() == 0 || is_empty(b)) {
        return true;
    }
    if (a.num_states() == 0) {
        return false;
    }
    const auto oa = a.out_index();
    const auto ob = b.out_index();
    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, int>> stack{{b.initial().front(), a.initial().front()}};
    seen.insert(stack.back());
    while (!stack.empty()) {
        const auto [qb, qa] = stack.back();
        stack.pop_back();
        if (b.is_final(qb) && !a.is_final(qa)) {
            return false;
        }
        for (int ti : ob[static_cast<std::size_t>(qb)]) {
            const Transition& tb = b.transitions()[static_cast<std::size_t>(ti)];
            const Transition* match = nullptr;
            for (int tj : oa[static_cast<std::size_t>(qa)]) {
                const Transition& ta = a.transitions()[static_cast<std::size_t>(tj)];
                if (ta.label.loc == tb.label.loc) {
                    match = &ta;
                    break;
                }
            }
            if (match == nullptr || !tb.label.leq(match->label)) {
                return false;
            }
            if (seen.insert({tb.dst, match->dst}).second) {
                stack.emplace_back(tb.dst, match->dst);
            }
        }
    }
    return true;
}

std::vector<std::pair<std::vector<LocalState>, int>> path_enumerate(const Automaton& a, int q, int n) {
    std::vector<std::pair<std::vector<LocalState>, int>> out;
    const auto idx = a.out_index();
    std::vector<LocalState> cur;
    const std::function<void(int)> dfs = [&](int s) {
        if (static_cast<int>(cur.size()) == n) {
            out.emplace_back(cur, s);
            return;
        }
        for (int ti : idx[static_cast<std::size_t>(s)]) {
            const Transition& t = a.transitions()[static_cast<std::size_t>(ti)];
            cur.push_back(t.label);
            dfs(t.dst);
            cur.pop_back();
        }
    };
    dfs(q);
    return out;
}

std::vector<MatchTriple> matches(const std::vector<GuardElement>& w, const Automaton& a) {
    std::vector<MatchTriple> out;
    const auto idx = a.out_index();
    std::vector<LocalState> cur;
    int begin = 0;
    const std::function<void(int)> dfs = [&](int s) {
        if (cur.size() == w.size()) {
            out.push_back({begin, cur, s});
            return;
        }
        for (int ti : idx[static_cast<std::size_t>(s)]) {
            const Transition& t = a.transitions()[static_cast<std::size_t>(ti)];
            auto m = w[cur.size()].meet(t.label);
            if (!m) {
                continue;
            }
            cur.push_back(std::move(*m));
            dfs(t.dst);
            cur.pop_back();
        }
    };
    for (int q = 0; q < a.num_states(); ++q) {
        begin = q;
        dfs(q);
    }
    return out;
}

Automaton sub_automaton(const Automaton& a, int begin, int end) {
    Automaton s;
    s.embed(a);
    for (int q = 0; q < s.num_states(); ++q) {
        s.set_final(q, q == end);
    }
    s.set_initial(begin);
    return s;
}

Automaton map_labels(const Automaton& a, const std::function<std::optional<LocalState>(const LocalState&)>& f) {
    Automaton m;
    for (int q = 0; q < a.num_states(); ++q) {
        m.add_state(a.is_final(q));
    }
    for (int q : a.initial()) {
        m.set_initial(q);
    }
    for (const auto& t : a.transitions()) {
        if (auto img = f(t.label)) {
            m.add_transition(t.src, std::move(*img), t.dst);
        }
    }
    for (const auto& [s, d] : a.epsilons()) {
        m.add_epsilon(s, d);
    }
    return m;
}

std::pair<long, std::optional<long>> length_range(const Automaton& a) {
    const auto useful = useful_states(a);
    const auto n = static_cast<std::size_t>(a.num_states());
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    std::vector<int> indeg(n, 0);
    for (const auto& t : a.transitions()) {
        if (useful[static_cast<std::size_t>(t.src)] && useful[static_cast<std::size_t>(t.dst)]) {
            adj[static_cast<std::size_t>(t.src)].emplace_back(t.dst, 1);
            ++indeg[static_cast<std::size_t>(t.dst)];
        }
    }
    for (const auto& [s, d] : a.epsilons()) {
        if (useful[static_cast<std::size_t>(s)] && useful[static_cast<std::size_t>(d)]) {
            adj[static_cast<std::size_t>(s)].emplace_back(d, 0);
            ++indeg[static_cast<std::size_t>(d)];
        }
    }
    // Kahn order over useful states; a leftover state means a cycle.
    std::vector<int> order;
    std::vector<int> deg = indeg;
    std::size_t useful_count = 0;
    for (std::size_t q = 0; q < n; ++q) {
        if (useful[q]) {
            ++useful_count;
            if (deg[q] == 0) {
                order.push_back(static_cast<int>(q));
            }
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& [r, w] : adj[static_cast<std::size_t>(order[i])]) {
            if (--deg[static_cast<std::size_t>(r)] == 0) {
                order.push_back(r);
            }
        }
    }
    constexpr long kInf = 1L << 60;
    std::vector<long> shortest(n, kInf);
    std::deque<int> dq;
    for (int q : a.initial()) {
        if (useful[static_cast<std::size_t>(q)]) {
            shortest[static_cast<std::size_t>(q)] = 0;
            dq.push_back(q);
        }
    }
    while (!dq.empty()) {
        const int q = dq.front();
        dq.pop_front();
        for (const auto& [r, w] : adj[static_cast<std::size_t>(q)]) {
            const long d = shortest[static_cast<std::size_t>(q)] + w;
            if (d < shortest[static_cast<std::size_t>(r)]) {
                shortest[static_cast<std::size_t>(r)] = d;
                if (w == 0) {
                    dq.push_front(r);
                } else {
                    dq.push_back(r);
                }
            }
        }
    }
    long lo = kInf;
    for (int f : a.finals()) {
        lo = std::min(lo, shortest[static_cast<std::size_t>(f)]);
    }
    if (order.size() < useful_count) {
        return {lo, std::nullopt};
    }
    std::vector<long> longest(n, -1);
    for (int q : a.initial()) {
        if (useful[static_cast<std::size_t>(q)]) {
            longest[static_cast<std::size_t>(q)] = 0;
        }
    }
    for (int q : order) {
        if (longest[static_cast<std::size_t>(q)] < 0) {
            continue;
        }
        for (const auto& [r, w] : adj[static_cast<std::size_t>(q)]) {
            longest[static_cast<std::size_t>(r)] =
                std::max(longest[static_cast<std::size_t>(r)], longest[static_cast<std::size_t>(q)] + w);
        }
    }
    long hi = 0;
    for (int f : a.finals()) {
        hi = std::max(hi, longest[static_cast<std::size_t>(f)]);
    }
    return {lo, hi};
}

Shape shape(const Automaton& a) {
    Shape s;
    s.num_states = a.num_states();
    s.initial = a.initial();
    for (int q = 0; q < a.num_states(); ++q) {
        s.final.push_back(a.is_final(q));
    }
    for (const auto& t : a.transitions()) {
        s.edges.push_back({t.src, t.label.loc, t.dst});
    }
    return s;
}

Automaton quotient_by_past(const Automaton& a, int k) {
    const auto n = static_cast<std::size_t>(a.num_states());
    std::vector<std::set<std::vector<int>>> past(n);
    std::deque<std::pair<int, std::vector<int>>> work;
    for (int q : a.initial()) {
        std::vector<int> s{kStartMarker};
        if (past[static_cast<std::size_t>(q)].insert(s).second) {
            work.emplace_back(q, s);
        }
    }
    const auto idx = a.out_index();
    while (!work.empty()) {
        auto [q, s] = work.front();
        work.pop_front();
        for (int ti : idx[static_cast<std::size_t>(q)]) {
            const Transition& t = a.transitions()[static_cast<std::size_t>(ti)];
            std::vector<int> next = s;
            next.push_back(t.label.loc);
            if (static_cast<int>(next.size()) > k) {
                next.erase(next.begin(), next.end() - k);
            }
            if (past[static_cast<std::size_t>(t.dst)].insert(next).second) {
                work.emplace_back(t.dst, std::move(next));
            }
        }
    }
    std::map<std::pair<bool, std::set<std::vector<int>>>, int> classes;
    std::vector<int> cls(n);
    for (std::size_t q = 0; q < n; ++q) {
        const auto [it, inserted] =
            classes.emplace(std::make_pair(a.is_final(static_cast<int>(q)), past[q]), static_cast<int>(classes.size()));
        cls[q] = it->second;
    }
    Automaton m;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        m.add_state();
    }
    for (std::size_t q = 0; q < n; ++q) {
        if (a.is_final(static_cast<int>(q))) {
            m.set_final(cls[q]);
        }
    }
    for (int q : a.initial()) {
        m.set_initial(cls[static_cast<std::size_t>(q)]);
    }
    for (const auto& t : a.transitions()) {
        m.add_transition(cls[static_cast<std::size_t>(t.src)], t.label, cls[static_cast<std::size_t>(t.dst)]);
    }
    return normalize(m);
}

namespace {

Automaton widen_labels(const Automaton& a, const Automaton& b, const WidenOptions& opts) {
    Automaton r;
    for (int q = 0; q < b.num_states(); ++q) {
        r.add_state(b.is_final(q));
    }
    for (int q : b.initial()) {
        r.set_initial(q);
    }
    for (std::size_t i = 0; i < b.transitions().size(); ++i) {
        const Transition& tb = b.transitions()[i];
        const Transition& ta = a.transitions()[i];
        LocalState l = opts.widen_label(tb.label.loc) ? ta.label.widen(tb.label) : tb.label;
        r.add_transition(tb.src, std::move(l), tb.dst);
    }
    return normalize(r);
}

} // namespace

Automaton widen(const Automaton& a, const Automaton& b, const WidenOptions& opts) {
    if (a.num_states() == 0) {
        return b;
    }
    const Shape sa = shape(a);
    if (sa == shape(b)) {
        return widen_labels(a, b, opts);
    }
    if (!opts.shape_widening) {
        return b;
    }
    Automaton q = quotient_by_past(b, opts.shape_k);
    if (sa == shape(q)) {
        return widen_labels(a, q, opts);
    }
    return q;
}

} // namespace latta
