// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <functional>
#include <stdexcept>

namespace latta::testing {

namespace {

std::vector<std::vector<Rational>> grid(int dims, Universe u) {
    std::vector<std::vector<Rational>> out{{}};
    for (int d = 0; d < dims; ++d) {
        std::vector<std::vector<Rational>> next;
        for (const auto& p : out) {
            for (long v = u.lo; v <= u.hi; ++v) {
                auto q = p;
                q.emplace_back(v);
                next.push_back(std::move(q));
            }
        }
        out = std::move(next);
    }
    return out;
}

bool any_truthy(const ExprPtr& e, const std::vector<Rational>& joint) {
    for (const auto& v : eval_concrete(e, [&joint](int d) { return joint.at(static_cast<std::size_t>(d)); })) {
        if (truthy(v)) {
            return true;
        }
    }
    return false;
}

struct Joint {
    std::vector<Rational> values;
    int letters = 0;
    int segs = 0;
    int dims = 0;

    [[nodiscard]] ExprPtr resolved(const ExprPtr& e, bool with_extra) const {
        const int extra = letters * dims + segs;
        return resolve(
            e,
            [this, extra, with_extra](int slot, int dim) {
                if (slot < letters) {
                    return slot * dims + dim;
                }
                if (!with_extra) {
                    throw std::logic_error("expression reads a letter outside the match");
                }
                return extra + dim;
            },
            [this](int seg) { return letters * dims + seg; });
    }
};

/// Every concrete letter a rewriter can produce; empty when the image is undefined.
std::vector<ConcreteLocalState> produce(const RewriterSpec& r, const Joint& j, const ConcreteConfig& matched,
                                        const ConcreteLocalState* star, Universe u) {
    std::vector<std::vector<Rational>> starts;
    int off = 0;
    Loc loc = 0;
    const int extra = j.letters * j.dims + j.segs;
    switch (r.base) {
    case RewriterSpec::Base::Slot:
        starts.push_back(j.values);
        off = r.slot * j.dims;
        loc = matched.at(static_cast<std::size_t>(r.slot)).loc;
        break;
    case RewriterSpec::Base::Star: {
        auto v = j.values;
        v.insert(v.end(), star->values.begin(), star->values.end());
        starts.push_back(std::move(v));
        off = extra;
        loc = star->loc;
        break;
    }
    case RewriterSpec::Base::Fresh:
        if (r.zero) {
            auto v = j.values;
            v.resize(v.size() + static_cast<std::size_t>(j.dims));
            starts.push_back(std::move(v));
        } else {
            for (const auto& p : grid(j.dims, u)) {
                auto v = j.values;
                v.insert(v.end(), p.begin(), p.end());
                starts.push_back(std::move(v));
            }
        }
        off = extra;
        break;
    }
    for (const auto& a : r.assigns) {
        const ExprPtr e = j.resolved(a.expr, true);
        std::vector<std::vector<Rational>> next;
        for (const auto& s : starts) {
            std::vector<Rational> vals;
            try {
                vals = eval_concrete(e, [&s](int d) { return s.at(static_cast<std::size_t>(d)); });
            } catch (const std::domain_error&) {
                continue;
            }
            for (const auto& v : vals) {
                auto t = s;
                t[static_cast<std::size_t>(off + a.dim)] = a.truncate ? v.trunc() : v;
                next.push_back(std::move(t));
            }
        }
        starts = std::move(next);
    }
    if (r.loc) {
        loc = *r.loc;
    }
    std::vector<ConcreteLocalState> out;
    for (const auto& s : starts) {
        out.push_back({loc, std::vector<Rational>(s.begin() + off, s.begin() + off + j.dims)});
    }
    return out;
}

void cross(std::vector<ConcreteConfig>& words, const std::vector<ConcreteLocalState>& choices) {
    std::vector<ConcreteConfig> next;
    for (const auto& w : words) {
        for (const auto& c : choices) {
            auto x = w;
            x.push_back(c);
            next.push_back(std::move(x));
        }
    }
    words = std::move(next);
}

bool conditions_hold(const std::vector<ExprPtr>& conds, const Joint& j) {
    for (const auto& c : conds) {
        try {
            if (!any_truthy(j.resolved(c, false), j.values)) {
                return false;
            }
        } catch (const std::domain_error&) {
            return false;
        }
    }
    return true;
}

Joint make_joint(const ConcreteConfig& matched, const std::vector<long>& seglens, int dims) {
    Joint j;
    j.letters = static_cast<int>(matched.size());
    j.segs = static_cast<int>(seglens.size());
    j.dims = dims;
    for (const auto& l : matched) {
        j.values.insert(j.values.end(), l.values.begin(), l.values.end());
    }
    for (long s : seglens) {
        j.values.emplace_back(s);
    }
    return j;
}

Rational uniform(Rng& rng, Universe u) { return {std::uniform_int_distribution<long>(u.lo, u.hi)(rng)}; }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

ExprPtr random_linear(Rng& rng, int slots, int dims, Universe u) {
    ExprPtr e = Expr::constant(uniform(rng, u));
    const int terms = pick(rng, 3);
    for (int t = 0; t < terms; ++t) {
        const ExprPtr v = Expr::var(pick(rng, slots), pick(rng, dims), true);
        const long c = std::uniform_int_distribution<long>(-2, 2)(rng);
        e = Expr::binary(Op::Add, e, c == 1 ? v : Expr::binary(Op::Mul, Expr::constant(Rational(c)), v));
    }
    return e;
}

ExprPtr random_condition(Rng& rng, int slots, int dims, Universe u) {
    static const Op ops[] = {Op::Lt, Op::Le, Op::Eq, Op::Ne, Op::Gt, Op::Ge};
    return Expr::binary(ops[pick(rng, 6)], Expr::var(pick(rng, slots), pick(rng, dims), true),
                        random_linear(rng, slots, dims, u));
}

GuardElement random_guard(Rng& rng, const std::vector<Loc>& locs, int dims, Universe u) {
    GuardElement g;
    if (coin(rng, 0.6)) {
        g.locs = std::vector<Loc>{locs[static_cast<std::size_t>(pick(rng, static_cast<int>(locs.size())))]};
    }
    if (coin(rng, 0.3)) {
        const Rational a = uniform(rng, u);
        const Rational b = uniform(rng, u);
        g.ranges.emplace_back(pick(rng, dims), Interval(Bound(std::min(a, b)), Bound(std::max(a, b))));
    }
    if (coin(rng, 0.3)) {
        g.conds.push_back(random_condition(rng, 1, dims, u));
    }
    return g;
}

RewriterSpec random_assigns(Rng& rng, RewriterSpec r, int slots, int dims, Universe u) {
    const int n = pick(rng, 3);
    for (int i = 0; i < n; ++i) {
        ExprPtr e = random_linear(rng, slots, dims, u);
        if (coin(rng, 0.1)) {
            e = Expr::binary(Op::Add, e, Expr::nondet());
        }
        bool trunc = false;
        if (coin(rng, 0.15)) {
            e = Expr::binary(Op::Div, e, Expr::constant(Rational(2)));
            trunc = true;
        }
        r.assign(1 + pick(rng, dims - 1), e, trunc);
    }
    return r;
}

} // namespace

LocalState point_state(Domain d, Loc loc, const std::vector<Rational>& values) {
    NumEnv e = NumEnv::zero(d, static_cast<int>(values.size()));
    EvalFlags flags;
    for (std::size_t i = 0; i < values.size(); ++i) {
        e = e.assign(static_cast<int>(i), Expr::constant(values[i]), false, flags);
    }
    return {loc, e};
}

std::vector<ConcreteConfig> enumerate_language(const Automaton& a0, int dims, int max_len, Universe u,
                                               std::size_t cap) {
    const Automaton a = a0.epsilons().empty() ? a0 : normalize(a0);
    std::vector<ConcreteConfig> out;
    if (a.num_states() == 0) {
        return out;
    }
    const auto points = grid(dims, u);
    const auto idx = a.out_index();
    std::vector<std::vector<ConcreteLocalState>> atoms(a.transitions().size());
    for (std::size_t t = 0; t < a.transitions().size(); ++t) {
        const auto& label = a.transitions()[t].label;
        for (const auto& p : points) {
            if (label.env.contains(p)) {
                atoms[t].push_back({label.loc, p});
            }
        }
    }
    ConcreteConfig word;
    std::function<void(int)> dfs = [&](int q) {
        if (out.size() >= cap) {
            return;
        }
        if (a.is_final(q)) {
            out.push_back(word);
        }
        if (static_cast<int>(word.size()) >= max_len) {
            return;
        }
        for (int ti : idx[static_cast<std::size_t>(q)]) {
            for (const auto& atom : atoms[static_cast<std::size_t>(ti)]) {
                word.push_back(atom);
                dfs(a.transitions()[static_cast<std::size_t>(ti)].dst);
                word.pop_back();
            }
        }
    };
    for (int q : a.initial()) {
        dfs(q);
    }
    return out;
}

bool concrete_covers(const GuardElement& g, const ConcreteLocalState& s) {
    if (!g.admits(s.loc)) {
        return false;
    }
    for (const auto& [dim, range] : g.ranges) {
        if (!range.contains(s.values.at(static_cast<std::size_t>(dim)))) {
            return false;
        }
    }
    for (const auto& c : g.conds) {
        try {
            if (!any_truthy(c, s.values)) {
                return false;
            }
        } catch (const std::domain_error&) {
            return false;
        }
    }
    return true;
}

std::vector<ConcreteConfig> rule_image(const RewriteRule& r, const ConcreteConfig& w, int dims, Universe u) {
    std::vector<ConcreteConfig> out;
    const std::size_t n = r.words.size();
    const std::size_t len = w.size();
    std::vector<std::size_t> seg_begin(n + 1);
    std::vector<long> seglens(n + 1);
    const auto star_ok = [&](std::size_t i, std::size_t from, std::size_t to) {
        const GuardElement& g = r.stars[i];
        if (g.none) {
            return from == to;
        }
        for (std::size_t k = from; k < to; ++k) {
            if (!concrete_covers(g, w[k])) {
                return false;
            }
        }
        return true;
    };
    const auto word_ok = [&](std::size_t i, std::size_t at) {
        const auto& ws = r.words[i];
        if (at + ws.size() > len) {
            return false;
        }
        for (std::size_t k = 0; k < ws.size(); ++k) {
            if (!concrete_covers(ws[k], w[at + k])) {
                return false;
            }
        }
        return true;
    };
    const auto build = [&]() {
        ConcreteConfig matched;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t at = seg_begin[i] + static_cast<std::size_t>(seglens[i]);
            matched.insert(matched.end(), w.begin() + static_cast<long>(at),
                           w.begin() + static_cast<long>(at + r.words[i].size()));
        }
        const Joint j = make_joint(matched, seglens, dims);
        if (!conditions_hold(r.conditions, j)) {
            return;
        }
        std::vector<ConcreteConfig> words{{}};
        for (std::size_t i = 0; i <= n; ++i) {
            for (const auto& spec : r.inserts[i]) {
                const auto choices = produce(spec, j, matched, nullptr, u);
                if (choices.empty()) {
                    return;
                }
                cross(words, choices);
            }
            for (long k = 0; k < seglens[i]; ++k) {
                const ConcreteLocalState& letter = w[seg_begin[i] + static_cast<std::size_t>(k)];
                if (const auto& h = r.star_rewriters[i]) {
                    const auto choices = produce(*h, j, matched, &letter, u);
                    if (choices.empty()) {
                        return;
                    }
                    cross(words, choices);
                } else {
                    cross(words, {letter});
                }
            }
        }
        for (const auto& spec : r.inserts[n + 1]) {
            const auto choices = produce(spec, j, matched, nullptr, u);
            if (choices.empty()) {
                return;
            }
            cross(words, choices);
        }
        out.insert(out.end(), words.begin(), words.end());
    };
    std::function<void(std::size_t, std::size_t)> split = [&](std::size_t i, std::size_t from) {
        seg_begin[i] = from;
        if (i == n) {
            seglens[n] = static_cast<long>(len - from);
            if (star_ok(n, from, len)) {
                build();
            }
            return;
        }
        for (std::size_t at = from; at <= len; ++at) {
            if (!star_ok(i, from, at)) {
                break;
            }
            if (word_ok(i, at)) {
                seglens[i] = static_cast<long>(at - from);
                split(i + 1, at + r.words[i].size());
            }
        }
    };
    split(0, 0);
    return out;
}

std::vector<ConcreteConfig> transducer_image(const Transducer& t, const ConcreteConfig& w, int dims, Universe u) {
    std::vector<ConcreteConfig> out;
    std::function<void(int, std::size_t, const ConcreteConfig&)> run = [&](int p, std::size_t at,
                                                                             const ConcreteConfig& acc) {
        if (at == w.size()) {
            if (t.is_final(p)) {
                out.push_back(acc);
            }
        }
        for (const auto& rule : t.rules) {
            if (rule.src != p || at + rule.guard.size() > w.size() || rule.guard.empty()) {
                continue;
            }
            ConcreteConfig matched(w.begin() + static_cast<long>(at),
                                   w.begin() + static_cast<long>(at + rule.guard.size()));
            bool ok = true;
            for (std::size_t k = 0; k < matched.size() && ok; ++k) {
                ok = concrete_covers(rule.guard[k], matched[k]);
            }
            const Joint j = make_joint(matched, {}, dims);
            if (!ok || !conditions_hold(rule.conditions, j)) {
                continue;
            }
            std::vector<ConcreteConfig> words{acc};
            for (const auto& spec : rule.outputs) {
                const auto choices = produce(spec, j, matched, nullptr, u);
                if (choices.empty()) {
                    words.clear();
                    break;
                }
                cross(words, choices);
            }
            for (const auto& x : words) {
                run(rule.dst, at + rule.guard.size(), x);
            }
        }
    };
    for (int p : t.initial) {
        run(p, 0, {});
    }
    return out;
}

LocalState random_label(Rng& rng, Domain d, Loc loc, int dims, Universe u) {
    const auto point = [&] {
        std::vector<Rational> v;
        for (int i = 0; i < dims; ++i) {
            v.push_back(uniform(rng, u));
        }
        return point_state(d, loc, v);
    };
    LocalState s = point();
    if (coin(rng, 0.6)) {
        s = s.join(point());
    }
    return s;
}

Automaton random_automaton(Rng& rng, Domain d, const std::vector<Loc>& locs, int dims, int max_states, Universe u) {
    for (;;) {
        Automaton a;
        const int states = 1 + pick(rng, max_states);
        for (int q = 0; q < states; ++q) {
            a.add_state(coin(rng, 0.4));
        }
        a.set_final(pick(rng, states));
        a.set_initial(0);
        const int edges = 1 + pick(rng, states + 2);
        for (int e = 0; e < edges; ++e) {
            const Loc loc = locs[static_cast<std::size_t>(pick(rng, static_cast<int>(locs.size())))];
            a.add_transition(pick(rng, states), random_label(rng, d, loc, dims, u), pick(rng, states));
        }
        Automaton n = normalize(a);
        if (n.num_states() > 0 && !n.transitions().empty()) {
            return n;
        }
    }
}

Transducer random_transducer(Rng& rng, const std::vector<Loc>& locs, int dims, Universe u) {
    Transducer t;
    t.num_states = 1 + pick(rng, 2);
    t.finals = {t.num_states - 1};
    const int rules = 1 + pick(rng, 3);
    for (int i = 0; i < rules; ++i) {
        TransducerRule r;
        r.name = "r" + std::to_string(i);
        r.src = pick(rng, t.num_states);
        r.dst = pick(rng, t.num_states);
        const int n = 1 + pick(rng, 2);
        for (int k = 0; k < n; ++k) {
            r.guard.push_back(random_guard(rng, locs, dims, u));
        }
        if (coin(rng, 0.3)) {
            r.conditions.push_back(random_condition(rng, n, dims, u));
        }
        const int m = pick(rng, 3);
        for (int k = 0; k < m; ++k) {
            const std::optional<Loc> loc =
                coin(rng, 0.5) ? std::optional<Loc>(locs[static_cast<std::size_t>(pick(rng, static_cast<int>(locs.size())))])
                               : std::nullopt;
            RewriterSpec spec = coin(rng, 0.1) && loc ? RewriterSpec::fresh(*loc) : RewriterSpec::copy(pick(rng, n), loc);
            r.outputs.push_back(random_assigns(rng, spec, n, dims, u));
        }
        t.rules.push_back(std::move(r));
    }
    if (coin(rng, 0.5)) {
        TransducerRule idle = Transducer::inactivity();
        idle.src = idle.dst = pick(rng, t.num_states);
        t.rules.push_back(std::move(idle));
    }
    return t;
}

RewriteRule random_rule(Rng& rng, const std::vector<Loc>& locs, int dims, Universe u) {
    RewriteRule r;
    r.name = "random";
    const std::size_t n = 1 + static_cast<std::size_t>(pick(rng, 2));
    for (std::size_t i = 0; i <= n; ++i) {
        r.stars.push_back(coin(rng, 0.25) ? GuardElement::bottom() : random_guard(rng, locs, dims, u));
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<GuardElement> w;
        const int k = 1 + pick(rng, 2);
        for (int j = 0; j < k; ++j) {
            w.push_back(random_guard(rng, locs, dims, u));
        }
        r.words.push_back(std::move(w));
    }
    const int letters = r.letters();
    if (coin(rng, 0.4)) {
        r.conditions.push_back(random_condition(rng, letters, dims, u));
    }
    if (coin(rng, 0.2)) {
        r.conditions.push_back(Expr::binary(Op::Le, Expr::seglen(pick(rng, static_cast<int>(n) + 1)),
                                            Expr::constant(Rational(1))));
    }
    for (std::size_t i = 0; i < n + 2; ++i) {
        std::vector<RewriterSpec> f;
        const int m = i == 0 || i == n + 1 ? pick(rng, 2) : 1 + pick(rng, 2);
        for (int k = 0; k < m; ++k) {
            const Loc loc = locs[static_cast<std::size_t>(pick(rng, static_cast<int>(locs.size())))];
            RewriterSpec spec = coin(rng, 0.15) ? RewriterSpec::fresh(loc) : RewriterSpec::copy(pick(rng, letters), loc);
            if (spec.base == RewriterSpec::Base::Fresh && coin(rng, 0.3)) {
                spec.zero = false;
            }
            f.push_back(random_assigns(rng, spec, letters, dims, u));
        }
        r.inserts.push_back(std::move(f));
    }
    for (std::size_t i = 0; i <= n; ++i) {
        if (coin(rng, 0.5)) {
            r.star_rewriters.emplace_back();
        } else {
            RewriterSpec h = RewriterSpec::star(coin(rng, 0.5) ? std::optional<Loc>(locs.front()) : std::nullopt);
            h = random_assigns(rng, h, letters + 1, dims, u);
            r.star_rewriters.emplace_back(std::move(h));
        }
    }
    r.validate();
    return r;
}

std::string random_program(Rng& rng, int procs) {
    int budget = 5;
    const auto value = [&]() -> std::string {
        switch (pick(rng, 6)) {
        case 0: return std::to_string(pick(rng, 5) - 2);
        case 1: return "x + " + std::to_string(pick(rng, 3));
        case 2: return "y - x";
        case 3: return "id";
        case 4: return "id + y";
        default: return "2 * x";
        }
    };
    const auto cond = [&]() -> std::string {
        switch (pick(rng, 4)) {
        case 0: return "id == 0";
        case 1: return "x < " + std::to_string(pick(rng, 3));
        case 2: return "nondet()";
        default: return "x != y";
        }
    };
    const std::string right = "(id + 1) % " + std::to_string(procs);
    std::function<std::string(int)> stmt = [&](int depth) -> std::string {
        --budget;
        switch (depth > 1 ? pick(rng, 2) : pick(rng, 8)) {
        case 0: return "x := " + value();
        case 1: return "y := " + value();
        case 2: {
            std::string s = "if (" + cond() + ") " + stmt(depth + 1);
            if (budget > 0 && coin(rng, 0.5)) {
                s += " else " + stmt(depth + 1);
            }
            return "{ " + s + " }";
        }
        case 3: return "while (x < " + std::to_string(1 + pick(rng, 2)) + ") x := x + 1";
        case 4:
            return coin(rng, 0.5) ? "if (id == 0) send(" + right + ", x) else receive(any_id, y)"
                                  : "if (id % 2 == 0) send(" + right + ", x + 1) else receive(id - 1, y)";
        case 5: return "broadcast(0, x)";
        case 6: return "reduce(y, x, " + std::string(coin(rng, 0.5) ? "+" : "max") + ", 0)";
        default: return "skip";
        }
    };
    std::string text = "int x, y;\n";
    const int count = 1 + pick(rng, 3);
    for (int i = 0; i < count && budget > 0; ++i) {
        text += (i ? ";\n" : "") + stmt(0);
    }
    return text + "\n";
}

OracleCheck oracle_included(const Cfg& cfg, const Automaton& reach, int procs, int depth, int max_procs) {
    OracleCheck out;
    const ReachResult r = reach_bounded(cfg, {initial_config(cfg, procs)}, depth, max_procs);
    out.pruned = r.pruned;
    for (const auto& c : r.states) {
        ++out.concrete;
        if (!accepts(reach, c)) {
            if (out.missed++ == 0) {
                out.first_missed = to_string(c, cfg.voc);
            }
        }
    }
    return out;
}

} // namespace latta::testing
