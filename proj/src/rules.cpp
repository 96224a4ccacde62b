// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/rules.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>

namespace latta {

namespace {

ExprPtr var(int slot, int dim, const Vocabulary& voc) { return Expr::var(slot, dim, voc.dim_integral(dim)); }

ExprPtr eq(ExprPtr a, ExprPtr b) { return Expr::binary(Op::Eq, std::move(a), std::move(b)); }

ExprPtr to_slot(const ExprPtr& e, int slot) {
    return reslot(e, [slot](int) { return slot; });
}

bool needs_truncation(int dim, const ExprPtr& e, const Vocabulary& voc) {
    return voc.dim_integral(dim) && e->may_be_fractional();
}

struct Segment {
    Automaton automaton;
    Interval length;
};

int append_word(Automaton& out, int cur, std::vector<LocalState> word) {
    for (auto& l : word) {
        const int next = out.add_state();
        out.add_transition(cur, std::move(l), next);
        cur = next;
    }
    return cur;
}

} // namespace

int RewriteRule::letters() const {
    int n = 0;
    for (const auto& w : words) {
        n += static_cast<int>(w.size());
    }
    return n;
}

void RewriteRule::validate() const {
    const std::size_t n = words.size();
    if (stars.size() != n + 1 || star_rewriters.size() != n + 1 || inserts.size() != n + 2) {
        throw std::invalid_argument("rule " + name + ": inconsistent guard and rewriter lengths");
    }
    for (const auto& w : words) {
        if (w.empty()) {
            throw std::invalid_argument("rule " + name + ": empty guard word");
        }
    }
}

std::string RewriteRule::to_string(const Vocabulary& voc) const {
    std::string out = name + ": ";
    const auto guard = [&voc](const GuardElement& g) { return "<" + g.to_string(voc) + ">"; };
    for (std::size_t i = 0; i < stars.size(); ++i) {
        out += guard(stars[i]) + "*";
        if (i < words.size()) {
            for (const auto& g : words[i]) {
                out += " " + guard(g);
            }
            out += " ";
        }
    }
    const Expr::Namer namer = [&voc](int slot, int dim) { return "#" + std::to_string(slot) + "." + voc.dim_name(dim); };
    for (const auto& c : conditions) {
        out += " | " + c->to_string(namer);
    }
    return out;
}

Automaton apply_rule(const RewriteRule& r, const Automaton& a, const Vocabulary& voc, Diagnostics* diag) {
    r.validate();
    if (a.num_states() == 0 || a.initial().empty()) {
        return {};
    }
    const std::size_t n = r.words.size();
    std::vector<std::vector<MatchTriple>> found(n);
    for (std::size_t i = 0; i < n; ++i) {
        found[i] = matches(r.words[i], a);
        if (found[i].empty()) {
            return {};
        }
    }

    std::map<std::tuple<std::size_t, int, int>, std::optional<Segment>> memo;
    const auto segment = [&](std::size_t i, int from, int to) -> const std::optional<Segment>& {
        const auto key = std::make_tuple(i, from, to);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        std::optional<Segment> seg;
        const GuardElement& g = r.stars[i];
        if (g.none) {
            if (from == to) {
                seg = Segment{Automaton::word({}), Interval::point(Rational(0))};
            }
        } else {
            Automaton m = normalize(map_labels(sub_automaton(a, from, to),
                                               [&g](const LocalState& x) { return g.meet(x); }));
            if (m.num_states() > 0) {
                const auto [lo, hi] = length_range(m);
                const Bound upper = hi ? Bound(*hi) : Bound::pos_inf();
                seg = Segment{std::move(m), Interval(Bound(lo), upper)};
            }
        }
        return memo.emplace(key, std::move(seg)).first->second;
    };

    std::vector<Automaton> pieces;
    Diagnostics local;
    std::vector<const MatchTriple*> chosen(n, nullptr);

    const auto emit = [&](int qf) {
        std::vector<const Segment*> segs;
        int from = a.initial().front();
        for (std::size_t i = 0; i <= n; ++i) {
            const int to = i < n ? chosen[i]->begin : qf;
            segs.push_back(&*segment(i, from, to));
            from = i < n ? chosen[i]->end : from;
        }
        std::vector<LocalState> letters;
        for (const auto* t : chosen) {
            letters.insert(letters.end(), t->labels.begin(), t->labels.end());
        }
        std::vector<Interval> lens;
        for (const auto* s : segs) {
            lens.push_back(s->length);
        }
        MatchContext ctx(letters, lens, voc.domain, voc.dims());
        ctx.require(r.conditions);
        if (ctx.is_bottom()) {
            return;
        }
        EvalFlags flags;
        std::vector<std::vector<LocalState>> inserted;
        for (const auto& f : r.inserts) {
            std::vector<LocalState> word;
            for (const auto& spec : f) {
                auto img = ctx.produce(spec, nullptr, flags);
                if (!img) {
                    return;
                }
                word.push_back(std::move(*img));
            }
            inserted.push_back(std::move(word));
        }
        std::vector<Automaton> rewritten;
        for (std::size_t i = 0; i <= n; ++i) {
            const auto& h = r.star_rewriters[i];
            if (!h) {
                rewritten.push_back(segs[i]->automaton);
                continue;
            }
            Automaton m = map_labels(segs[i]->automaton,
                                     [&](const LocalState& x) { return ctx.produce(*h, &x, flags); });
            if (is_empty(m)) {
                return;
            }
            rewritten.push_back(std::move(m));
        }
        if (flags.division_by_zero) {
            local.division.insert(r.name);
        }
        Automaton out;
        int cur = out.add_state();
        out.set_initial(cur);
        for (std::size_t i = 0; i <= n; ++i) {
            cur = append_word(out, cur, std::move(inserted[i]));
            const Automaton& seg = rewritten[i];
            const int off = out.embed(seg);
            for (int q : seg.initial()) {
                out.add_epsilon(cur, q + off);
            }
            cur = out.add_state();
            for (int q : seg.finals()) {
                out.set_final(q + off, false);
                out.add_epsilon(q + off, cur);
            }
        }
        cur = append_word(out, cur, std::move(inserted[n + 1]));
        out.set_final(cur);
        pieces.push_back(std::move(out));
    };

    const std::function<void(std::size_t, int)> pick = [&](std::size_t i, int from) {
        if (i == n) {
            for (int qf : a.finals()) {
                if (segment(n, from, qf)) {
                    emit(qf);
                }
            }
            return;
        }
        for (const auto& t : found[i]) {
            if (!segment(i, from, t.begin)) {
                continue;
            }
            chosen[i] = &t;
            pick(i + 1, t.end);
        }
    };
    pick(0, a.initial().front());
    if (diag) {
        diag->merge(local);
    }
    return unite_all(std::move(pieces));
}

std::optional<Rational> neutral_element(Op op) {
    switch (op) {
    case Op::Add: return Rational(0);
    case Op::Mul: return Rational(1);
    case Op::Min:
    case Op::Max: return std::nullopt;
    default: throw std::invalid_argument(std::string("unsupported reduce operator ") + op_symbol(op));
    }
}

std::vector<RewriteRule> make_send_receive_rules(const CfgEdge& send, const CfgEdge& receive, const Vocabulary& voc) {
    if (send.instr.kind != Instr::Kind::Send || receive.instr.kind != Instr::Kind::Receive) {
        throw std::invalid_argument("send/receive rule needs a send edge and a receive edge");
    }
    const int var_dim = receive.instr.var;
    const bool trunc = needs_truncation(var_dim, send.instr.expr, voc);
    std::vector<RewriteRule> out;
    for (const bool sender_first : {true, false}) {
        const int s = sender_first ? 0 : 1;
        const int q = 1 - s;
        RewriteRule r;
        r.name = "comm " + voc.loc_name(send.from) + (sender_first ? ">" : "<") + voc.loc_name(receive.from);
        r.stars = {GuardElement::any(), GuardElement::any(), GuardElement::any()};
        const GuardElement gs = GuardElement::at(send.from);
        const GuardElement gr = GuardElement::at(receive.from);
        r.words = sender_first ? std::vector<std::vector<GuardElement>>{{gs}, {gr}}
                               : std::vector<std::vector<GuardElement>>{{gr}, {gs}};
        if (send.instr.peer) {
            r.conditions.push_back(eq(var(q, 0, voc), to_slot(send.instr.peer, s)));
        }
        if (receive.instr.peer) {
            r.conditions.push_back(eq(var(s, 0, voc), to_slot(receive.instr.peer, q)));
        }
        RewriterSpec sender = RewriterSpec::copy(s, send.to);
        RewriterSpec receiver = RewriterSpec::copy(q, receive.to);
        receiver.assign(var_dim, to_slot(send.instr.expr, s), trunc);
        r.inserts = {{}, {}, {}, {}};
        r.inserts[1] = {sender_first ? sender : receiver};
        r.inserts[2] = {sender_first ? receiver : sender};
        r.star_rewriters.assign(3, std::nullopt);
        out.push_back(std::move(r));
    }
    return out;
}

RewriteRule make_broadcast_rule(const CfgEdge& edge, const Vocabulary& voc) {
    if (edge.instr.kind != Instr::Kind::Broadcast) {
        throw std::invalid_argument("broadcast rule needs a broadcast edge");
    }
    const int v = edge.instr.var;
    RewriteRule r;
    r.name = "bcast " + voc.loc_name(edge.from);
    r.stars = {GuardElement::at(edge.from), GuardElement::at(edge.from)};
    r.words = {{GuardElement::at(edge.from)}};
    r.conditions = {eq(var(0, 0, voc), to_slot(edge.instr.expr, 0))};
    r.inserts = {{}, {RewriterSpec::copy(0, edge.to)}, {}};
    RewriterSpec h = RewriterSpec::star(edge.to);
    h.assign(v, var(0, v, voc));
    r.star_rewriters = {h, h};
    return r;
}

RewriteRule make_create_rule(const CfgEdge& edge, Loc entry, const Vocabulary& voc) {
    if (edge.instr.kind != Instr::Kind::Create) {
        throw std::invalid_argument("create rule needs a create edge");
    }
    const ExprPtr fresh = Expr::binary(
        Op::Add, Expr::binary(Op::Add, Expr::seglen(0), Expr::constant(Rational(1))), Expr::seglen(1));
    RewriteRule r;
    r.name = "create " + voc.loc_name(edge.from);
    r.stars = {GuardElement::any(), GuardElement::any()};
    r.words = {{GuardElement::at(edge.from)}};
    r.conditions = {eq(var(0, 0, voc), Expr::seglen(0))};
    RewriterSpec creator = RewriterSpec::copy(0, edge.to);
    creator.assign(edge.instr.var, fresh);
    RewriterSpec born = RewriterSpec::fresh(entry);
    born.assign(0, fresh);
    r.inserts = {{}, {creator}, {born}};
    r.star_rewriters = {std::nullopt, std::nullopt};
    return r;
}

std::vector<RewriteRule> make_reduce_rules(const CfgEdge& edge, Loc collector, const Vocabulary& voc) {
    if (edge.instr.kind != Instr::Kind::Reduce) {
        throw std::invalid_argument("reduce rules need a reduce edge");
    }
    const Instr& in = edge.instr;
    const auto neutral = neutral_element(in.op);
    const std::string tag = voc.loc_name(edge.from);
    const GuardElement locked = GuardElement::at(in.lock);
    const GuardElement coll = GuardElement::at(collector);
    std::vector<RewriteRule> out;

    RewriteRule spawn;
    spawn.name = "reduce-spawn " + tag;
    spawn.stars = {GuardElement::at(edge.from)};
    RewriterSpec c = RewriterSpec::fresh(collector);
    c.assign(0, Expr::constant(Rational(-1)));
    c.assign(in.var, Expr::constant(neutral.value_or(Rational(0))));
    spawn.inserts = {{c}, {}};
    spawn.star_rewriters = {RewriterSpec::star(in.lock)};
    out.push_back(std::move(spawn));

    const auto sweep = [&](bool first) {
        RewriteRule r;
        r.name = std::string("reduce-sweep") + (first ? "0 " : " ") + tag;
        r.stars = {first ? GuardElement::bottom() : locked, locked};
        r.words = {{coll, locked}};
        const ExprPtr src = var(1, in.src, voc);
        RewriterSpec moved = RewriterSpec::copy(0);
        moved.assign(in.var, first ? src : Expr::binary(in.op, var(0, in.var, voc), src));
        r.inserts = {{}, {RewriterSpec::copy(1), moved}, {}};
        r.star_rewriters = {std::nullopt, std::nullopt};
        return r;
    };
    if (neutral) {
        out.push_back(sweep(false));
    } else {
        out.push_back(sweep(true));
        RewriteRule r = sweep(false);
        r.conditions = {Expr::binary(Op::Ge, Expr::seglen(0), Expr::constant(Rational(1)))};
        out.push_back(std::move(r));
    }

    RewriteRule deliver;
    deliver.name = "reduce-deliver " + tag;
    deliver.stars = {locked, locked, GuardElement::bottom()};
    deliver.words = {{locked}, {coll}};
    deliver.conditions = {eq(var(0, 0, voc), to_slot(in.expr, 0))};
    RewriterSpec root = RewriterSpec::copy(0, edge.to);
    root.assign(in.var, var(1, in.var, voc));
    deliver.inserts = {{}, {root}, {}, {}};
    deliver.star_rewriters = {RewriterSpec::star(edge.to), RewriterSpec::star(edge.to), std::nullopt};
    out.push_back(std::move(deliver));
    return out;
}

} // namespace latta
