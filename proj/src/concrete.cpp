// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/concrete.hpp"

#include <stdexcept>

namespace latta {

std::strong_ordering operator<=>(const ConcreteLocalState& a, const ConcreteLocalState& b) {
    if (auto c = a.loc <=> b.loc; c != 0) {
        return c;
    }
    return std::lexicographical_compare_three_way(a.values.begin(), a.values.end(), b.values.begin(), b.values.end());
}

namespace {

std::vector<Rational> eval(const ExprPtr& e, const ConcreteLocalState& s) {
    return eval_concrete(e, [&s](int dim) { return s.values.at(static_cast<std::size_t>(dim)); });
}

Rational store(const Vocabulary& voc, int dim, const Rational& v) { return voc.dim_integral(dim) ? v.trunc() : v; }

Rational fold(Op op, const Rational& a, const Rational& b) {
    switch (op) {
    case Op::Add: return a + b;
    case Op::Mul: return a * b;
    case Op::Min: return std::min(a, b);
    case Op::Max: return std::max(a, b);
    default: throw std::invalid_argument("unsupported reduce operator");
    }
}

} // namespace

ConcreteConfig initial_config(const Cfg& cfg, int procs) {
    ConcreteConfig c;
    for (int i = 0; i < procs; ++i) {
        ConcreteLocalState s{cfg.entry, std::vector<Rational>(static_cast<std::size_t>(cfg.voc.dims()))};
        s.values[0] = Rational(static_cast<long>(i));
        c.push_back(std::move(s));
    }
    return c;
}

PostResult post(const Cfg& cfg, const ConcreteConfig& c) {
    const Vocabulary& voc = cfg.voc;
    PostResult out;
    const std::size_t n = c.size();
    const auto guarded = [&out](const auto& fn) {
        try {
            fn();
        } catch (const std::domain_error&) {
            out.division_by_zero = true;
        }
    };
    for (const auto& e : cfg.edges) {
        const Instr& in = e.instr;
        switch (in.kind) {
        case Instr::Kind::Skip:
        case Instr::Kind::Assign:
        case Instr::Kind::Filter:
        case Instr::Kind::Create:
            for (std::size_t i = 0; i < n; ++i) {
                if (c[i].loc != e.from) {
                    continue;
                }
                guarded([&] {
                    if (in.kind == Instr::Kind::Filter) {
                        for (const auto& v : eval(in.expr, c[i])) {
                            if (truthy(v)) {
                                ConcreteConfig next = c;
                                next[i].loc = e.to;
                                out.successors.insert(std::move(next));
                                break;
                            }
                        }
                        return;
                    }
                    if (in.kind == Instr::Kind::Assign) {
                        for (const auto& v : eval(in.expr, c[i])) {
                            ConcreteConfig next = c;
                            next[i].loc = e.to;
                            next[i].values[static_cast<std::size_t>(in.var)] = store(voc, in.var, v);
                            out.successors.insert(std::move(next));
                        }
                        return;
                    }
                    ConcreteConfig next = c;
                    next[i].loc = e.to;
                    if (in.kind == Instr::Kind::Create) {
                        const Rational fresh(static_cast<long>(n));
                        next[i].values[static_cast<std::size_t>(in.var)] = fresh;
                        ConcreteLocalState born{cfg.entry, std::vector<Rational>(static_cast<std::size_t>(voc.dims()))};
                        born.values[0] = fresh;
                        next.push_back(std::move(born));
                    }
                    out.successors.insert(std::move(next));
                });
            }
            break;
        case Instr::Kind::Send:
            for (std::size_t i = 0; i < n; ++i) {
                if (c[i].loc != e.from) {
                    continue;
                }
                for (const auto& r : cfg.edges) {
                    if (r.instr.kind != Instr::Kind::Receive) {
                        continue;
                    }
                    for (std::size_t j = 0; j < n; ++j) {
                        if (j == i || c[j].loc != r.from) {
                            continue;
                        }
                        guarded([&] {
                            if (in.peer) {
                                const auto to = eval(in.peer, c[i]);
                                if (std::find(to.begin(), to.end(), c[j].id()) == to.end()) {
                                    return;
                                }
                            }
                            if (r.instr.peer) {
                                const auto from = eval(r.instr.peer, c[j]);
                                if (std::find(from.begin(), from.end(), c[i].id()) == from.end()) {
                                    return;
                                }
                            }
                            for (const auto& v : eval(in.expr, c[i])) {
                                ConcreteConfig next = c;
                                next[i].loc = e.to;
                                next[j].loc = r.to;
                                next[j].values[static_cast<std::size_t>(r.instr.var)] = store(voc, r.instr.var, v);
                                out.successors.insert(std::move(next));
                            }
                        });
                    }
                }
            }
            break;
        case Instr::Kind::Receive: break;
        case Instr::Kind::Broadcast:
        case Instr::Kind::Reduce: {
            if (n == 0 || !std::all_of(c.begin(), c.end(), [&e](const ConcreteLocalState& s) { return s.loc == e.from; })) {
                break;
            }
            for (std::size_t root = 0; root < n; ++root) {
                guarded([&] {
                    const auto ids = eval(in.expr, c[root]);
                    if (std::find(ids.begin(), ids.end(), c[root].id()) == ids.end()) {
                        return;
                    }
                    ConcreteConfig next = c;
                    for (auto& s : next) {
                        s.loc = e.to;
                    }
                    const auto v = static_cast<std::size_t>(in.var);
                    if (in.kind == Instr::Kind::Broadcast) {
                        for (auto& s : next) {
                            s.values[v] = c[root].values[v];
                        }
                    } else {
                        const auto src = static_cast<std::size_t>(in.src);
                        Rational acc = c[0].values[src];
                        for (std::size_t k = 1; k < n; ++k) {
                            acc = fold(in.op, acc, c[k].values[src]);
                        }
                        next[root].values[v] = store(voc, in.var, acc);
                    }
                    out.successors.insert(std::move(next));
                });
            }
            break;
        }
        }
    }
    return out;
}

ReachResult reach_bounded(const Cfg& cfg, const std::vector<ConcreteConfig>& init, int depth, int max_procs) {
    ReachResult r;
    std::vector<ConcreteConfig> frontier;
    for (const auto& c : init) {
        if (r.states.insert(c).second) {
            frontier.push_back(c);
        }
    }
    for (int d = 0; d < depth && !frontier.empty(); ++d) {
        std::vector<ConcreteConfig> next;
        for (const auto& c : frontier) {
            const PostResult p = post(cfg, c);
            r.division_by_zero = r.division_by_zero || p.division_by_zero;
            for (const auto& s : p.successors) {
                if (static_cast<int>(s.size()) > max_procs) {
                    r.pruned = true;
                    continue;
                }
                if (r.states.insert(s).second) {
                    next.push_back(s);
                }
            }
        }
        frontier = std::move(next);
    }
    r.truncated = !frontier.empty();
    return r;
}

bool is_stuck(const Cfg& cfg, const ConcreteConfig& c) {
    if (std::all_of(c.begin(), c.end(), [&cfg](const ConcreteLocalState& s) { return s.loc == cfg.exit; })) {
        return false;
    }
    return post(cfg, c).successors.empty();
}

bool accepts(const Automaton& a, const ConcreteConfig& c) {
    std::set<int> cur(a.initial().begin(), a.initial().end());
    const auto idx = a.out_index();
    const auto close = [&a](std::set<int> s) {
        std::vector<int> stack(s.begin(), s.end());
        while (!stack.empty()) {
            const int q = stack.back();
            stack.pop_back();
            for (const auto& [src, dst] : a.epsilons()) {
                if (src == q && s.insert(dst).second) {
                    stack.push_back(dst);
                }
            }
        }
        return s;
    };
    cur = close(cur);
    for (const auto& letter : c) {
        std::set<int> next;
        for (int q : cur) {
            for (int ti : idx[static_cast<std::size_t>(q)]) {
                const Transition& t = a.transitions()[static_cast<std::size_t>(ti)];
                if (t.label.loc == letter.loc && t.label.env.contains(letter.values)) {
                    next.insert(t.dst);
                }
            }
        }
        cur = close(next);
        if (cur.empty()) {
            return false;
        }
    }
    return std::any_of(cur.begin(), cur.end(), [&a](int q) { return a.is_final(q); });
}

std::string to_string(const ConcreteConfig& c, const Vocabulary& voc) {
    std::string out;
    for (const auto& s : c) {
        out += "<" + s.id().to_string() + " | " + voc.loc_name(s.loc);
        for (int d = 1; d < static_cast<int>(s.values.size()); ++d) {
            out += (d == 1 ? " | " : ", ") + voc.dim_name(d) + "=" + s.values[static_cast<std::size_t>(d)].to_string();
        }
        out += ">";
    }
    return out.empty() ? "<empty>" : out;
}

} // namespace latta
