// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/io.hpp"

#include <stdexcept>

namespace latta {

namespace {

Json bound_json(const Bound& b) {
    switch (b.kind()) {
    case Bound::Kind::NegInf: return "-inf";
    case Bound::Kind::PosInf: return "+inf";
    case Bound::Kind::Finite: break;
    }
    return b.value().to_fraction();
}

Bound bound_from_json(const Json& j) {
    const std::string s = j.get<std::string>();
    if (s == "-inf") {
        return Bound::neg_inf();
    }
    if (s == "+inf") {
        return Bound::pos_inf();
    }
    return Bound(Rational::parse(s));
}

const char* domain_key(Domain d) { return d == Domain::Interval ? "interval" : "affine"; }

Domain domain_from(const std::string& s) {
    if (s == "interval") {
        return Domain::Interval;
    }
    if (s == "affine") {
        return Domain::Affine;
    }
    throw std::runtime_error("unknown domain '" + s + "'");
}

Json opt_loc(const std::optional<Loc>& l) { return l ? Json(*l) : Json(nullptr); }

Json guard_json(const GuardElement& g) {
    Json j;
    j["locs"] = g.locs ? Json(*g.locs) : Json(nullptr);
    j["none"] = g.none;
    j["ranges"] = Json::array();
    for (const auto& [d, r] : g.ranges) {
        j["ranges"].push_back({{"dim", d}, {"range", to_json(r)}});
    }
    j["conds"] = Json::array();
    for (const auto& c : g.conds) {
        j["conds"].push_back(to_json(c));
    }
    return j;
}

GuardElement guard_from(const Json& j) {
    GuardElement g;
    if (!j.at("locs").is_null()) {
        g.locs = j.at("locs").get<std::vector<Loc>>();
    }
    g.none = j.at("none").get<bool>();
    for (const auto& r : j.at("ranges")) {
        g.ranges.emplace_back(r.at("dim").get<int>(), interval_from_json(r.at("range")));
    }
    for (const auto& c : j.at("conds")) {
        g.conds.push_back(expr_from_json(c));
    }
    return g;
}

Json exprs_json(const std::vector<ExprPtr>& es) {
    Json j = Json::array();
    for (const auto& e : es) {
        j.push_back(to_json(e));
    }
    return j;
}

std::vector<ExprPtr> exprs_from(const Json& j) {
    std::vector<ExprPtr> out;
    for (const auto& e : j) {
        out.push_back(expr_from_json(e));
    }
    return out;
}

Json rewriter_json(const RewriterSpec& r) {
    static const char* bases[] = {"slot", "star", "fresh"};
    Json j;
    j["base"] = bases[static_cast<int>(r.base)];
    j["slot"] = r.slot;
    j["zero"] = r.zero;
    j["loc"] = opt_loc(r.loc);
    j["assigns"] = Json::array();
    for (const auto& a : r.assigns) {
        j["assigns"].push_back({{"dim", a.dim}, {"expr", to_json(a.expr)}, {"truncate", a.truncate}});
    }
    return j;
}

RewriterSpec rewriter_from(const Json& j) {
    RewriterSpec r;
    const std::string base = j.at("base").get<std::string>();
    r.base = base == "slot" ? RewriterSpec::Base::Slot
             : base == "star" ? RewriterSpec::Base::Star
             : base == "fresh" ? RewriterSpec::Base::Fresh
                               : throw std::runtime_error("unknown rewriter base '" + base + "'");
    r.slot = j.at("slot").get<int>();
    r.zero = j.at("zero").get<bool>();
    if (!j.at("loc").is_null()) {
        r.loc = j.at("loc").get<Loc>();
    }
    for (const auto& a : j.at("assigns")) {
        r.assigns.push_back({a.at("dim").get<int>(), expr_from_json(a.at("expr")), a.at("truncate").get<bool>()});
    }
    return r;
}

Json instr_json(const Instr& in) {
    Json j;
    j["kind"] = instr_kind_name(in.kind);
    j["var"] = in.var;
    j["src"] = in.src;
    j["expr"] = in.expr ? to_json(in.expr) : Json(nullptr);
    j["peer"] = in.peer ? to_json(in.peer) : Json(nullptr);
    j["op"] = op_symbol(in.op);
    j["lock"] = in.lock;
    return j;
}

Instr instr_from(const Json& j) {
    Instr in;
    const std::string kind = j.at("kind").get<std::string>();
    bool found = false;
    for (int k = 0; k <= static_cast<int>(Instr::Kind::Reduce); ++k) {
        if (kind == instr_kind_name(static_cast<Instr::Kind>(k))) {
            in.kind = static_cast<Instr::Kind>(k);
            found = true;
        }
    }
    if (!found) {
        throw std::runtime_error("unknown instruction kind '" + kind + "'");
    }
    in.var = j.at("var").get<int>();
    in.src = j.at("src").get<int>();
    if (!j.at("expr").is_null()) {
        in.expr = expr_from_json(j.at("expr"));
    }
    if (!j.at("peer").is_null()) {
        in.peer = expr_from_json(j.at("peer"));
    }
    in.op = op_from_symbol(j.at("op").get<std::string>()).value_or(Op::Add);
    in.lock = j.at("lock").get<Loc>();
    return in;
}

Json cfg_json(const Cfg& cfg) {
    Json j;
    j["domain"] = domain_key(cfg.voc.domain);
    j["locations"] = Json::array();
    static const char* kinds[] = {"program", "lock", "collector"};
    for (const auto& l : cfg.voc.locations) {
        j["locations"].push_back({{"name", l.name}, {"kind", kinds[static_cast<int>(l.kind)]}});
    }
    j["vars"] = Json::array();
    for (const auto& v : cfg.voc.vars) {
        j["vars"].push_back({{"name", v.name}, {"integral", v.integral}});
    }
    j["edges"] = Json::array();
    for (const auto& e : cfg.edges) {
        j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"instr", instr_json(e.instr)}});
    }
    j["entry"] = cfg.entry;
    j["exit"] = cfg.exit;
    j["loop_heads"] = cfg.loop_heads;
    j["collector"] = cfg.collector;
    return j;
}

Cfg cfg_from(const Json& j) {
    Cfg cfg;
    cfg.voc.domain = domain_from(j.at("domain").get<std::string>());
    for (const auto& l : j.at("locations")) {
        const std::string k = l.at("kind").get<std::string>();
        cfg.voc.locations.push_back({l.at("name").get<std::string>(), k == "lock"        ? LocationInfo::Kind::Lock
                                                                       : k == "collector" ? LocationInfo::Kind::Collector
                                                                                          : LocationInfo::Kind::Program});
    }
    for (const auto& v : j.at("vars")) {
        cfg.voc.vars.push_back({v.at("name").get<std::string>(), v.at("integral").get<bool>()});
    }
    for (const auto& e : j.at("edges")) {
        cfg.edges.push_back({e.at("from").get<Loc>(), instr_from(e.at("instr")), e.at("to").get<Loc>()});
    }
    cfg.entry = j.at("entry").get<Loc>();
    cfg.exit = j.at("exit").get<Loc>();
    cfg.loop_heads = j.at("loop_heads").get<std::vector<Loc>>();
    cfg.collector = j.at("collector").get<Loc>();
    return cfg;
}

LocalState state_from(const Json& j) { return {j.at("loc").get<Loc>(), env_from_json(j.at("env"))}; }

} // namespace

Json to_json(const Rational& q) { return q.to_fraction(); }

Rational rational_from_json(const Json& j) { return Rational::parse(j.get<std::string>()); }

Json to_json(const Interval& i) {
    if (i.is_bottom()) {
        return nullptr;
    }
    return Json::array({bound_json(i.lo()), bound_json(i.hi())});
}

Interval interval_from_json(const Json& j) {
    if (j.is_null()) {
        return Interval::bottom();
    }
    return {bound_from_json(j.at(0)), bound_from_json(j.at(1))};
}

Json to_json(const ExprPtr& e) {
    Json j;
    switch (e->kind) {
    case Expr::Kind::Const:
        j["k"] = "const";
        j["v"] = to_json(e->value);
        break;
    case Expr::Kind::Var:
        j["k"] = "var";
        j["slot"] = e->slot;
        j["dim"] = e->dim;
        j["integral"] = e->integral;
        break;
    case Expr::Kind::Unary:
        j["k"] = "unary";
        j["op"] = op_symbol(e->op);
        j["a"] = to_json(e->lhs);
        break;
    case Expr::Kind::Binary:
        j["k"] = "binary";
        j["op"] = op_symbol(e->op);
        j["a"] = to_json(e->lhs);
        j["b"] = to_json(e->rhs);
        break;
    case Expr::Kind::Nondet: j["k"] = "nondet"; break;
    case Expr::Kind::SegLen:
        j["k"] = "seglen";
        j["seg"] = e->slot;
        break;
    }
    return j;
}

ExprPtr expr_from_json(const Json& j) {
    const std::string k = j.at("k").get<std::string>();
    if (k == "const") {
        return Expr::constant(rational_from_json(j.at("v")));
    }
    if (k == "var") {
        return Expr::var(j.at("slot").get<int>(), j.at("dim").get<int>(), j.at("integral").get<bool>());
    }
    if (k == "unary") {
        const std::string op = j.at("op").get<std::string>();
        return Expr::unary(op == "-" ? Op::Neg : Op::Not, expr_from_json(j.at("a")));
    }
    if (k == "binary") {
        const auto op = op_from_symbol(j.at("op").get<std::string>());
        if (!op) {
            throw std::runtime_error("unknown operator");
        }
        return Expr::binary(*op, expr_from_json(j.at("a")), expr_from_json(j.at("b")));
    }
    if (k == "nondet") {
        return Expr::nondet();
    }
    if (k == "seglen") {
        return Expr::seglen(j.at("seg").get<int>());
    }
    throw std::runtime_error("unknown expression kind '" + k + "'");
}

Json to_json(const NumEnv& e) {
    Json j;
    j["domain"] = domain_key(e.domain());
    j["dims"] = e.dims();
    j["bottom"] = e.is_bottom();
    if (const auto* ie = e.as_interval()) {
        j["values"] = Json::array();
        if (!ie->is_bottom()) {
            for (const auto& v : ie->values()) {
                j["values"].push_back(to_json(v));
            }
        }
    } else {
        j["rows"] = Json::array();
        for (const auto& row : e.as_affine()->rows()) {
            Json r = Json::array();
            for (const auto& q : row) {
                r.push_back(to_json(q));
            }
            j["rows"].push_back(r);
        }
    }
    return j;
}

NumEnv env_from_json(const Json& j) {
    const Domain d = domain_from(j.at("domain").get<std::string>());
    const int dims = j.at("dims").get<int>();
    if (j.at("bottom").get<bool>()) {
        return NumEnv::bottom(d, dims);
    }
    if (d == Domain::Interval) {
        IntervalEnv e = IntervalEnv::top(dims);
        int i = 0;
        for (const auto& v : j.at("values")) {
            e.set(i++, interval_from_json(v));
        }
        return NumEnv(e);
    }
    std::vector<AffineEnv::Row> rows;
    for (const auto& r : j.at("rows")) {
        AffineEnv::Row row;
        for (const auto& q : r) {
            row.push_back(rational_from_json(q));
        }
        rows.push_back(std::move(row));
    }
    return NumEnv(AffineEnv::from_rows(dims, std::move(rows)));
}

Json to_json(const LocalState& s, const Vocabulary& voc) {
    Json j;
    j["loc"] = s.loc;
    j["location"] = voc.loc_name(s.loc);
    j["id"] = to_json(s.id());
    j["env"] = to_json(s.env);
    return j;
}

Json to_json(const Automaton& a, const Vocabulary& voc) {
    Json j;
    j["states"] = a.num_states();
    j["initial"] = a.initial();
    j["final"] = a.finals();
    j["transitions"] = Json::array();
    for (const auto& t : a.transitions()) {
        j["transitions"].push_back({{"src", t.src}, {"dst", t.dst}, {"label", to_json(t.label, voc)}});
    }
    return j;
}

Automaton automaton_from_json(const Json& j) {
    Automaton a;
    const int n = j.at("states").get<int>();
    for (int q = 0; q < n; ++q) {
        a.add_state();
    }
    for (const auto& q : j.at("initial")) {
        a.set_initial(q.get<int>());
    }
    for (const auto& q : j.at("final")) {
        a.set_final(q.get<int>());
    }
    for (const auto& t : j.at("transitions")) {
        a.add_transition(t.at("src").get<int>(), state_from(t.at("label")), t.at("dst").get<int>());
    }
    return a;
}

Json to_json(const CompiledSemantics& sem) {
    const Vocabulary& voc = sem.voc();
    Json j;
    j["cfg"] = cfg_json(sem.cfg);
    Json t;
    t["states"] = sem.transducer.num_states;
    t["initial"] = sem.transducer.initial;
    t["final"] = sem.transducer.finals;
    t["rules"] = Json::array();
    for (const auto& r : sem.transducer.rules) {
        Json rj;
        rj["name"] = r.name;
        rj["src"] = r.src;
        rj["dst"] = r.dst;
        rj["guard"] = Json::array();
        for (const auto& g : r.guard) {
            rj["guard"].push_back(guard_json(g));
        }
        rj["conditions"] = exprs_json(r.conditions);
        rj["outputs"] = Json::array();
        for (const auto& o : r.outputs) {
            rj["outputs"].push_back(rewriter_json(o));
        }
        t["rules"].push_back(rj);
    }
    j["transducer"] = t;
    j["rules"] = Json::array();
    for (const auto& r : sem.rules) {
        Json rj;
        rj["name"] = r.name;
        rj["stars"] = Json::array();
        for (const auto& g : r.stars) {
            rj["stars"].push_back(guard_json(g));
        }
        rj["words"] = Json::array();
        for (const auto& w : r.words) {
            Json wj = Json::array();
            for (const auto& g : w) {
                wj.push_back(guard_json(g));
            }
            rj["words"].push_back(wj);
        }
        rj["conditions"] = exprs_json(r.conditions);
        rj["inserts"] = Json::array();
        for (const auto& f : r.inserts) {
            Json fj = Json::array();
            for (const auto& o : f) {
                fj.push_back(rewriter_json(o));
            }
            rj["inserts"].push_back(fj);
        }
        rj["star_rewriters"] = Json::array();
        for (const auto& h : r.star_rewriters) {
            rj["star_rewriters"].push_back(h ? rewriter_json(*h) : Json(nullptr));
        }
        j["rules"].push_back(rj);
    }
    j["initial"] = to_json(sem.initial, voc);
    j["widening_points"] = sem.widening_points;
    j["blocking"] = sem.blocking;
    j["shape_widening"] = sem.shape_widening;
    return j;
}

CompiledSemantics semantics_from_json(const Json& j) {
    CompiledSemantics sem;
    sem.cfg = cfg_from(j.at("cfg"));
    const Json& t = j.at("transducer");
    sem.transducer.num_states = t.at("states").get<int>();
    sem.transducer.initial = t.at("initial").get<std::vector<int>>();
    sem.transducer.finals = t.at("final").get<std::vector<int>>();
    for (const auto& rj : t.at("rules")) {
        TransducerRule r;
        r.name = rj.at("name").get<std::string>();
        r.src = rj.at("src").get<int>();
        r.dst = rj.at("dst").get<int>();
        for (const auto& g : rj.at("guard")) {
            r.guard.push_back(guard_from(g));
        }
        r.conditions = exprs_from(rj.at("conditions"));
        for (const auto& o : rj.at("outputs")) {
            r.outputs.push_back(rewriter_from(o));
        }
        sem.transducer.rules.push_back(std::move(r));
    }
    for (const auto& rj : j.at("rules")) {
        RewriteRule r;
        r.name = rj.at("name").get<std::string>();
        for (const auto& g : rj.at("stars")) {
            r.stars.push_back(guard_from(g));
        }
        for (const auto& wj : rj.at("words")) {
            std::vector<GuardElement> w;
            for (const auto& g : wj) {
                w.push_back(guard_from(g));
            }
            r.words.push_back(std::move(w));
        }
        r.conditions = exprs_from(rj.at("conditions"));
        for (const auto& fj : rj.at("inserts")) {
            std::vector<RewriterSpec> f;
            for (const auto& o : fj) {
                f.push_back(rewriter_from(o));
            }
            r.inserts.push_back(std::move(f));
        }
        for (const auto& h : rj.at("star_rewriters")) {
            r.star_rewriters.push_back(h.is_null() ? std::nullopt : std::optional<RewriterSpec>(rewriter_from(h)));
        }
        r.validate();
        sem.rules.push_back(std::move(r));
    }
    sem.initial = automaton_from_json(j.at("initial"));
    sem.widening_points = j.at("widening_points").get<std::vector<Loc>>();
    sem.blocking = j.at("blocking").get<std::vector<Loc>>();
    sem.shape_widening = j.at("shape_widening").get<bool>();
    return sem;
}

std::string to_dot(const Automaton& a, const Vocabulary& voc, const std::string& name) {
    const auto escape = [](const std::string& s) {
        std::string out;
        for (const char c : s) {
            if (c == '"' || c == '\\') {
                out += '\\';
            }
            out += c;
        }
        return out;
    };
    std::string out = "digraph " + name + " {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (int q = 0; q < a.num_states(); ++q) {
        out += "  q" + std::to_string(q) + (a.is_final(q) ? " [shape=doublecircle];\n" : ";\n");
    }
    for (int q : a.initial()) {
        out += "  start" + std::to_string(q) + " [shape=point];\n  start" + std::to_string(q) + " -> q" +
               std::to_string(q) + ";\n";
    }
    for (const auto& t : a.transitions()) {
        std::string label = t.label.to_string(voc);
        label = label.substr(1, label.size() - 2);
        out += "  q" + std::to_string(t.src) + " -> q" + std::to_string(t.dst) + " [label=\"" + escape(label) + "\"];\n";
    }
    return out + "}\n";
}

} // namespace latta
