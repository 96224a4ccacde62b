// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace latta {

SourceError::SourceError(const std::string& what, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line),
      column_(column) {}

namespace {

// ---------------------------------------------------------------- lexer

struct Token {
    enum class Type : std::uint8_t { Ident, Number, Punct, End };
    Type type = Type::End;
    std::string text;
    SourcePos pos;
};

std::vector<Token> lex(const std::string& src) {
    static const std::vector<std::string> puncts = {":=", "<=", ">=", "==", "!=", "&&", "||", "{", "}", "(", ")",
                                                    ";",  ",",  "+",  "-",  "*",  "/",  "%",  "^", "<", ">", "!"};
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int col = 1;
    const auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') {
                advance(1);
            }
            continue;
        }
        const SourcePos pos{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
                ++j;
            }
            out.push_back({Token::Type::Ident, src.substr(i, j - i), pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                ++j;
            }
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    ++j;
                }
            }
            out.push_back({Token::Type::Number, src.substr(i, j - i), pos});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const auto& p : puncts) {
            if (src.compare(i, p.size(), p) == 0) {
                out.push_back({Token::Type::Punct, p, pos});
                advance(p.size());
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw SourceError(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    out.push_back({Token::Type::End, "", {line, col}});
    return out;
}

Rational parse_number(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        return Rational::parse(text);
    }
    const std::string frac = text.substr(dot + 1);
    std::string den = "1";
    den.append(frac.size(), '0');
    return Rational::parse(text.substr(0, dot) + frac) / Rational::parse(den);
}

const std::set<std::string>& keywords() {
    static const std::set<std::string> k = {"if",   "else",   "while",  "create", "send", "receive", "broadcast",
                                            "reduce", "skip", "any_id", "int",    "rat",  "nondet",  "true",
                                            "false"};
    return k;
}

// ---------------------------------------------------------------- parser

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Ast program() {
        Ast ast;
        while (peek_ident("int") || peek_ident("rat")) {
            const bool integral = next().text == "int";
            do {
                const Token& t = expect_name();
                ast.decls.push_back({t.text, integral, t.pos});
            } while (accept(","));
            expect(";");
        }
        ast.body.kind = Stmt::Kind::Block;
        ast.body.pos = cur().pos;
        while (cur().type != Token::Type::End) {
            if (accept(";")) {
                continue;
            }
            ast.body.body.push_back(statement());
        }
        return ast;
    }

    AstExprPtr standalone_expression() {
        AstExprPtr e = expression();
        if (cur().type != Token::Type::End) {
            fail("unexpected '" + cur().text + "' after expression");
        }
        return e;
    }

  private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool peek(const std::string& p) const { return cur().type == Token::Type::Punct && cur().text == p; }
    bool peek_ident(const std::string& w) const { return cur().type == Token::Type::Ident && cur().text == w; }
    bool accept(const std::string& p) {
        if (peek(p)) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw SourceError(msg, cur().pos.line, cur().pos.column); }
    void expect(const std::string& p) {
        if (!accept(p)) {
            fail("expected '" + p + "'" + (cur().type == Token::Type::End ? " at end of input" : " before '" + cur().text + "'"));
        }
    }
    const Token& expect_name() {
        if (cur().type != Token::Type::Ident || keywords().count(cur().text) || cur().text == "id" ||
            cur().text == "nprocs") {
            fail("expected a variable name");
        }
        return next();
    }

    Stmt statement() {
        Stmt s;
        s.pos = cur().pos;
        if (accept("{")) {
            s.kind = Stmt::Kind::Block;
            while (!peek("}")) {
                if (cur().type == Token::Type::End) {
                    fail("unterminated block");
                }
                if (accept(";")) {
                    continue;
                }
                s.body.push_back(statement());
            }
            expect("}");
            return s;
        }
        if (cur().type != Token::Type::Ident) {
            fail("expected a statement");
        }
        const std::string word = cur().text;
        if (word == "skip") {
            ++pos_;
            s.kind = Stmt::Kind::Skip;
        } else if (word == "if") {
            ++pos_;
            s.kind = Stmt::Kind::If;
            expect("(");
            s.expr = expression();
            expect(")");
            s.body.push_back(statement());
            const std::size_t save = pos_;
            while (accept(";")) {
            }
            if (peek_ident("else")) {
                ++pos_;
                s.body.push_back(statement());
            } else {
                pos_ = save;
            }
        } else if (word == "while") {
            ++pos_;
            s.kind = Stmt::Kind::While;
            expect("(");
            s.expr = expression();
            expect(")");
            s.body.push_back(statement());
        } else if (word == "create") {
            ++pos_;
            s.kind = Stmt::Kind::Create;
            expect("(");
            s.target = expect_name().text;
            expect(")");
        } else if (word == "send" || word == "receive") {
            ++pos_;
            s.kind = word == "send" ? Stmt::Kind::Send : Stmt::Kind::Receive;
            expect("(");
            if (peek_ident("any_id")) {
                ++pos_;
            } else {
                s.peer = expression();
            }
            expect(",");
            if (s.kind == Stmt::Kind::Send) {
                s.expr = expression();
            } else {
                s.target = expect_name().text;
            }
            expect(")");
        } else if (word == "broadcast") {
            ++pos_;
            s.kind = Stmt::Kind::Broadcast;
            expect("(");
            s.expr = expression();
            expect(",");
            s.target = expect_name().text;
            expect(")");
        } else if (word == "reduce") {
            ++pos_;
            s.kind = Stmt::Kind::Reduce;
            expect("(");
            s.target = expect_name().text;
            expect(",");
            s.source = expect_name().text;
            expect(",");
            if (accept("+")) {
                s.op = Op::Add;
            } else if (accept("*")) {
                s.op = Op::Mul;
            } else if (peek_ident("min") || peek_ident("max")) {
                s.op = next().text == "min" ? Op::Min : Op::Max;
            } else {
                fail("reduce operator must be +, *, min or max");
            }
            if (!accept(",")) {
                fail("reduce takes four arguments: reduce(acc, src, op, root)");
            }
            s.expr = expression();
            if (!peek(")")) {
                fail("reduce takes four arguments: reduce(acc, src, op, root)");
            }
            expect(")");
        } else {
            s.kind = Stmt::Kind::Assign;
            s.target = expect_name().text;
            expect(":=");
            s.expr = expression();
        }
        return s;
    }

    static AstExprPtr make_binary(Op op, AstExprPtr a, AstExprPtr b, SourcePos pos) {
        auto e = std::make_shared<AstExpr>();
        e->kind = AstExpr::Kind::Binary;
        e->op = op;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        e->pos = pos;
        return e;
    }

    AstExprPtr expression() { return binary_level(0); }

    AstExprPtr binary_level(int level) {
        static const std::vector<std::vector<std::string>> levels = {
            {"||"}, {"&&"}, {"==", "!="}, {"<", "<=", ">", ">="}, {"+", "-"}, {"*", "/", "%"}};
        if (level == static_cast<int>(levels.size())) {
            return unary();
        }
        AstExprPtr lhs = binary_level(level + 1);
        while (true) {
            const auto& ops = levels[static_cast<std::size_t>(level)];
            const auto it = std::find_if(ops.begin(), ops.end(), [this](const std::string& o) { return peek(o); });
            if (it == ops.end()) {
                return lhs;
            }
            const SourcePos pos = cur().pos;
            ++pos_;
            lhs = make_binary(*op_from_symbol(*it), lhs, binary_level(level + 1), pos);
        }
    }

    AstExprPtr unary() {
        const SourcePos pos = cur().pos;
        if (accept("-") || (peek("!") && (++pos_, true))) {
            const bool neg = toks_[pos_ - 1].text == "-";
            auto e = std::make_shared<AstExpr>();
            e->kind = AstExpr::Kind::Unary;
            e->op = neg ? Op::Neg : Op::Not;
            e->lhs = unary();
            e->pos = pos;
            return e;
        }
        AstExprPtr base = primary();
        if (peek("^")) {
            const SourcePos p = cur().pos;
            ++pos_;
            return make_binary(Op::Pow, base, unary(), p);
        }
        return base;
    }

    AstExprPtr primary() {
        const Token& t = cur();
        auto e = std::make_shared<AstExpr>();
        e->pos = t.pos;
        if (t.type == Token::Type::Number) {
            ++pos_;
            e->kind = AstExpr::Kind::Number;
            e->value = parse_number(t.text);
            return e;
        }
        if (accept("(")) {
            AstExprPtr inner = expression();
            expect(")");
            return inner;
        }
        if (t.type != Token::Type::Ident) {
            fail(t.type == Token::Type::End ? "unexpected end of input in expression" : "unexpected '" + t.text + "'");
        }
        if (t.text == "any_id") {
            fail("any_id is only allowed as the peer of send or receive");
        }
        if (t.text == "nondet") {
            ++pos_;
            expect("(");
            expect(")");
            e->kind = AstExpr::Kind::Nondet;
            return e;
        }
        if (t.text == "true" || t.text == "false") {
            ++pos_;
            e->kind = AstExpr::Kind::Number;
            e->value = Rational(t.text == "true" ? 1 : 0);
            return e;
        }
        if ((t.text == "min" || t.text == "max") && toks_[pos_ + 1].type == Token::Type::Punct &&
            toks_[pos_ + 1].text == "(") {
            const Op op = t.text == "min" ? Op::Min : Op::Max;
            pos_ += 2;
            AstExprPtr a = expression();
            expect(",");
            AstExprPtr b = expression();
            expect(")");
            return make_binary(op, a, b, t.pos);
        }
        if (keywords().count(t.text)) {
            fail("unexpected keyword '" + t.text + "'");
        }
        ++pos_;
        e->kind = AstExpr::Kind::Name;
        e->name = t.text;
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- cfg

Instr filter_instr(ExprPtr cond) {
    Instr in;
    in.kind = Instr::Kind::Filter;
    in.expr = std::move(cond);
    return in;
}

ExprPtr convert_expr(const AstExprPtr& e, const Vocabulary& voc, std::optional<int> procs) {
    switch (e->kind) {
    case AstExpr::Kind::Number: return Expr::constant(e->value);
    case AstExpr::Kind::Nondet: return Expr::nondet();
    case AstExpr::Kind::Name: {
        if (e->name == "nprocs") {
            if (!procs) {
                throw SourceError("nprocs is not a constant with an unbounded number of processes", e->pos.line,
                                  e->pos.column);
            }
            return Expr::constant(Rational(static_cast<long>(*procs)));
        }
        const auto d = voc.find_var(e->name);
        if (!d) {
            throw SourceError("unknown variable '" + e->name + "'", e->pos.line, e->pos.column);
        }
        return Expr::var(0, *d, voc.dim_integral(*d));
    }
    case AstExpr::Kind::Unary: return Expr::unary(e->op, convert_expr(e->lhs, voc, procs));
    case AstExpr::Kind::Binary:
        return Expr::binary(e->op, convert_expr(e->lhs, voc, procs), convert_expr(e->rhs, voc, procs));
    }
    return nullptr;
}

class CfgBuilder {
  public:
    CfgBuilder(const Ast& ast, Domain domain, std::optional<int> procs) : ast_(ast), procs_(procs) {
        voc_.domain = domain;
        collect_vars();
    }

    Cfg build() {
        const int entry = fresh();
        const int exit = compile(ast_.body, entry);
        return finish(entry, exit);
    }

  private:
    struct RawEdge {
        int from;
        Instr instr;
        int to;
        SourcePos pos;
    };

    int fresh() {
        parent_.push_back(static_cast<int>(parent_.size()));
        return parent_.back();
    }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
    }

    void note_var(const std::string& name, std::map<std::string, bool>& seen, std::vector<std::string>& order) {
        if (name == "id" || name == "nprocs" || seen.count(name)) {
            return;
        }
        seen[name] = true;
        order.push_back(name);
    }
    void note_expr(const AstExprPtr& e, std::map<std::string, bool>& seen, std::vector<std::string>& order) {
        if (!e) {
            return;
        }
        if (e->kind == AstExpr::Kind::Name) {
            note_var(e->name, seen, order);
        }
        note_expr(e->lhs, seen, order);
        note_expr(e->rhs, seen, order);
    }
    void note_stmt(const Stmt& s, std::map<std::string, bool>& seen, std::vector<std::string>& order,
                   std::set<std::string>& accs) {
        note_expr(s.peer, seen, order);
        note_expr(s.expr, seen, order);
        if (!s.target.empty()) {
            note_var(s.target, seen, order);
        }
        if (!s.source.empty()) {
            note_var(s.source, seen, order);
        }
        if (s.kind == Stmt::Kind::Reduce) {
            accs.insert(s.target);
        }
        for (const auto& b : s.body) {
            note_stmt(b, seen, order, accs);
        }
    }

    void collect_vars() {
        std::map<std::string, bool> seen;
        std::vector<std::string> order;
        std::map<std::string, bool> declared;
        for (const auto& d : ast_.decls) {
            if (declared.count(d.name)) {
                throw SourceError("variable '" + d.name + "' declared twice", d.pos.line, d.pos.column);
            }
            declared[d.name] = d.integral;
            note_var(d.name, seen, order);
        }
        std::set<std::string> accs;
        note_stmt(ast_.body, seen, order, accs);
        for (const auto& name : order) {
            bool integral = true;
            if (auto it = declared.find(name); it != declared.end()) {
                integral = it->second;
            } else if (accs.count(name)) {
                integral = false;
            }
            voc_.vars.push_back({name, integral});
        }
    }

    int dim_of(const std::string& name, SourcePos pos) const {
        if (name == "id") {
            return 0;
        }
        if (auto d = voc_.find_var(name)) {
            return *d;
        }
        throw SourceError("unknown variable '" + name + "'", pos.line, pos.column);
    }

    int target_dim(const std::string& name, SourcePos pos) const {
        if (name == "id" || name == "nprocs") {
            throw SourceError("cannot assign to '" + name + "'", pos.line, pos.column);
        }
        return dim_of(name, pos);
    }

    ExprPtr convert(const AstExprPtr& e) const { return convert_expr(e, voc_, procs_); }

    int edge(int from, Instr instr, SourcePos pos) {
        const int to = fresh();
        edges_.push_back({from, std::move(instr), to, pos});
        return to;
    }

    int compile(const Stmt& s, int entry) {
        Instr in;
        switch (s.kind) {
        case Stmt::Kind::Block: {
            int cur = entry;
            for (const auto& b : s.body) {
                cur = compile(b, cur);
            }
            return cur;
        }
        case Stmt::Kind::Skip: return edge(entry, in, s.pos);
        case Stmt::Kind::Assign: {
            in.kind = Instr::Kind::Assign;
            in.var = target_dim(s.target, s.pos);
            in.expr = convert(s.expr);
            return edge(entry, in, s.pos);
        }
        case Stmt::Kind::If: {
            const ExprPtr cond = convert(s.expr);
            const Instr yes = filter_instr(cond);
            const int then_entry = edge(entry, yes, s.pos);
            const int then_exit = compile(s.body[0], then_entry);
            const Instr no = filter_instr(Expr::unary(Op::Not, cond));
            if (s.body.size() > 1) {
                const int else_entry = edge(entry, no, s.pos);
                const int else_exit = compile(s.body[1], else_entry);
                merge(then_exit, else_exit);
            } else {
                edges_.push_back({entry, no, then_exit, s.pos});
            }
            return then_exit;
        }
        case Stmt::Kind::While: {
            const ExprPtr cond = convert(s.expr);
            heads_.push_back(entry);
            const Instr yes = filter_instr(cond);
            const int body_entry = edge(entry, yes, s.pos);
            const int body_exit = compile(s.body[0], body_entry);
            merge(body_exit, entry);
            const Instr no = filter_instr(Expr::unary(Op::Not, cond));
            return edge(entry, no, s.pos);
        }
        case Stmt::Kind::Create:
            in.kind = Instr::Kind::Create;
            in.var = target_dim(s.target, s.pos);
            return edge(entry, in, s.pos);
        case Stmt::Kind::Send:
            in.kind = Instr::Kind::Send;
            in.peer = s.peer ? convert(s.peer) : nullptr;
            in.expr = convert(s.expr);
            return edge(entry, in, s.pos);
        case Stmt::Kind::Receive:
            in.kind = Instr::Kind::Receive;
            in.peer = s.peer ? convert(s.peer) : nullptr;
            in.var = target_dim(s.target, s.pos);
            return edge(entry, in, s.pos);
        case Stmt::Kind::Broadcast:
            in.kind = Instr::Kind::Broadcast;
            in.expr = convert(s.expr);
            in.var = target_dim(s.target, s.pos);
            return edge(entry, in, s.pos);
        case Stmt::Kind::Reduce:
            in.kind = Instr::Kind::Reduce;
            in.var = target_dim(s.target, s.pos);
            in.src = dim_of(s.source, s.pos);
            in.op = s.op;
            in.expr = convert(s.expr);
            return edge(entry, in, s.pos);
        }
        return entry;
    }

    Cfg finish(int entry, int exit) {
        std::map<int, SourcePos> key;
        std::set<int> reps;
        for (int q = 0; q < static_cast<int>(parent_.size()); ++q) {
            reps.insert(find(q));
        }
        for (const auto& e : edges_) {
            const int f = find(e.from);
            auto it = key.find(f);
            if (it == key.end() || e.pos < it->second) {
                key[f] = e.pos;
            }
        }
        std::vector<int> order(reps.begin(), reps.end());
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const auto ka = key.find(a);
            const auto kb = key.find(b);
            if ((ka == key.end()) != (kb == key.end())) {
                return kb == key.end();
            }
            if (ka == key.end()) {
                return false;
            }
            return ka->second < kb->second;
        });
        std::map<int, Loc> number;
        for (const int r : order) {
            const Loc l = static_cast<Loc>(number.size());
            number[r] = l;
            voc_.locations.push_back({"l" + std::to_string(l), LocationInfo::Kind::Program});
        }
        Cfg cfg;
        cfg.entry = number.at(find(entry));
        cfg.exit = number.at(find(exit));
        for (const int h : heads_) {
            const Loc l = number.at(find(h));
            if (std::find(cfg.loop_heads.begin(), cfg.loop_heads.end(), l) == cfg.loop_heads.end()) {
                cfg.loop_heads.push_back(l);
            }
        }
        std::sort(cfg.loop_heads.begin(), cfg.loop_heads.end());
        std::vector<std::pair<SourcePos, std::size_t>> sorted;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            sorted.emplace_back(edges_[i].pos, i);
        }
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        bool has_reduce = false;
        for (const auto& [pos, i] : sorted) {
            const RawEdge& e = edges_[i];
            CfgEdge ce{number.at(find(e.from)), e.instr, number.at(find(e.to))};
            if (ce.instr.kind == Instr::Kind::Reduce) {
                has_reduce = true;
            }
            cfg.edges.push_back(std::move(ce));
        }
        std::stable_sort(cfg.edges.begin(), cfg.edges.end(),
                         [](const CfgEdge& a, const CfgEdge& b) { return a.from < b.from; });
        for (auto& e : cfg.edges) {
            if (e.instr.kind == Instr::Kind::Reduce) {
                e.instr.lock = static_cast<Loc>(voc_.locations.size());
                voc_.locations.push_back({"lock_" + voc_.loc_name(e.from), LocationInfo::Kind::Lock});
            }
        }
        if (has_reduce) {
            cfg.collector = static_cast<Loc>(voc_.locations.size());
            voc_.locations.push_back({"collector", LocationInfo::Kind::Collector});
        }
        cfg.voc = voc_;
        return cfg;
    }

    const Ast& ast_;
    std::optional<int> procs_;
    Vocabulary voc_;
    std::vector<int> parent_;
    std::vector<RawEdge> edges_;
    std::vector<int> heads_;
};

} // namespace

Ast parse_program(const std::string& text) { return Parser(lex(text)).program(); }

ExprPtr parse_expression(const std::string& text, const Vocabulary& voc, std::optional<int> procs) {
    return convert_expr(Parser(lex(text)).standalone_expression(), voc, procs);
}

Cfg build_cfg(const Ast& ast, Domain domain, std::optional<int> procs) { return CfgBuilder(ast, domain, procs).build(); }

bool CompiledSemantics::is_widening_point(Loc l) const {
    return std::find(widening_points.begin(), widening_points.end(), l) != widening_points.end();
}

bool CompiledSemantics::is_blocking(Loc l) const { return std::find(blocking.begin(), blocking.end(), l) != blocking.end(); }

Automaton initial_automaton(const Vocabulary& voc, Loc entry, std::optional<int> procs) {
    const NumEnv zero = NumEnv::zero(voc.domain, voc.dims());
    Automaton a;
    if (procs) {
        std::vector<LocalState> word;
        EvalFlags flags;
        for (int i = 0; i < *procs; ++i) {
            word.push_back({entry, zero.assign(0, Expr::constant(Rational(static_cast<long>(i))), false, flags)});
        }
        return normalize(Automaton::word(word));
    }
    const LocalState any{entry, zero.forget(0).restrict(0, Interval(Bound(0L), Bound::pos_inf()))};
    const int q0 = a.add_state();
    const int q1 = a.add_state(true);
    a.set_initial(q0);
    a.add_transition(q0, any, q1);
    a.add_transition(q1, any, q1);
    return normalize(a);
}

CompiledSemantics compile(const Cfg& cfg, std::optional<int> procs) {
    CompiledSemantics sem;
    sem.cfg = cfg;
    const Vocabulary& voc = sem.cfg.voc;
    std::set<Loc> blocking;
    for (const auto& e : cfg.edges) {
        const std::string label = voc.loc_name(e.from) + ": " + e.instr.to_string(voc);
        switch (e.instr.kind) {
        case Instr::Kind::Skip:
        case Instr::Kind::Assign:
        case Instr::Kind::Filter: {
            TransducerRule r;
            r.name = label;
            r.guard = {GuardElement::at(e.from)};
            RewriterSpec out = RewriterSpec::copy(0, e.to);
            if (e.instr.kind == Instr::Kind::Assign) {
                out.assign(e.instr.var, e.instr.expr, voc.dim_integral(e.instr.var) && e.instr.expr->may_be_fractional());
            } else if (e.instr.kind == Instr::Kind::Filter) {
                r.conditions = {e.instr.expr};
            }
            r.outputs = {out};
            sem.transducer.rules.push_back(std::move(r));
            break;
        }
        case Instr::Kind::Create: sem.rules.push_back(make_create_rule(e, cfg.entry, voc)); break;
        case Instr::Kind::Broadcast:
            blocking.insert(e.from);
            sem.rules.push_back(make_broadcast_rule(e, voc));
            break;
        case Instr::Kind::Reduce: {
            blocking.insert(e.from);
            blocking.insert(e.instr.lock);
            blocking.insert(cfg.collector);
            auto rs = make_reduce_rules(e, cfg.collector, voc);
            sem.rules.insert(sem.rules.end(), rs.begin(), rs.end());
            break;
        }
        case Instr::Kind::Send:
            blocking.insert(e.from);
            for (const auto& r : cfg.edges) {
                if (r.instr.kind == Instr::Kind::Receive) {
                    auto rs = make_send_receive_rules(e, r, voc);
                    sem.rules.insert(sem.rules.end(), rs.begin(), rs.end());
                }
            }
            break;
        case Instr::Kind::Receive: blocking.insert(e.from); break;
        }
    }
    sem.transducer.rules.push_back(Transducer::inactivity());
    sem.initial = initial_automaton(voc, cfg.entry, procs);
    std::set<Loc> widen(cfg.loop_heads.begin(), cfg.loop_heads.end());
    if (cfg.has_create()) {
        widen.insert(cfg.entry);
    }
    if (cfg.collector >= 0) {
        widen.insert(cfg.collector);
    }
    sem.widening_points.assign(widen.begin(), widen.end());
    sem.blocking.assign(blocking.begin(), blocking.end());
    sem.shape_widening = cfg.has_create() || !procs;
    return sem;
}

CompiledSemantics compile_source(const std::string& text, Domain domain, std::optional<int> procs) {
    return compile(build_cfg(parse_program(text), domain, procs), procs);
}

} // namespace latta
