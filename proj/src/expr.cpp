// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/expr.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

namespace latta {

namespace {

struct OpInfo {
    Op op;
    const char* symbol;
    int precedence;
};

constexpr std::array<OpInfo, 18> kOps{{
    {Op::Neg, "-", 7},   {Op::Not, "!", 7},   {Op::Add, "+", 4},   {Op::Sub, "-", 4},  {Op::Mul, "*", 5},
    {Op::Div, "/", 5},   {Op::Mod, "%", 5},   {Op::Pow, "^", 6},   {Op::Min, "min", 8}, {Op::Max, "max", 8},
    {Op::Lt, "<", 3},    {Op::Le, "<=", 3},   {Op::Eq, "==", 3},   {Op::Ne, "!=", 3},  {Op::Gt, ">", 3},
    {Op::Ge, ">=", 3},   {Op::And, "&&", 2},  {Op::Or, "||", 1},
}};

const OpInfo& info(Op op) { return kOps.at(static_cast<std::size_t>(op)); }

int precedence(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Unary: return 7;
    case Expr::Kind::Binary: return info(e.op).precedence;
    default: return 9;
    }
}

enum class Truth : std::uint8_t { False, True, Unknown };

Truth truth_of(const Interval& i) {
    if (i.is_bottom()) {
        return Truth::Unknown;
    }
    if (!i.contains_zero()) {
        return Truth::True;
    }
    if (i.is_point()) {
        return Truth::False;
    }
    return Truth::Unknown;
}

Interval from_truth(Truth t) {
    switch (t) {
    case Truth::True: return Interval::point(Rational(1));
    case Truth::False: return Interval::point(Rational(0));
    default: return {Bound(0L), Bound(1L)};
    }
}

Truth compare_intervals(Op op, const Interval& a, const Interval& b) {
    switch (op) {
    case Op::Lt:
        if (a.hi() < b.lo()) {
            return Truth::True;
        }
        return a.lo() >= b.hi() ? Truth::False : Truth::Unknown;
    case Op::Le:
        if (a.hi() <= b.lo()) {
            return Truth::True;
        }
        return a.lo() > b.hi() ? Truth::False : Truth::Unknown;
    case Op::Gt: return compare_intervals(Op::Lt, b, a);
    case Op::Ge: return compare_intervals(Op::Le, b, a);
    case Op::Eq:
        if (a.is_point() && b.is_point() && a == b) {
            return Truth::True;
        }
        return a.meet(b).is_bottom() ? Truth::False : Truth::Unknown;
    case Op::Ne: {
        const Truth t = compare_intervals(Op::Eq, a, b);
        if (t == Truth::Unknown) {
            return t;
        }
        return t == Truth::True ? Truth::False : Truth::True;
    }
    default: return Truth::Unknown;
    }
}

Interval interval_mod(const Interval& a, const Interval& b, EvalFlags& flags) {
    if (b.contains_zero()) {
        flags.division_by_zero = true;
        return Interval::top();
    }
    if (a.is_point() && b.is_point()) {
        return Interval::point(c_mod(*a.singleton(), *b.singleton()));
    }
    Bound mag = std::max(b.lo().is_finite() ? Bound(b.lo().value().abs()) : Bound::pos_inf(),
                         b.hi().is_finite() ? Bound(b.hi().value().abs()) : Bound::pos_inf());
    const Interval range(-mag, mag);
    if (a.lo() >= Bound(0L)) {
        return a.join(Interval::point(Rational(0))).meet(range).meet({Bound(0L), Bound::pos_inf()});
    }
    if (a.hi() <= Bound(0L)) {
        return a.join(Interval::point(Rational(0))).meet(range).meet({Bound::neg_inf(), Bound(0L)});
    }
    return range;
}

Interval interval_pow(const Interval& a, const Interval& b, EvalFlags& flags) {
    const Interval k = b.integral();
    if (k.is_bottom()) {
        return Interval::bottom();
    }
    if (k.is_point()) {
        const Rational n = *k.singleton();
        if (!n.fits_long() || n.abs() > Rational(4096)) {
            return Interval::top();
        }
        long e = n.abs().to_long();
        Interval r = Interval::point(Rational(1));
        for (long i = 0; i < e; ++i) {
            r = r * a;
        }
        if (e % 2 == 0 && !r.is_bottom() && r.lo() < Bound(0L)) {
            r = r.meet({Bound(0L), Bound::pos_inf()});
        }
        if (n.sign() < 0) {
            return Interval::divide(Interval::point(Rational(1)), r, flags.division_by_zero);
        }
        return r;
    }
    if (!a.is_point()) {
        return Interval::top();
    }
    const Rational p = *a.singleton();
    const auto pw = [&](const Bound& x, bool increasing) -> Bound {
        if (x.is_finite()) {
            EvalFlags ignored;
            const Interval v = interval_pow(a, Interval::point(x.value()), ignored);
            return v.is_point() ? v.lo() : (increasing ? Bound::pos_inf() : Bound(0L));
        }
        const bool up = x.kind() == Bound::Kind::PosInf;
        return up == increasing ? Bound::pos_inf() : Bound(0L);
    };
    if (p == Rational(1)) {
        return Interval::point(Rational(1));
    }
    if (p > Rational(1)) {
        return {pw(k.lo(), true), pw(k.hi(), true)};
    }
    if (p > Rational(0)) {
        return {pw(k.hi(), false), pw(k.lo(), false)};
    }
    return Interval::top();
}

} // namespace

const char* op_symbol(Op op) { return info(op).symbol; }

std::optional<Op> op_from_symbol(const std::string& s) {
    for (const auto& o : kOps) {
        if (s == o.symbol && o.op != Op::Neg) {
            return o.op;
        }
    }
    return std::nullopt;
}

bool is_comparison(Op op) { return op >= Op::Lt && op <= Op::Ge; }

Op mirror(Op op) {
    switch (op) {
    case Op::Lt: return Op::Gt;
    case Op::Le: return Op::Ge;
    case Op::Gt: return Op::Lt;
    case Op::Ge: return Op::Le;
    default: return op;
    }
}

Op negate(Op op) {
    switch (op) {
    case Op::Lt: return Op::Ge;
    case Op::Le: return Op::Gt;
    case Op::Gt: return Op::Le;
    case Op::Ge: return Op::Lt;
    case Op::Eq: return Op::Ne;
    case Op::Ne: return Op::Eq;
    default: throw std::logic_error("negate: not a comparison");
    }
}

ExprPtr Expr::constant(const Rational& q) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->value = q;
    return e;
}

ExprPtr Expr::var(int slot, int dim, bool integral) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->slot = slot;
    e->dim = dim;
    e->integral = integral;
    return e;
}

ExprPtr Expr::unary(Op op, ExprPtr x) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->op = op;
    e->lhs = std::move(x);
    return e;
}

ExprPtr Expr::binary(Op op, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->op = op;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr Expr::nondet() {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Nondet;
    return e;
}

ExprPtr Expr::seglen(int i) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::SegLen;
    e->slot = i;
    return e;
}

bool Expr::is_condition() const {
    if (kind == Kind::Unary) {
        return op == Op::Not;
    }
    return kind == Kind::Binary && (is_comparison(op) || op == Op::And || op == Op::Or);
}

bool Expr::mentions_nondet() const {
    if (kind == Kind::Nondet) {
        return true;
    }
    return (lhs && lhs->mentions_nondet()) || (rhs && rhs->mentions_nondet());
}

bool Expr::mentions_seglen() const {
    if (kind == Kind::SegLen) {
        return true;
    }
    return (lhs && lhs->mentions_seglen()) || (rhs && rhs->mentions_seglen());
}

bool Expr::may_be_fractional() const {
    switch (kind) {
    case Kind::Const: return !value.is_integer();
    case Kind::Var: return !integral;
    case Kind::Nondet:
    case Kind::SegLen: return false;
    case Kind::Unary: return op == Op::Neg && lhs->may_be_fractional();
    case Kind::Binary:
        if (is_comparison(op) || op == Op::And || op == Op::Or) {
            return false;
        }
        if (op == Op::Div || op == Op::Pow) {
            return true;
        }
        return lhs->may_be_fractional() || rhs->may_be_fractional();
    }
    return true;
}

std::string Expr::to_string(const Namer& namer) const {
    switch (kind) {
    case Kind::Const: return value.to_string();
    case Kind::Var: return namer(slot, dim);
    case Kind::Nondet: return "nondet()";
    case Kind::SegLen: return "seglen(" + std::to_string(slot) + ")";
    case Kind::Unary: {
        const std::string inner = lhs->to_string(namer);
        return std::string(op_symbol(op)) + (precedence(*lhs) < 7 ? "(" + inner + ")" : inner);
    }
    case Kind::Binary: {
        if (op == Op::Min || op == Op::Max) {
            return std::string(op_symbol(op)) + "(" + lhs->to_string(namer) + ", " + rhs->to_string(namer) + ")";
        }
        const int p = info(op).precedence;
        const bool right_assoc = op == Op::Pow;
        std::string l = lhs->to_string(namer);
        std::string r = rhs->to_string(namer);
        if (precedence(*lhs) < p || (right_assoc && precedence(*lhs) == p)) {
            l = "(" + l + ")";
        }
        if (precedence(*rhs) < p || (!right_assoc && precedence(*rhs) == p)) {
            r = "(" + r + ")";
        }
        return l + " " + op_symbol(op) + " " + r;
    }
    }
    return "?";
}

ExprPtr resolve(const ExprPtr& e, const std::function<int(int slot, int dim)>& var_dim,
                const std::function<int(int seg)>& seg_dim) {
    switch (e->kind) {
    case Expr::Kind::Var: return Expr::var(0, var_dim(e->slot, e->dim), e->integral);
    case Expr::Kind::SegLen: return Expr::var(0, seg_dim(e->slot), true);
    case Expr::Kind::Unary: return Expr::unary(e->op, resolve(e->lhs, var_dim, seg_dim));
    case Expr::Kind::Binary:
        return Expr::binary(e->op, resolve(e->lhs, var_dim, seg_dim), resolve(e->rhs, var_dim, seg_dim));
    default: return e;
    }
}

ExprPtr reslot(const ExprPtr& e, const std::function<int(int slot)>& slot_map) {
    switch (e->kind) {
    case Expr::Kind::Var: return Expr::var(slot_map(e->slot), e->dim, e->integral);
    case Expr::Kind::Unary: return Expr::unary(e->op, reslot(e->lhs, slot_map));
    case Expr::Kind::Binary: return Expr::binary(e->op, reslot(e->lhs, slot_map), reslot(e->rhs, slot_map));
    default: return e;
    }
}

void Linear::add(const Linear& o, const Rational& factor) {
    for (const auto& [d, c] : o.coeffs) {
        Rational& slot = coeffs[d];
        slot += c * factor;
        if (slot.is_zero()) {
            coeffs.erase(d);
        }
    }
    constant += o.constant * factor;
}

void Linear::scale(const Rational& factor) {
    if (factor.is_zero()) {
        coeffs.clear();
        constant = Rational(0);
        return;
    }
    for (auto& [d, c] : coeffs) {
        c *= factor;
    }
    constant *= factor;
}

std::optional<Linear> linearize(const ExprPtr& e) {
    switch (e->kind) {
    case Expr::Kind::Const: {
        Linear l;
        l.constant = e->value;
        return l;
    }
    case Expr::Kind::Var: {
        Linear l;
        l.coeffs[e->dim] = Rational(1);
        return l;
    }
    case Expr::Kind::Unary: {
        if (e->op != Op::Neg) {
            return std::nullopt;
        }
        auto l = linearize(e->lhs);
        if (l) {
            l->scale(Rational(-1));
        }
        return l;
    }
    case Expr::Kind::Binary: {
        if (is_comparison(e->op) || e->op == Op::And || e->op == Op::Or || e->op == Op::Mod || e->op == Op::Min ||
            e->op == Op::Max) {
            return std::nullopt;
        }
        auto a = linearize(e->lhs);
        auto b = linearize(e->rhs);
        if (!a || !b) {
            return std::nullopt;
        }
        switch (e->op) {
        case Op::Add: a->add(*b, Rational(1)); return a;
        case Op::Sub: a->add(*b, Rational(-1)); return a;
        case Op::Mul:
            if (a->is_constant()) {
                b->scale(a->constant);
                return b;
            }
            if (b->is_constant()) {
                a->scale(b->constant);
                return a;
            }
            return std::nullopt;
        case Op::Div:
            if (b->is_constant() && !b->constant.is_zero()) {
                a->scale(Rational(1) / b->constant);
                return a;
            }
            return std::nullopt;
        case Op::Pow:
            if (a->is_constant() && b->is_constant() && b->constant.is_integer() &&
                b->constant.abs() <= Rational(4096) && !(a->constant.is_zero() && b->constant.sign() < 0)) {
                Linear l;
                l.constant = power(a->constant, b->constant);
                return l;
            }
            return std::nullopt;
        default: return std::nullopt;
        }
    }
    default: return std::nullopt;
    }
}

Interval eval_interval(const ExprPtr& e, const IntervalLookup& lookup, EvalFlags& flags) {
    switch (e->kind) {
    case Expr::Kind::Const: return Interval::point(e->value);
    case Expr::Kind::Var: return lookup(e->dim);
    case Expr::Kind::Nondet: return {Bound(0L), Bound(1L)};
    case Expr::Kind::SegLen: return {Bound(0L), Bound::pos_inf()};
    case Expr::Kind::Unary: {
        const Interval a = eval_interval(e->lhs, lookup, flags);
        if (a.is_bottom()) {
            return a;
        }
        if (e->op == Op::Neg) {
            return -a;
        }
        const Truth t = truth_of(a);
        return from_truth(t == Truth::Unknown ? t : (t == Truth::True ? Truth::False : Truth::True));
    }
    case Expr::Kind::Binary: break;
    }
    const Interval a = eval_interval(e->lhs, lookup, flags);
    if (a.is_bottom()) {
        return a;
    }
    if (e->op == Op::And || e->op == Op::Or) {
        const Truth ta = truth_of(a);
        if (e->op == Op::And && ta == Truth::False) {
            return from_truth(Truth::False);
        }
        if (e->op == Op::Or && ta == Truth::True) {
            return from_truth(Truth::True);
        }
        const Interval b = eval_interval(e->rhs, lookup, flags);
        if (b.is_bottom()) {
            return b;
        }
        const Truth tb = truth_of(b);
        if (e->op == Op::And) {
            if (tb == Truth::False) {
                return from_truth(Truth::False);
            }
            return from_truth(ta == Truth::True && tb == Truth::True ? Truth::True : Truth::Unknown);
        }
        if (tb == Truth::True) {
            return from_truth(Truth::True);
        }
        return from_truth(ta == Truth::False && tb == Truth::False ? Truth::False : Truth::Unknown);
    }
    const Interval b = eval_interval(e->rhs, lookup, flags);
    if (b.is_bottom()) {
        return b;
    }
    switch (e->op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return Interval::divide(a, b, flags.division_by_zero);
    case Op::Mod: return interval_mod(a, b, flags);
    case Op::Pow: return interval_pow(a, b, flags);
    case Op::Min: return {std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
    case Op::Max: return {std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
    default: return from_truth(compare_intervals(e->op, a, b));
    }
}

bool truthy(const Rational& v) { return !v.is_zero(); }

Rational c_mod(const Rational& a, const Rational& b) { return a - b * (a / b).trunc(); }

Rational power(const Rational& base, const Rational& exponent) {
    if (!exponent.is_integer()) {
        throw std::domain_error("non-integral exponent");
    }
    if (exponent.abs() > Rational(4096)) {
        throw std::domain_error("exponent too large");
    }
    long n = exponent.abs().to_long();
    mpq_class r(1);
    for (long i = 0; i < n; ++i) {
        r *= base.raw();
    }
    Rational out{mpq_class(r)};
    if (exponent.sign() < 0) {
        return Rational(1) / out;
    }
    return out;
}

std::vector<Rational> eval_concrete(const ExprPtr& e, const ValueLookup& lookup) {
    const auto dedupe = [](std::vector<Rational> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    switch (e->kind) {
    case Expr::Kind::Const: return {e->value};
    case Expr::Kind::Var: return {lookup(e->dim)};
    case Expr::Kind::Nondet: return {Rational(0), Rational(1)};
    case Expr::Kind::SegLen: throw std::logic_error("segment length outside a rule");
    case Expr::Kind::Unary: {
        std::vector<Rational> out;
        for (const auto& v : eval_concrete(e->lhs, lookup)) {
            out.push_back(e->op == Op::Neg ? -v : Rational(truthy(v) ? 0 : 1));
        }
        return dedupe(out);
    }
    case Expr::Kind::Binary: break;
    }
    std::vector<Rational> out;
    for (const auto& a : eval_concrete(e->lhs, lookup)) {
        if (e->op == Op::And && !truthy(a)) {
            out.emplace_back(0);
            continue;
        }
        if (e->op == Op::Or && truthy(a)) {
            out.emplace_back(1);
            continue;
        }
        for (const auto& b : eval_concrete(e->rhs, lookup)) {
            switch (e->op) {
            case Op::Add: out.push_back(a + b); break;
            case Op::Sub: out.push_back(a - b); break;
            case Op::Mul: out.push_back(a * b); break;
            case Op::Div: out.push_back(a / b); break;
            case Op::Mod:
                if (b.is_zero()) {
                    throw std::domain_error("modulo by zero");
                }
                out.push_back(c_mod(a, b));
                break;
            case Op::Pow: out.push_back(power(a, b)); break;
            case Op::Min: out.push_back(std::min(a, b)); break;
            case Op::Max: out.push_back(std::max(a, b)); break;
            case Op::Lt: out.emplace_back(a < b ? 1 : 0); break;
            case Op::Le: out.emplace_back(a <= b ? 1 : 0); break;
            case Op::Eq: out.emplace_back(a == b ? 1 : 0); break;
            case Op::Ne: out.emplace_back(a != b ? 1 : 0); break;
            case Op::Gt: out.emplace_back(a > b ? 1 : 0); break;
            case Op::Ge: out.emplace_back(a >= b ? 1 : 0); break;
            case Op::And:
            case Op::Or: out.emplace_back(truthy(b) ? 1 : 0); break;
            default: throw std::logic_error("bad binary operator");
            }
        }
    }
    return dedupe(out);
}

} // namespace latta
