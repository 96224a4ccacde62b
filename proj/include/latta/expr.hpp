// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latta/interval.hpp"
#include "latta/rational.hpp"

namespace latta {

enum class Op : std::uint8_t { Neg, Not, Add, Sub, Mul, Div, Mod, Pow, Min, Max, Lt, Le, Eq, Ne, Gt, Ge, And, Or };

const char* op_symbol(Op op);
std::optional<Op> op_from_symbol(const std::string& s);
bool is_comparison(Op op);
/// Comparison with swapped operands: a < b iff b > a.
Op mirror(Op op);
/// Logical negation of a comparison: !(a < b) iff a >= b.
Op negate(Op op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable arithmetic expression. A variable names a (slot, dim) pair: slot selects a
/// letter in a multi-letter context, dim 0 is the process id.
struct Expr {
    enum class Kind : std::uint8_t { Const, Var, Unary, Binary, Nondet, SegLen };

    Kind kind = Kind::Const;
    Rational value;
    int slot = 0;
    int dim = 0;
    bool integral = true;
    Op op = Op::Add;
    ExprPtr lhs;
    ExprPtr rhs;

    static ExprPtr constant(const Rational& q);
    static ExprPtr var(int slot, int dim, bool integral);
    static ExprPtr unary(Op op, ExprPtr e);
    static ExprPtr binary(Op op, ExprPtr a, ExprPtr b);
    static ExprPtr nondet();
    /// Length of the i-th starred segment of a rule match.
    static ExprPtr seglen(int i);

    [[nodiscard]] bool is_condition() const;
    [[nodiscard]] bool mentions_nondet() const;
    [[nodiscard]] bool mentions_seglen() const;
    [[nodiscard]] bool may_be_fractional() const;

    using Namer = std::function<std::string(int slot, int dim)>;
    [[nodiscard]] std::string to_string(const Namer& namer) const;
};

/// Rewrites every variable to slot 0 and an absolute dimension, and segment lengths to
/// their scratch dimension.
ExprPtr resolve(const ExprPtr& e, const std::function<int(int slot, int dim)>& var_dim,
                const std::function<int(int seg)>& seg_dim);

/// Replaces slot indices via `slot_map`; other fields unchanged.
ExprPtr reslot(const ExprPtr& e, const std::function<int(int slot)>& slot_map);

/// sum(coeffs[d] * x_d) + constant, over absolute dimensions.
struct Linear {
    std::map<int, Rational> coeffs;
    Rational constant;

    [[nodiscard]] bool is_constant() const { return coeffs.empty(); }
    void add(const Linear& o, const Rational& factor);
    void scale(const Rational& factor);
};

/// Returns nullopt for non-affine expressions (products of variables, mod, pow with a
/// variable, comparisons, nondet).
std::optional<Linear> linearize(const ExprPtr& e);

struct EvalFlags {
    bool division_by_zero = false;
};

using IntervalLookup = std::function<Interval(int dim)>;
Interval eval_interval(const ExprPtr& e, const IntervalLookup& lookup, EvalFlags& flags);

/// Concrete evaluation; the result lists every possible value (more than one only when
/// nondet() occurs). Throws std::domain_error on division by zero.
using ValueLookup = std::function<Rational(int dim)>;
std::vector<Rational> eval_concrete(const ExprPtr& e, const ValueLookup& lookup);

bool truthy(const Rational& v);
Rational c_mod(const Rational& a, const Rational& b);
Rational power(const Rational& base, const Rational& exponent);

} // namespace latta
