// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "latta/expr.hpp"
#include "latta/interval.hpp"

namespace latta {

enum class Domain : std::uint8_t { Interval, Affine };

const char* domain_name(Domain d);

using DimNamer = std::function<std::string(int dim)>;

/// Non-relational environment: one interval per dimension.
class IntervalEnv {
  public:
    static IntervalEnv top(int dims);
    static IntervalEnv bottom(int dims);

    [[nodiscard]] int dims() const { return static_cast<int>(values_.size()); }
    [[nodiscard]] bool is_bottom() const { return bottom_; }
    [[nodiscard]] const Interval& at(int dim) const { return values_.at(static_cast<std::size_t>(dim)); }
    [[nodiscard]] const std::vector<Interval>& values() const { return values_; }

    /// Sets one dimension; a bottom interval collapses the environment.
    void set(int dim, const Interval& v);

    [[nodiscard]] bool leq(const IntervalEnv& o) const;
    [[nodiscard]] IntervalEnv join(const IntervalEnv& o) const;
    [[nodiscard]] IntervalEnv meet(const IntervalEnv& o) const;
    [[nodiscard]] IntervalEnv widen(const IntervalEnv& o) const;

    [[nodiscard]] IntervalEnv concat(const IntervalEnv& o) const;
    [[nodiscard]] IntervalEnv project(int from, int count) const;

    friend bool operator==(const IntervalEnv& a, const IntervalEnv& b);
    [[nodiscard]] std::strong_ordering compare(const IntervalEnv& o) const;
    [[nodiscard]] std::size_t hash() const;
    [[nodiscard]] std::string to_string(const DimNamer& namer) const;

  private:
    std::vector<Interval> values_;
    bool bottom_ = false;
};

/// Conjunction of affine equalities sum(a_i * x_i) = c kept in reduced row-echelon
/// form, so equal subspaces have identical matrices.
class AffineEnv {
  public:
    using Row = std::vector<Rational>; // dims coefficients followed by the constant

    static AffineEnv top(int dims);
    static AffineEnv bottom(int dims);

    [[nodiscard]] int dims() const { return dims_; }
    [[nodiscard]] bool is_bottom() const { return bottom_; }
    [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }

    /// Adds sum(coeffs) = constant; returns false when the system becomes inconsistent.
    bool add_equality(Row row);
    /// Interprets an arbitrary list of rows; used when reloading serialized values.
    static AffineEnv from_rows(int dims, std::vector<Row> rows);

    [[nodiscard]] bool leq(const AffineEnv& o) const;
    /// Affine hull of the union.
    [[nodiscard]] AffineEnv join(const AffineEnv& o) const;
    [[nodiscard]] AffineEnv meet(const AffineEnv& o) const;

    [[nodiscard]] AffineEnv forget(int dim) const;
    [[nodiscard]] AffineEnv assign_linear(int dim, const Linear& e) const;
    [[nodiscard]] AffineEnv add_dims(int count) const;
    [[nodiscard]] AffineEnv concat(const AffineEnv& o) const;
    [[nodiscard]] AffineEnv project(int from, int count) const;

    /// Reduces `e` modulo the equalities; a result with no coefficients means `e` is
    /// constant on the subspace.
    [[nodiscard]] Linear reduce(const Linear& e) const;
    [[nodiscard]] Interval interval_of(int dim) const;
    [[nodiscard]] bool contains(const std::vector<Rational>& point) const;

    friend bool operator==(const AffineEnv& a, const AffineEnv& b);
    [[nodiscard]] std::strong_ordering compare(const AffineEnv& o) const;
    [[nodiscard]] std::size_t hash() const;
    [[nodiscard]] std::string to_string(const DimNamer& namer) const;

  private:
    void canonicalize();

    int dims_ = 0;
    bool bottom_ = false;
    std::vector<Row> rows_;
};

/// Numeric environment over a fixed number of dimensions in one of the two domains.
class NumEnv {
  public:
    static NumEnv top(Domain d, int dims);
    static NumEnv bottom(Domain d, int dims);
    /// Every dimension equal to zero.
    static NumEnv zero(Domain d, int dims);

    explicit NumEnv(IntervalEnv e) : value_(std::move(e)) {}
    explicit NumEnv(AffineEnv e) : value_(std::move(e)) {}

    [[nodiscard]] Domain domain() const { return value_.index() == 0 ? Domain::Interval : Domain::Affine; }
    [[nodiscard]] int dims() const;
    [[nodiscard]] bool is_bottom() const;
    [[nodiscard]] const IntervalEnv* as_interval() const { return std::get_if<IntervalEnv>(&value_); }
    [[nodiscard]] const AffineEnv* as_affine() const { return std::get_if<AffineEnv>(&value_); }

    [[nodiscard]] bool leq(const NumEnv& o) const;
    [[nodiscard]] NumEnv join(const NumEnv& o) const;
    [[nodiscard]] NumEnv meet(const NumEnv& o) const;
    /// Interval widening, or the join in the affine domain (finite height).
    [[nodiscard]] NumEnv widen(const NumEnv& o) const;

    /// `dim := e`; with `truncate` the value is rounded toward zero. Expressions must be
    /// resolved to absolute dimensions.
    [[nodiscard]] NumEnv assign(int dim, const ExprPtr& e, bool truncate, EvalFlags& flags) const;
    /// Restricts to states where `cond` is nonzero (branch true) or zero (branch false).
    [[nodiscard]] NumEnv filter(const ExprPtr& cond, bool branch) const;
    [[nodiscard]] NumEnv restrict(int dim, const Interval& range) const;
    [[nodiscard]] NumEnv forget(int dim) const;

    [[nodiscard]] NumEnv concat(const NumEnv& o) const;
    /// Appends `count` dimensions, either zero or unconstrained.
    [[nodiscard]] NumEnv add_dims(int count, bool zero) const;
    /// Keeps dimensions [from, from + count).
    [[nodiscard]] NumEnv project(int from, int count) const;

    [[nodiscard]] Interval interval_of(int dim) const;
    [[nodiscard]] bool contains(const std::vector<Rational>& point) const;

    friend bool operator==(const NumEnv& a, const NumEnv& b) { return a.value_ == b.value_; }
    [[nodiscard]] std::strong_ordering compare(const NumEnv& o) const;
    [[nodiscard]] std::size_t hash() const;
    [[nodiscard]] std::string to_string(const DimNamer& namer) const;

  private:
    [[nodiscard]] NumEnv filter_atom(const ExprPtr& lhs, Op op, const ExprPtr& rhs) const;

    std::variant<IntervalEnv, AffineEnv> value_;
};

} // namespace latta
