// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "latta/rational.hpp"

namespace latta {

/// Interval endpoint: -oo, a finite rational, or +oo.
class Bound {
  public:
    enum class Kind : std::int8_t { NegInf, Finite, PosInf };

    Bound(Rational value) : kind_(Kind::Finite), value_(std::move(value)) {} // NOLINT(google-explicit-constructor)
    Bound(long value) : kind_(Kind::Finite), value_(value) {}                // NOLINT(google-explicit-constructor)

    static Bound neg_inf() { return Bound(Kind::NegInf); }
    static Bound pos_inf() { return Bound(Kind::PosInf); }

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
    [[nodiscard]] bool is_infinite() const { return kind_ != Kind::Finite; }
    /// Precondition: is_finite().
    [[nodiscard]] const Rational& value() const { return value_; }
    [[nodiscard]] int sign() const;

    Bound operator-() const;
    /// Undefined for (-oo) + (+oo); callers never combine opposite infinities.
    friend Bound operator+(const Bound& a, const Bound& b);
    /// 0 * oo = 0, the usual convention for interval endpoints.
    friend Bound operator*(const Bound& a, const Bound& b);

    friend bool operator==(const Bound& a, const Bound& b);
    friend std::strong_ordering operator<=>(const Bound& a, const Bound& b);

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::size_t hash() const;

  private:
    explicit Bound(Kind k) : kind_(k) {}

    Kind kind_;
    Rational value_;
};

/// Closed interval of rationals, possibly unbounded, or bottom.
class Interval {
  public:
    Interval() : lo_(Bound::neg_inf()), hi_(Bound::pos_inf()) {}
    Interval(Bound lo, Bound hi);

    static Interval top() { return {}; }
    static Interval bottom();
    static Interval point(const Rational& q) { return {Bound(q), Bound(q)}; }

    [[nodiscard]] bool is_bottom() const { return bottom_; }
    [[nodiscard]] bool is_top() const;
    [[nodiscard]] bool is_point() const;
    [[nodiscard]] std::optional<Rational> singleton() const;
    [[nodiscard]] const Bound& lo() const { return lo_; }
    [[nodiscard]] const Bound& hi() const { return hi_; }

    [[nodiscard]] bool contains(const Rational& q) const;
    [[nodiscard]] bool contains_zero() const { return contains(Rational(0)); }

    [[nodiscard]] bool leq(const Interval& o) const;
    [[nodiscard]] Interval join(const Interval& o) const;
    [[nodiscard]] Interval meet(const Interval& o) const;
    /// Standard interval widening: unstable bounds jump to infinity.
    [[nodiscard]] Interval widen(const Interval& o) const;

    /// Shrinks to the integer points it contains.
    [[nodiscard]] Interval integral() const;
    /// Image under rounding toward zero.
    [[nodiscard]] Interval trunc() const;

    Interval operator-() const;
    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator*(const Interval& a, const Interval& b);
    /// Returns top when the divisor may be zero; `maybe_zero` reports that case.
    static Interval divide(const Interval& a, const Interval& b, bool& maybe_zero);

    friend bool operator==(const Interval& a, const Interval& b);

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::size_t hash() const;

  private:
    Bound lo_;
    Bound hi_;
    bool bottom_ = false;
};

std::ostream& operator<<(std::ostream& os, const Interval& i);

} // namespace latta
