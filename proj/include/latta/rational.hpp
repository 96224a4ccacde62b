// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace latta {

/// Exact arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
class Rational {
  public:
    Rational() = default;
    Rational(long value) : value_(value) {} // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(mpq_class value);

    /// Accepts "n", "-n" or "n/d".
    static Rational parse(std::string_view text);

    [[nodiscard]] const mpq_class& raw() const { return value_; }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
    [[nodiscard]] int sign() const { return sgn(value_); }

    [[nodiscard]] Rational floor() const;
    [[nodiscard]] Rational ceil() const;
    /// Rounds toward zero.
    [[nodiscard]] Rational trunc() const;
    [[nodiscard]] Rational abs() const;

    /// Fits in a long; only meaningful for integers.
    [[nodiscard]] bool fits_long() const;
    [[nodiscard]] long to_long() const;

    /// "num/den" with the denominator always present (serialization form).
    [[nodiscard]] std::string to_fraction() const;
    /// "num" for integers, "num/den" otherwise.
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] std::size_t hash() const;

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    /// Throws std::domain_error on a zero divisor.
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

  private:
    mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

} // namespace latta
