// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/rational.hpp"

#include <functional>
#include <stdexcept>

namespace latta {

Rational::Rational(long num, long den) {
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    const std::string s(text);
    mpq_class v;
    if (v.set_str(s, 10) != 0) {
        throw std::invalid_argument("malformed rational: " + s);
    }
    if (sgn(v.get_den()) == 0) {
        throw std::domain_error("rational with zero denominator: " + s);
    }
    return Rational(std::move(v));
}

bool Rational::is_integer() const { return value_.get_den() == 1; }

Rational Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return Rational(mpq_class(q));
}

Rational Rational::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return Rational(mpq_class(q));
}

Rational Rational::trunc() const {
    mpz_class q;
    mpz_tdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return Rational(mpq_class(q));
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

bool Rational::fits_long() const { return is_integer() && value_.get_num().fits_slong_p(); }

long Rational::to_long() const { return value_.get_num().get_si(); }

std::string Rational::to_fraction() const { return value_.get_num().get_str() + "/" + value_.get_den().get_str(); }

std::string Rational::to_string() const {
    if (is_integer()) {
        return value_.get_num().get_str();
    }
    return to_fraction();
}

std::size_t Rational::hash() const {
    const auto limb = [](const mpz_class& z) -> std::size_t {
        const auto size = mpz_size(z.get_mpz_t());
        std::size_t h = size * 0x9e3779b97f4a7c15ULL + static_cast<std::size_t>(sgn(z) + 1);
        for (std::size_t i = 0; i < size; ++i) {
            h ^= static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i))) + 0x9e3779b97f4a7c15ULL +
                 (h << 6) + (h >> 2);
        }
        return h;
    };
    return limb(value_.get_num()) * 31 + limb(value_.get_den());
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) {
        throw std::domain_error("division by zero");
    }
    return Rational(mpq_class(a.value_ / b.value_));
}

Rational& Rational::operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
}
Rational& Rational::operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
}
Rational& Rational::operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.to_string(); }

} // namespace latta
