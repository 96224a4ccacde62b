// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/interval.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace latta {

int Bound::sign() const {
    switch (kind_) {
    case Kind::NegInf: return -1;
    case Kind::PosInf: return 1;
    default: return value_.sign();
    }
}

Bound Bound::operator-() const {
    switch (kind_) {
    case Kind::NegInf: return pos_inf();
    case Kind::PosInf: return neg_inf();
    default: return Bound(-value_);
    }
}

Bound operator+(const Bound& a, const Bound& b) {
    if (a.is_finite() && b.is_finite()) {
        return Bound(a.value_ + b.value_);
    }
    assert(!(a.kind_ == Bound::Kind::NegInf && b.kind_ == Bound::Kind::PosInf));
    assert(!(a.kind_ == Bound::Kind::PosInf && b.kind_ == Bound::Kind::NegInf));
    return a.is_infinite() ? a : b;
}

Bound operator*(const Bound& a, const Bound& b) {
    if (a.is_finite() && b.is_finite()) {
        return Bound(a.value_ * b.value_);
    }
    const int s = a.sign() * b.sign();
    if (s == 0) {
        return Bound(0L);
    }
    return s > 0 ? Bound::pos_inf() : Bound::neg_inf();
}

bool operator==(const Bound& a, const Bound& b) {
    if (a.kind_ != b.kind_) {
        return false;
    }
    return !a.is_finite() || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Bound& a, const Bound& b) {
    if (a.kind_ != b.kind_ || !a.is_finite()) {
        return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    }
    return a.value_ <=> b.value_;
}

std::string Bound::to_string() const {
    switch (kind_) {
    case Kind::NegInf: return "-oo";
    case Kind::PosInf: return "+oo";
    default: return value_.to_string();
    }
}

std::size_t Bound::hash() const {
    return is_finite() ? value_.hash() : static_cast<std::size_t>(kind_) * 0x51ed27ULL + 7;
}

Interval::Interval(Bound lo, Bound hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_ || lo_.kind() == Bound::Kind::PosInf || hi_.kind() == Bound::Kind::NegInf) {
        *this = bottom();
    }
}

Interval Interval::bottom() {
    Interval i;
    i.bottom_ = true;
    i.lo_ = Bound::pos_inf();
    i.hi_ = Bound::neg_inf();
    return i;
}

bool Interval::is_top() const {
    return !bottom_ && lo_.kind() == Bound::Kind::NegInf && hi_.kind() == Bound::Kind::PosInf;
}

bool Interval::is_point() const { return !bottom_ && lo_.is_finite() && lo_ == hi_; }

std::optional<Rational> Interval::singleton() const {
    if (is_point()) {
        return lo_.value();
    }
    return std::nullopt;
}

bool Interval::contains(const Rational& q) const { return !bottom_ && lo_ <= Bound(q) && Bound(q) <= hi_; }

bool Interval::leq(const Interval& o) const {
    if (bottom_) {
        return true;
    }
    if (o.bottom_) {
        return false;
    }
    return o.lo_ <= lo_ && hi_ <= o.hi_;
}

Interval Interval::join(const Interval& o) const {
    if (bottom_) {
        return o;
    }
    if (o.bottom_) {
        return *this;
    }
    return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)};
}

Interval Interval::meet(const Interval& o) const {
    if (bottom_ || o.bottom_) {
        return bottom();
    }
    return {std::max(lo_, o.lo_), std::min(hi_, o.hi_)};
}

Interval Interval::widen(const Interval& o) const {
    if (bottom_) {
        return o;
    }
    if (o.bottom_) {
        return *this;
    }
    Bound lo = o.lo_ < lo_ ? Bound::neg_inf() : lo_;
    Bound hi = o.hi_ > hi_ ? Bound::pos_inf() : hi_;
    return {lo, hi};
}

Interval Interval::integral() const {
    if (bottom_) {
        return *this;
    }
    Bound lo = lo_.is_finite() ? Bound(lo_.value().ceil()) : lo_;
    Bound hi = hi_.is_finite() ? Bound(hi_.value().floor()) : hi_;
    return {lo, hi};
}

Interval Interval::trunc() const {
    if (bottom_) {
        return *this;
    }
    Bound lo = lo_.is_finite() ? Bound(lo_.value().trunc()) : lo_;
    Bound hi = hi_.is_finite() ? Bound(hi_.value().trunc()) : hi_;
    return {lo, hi};
}

Interval Interval::operator-() const {
    if (bottom_) {
        return *this;
    }
    return {-hi_, -lo_};
}

Interval operator+(const Interval& a, const Interval& b) {
    if (a.bottom_ || b.bottom_) {
        return Interval::bottom();
    }
    return {a.lo_ + b.lo_, a.hi_ + b.hi_};
}

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
    if (a.bottom_ || b.bottom_) {
        return Interval::bottom();
    }
    const std::array<Bound, 4> p{a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    return {*std::min_element(p.begin(), p.end()), *std::max_element(p.begin(), p.end())};
}

Interval Interval::divide(const Interval& a, const Interval& b, bool& maybe_zero) {
    if (a.bottom_ || b.bottom_) {
        return bottom();
    }
    if (b.contains_zero()) {
        maybe_zero = true;
        return top();
    }
    // b lies strictly on one side of zero, so 1/b = [1/hi, 1/lo] with 1/oo = 0.
    const auto inv = [](const Bound& x) -> Bound {
        if (x.is_infinite()) {
            return Bound(0L);
        }
        return Bound(Rational(1) / x.value());
    };
    return a * Interval(inv(b.hi_), inv(b.lo_));
}

bool operator==(const Interval& a, const Interval& b) {
    if (a.bottom_ || b.bottom_) {
        return a.bottom_ == b.bottom_;
    }
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
}

std::string Interval::to_string() const {
    if (bottom_) {
        return "_|_";
    }
    return "[" + lo_.to_string() + "," + hi_.to_string() + "]";
}

std::size_t Interval::hash() const {
    if (bottom_) {
        return 0x0b0770ULL;
    }
    return lo_.hash() * 1000003ULL ^ hi_.hash();
}

std::ostream& operator<<(std::ostream& os, const Interval& i) { return os << i.to_string(); }

} // namespace latta
