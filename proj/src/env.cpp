// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/env.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace latta {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

/// In-place reduced row-echelon form over the first `cols` columns; returns the pivot
/// column of each remaining row. Rows whose leading `cols` entries vanish are moved last.
std::vector<int> rref(std::vector<AffineEnv::Row>& rows, int cols) {
    std::vector<int> pivots;
    std::size_t r = 0;
    for (int c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][static_cast<std::size_t>(c)].is_zero()) {
            ++p;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[p]);
        const Rational lead = rows[r][static_cast<std::size_t>(c)];
        if (lead != Rational(1)) {
            for (auto& x : rows[r]) {
                x = x / lead;
            }
        }
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k == r || rows[k][static_cast<std::size_t>(c)].is_zero()) {
                continue;
            }
            const Rational f = rows[k][static_cast<std::size_t>(c)];
            for (std::size_t j = 0; j < rows[k].size(); ++j) {
                if (!rows[r][j].is_zero()) {
                    rows[k][j] -= f * rows[r][j];
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int pivot_of(const AffineEnv::Row& row, int dims) {
    for (int i = 0; i < dims; ++i) {
        if (!row[static_cast<std::size_t>(i)].is_zero()) {
            return i;
        }
    }
    return -1;
}

std::string format_linear_rhs(const std::vector<std::pair<Rational, std::string>>& terms, const Rational& constant) {
    std::string out;
    if (!constant.is_zero() || terms.empty()) {
        out = constant.to_string();
    }
    for (const auto& [c, name] : terms) {
        const bool neg = c.sign() < 0;
        const Rational mag = c.abs();
        const std::string body = mag == Rational(1) ? name : mag.to_string() + "*" + name;
        if (out.empty()) {
            out = neg ? "-" + body : body;
        } else {
            out += neg ? " - " + body : " + " + body;
        }
    }
    return out;
}

void collect_integral(const ExprPtr& e, std::map<int, bool>& out) {
    if (e->kind == Expr::Kind::Var) {
        out[e->dim] = e->integral;
        return;
    }
    if (e->lhs) {
        collect_integral(e->lhs, out);
    }
    if (e->rhs) {
        collect_integral(e->rhs, out);
    }
}

/// x < u over the integers means x <= ceil(u) - 1.
Bound strict_upper(const Bound& u, bool integral) {
    if (!integral || !u.is_finite()) {
        return u;
    }
    return Bound(u.value().ceil() - Rational(1));
}

Bound strict_lower(const Bound& l, bool integral) {
    if (!integral || !l.is_finite()) {
        return l;
    }
    return Bound(l.value().floor() + Rational(1));
}

Bound divide_bound(const Bound& b, const Rational& a) {
    if (b.is_finite()) {
        return Bound(b.value() / a);
    }
    return a.sign() > 0 ? b : -b;
}

/// Refines interval values with sum(f) op 0, op in {<, <=, ==, !=}.
bool refine_linear(std::vector<Interval>& vals, const Linear& f, Op op, const std::map<int, bool>& integral) {
    for (int round = 0; round < 2; ++round) {
        for (const auto& [k, a] : f.coeffs) {
            Interval rest = Interval::point(f.constant);
            for (const auto& [i, c] : f.coeffs) {
                if (i != k) {
                    rest = rest + Interval::point(c) * vals[static_cast<std::size_t>(i)];
                }
            }
            const Interval r = -rest;
            if (r.is_bottom()) {
                return false;
            }
            const auto it = integral.find(k);
            const bool is_int = it != integral.end() && it->second;
            Interval& x = vals[static_cast<std::size_t>(k)];
            Interval cand = Interval::top();
            switch (op) {
            case Op::Eq: cand = r * Interval::point(Rational(1) / a); break;
            case Op::Lt:
            case Op::Le: {
                if (r.hi().is_infinite()) {
                    break;
                }
                const Bound b = divide_bound(r.hi(), a);
                const bool strict = op == Op::Lt;
                if (a.sign() > 0) {
                    cand = Interval(Bound::neg_inf(), strict ? strict_upper(b, is_int) : b);
                } else {
                    cand = Interval(strict ? strict_lower(b, is_int) : b, Bound::pos_inf());
                }
                break;
            }
            case Op::Ne: {
                if (!r.is_point()) {
                    break;
                }
                const Rational v = *r.singleton() / a;
                if (x.is_point() && *x.singleton() == v) {
                    return false;
                }
                if (is_int && x.lo() == Bound(v)) {
                    cand = Interval(Bound(v + Rational(1)), Bound::pos_inf());
                } else if (is_int && x.hi() == Bound(v)) {
                    cand = Interval(Bound::neg_inf(), Bound(v - Rational(1)));
                }
                break;
            }
            default: break;
            }
            x = x.meet(cand);
            if (is_int) {
                x = x.integral();
            }
            if (x.is_bottom()) {
                return false;
            }
        }
    }
    return true;
}

bool decide(Op op, const Rational& v) {
    switch (op) {
    case Op::Lt: return v.sign() < 0;
    case Op::Le: return v.sign() <= 0;
    case Op::Eq: return v.is_zero();
    case Op::Ne: return !v.is_zero();
    case Op::Gt: return v.sign() > 0;
    case Op::Ge: return v.sign() >= 0;
    default: return true;
    }
}

} // namespace

const char* domain_name(Domain d) { return d == Domain::Interval ? "interval" : "affine"; }

// ---------------------------------------------------------------- IntervalEnv

IntervalEnv IntervalEnv::top(int dims) {
    IntervalEnv e;
    e.values_.assign(static_cast<std::size_t>(dims), Interval::top());
    return e;
}

IntervalEnv IntervalEnv::bottom(int dims) {
    IntervalEnv e;
    e.values_.assign(static_cast<std::size_t>(dims), Interval::bottom());
    e.bottom_ = true;
    return e;
}

void IntervalEnv::set(int dim, const Interval& v) {
    if (bottom_) {
        return;
    }
    if (v.is_bottom()) {
        *this = bottom(dims());
        return;
    }
    values_.at(static_cast<std::size_t>(dim)) = v;
}

bool IntervalEnv::leq(const IntervalEnv& o) const {
    if (bottom_) {
        return true;
    }
    if (o.bottom_) {
        return false;
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!values_[i].leq(o.values_[i])) {
            return false;
        }
    }
    return true;
}

IntervalEnv IntervalEnv::join(const IntervalEnv& o) const {
    if (bottom_) {
        return o;
    }
    if (o.bottom_) {
        return *this;
    }
    IntervalEnv r = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        r.values_[i] = values_[i].join(o.values_[i]);
    }
    return r;
}

IntervalEnv IntervalEnv::meet(const IntervalEnv& o) const {
    if (bottom_ || o.bottom_) {
        return bottom(dims());
    }
    IntervalEnv r = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        r.set(static_cast<int>(i), values_[i].meet(o.values_[i]));
        if (r.bottom_) {
            break;
        }
    }
    return r;
}

IntervalEnv IntervalEnv::widen(const IntervalEnv& o) const {
    if (bottom_) {
        return o;
    }
    if (o.bottom_) {
        return *this;
    }
    IntervalEnv r = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        r.values_[i] = values_[i].widen(o.values_[i]);
    }
    return r;
}

IntervalEnv IntervalEnv::concat(const IntervalEnv& o) const {
    if (bottom_ || o.bottom_) {
        return bottom(dims() + o.dims());
    }
    IntervalEnv r = *this;
    r.values_.insert(r.values_.end(), o.values_.begin(), o.values_.end());
    return r;
}

IntervalEnv IntervalEnv::project(int from, int count) const {
    if (bottom_) {
        return bottom(count);
    }
    IntervalEnv r;
    r.values_.assign(values_.begin() + from, values_.begin() + from + count);
    return r;
}

bool operator==(const IntervalEnv& a, const IntervalEnv& b) {
    if (a.bottom_ || b.bottom_) {
        return a.bottom_ == b.bottom_ && a.dims() == b.dims();
    }
    return a.values_ == b.values_;
}

std::strong_ordering IntervalEnv::compare(const IntervalEnv& o) const {
    if (auto c = dims() <=> o.dims(); c != 0) {
        return c;
    }
    if (bottom_ || o.bottom_) {
        return o.bottom_ <=> bottom_;
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const Interval& a = values_[i];
        const Interval& b = o.values_[i];
        if (auto c = a.lo() <=> b.lo(); c != 0) {
            return c;
        }
        if (auto c = a.hi() <=> b.hi(); c != 0) {
            return c;
        }
    }
    return std::strong_ordering::equal;
}

std::size_t IntervalEnv::hash() const {
    std::size_t h = bottom_ ? 1 : 2;
    if (!bottom_) {
        for (const auto& v : values_) {
            h = mix(h, v.hash());
        }
    }
    return h;
}

std::string IntervalEnv::to_string(const DimNamer& namer) const {
    if (bottom_) {
        return "_|_";
    }
    std::string out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const Interval& v = values_[i];
        if (v.is_top()) {
            continue;
        }
        if (!out.empty()) {
            out += ", ";
        }
        out += namer(static_cast<int>(i)) + "=" + (v.is_point() ? v.singleton()->to_string() : v.to_string());
    }
    return out.empty() ? "T" : out;
}

// ---------------------------------------------------------------- AffineEnv

AffineEnv AffineEnv::top(int dims) {
    AffineEnv e;
    e.dims_ = dims;
    return e;
}

AffineEnv AffineEnv::bottom(int dims) {
    AffineEnv e;
    e.dims_ = dims;
    e.bottom_ = true;
    return e;
}

void AffineEnv::canonicalize() {
    if (bottom_) {
        rows_.clear();
        return;
    }
    const auto pivots = rref(rows_, dims_);
    for (std::size_t i = pivots.size(); i < rows_.size(); ++i) {
        if (!rows_[i].back().is_zero()) {
            bottom_ = true;
            rows_.clear();
            return;
        }
    }
    rows_.resize(pivots.size());
}

bool AffineEnv::add_equality(Row row) {
    if (bottom_) {
        return false;
    }
    if (static_cast<int>(row.size()) != dims_ + 1) {
        throw std::invalid_argument("affine row has the wrong width");
    }
    rows_.push_back(std::move(row));
    canonicalize();
    return !bottom_;
}

AffineEnv AffineEnv::from_rows(int dims, std::vector<Row> rows) {
    AffineEnv e = top(dims);
    e.rows_ = std::move(rows);
    for (const auto& r : e.rows_) {
        if (static_cast<int>(r.size()) != dims + 1) {
            throw std::invalid_argument("affine row has the wrong width");
        }
    }
    e.canonicalize();
    return e;
}

Linear AffineEnv::reduce(const Linear& e) const {
    std::vector<Rational> f(static_cast<std::size_t>(dims_));
    for (const auto& [d, c] : e.coeffs) {
        f.at(static_cast<std::size_t>(d)) = c;
    }
    Rational k = e.constant;
    for (const auto& row : rows_) {
        const int p = pivot_of(row, dims_);
        const Rational factor = f[static_cast<std::size_t>(p)];
        if (factor.is_zero()) {
            continue;
        }
        for (int i = 0; i < dims_; ++i) {
            if (!row[static_cast<std::size_t>(i)].is_zero()) {
                f[static_cast<std::size_t>(i)] -= factor * row[static_cast<std::size_t>(i)];
            }
        }
        k += factor * row.back();
    }
    Linear out;
    out.constant = k;
    for (int i = 0; i < dims_; ++i) {
        if (!f[static_cast<std::size_t>(i)].is_zero()) {
            out.coeffs[i] = f[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

bool AffineEnv::leq(const AffineEnv& o) const {
    if (bottom_) {
        return true;
    }
    if (o.bottom_) {
        return false;
    }
    for (const auto& row : o.rows_) {
        Linear l;
        for (int i = 0; i < dims_; ++i) {
            if (!row[static_cast<std::size_t>(i)].is_zero()) {
                l.coeffs[i] = row[static_cast<std::size_t>(i)];
            }
        }
        l.constant = -row.back();
        const Linear r = reduce(l);
        if (!r.is_constant() || !r.constant.is_zero()) {
            return false;
        }
    }
    return true;
}

AffineEnv AffineEnv::join(const AffineEnv& o) const {
    if (bottom_) {
        return o;
    }
    if (o.bottom_) {
        return *this;
    }
    const auto generators = [this](const AffineEnv& e, std::vector<Rational>& point, std::vector<Row>& dirs) {
        point.assign(static_cast<std::size_t>(dims_), Rational(0));
        std::vector<bool> is_pivot(static_cast<std::size_t>(dims_), false);
        for (const auto& row : e.rows_) {
            const int p = pivot_of(row, dims_);
            is_pivot[static_cast<std::size_t>(p)] = true;
            point[static_cast<std::size_t>(p)] = row.back();
        }
        for (int f = 0; f < dims_; ++f) {
            if (is_pivot[static_cast<std::size_t>(f)]) {
                continue;
            }
            Row d(static_cast<std::size_t>(dims_));
            d[static_cast<std::size_t>(f)] = Rational(1);
            for (const auto& row : e.rows_) {
                d[static_cast<std::size_t>(pivot_of(row, dims_))] = -row[static_cast<std::size_t>(f)];
            }
            dirs.push_back(std::move(d));
        }
    };
    std::vector<Rational> pa;
    std::vector<Rational> pb;
    std::vector<Row> dirs;
    generators(*this, pa, dirs);
    generators(o, pb, dirs);
    Row delta(static_cast<std::size_t>(dims_));
    for (std::size_t i = 0; i < delta.size(); ++i) {
        delta[i] = pb[i] - pa[i];
    }
    dirs.push_back(std::move(delta));
    const auto pivots = rref(dirs, dims_);
    dirs.resize(pivots.size());
    std::vector<bool> is_pivot(static_cast<std::size_t>(dims_), false);
    for (int p : pivots) {
        is_pivot[static_cast<std::size_t>(p)] = true;
    }
    std::vector<Row> constraints;
    for (int f = 0; f < dims_; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) {
            continue;
        }
        Row v(static_cast<std::size_t>(dims_) + 1);
        v[static_cast<std::size_t>(f)] = Rational(1);
        for (std::size_t r = 0; r < dirs.size(); ++r) {
            v[static_cast<std::size_t>(pivots[r])] = -dirs[r][static_cast<std::size_t>(f)];
        }
        Rational c(0);
        for (int i = 0; i < dims_; ++i) {
            c += v[static_cast<std::size_t>(i)] * pa[static_cast<std::size_t>(i)];
        }
        v.back() = c;
        constraints.push_back(std::move(v));
    }
    return from_rows(dims_, std::move(constraints));
}

AffineEnv AffineEnv::meet(const AffineEnv& o) const {
    if (bottom_ || o.bottom_) {
        return bottom(dims_);
    }
    AffineEnv r = *this;
    r.rows_.insert(r.rows_.end(), o.rows_.begin(), o.rows_.end());
    r.canonicalize();
    return r;
}

AffineEnv AffineEnv::forget(int dim) const {
    if (bottom_) {
        return *this;
    }
    const auto j = static_cast<std::size_t>(dim);
    std::size_t p = rows_.size();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (!rows_[i][j].is_zero()) {
            p = i;
            break;
        }
    }
    if (p == rows_.size()) {
        return *this;
    }
    AffineEnv r = *this;
    const Row pivot = r.rows_[p];
    for (std::size_t k = 0; k < r.rows_.size(); ++k) {
        if (k == p || r.rows_[k][j].is_zero()) {
            continue;
        }
        const Rational f = r.rows_[k][j] / pivot[j];
        for (std::size_t c = 0; c < pivot.size(); ++c) {
            r.rows_[k][c] -= f * pivot[c];
        }
    }
    r.rows_.erase(r.rows_.begin() + static_cast<std::ptrdiff_t>(p));
    r.canonicalize();
    return r;
}

AffineEnv AffineEnv::add_dims(int count) const {
    AffineEnv r;
    r.dims_ = dims_ + count;
    r.bottom_ = bottom_;
    for (const auto& row : rows_) {
        Row n(row.begin(), row.end() - 1);
        n.resize(static_cast<std::size_t>(r.dims_));
        n.push_back(row.back());
        r.rows_.push_back(std::move(n));
    }
    return r;
}

AffineEnv AffineEnv::assign_linear(int dim, const Linear& e) const {
    if (bottom_) {
        return *this;
    }
    AffineEnv t = add_dims(1);
    Row row(static_cast<std::size_t>(t.dims_) + 1);
    row[static_cast<std::size_t>(dims_)] = Rational(1);
    for (const auto& [d, c] : e.coeffs) {
        row[static_cast<std::size_t>(d)] -= c;
    }
    row.back() = e.constant;
    t.add_equality(std::move(row));
    t = t.forget(dim);
    for (auto& r : t.rows_) {
        std::swap(r[static_cast<std::size_t>(dim)], r[static_cast<std::size_t>(dims_)]);
        r.erase(r.begin() + dims_);
    }
    t.dims_ = dims_;
    t.canonicalize();
    return t;
}

AffineEnv AffineEnv::concat(const AffineEnv& o) const {
    if (bottom_ || o.bottom_) {
        return bottom(dims_ + o.dims_);
    }
    AffineEnv r = add_dims(o.dims_);
    for (const auto& row : o.rows_) {
        Row n(static_cast<std::size_t>(dims_));
        n.insert(n.end(), row.begin(), row.end());
        r.rows_.push_back(std::move(n));
    }
    return r;
}

AffineEnv AffineEnv::project(int from, int count) const {
    if (bottom_) {
        return bottom(count);
    }
    AffineEnv t = *this;
    for (int d = 0; d < dims_; ++d) {
        if (d < from || d >= from + count) {
            t = t.forget(d);
        }
    }
    AffineEnv r = top(count);
    for (const auto& row : t.rows_) {
        Row n(row.begin() + from, row.begin() + from + count);
        n.push_back(row.back());
        r.rows_.push_back(std::move(n));
    }
    r.canonicalize();
    return r;
}

Interval AffineEnv::interval_of(int dim) const {
    if (bottom_) {
        return Interval::bottom();
    }
    Linear l;
    l.coeffs[dim] = Rational(1);
    const Linear r = reduce(l);
    if (r.is_constant()) {
        return Interval::point(r.constant);
    }
    return Interval::top();
}

bool AffineEnv::contains(const std::vector<Rational>& point) const {
    if (bottom_) {
        return false;
    }
    for (const auto& row : rows_) {
        Rational s(0);
        for (int i = 0; i < dims_; ++i) {
            s += row[static_cast<std::size_t>(i)] * point.at(static_cast<std::size_t>(i));
        }
        if (s != row.back()) {
            return false;
        }
    }
    return true;
}

bool operator==(const AffineEnv& a, const AffineEnv& b) {
    return a.dims_ == b.dims_ && a.bottom_ == b.bottom_ && a.rows_ == b.rows_;
}

std::strong_ordering AffineEnv::compare(const AffineEnv& o) const {
    if (auto c = dims_ <=> o.dims_; c != 0) {
        return c;
    }
    if (auto c = o.bottom_ <=> bottom_; c != 0) {
        return c;
    }
    if (auto c = rows_.size() <=> o.rows_.size(); c != 0) {
        return c;
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (std::size_t j = 0; j < rows_[i].size(); ++j) {
            if (auto c = rows_[i][j] <=> o.rows_[i][j]; c != 0) {
                return c;
            }
        }
    }
    return std::strong_ordering::equal;
}

std::size_t AffineEnv::hash() const {
    std::size_t h = bottom_ ? 11 : 13;
    for (const auto& row : rows_) {
        for (const auto& x : row) {
            h = mix(h, x.hash());
        }
    }
    return h;
}

std::string AffineEnv::to_string(const DimNamer& namer) const {
    if (bottom_) {
        return "_|_";
    }
    if (rows_.empty()) {
        return "T";
    }
    std::string out;
    for (const auto& row : rows_) {
        const int p = pivot_of(row, dims_);
        std::vector<std::pair<Rational, std::string>> terms;
        for (int i = p + 1; i < dims_; ++i) {
            if (!row[static_cast<std::size_t>(i)].is_zero()) {
                terms.emplace_back(-row[static_cast<std::size_t>(i)], namer(i));
            }
        }
        if (!out.empty()) {
            out += ", ";
        }
        out += namer(p) + " = " + format_linear_rhs(terms, row.back());
    }
    return out;
}

// ---------------------------------------------------------------- NumEnv

NumEnv NumEnv::top(Domain d, int dims) {
    return d == Domain::Interval ? NumEnv(IntervalEnv::top(dims)) : NumEnv(AffineEnv::top(dims));
}

NumEnv NumEnv::bottom(Domain d, int dims) {
    return d == Domain::Interval ? NumEnv(IntervalEnv::bottom(dims)) : NumEnv(AffineEnv::bottom(dims));
}

NumEnv NumEnv::zero(Domain d, int dims) { return top(d, 0).add_dims(dims, true); }

int NumEnv::dims() const {
    return std::visit([](const auto& e) { return e.dims(); }, value_);
}

bool NumEnv::is_bottom() const {
    return std::visit([](const auto& e) { return e.is_bottom(); }, value_);
}

bool NumEnv::leq(const NumEnv& o) const {
    if (const auto* a = as_interval()) {
        return a->leq(std::get<IntervalEnv>(o.value_));
    }
    return std::get<AffineEnv>(value_).leq(std::get<AffineEnv>(o.value_));
}

NumEnv NumEnv::join(const NumEnv& o) const {
    if (const auto* a = as_interval()) {
        return NumEnv(a->join(std::get<IntervalEnv>(o.value_)));
    }
    return NumEnv(std::get<AffineEnv>(value_).join(std::get<AffineEnv>(o.value_)));
}

NumEnv NumEnv::meet(const NumEnv& o) const {
    if (const auto* a = as_interval()) {
        return NumEnv(a->meet(std::get<IntervalEnv>(o.value_)));
    }
    return NumEnv(std::get<AffineEnv>(value_).meet(std::get<AffineEnv>(o.value_)));
}

NumEnv NumEnv::widen(const NumEnv& o) const {
    if (const auto* a = as_interval()) {
        return NumEnv(a->widen(std::get<IntervalEnv>(o.value_)));
    }
    return join(o);
}

NumEnv NumEnv::assign(int dim, const ExprPtr& e, bool truncate, EvalFlags& flags) const {
    if (is_bottom()) {
        return *this;
    }
    const auto lookup = [this](int d) { return interval_of(d); };
    if (const auto* a = as_interval()) {
        Interval v = eval_interval(e, lookup, flags);
        if (truncate) {
            v = v.trunc();
        }
        IntervalEnv r = *a;
        r.set(dim, v);
        return NumEnv(std::move(r));
    }
    const auto& aff = std::get<AffineEnv>(value_);
    if (!truncate || !e->may_be_fractional()) {
        if (auto lin = linearize(e)) {
            return NumEnv(aff.assign_linear(dim, *lin));
        }
    }
    Interval v = eval_interval(e, lookup, flags);
    if (truncate) {
        v = v.trunc();
    }
    if (v.is_bottom()) {
        return bottom(Domain::Affine, dims());
    }
    if (auto c = v.singleton()) {
        Linear l;
        l.constant = *c;
        return NumEnv(aff.assign_linear(dim, l));
    }
    return NumEnv(aff.forget(dim));
}

NumEnv NumEnv::filter(const ExprPtr& cond, bool branch) const {
    if (is_bottom()) {
        return *this;
    }
    if (cond->kind == Expr::Kind::Unary && cond->op == Op::Not) {
        return filter(cond->lhs, !branch);
    }
    if (cond->kind == Expr::Kind::Binary && (cond->op == Op::And || cond->op == Op::Or)) {
        const bool conj = (cond->op == Op::And) == branch;
        if (conj) {
            return filter(cond->lhs, branch).filter(cond->rhs, branch);
        }
        return filter(cond->lhs, branch).join(filter(cond->lhs, !branch).filter(cond->rhs, branch));
    }
    if (cond->kind == Expr::Kind::Binary && is_comparison(cond->op)) {
        return filter_atom(cond->lhs, branch ? cond->op : negate(cond->op), cond->rhs);
    }
    if (cond->kind == Expr::Kind::Nondet) {
        return *this;
    }
    return filter_atom(cond, branch ? Op::Ne : Op::Eq, Expr::constant(Rational(0)));
}

NumEnv NumEnv::filter_atom(const ExprPtr& lhs, Op op, const ExprPtr& rhs) const {
    const ExprPtr cmp = Expr::binary(op, lhs, rhs);
    if (cmp->mentions_nondet()) {
        return *this;
    }
    NumEnv r = *this;
    if (auto lin = linearize(Expr::binary(Op::Sub, lhs, rhs))) {
        if (const auto* ie = as_interval()) {
            Linear f = *lin;
            Op o = op;
            if (o == Op::Gt || o == Op::Ge) {
                f.scale(Rational(-1));
                o = o == Op::Gt ? Op::Lt : Op::Le;
            }
            std::map<int, bool> integral;
            collect_integral(lhs, integral);
            collect_integral(rhs, integral);
            std::vector<Interval> vals = ie->values();
            if (f.is_constant()) {
                if (!decide(o, f.constant)) {
                    return bottom(Domain::Interval, dims());
                }
            } else if (!refine_linear(vals, f, o, integral)) {
                return bottom(Domain::Interval, dims());
            }
            IntervalEnv out = IntervalEnv::top(dims());
            for (int i = 0; i < dims(); ++i) {
                out.set(i, vals[static_cast<std::size_t>(i)]);
            }
            r = NumEnv(std::move(out));
        } else {
            const auto& aff = std::get<AffineEnv>(value_);
            if (op == Op::Eq) {
                AffineEnv::Row row(static_cast<std::size_t>(dims()) + 1);
                for (const auto& [d, c] : lin->coeffs) {
                    row[static_cast<std::size_t>(d)] = c;
                }
                row.back() = -lin->constant;
                AffineEnv a = aff;
                a.add_equality(std::move(row));
                r = NumEnv(std::move(a));
            } else {
                const Linear red = aff.reduce(*lin);
                if (red.is_constant() && !decide(op, red.constant)) {
                    return bottom(Domain::Affine, dims());
                }
            }
        }
    }
    if (r.is_bottom()) {
        return r;
    }
    EvalFlags ignored;
    const Interval t = eval_interval(cmp, [&r](int d) { return r.interval_of(d); }, ignored);
    if (t.is_point() && t.singleton()->is_zero()) {
        return bottom(domain(), dims());
    }
    return r;
}

NumEnv NumEnv::restrict(int dim, const Interval& range) const {
    if (is_bottom()) {
        return *this;
    }
    if (const auto* a = as_interval()) {
        IntervalEnv r = *a;
        r.set(dim, a->at(dim).meet(range));
        return NumEnv(std::move(r));
    }
    const auto& aff = std::get<AffineEnv>(value_);
    if (range.is_bottom()) {
        return bottom(Domain::Affine, dims());
    }
    if (auto c = range.singleton()) {
        AffineEnv r = aff;
        AffineEnv::Row row(static_cast<std::size_t>(dims()) + 1);
        row[static_cast<std::size_t>(dim)] = Rational(1);
        row.back() = *c;
        r.add_equality(std::move(row));
        return NumEnv(std::move(r));
    }
    if (aff.interval_of(dim).meet(range).is_bottom()) {
        return bottom(Domain::Affine, dims());
    }
    return *this;
}

NumEnv NumEnv::forget(int dim) const {
    if (const auto* a = as_interval()) {
        IntervalEnv r = *a;
        r.set(dim, Interval::top());
        return NumEnv(std::move(r));
    }
    return NumEnv(std::get<AffineEnv>(value_).forget(dim));
}

NumEnv NumEnv::concat(const NumEnv& o) const {
    if (const auto* a = as_interval()) {
        return NumEnv(a->concat(std::get<IntervalEnv>(o.value_)));
    }
    return NumEnv(std::get<AffineEnv>(value_).concat(std::get<AffineEnv>(o.value_)));
}

NumEnv NumEnv::add_dims(int count, bool zero) const {
    const Domain d = domain();
    NumEnv extra = top(d, count);
    if (zero) {
        if (d == Domain::Interval) {
            IntervalEnv z = IntervalEnv::top(count);
            for (int i = 0; i < count; ++i) {
                z.set(i, Interval::point(Rational(0)));
            }
            extra = NumEnv(std::move(z));
        } else {
            AffineEnv z = AffineEnv::top(count);
            for (int i = 0; i < count; ++i) {
                AffineEnv::Row row(static_cast<std::size_t>(count) + 1);
                row[static_cast<std::size_t>(i)] = Rational(1);
                z.add_equality(std::move(row));
            }
            extra = NumEnv(std::move(z));
        }
    }
    return concat(extra);
}

NumEnv NumEnv::project(int from, int count) const {
    if (const auto* a = as_interval()) {
        return NumEnv(a->project(from, count));
    }
    return NumEnv(std::get<AffineEnv>(value_).project(from, count));
}

Interval NumEnv::interval_of(int dim) const {
    if (const auto* a = as_interval()) {
        return a->is_bottom() ? Interval::bottom() : a->at(dim);
    }
    return std::get<AffineEnv>(value_).interval_of(dim);
}

bool NumEnv::contains(const std::vector<Rational>& point) const {
    if (const auto* a = as_interval()) {
        if (a->is_bottom()) {
            return false;
        }
        for (int i = 0; i < a->dims(); ++i) {
            if (!a->at(i).contains(point.at(static_cast<std::size_t>(i)))) {
                return false;
            }
        }
        return true;
    }
    return std::get<AffineEnv>(value_).contains(point);
}

std::strong_ordering NumEnv::compare(const NumEnv& o) const {
    if (auto c = value_.index() <=> o.value_.index(); c != 0) {
        return c;
    }
    if (const auto* a = as_interval()) {
        return a->compare(std::get<IntervalEnv>(o.value_));
    }
    return std::get<AffineEnv>(value_).compare(std::get<AffineEnv>(o.value_));
}

std::size_t NumEnv::hash() const {
    return std::visit([](const auto& e) { return e.hash(); }, value_) * 3 + value_.index();
}

std::string NumEnv::to_string(const DimNamer& namer) const {
    return std::visit([&namer](const auto& e) { return e.to_string(namer); }, value_);
}

} // namespace latta
