// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/rewriter.hpp"

namespace latta {

RewriterSpec RewriterSpec::copy(int slot, std::optional<Loc> loc) {
    RewriterSpec r;
    r.base = Base::Slot;
    r.slot = slot;
    r.loc = loc;
    return r;
}

RewriterSpec RewriterSpec::star(std::optional<Loc> loc) {
    RewriterSpec r;
    r.base = Base::Star;
    r.loc = loc;
    return r;
}

RewriterSpec RewriterSpec::fresh(Loc loc) {
    RewriterSpec r;
    r.base = Base::Fresh;
    r.loc = loc;
    return r;
}

RewriterSpec& RewriterSpec::assign(int dim, ExprPtr e, bool truncate) {
    assigns.push_back({dim, std::move(e), truncate});
    return *this;
}

std::string RewriterSpec::to_string(const Vocabulary& voc) const {
    std::string out;
    switch (base) {
    case Base::Slot: out = "#" + std::to_string(slot); break;
    case Base::Star: out = "*"; break;
    case Base::Fresh: out = zero ? "new0" : "newT"; break;
    }
    if (loc) {
        out += " -> " + voc.loc_name(*loc);
    }
    const Expr::Namer namer = [&voc](int slot, int dim) { return "#" + std::to_string(slot) + "." + voc.dim_name(dim); };
    for (const auto& a : assigns) {
        out += "; " + voc.dim_name(a.dim) + (a.truncate ? " :=t " : " := ") + a.expr->to_string(namer);
    }
    return out;
}

MatchContext::MatchContext(const std::vector<LocalState>& letters, const std::vector<Interval>& seglens,
                           Domain domain, int dims)
    : env_(NumEnv::top(domain, 0)), letters_(static_cast<int>(letters.size())),
      segs_(static_cast<int>(seglens.size())), dims_(dims) {
    for (const auto& l : letters) {
        locs_.push_back(l.loc);
        env_ = env_.concat(l.env);
    }
    env_ = env_.add_dims(segs_, false);
    for (int i = 0; i < segs_; ++i) {
        env_ = env_.restrict(letters_ * dims_ + i, seglens[static_cast<std::size_t>(i)]);
    }
}

ExprPtr MatchContext::resolve_expr(const ExprPtr& e) const {
    return resolve(
        e,
        [this](int slot, int dim) { return slot < letters_ ? slot * dims_ + dim : extra_offset() + dim; },
        [this](int seg) { return letters_ * dims_ + seg; });
}

void MatchContext::require(const std::vector<ExprPtr>& conds) {
    for (const auto& c : conds) {
        if (env_.is_bottom()) {
            return;
        }
        env_ = env_.filter(resolve_expr(c), true);
    }
}

LocalState MatchContext::letter(int slot) const {
    return {locs_.at(static_cast<std::size_t>(slot)), env_.project(slot * dims_, dims_)};
}

std::optional<LocalState> MatchContext::produce(const RewriterSpec& r, const LocalState* star,
                                                EvalFlags& flags) const {
    if (env_.is_bottom()) {
        return std::nullopt;
    }
    NumEnv e = env_;
    int off = 0;
    Loc loc = 0;
    switch (r.base) {
    case RewriterSpec::Base::Slot:
        off = r.slot * dims_;
        loc = locs_.at(static_cast<std::size_t>(r.slot));
        break;
    case RewriterSpec::Base::Star:
        e = e.concat(star->env);
        off = extra_offset();
        loc = star->loc;
        break;
    case RewriterSpec::Base::Fresh:
        e = e.add_dims(dims_, r.zero);
        off = extra_offset();
        break;
    }
    for (const auto& a : r.assigns) {
        e = e.assign(off + a.dim, resolve_expr(a.expr), a.truncate, flags);
        if (e.is_bottom()) {
            return std::nullopt;
        }
    }
    if (r.loc) {
        loc = *r.loc;
    }
    LocalState out{loc, e.project(off, dims_)};
    if (out.is_bottom()) {
        return std::nullopt;
    }
    return out;
}

} // namespace latta
