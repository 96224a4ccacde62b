// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/state.hpp"

#include <algorithm>

namespace latta {

std::string Vocabulary::dim_name(int dim) const {
    if (dim == 0) {
        return "id";
    }
    if (dim > 0 && dim <= static_cast<int>(vars.size())) {
        return vars[static_cast<std::size_t>(dim - 1)].name;
    }
    return "d" + std::to_string(dim);
}

std::string Vocabulary::loc_name(Loc l) const {
    if (l >= 0 && l < static_cast<int>(locations.size())) {
        return locations[static_cast<std::size_t>(l)].name;
    }
    return "?" + std::to_string(l);
}

std::optional<Loc> Vocabulary::find_location(const std::string& name) const {
    for (std::size_t i = 0; i < locations.size(); ++i) {
        if (locations[i].name == name) {
            return static_cast<Loc>(i);
        }
    }
    return std::nullopt;
}

std::optional<int> Vocabulary::find_var(const std::string& name) const {
    if (name == "id") {
        return 0;
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == name) {
            return static_cast<int>(i) + 1;
        }
    }
    return std::nullopt;
}

bool Vocabulary::dim_integral(int dim) const {
    if (dim <= 0 || dim > static_cast<int>(vars.size())) {
        return true;
    }
    return vars[static_cast<std::size_t>(dim - 1)].integral;
}

bool LocalState::leq(const LocalState& o) const {
    if (is_bottom()) {
        return true;
    }
    return loc == o.loc && env.leq(o.env);
}

LocalState LocalState::join(const LocalState& o) const { return {loc, env.join(o.env)}; }
LocalState LocalState::meet(const LocalState& o) const {
    if (loc != o.loc) {
        return {loc, NumEnv::bottom(env.domain(), env.dims())};
    }
    return {loc, env.meet(o.env)};
}
LocalState LocalState::widen(const LocalState& o) const { return {loc, env.widen(o.env)}; }

std::strong_ordering LocalState::compare(const LocalState& o) const {
    if (auto c = loc <=> o.loc; c != 0) {
        return c;
    }
    return env.compare(o.env);
}

std::size_t LocalState::hash() const { return env.hash() * 31 + static_cast<std::size_t>(loc); }

std::string LocalState::to_string(const Vocabulary& voc) const {
    const std::string id_text = [&] {
        const Interval i = id();
        return i.is_point() ? i.singleton()->to_string() : i.to_string();
    }();
    const DimNamer namer = [&voc](int d) { return voc.dim_name(d); };
    std::string env_text;
    if (const auto* ie = env.as_interval()) {
        IntervalEnv rest = IntervalEnv::top(ie->dims());
        for (int d = 1; d < ie->dims(); ++d) {
            rest.set(d, ie->at(d));
        }
        env_text = ie->is_bottom() ? "_|_" : rest.to_string(namer);
    } else {
        env_text = env.to_string(namer);
    }
    return "<" + id_text + " | " + voc.loc_name(loc) + " | " + env_text + ">";
}

GuardElement GuardElement::at(Loc l) {
    GuardElement g;
    g.locs = std::vector<Loc>{l};
    return g;
}

GuardElement GuardElement::bottom() {
    GuardElement g;
    g.none = true;
    return g;
}

bool GuardElement::admits(Loc l) const {
    if (none) {
        return false;
    }
    return !locs || std::find(locs->begin(), locs->end(), l) != locs->end();
}

std::optional<LocalState> GuardElement::meet(const LocalState& s) const {
    if (s.is_bottom() || !admits(s.loc)) {
        return std::nullopt;
    }
    NumEnv env = s.env;
    for (const auto& [dim, range] : ranges) {
        env = env.restrict(dim, range);
    }
    for (const auto& c : conds) {
        if (env.is_bottom()) {
            break;
        }
        env = env.filter(c, true);
    }
    if (env.is_bottom()) {
        return std::nullopt;
    }
    return LocalState{s.loc, std::move(env)};
}

bool GuardElement::covers(const LocalState& s) const {
    if (s.is_bottom()) {
        return true;
    }
    if (!admits(s.loc)) {
        return false;
    }
    for (const auto& [dim, range] : ranges) {
        if (!s.env.interval_of(dim).leq(range)) {
            return false;
        }
    }
    for (const auto& c : conds) {
        if (!s.env.filter(c, false).is_bottom()) {
            return false;
        }
    }
    return true;
}

std::string GuardElement::to_string(const Vocabulary& voc) const {
    if (none) {
        return "_|_";
    }
    if (is_top()) {
        return "T";
    }
    std::vector<std::string> parts;
    if (locs) {
        std::string l = "loc=";
        for (std::size_t i = 0; i < locs->size(); ++i) {
            l += (i ? "|" : "") + voc.loc_name((*locs)[i]);
        }
        parts.push_back(l);
    }
    for (const auto& [dim, range] : ranges) {
        parts.push_back(voc.dim_name(dim) + " in " + range.to_string());
    }
    const Expr::Namer namer = [&voc](int, int dim) { return voc.dim_name(dim); };
    for (const auto& c : conds) {
        parts.push_back(c->to_string(namer));
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i ? ", " : "") + parts[i];
    }
    return out;
}

} // namespace latta
