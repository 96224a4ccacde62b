// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latta/env.hpp"

namespace latta {

using Loc = int;

struct LocationInfo {
    enum class Kind : std::uint8_t { Program, Lock, Collector };
    std::string name;
    Kind kind = Kind::Program;
};

struct VarInfo {
    std::string name;
    bool integral = true;
};

/// Names and layout shared by every letter of one program: dimension 0 is the process
/// id, dimension i + 1 is vars[i].
struct Vocabulary {
    Domain domain = Domain::Interval;
    std::vector<LocationInfo> locations;
    std::vector<VarInfo> vars;

    [[nodiscard]] int dims() const { return 1 + static_cast<int>(vars.size()); }
    [[nodiscard]] std::string dim_name(int dim) const;
    [[nodiscard]] std::string loc_name(Loc l) const;
    [[nodiscard]] std::optional<Loc> find_location(const std::string& name) const;
    [[nodiscard]] std::optional<int> find_var(const std::string& name) const;
    [[nodiscard]] bool dim_integral(int dim) const;
};

/// One abstract process: a single location and a numeric environment whose dimension 0
/// is the id.
struct LocalState {
    Loc loc = 0;
    NumEnv env = NumEnv::top(Domain::Interval, 1);

    [[nodiscard]] bool is_bottom() const { return env.is_bottom(); }
    [[nodiscard]] Interval id() const { return env.interval_of(0); }

    /// Precondition for the binary operations: same location.
    [[nodiscard]] bool leq(const LocalState& o) const;
    [[nodiscard]] LocalState join(const LocalState& o) const;
    [[nodiscard]] LocalState meet(const LocalState& o) const;
    [[nodiscard]] LocalState widen(const LocalState& o) const;

    friend bool operator==(const LocalState& a, const LocalState& b) { return a.loc == b.loc && a.env == b.env; }
    [[nodiscard]] std::strong_ordering compare(const LocalState& o) const;
    [[nodiscard]] std::size_t hash() const;
    [[nodiscard]] std::string to_string(const Vocabulary& voc) const;
};

struct LocalStateLess {
    bool operator()(const LocalState& a, const LocalState& b) const { return a.compare(b) < 0; }
};

/// Guard on one letter: an optional set of locations plus constraints on the letter's
/// own dimensions. Conditions use slot 0 and letter-relative dimensions.
struct GuardElement {
    std::optional<std::vector<Loc>> locs;
    bool none = false;
    std::vector<std::pair<int, Interval>> ranges;
    std::vector<ExprPtr> conds;

    static GuardElement any() { return {}; }
    static GuardElement at(Loc l);
    static GuardElement bottom();

    [[nodiscard]] bool admits(Loc l) const;
    [[nodiscard]] bool is_top() const { return !none && !locs && ranges.empty() && conds.empty(); }
    /// Greatest state below both; nullopt when the meet is bottom.
    [[nodiscard]] std::optional<LocalState> meet(const LocalState& s) const;
    /// True when every concrete state of `s` satisfies the guard (sound: may say false).
    [[nodiscard]] bool covers(const LocalState& s) const;
    [[nodiscard]] std::string to_string(const Vocabulary& voc) const;
};

} // namespace latta
