// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "latta/state.hpp"

namespace latta {

/// One primitive instruction on a CFG edge. Expressions use slot 0 and the letter's
/// own dimensions; a null `peer` stands for any_id.
struct Instr {
    enum class Kind : std::uint8_t { Skip, Assign, Filter, Create, Send, Receive, Broadcast, Reduce };

    Kind kind = Kind::Skip;
    int var = -1;
    int src = -1;
    ExprPtr expr;
    ExprPtr peer;
    Op op = Op::Add;
    /// Reduce only: the location where participants wait for the collector.
    Loc lock = -1;

    [[nodiscard]] bool is_local() const { return kind == Kind::Skip || kind == Kind::Assign || kind == Kind::Filter; }
    [[nodiscard]] std::string to_string(const Vocabulary& voc) const;
};

const char* instr_kind_name(Instr::Kind k);

struct CfgEdge {
    Loc from = 0;
    Instr instr;
    Loc to = 0;
};

struct Cfg {
    Vocabulary voc;
    std::vector<CfgEdge> edges;
    Loc entry = 0;
    Loc exit = 0;
    std::vector<Loc> loop_heads;
    Loc collector = -1;

    [[nodiscard]] bool has_create() const;
};

} // namespace latta
