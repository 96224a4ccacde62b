// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#include "latta/cfg.hpp"

#include <algorithm>

namespace latta {

const char* instr_kind_name(Instr::Kind k) {
    switch (k) {
    case Instr::Kind::Skip: return "skip";
    case Instr::Kind::Assign: return "assign";
    case Instr::Kind::Filter: return "filter";
    case Instr::Kind::Create: return "create";
    case Instr::Kind::Send: return "send";
    case Instr::Kind::Receive: return "receive";
    case Instr::Kind::Broadcast: return "broadcast";
    case Instr::Kind::Reduce: return "reduce";
    }
    return "?";
}

std::string Instr::to_string(const Vocabulary& voc) const {
    const Expr::Namer namer = [&voc](int, int dim) { return voc.dim_name(dim); };
    const auto peer_text = [&]() { return peer ? peer->to_string(namer) : std::string("any_id"); };
    switch (kind) {
    case Kind::Skip: return "skip";
    case Kind::Assign: return voc.dim_name(var) + " := " + expr->to_string(namer);
    case Kind::Filter: return "[" + expr->to_string(namer) + "]";
    case Kind::Create: return "create(" + voc.dim_name(var) + ")";
    case Kind::Send: return "send(" + peer_text() + ", " + expr->to_string(namer) + ")";
    case Kind::Receive: return "receive(" + peer_text() + ", " + voc.dim_name(var) + ")";
    case Kind::Broadcast: return "broadcast(" + expr->to_string(namer) + ", " + voc.dim_name(var) + ")";
    case Kind::Reduce:
        return "reduce(" + voc.dim_name(var) + ", " + voc.dim_name(src) + ", " + op_symbol(op) + ", " +
               expr->to_string(namer) + ")";
    }
    return "?";
}

bool Cfg::has_create() const {
    return std::any_of(edges.begin(), edges.end(), [](const CfgEdge& e) { return e.instr.kind == Instr::Kind::Create; });
}

} // namespace latta
