// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "latta/cfg.hpp"
#include "latta/rules.hpp"

namespace latta {

class SourceError : public std::runtime_error {
  public:
    SourceError(const std::string& what, int line, int column);
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }

  private:
    int line_;
    int column_;
};

struct SourcePos {
    int line = 1;
    int column = 1;
    friend auto operator<=>(const SourcePos&, const SourcePos&) = default;
};

struct AstExpr;
using AstExprPtr = std::shared_ptr<const AstExpr>;

struct AstExpr {
    enum class Kind : std::uint8_t { Number, Name, Unary, Binary, Nondet };
    Kind kind = Kind::Number;
    Rational value;
    std::string name;
    Op op = Op::Add;
    AstExprPtr lhs;
    AstExprPtr rhs;
    SourcePos pos;
};

struct Stmt {
    enum class Kind : std::uint8_t { Block, Skip, Assign, If, While, Create, Send, Receive, Broadcast, Reduce };
    Kind kind = Kind::Block;
    SourcePos pos;
    std::vector<Stmt> body;
    std::string target;
    std::string source;
    AstExprPtr expr;
    /// Peer id of send/receive; null for any_id.
    AstExprPtr peer;
    Op op = Op::Add;
};

struct Decl {
    std::string name;
    bool integral = true;
    SourcePos pos;
};

struct Ast {
    std::vector<Decl> decls;
    Stmt body;
};

Ast parse_program(const std::string& text);

/// One expression over the variables of `voc` (slot 0).
ExprPtr parse_expression(const std::string& text, const Vocabulary& voc, std::optional<int> procs = std::nullopt);

/// `procs` is the process count, or nullopt for an unbounded number of processes.
Cfg build_cfg(const Ast& ast, Domain domain, std::optional<int> procs);

struct CompiledSemantics {
    Cfg cfg;
    Transducer transducer;
    std::vector<RewriteRule> rules;
    Automaton initial;
    std::vector<Loc> widening_points;
    std::vector<Loc> blocking;
    bool shape_widening = false;

    [[nodiscard]] const Vocabulary& voc() const { return cfg.voc; }
    [[nodiscard]] bool is_widening_point(Loc l) const;
    [[nodiscard]] bool is_blocking(Loc l) const;
};

CompiledSemantics compile(const Cfg& cfg, std::optional<int> procs);
CompiledSemantics compile_source(const std::string& text, Domain domain, std::optional<int> procs);

/// Chain of `procs` letters at the entry with ids 0..procs-1, or one or more letters
/// with id >= 0 when unbounded.
Automaton initial_automaton(const Vocabulary& voc, Loc entry, std::optional<int> procs);

} // namespace latta
