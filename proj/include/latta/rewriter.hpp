// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latta/state.hpp"

namespace latta {

struct Assignment {
    int dim = 0;
    ExprPtr expr;
    bool truncate = false;
};

/// Declarative rewrite function. The output letter starts from one of the matched
/// letters, from the letter being rewritten inside a starred segment, or from a new
/// letter; assignments run in order over the joint context.
struct RewriterSpec {
    enum class Base : std::uint8_t { Slot, Star, Fresh };

    Base base = Base::Slot;
    int slot = 0;
    bool zero = true;
    std::optional<Loc> loc;
    std::vector<Assignment> assigns;

    static RewriterSpec copy(int slot, std::optional<Loc> loc = std::nullopt);
    static RewriterSpec star(std::optional<Loc> loc = std::nullopt);
    static RewriterSpec fresh(Loc loc);
    RewriterSpec& assign(int dim, ExprPtr e, bool truncate = false);

    [[nodiscard]] std::string to_string(const Vocabulary& voc) const;
};

/// Joint numeric view of N matched letters plus the lengths of the starred segments.
/// Expressions address letter k as slot k; slot N is the star or fresh letter of the
/// rewriter being evaluated.
class MatchContext {
  public:
    MatchContext(const std::vector<LocalState>& letters, const std::vector<Interval>& seglens, Domain domain,
                 int dims);

    [[nodiscard]] bool is_bottom() const { return env_.is_bottom(); }
    /// Keeps only joint valuations satisfying every condition.
    void require(const std::vector<ExprPtr>& conds);
    /// The matched letters after the conditions were applied.
    [[nodiscard]] LocalState letter(int slot) const;

    /// nullopt when the image is bottom. `star` is needed only for Base::Star.
    [[nodiscard]] std::optional<LocalState> produce(const RewriterSpec& r, const LocalState* star,
                                                    EvalFlags& flags) const;

  private:
    [[nodiscard]] ExprPtr resolve_expr(const ExprPtr& e) const;
    [[nodiscard]] int extra_offset() const { return letters_ * dims_ + segs_; }

    std::vector<Loc> locs_;
    NumEnv env_;
    int letters_;
    int segs_;
    int dims_;
};

} // namespace latta
