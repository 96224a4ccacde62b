// Copyright (c) latta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "latta/frontend.hpp"

namespace latta {

using Json = nlohmann::ordered_json;

/// Rationals are written as "num/den"; infinite bounds as "-inf" and "+inf".
Json to_json(const Rational& q);
Json to_json(const Interval& i);
Json to_json(const ExprPtr& e);
Json to_json(const NumEnv& e);
Json to_json(const LocalState& s, const Vocabulary& voc);
Json to_json(const Automaton& a, const Vocabulary& voc);
Json to_json(const CompiledSemantics& sem);

Rational rational_from_json(const Json& j);
Interval interval_from_json(const Json& j);
ExprPtr expr_from_json(const Json& j);
NumEnv env_from_json(const Json& j);
Automaton automaton_from_json(const Json& j);
/// Throws std::runtime_error (or a json exception) on malformed input.
CompiledSemantics semantics_from_json(const Json& j);

std::string to_dot(const Automaton& a, const Vocabulary& voc, const std::string& name = "reach");

} // namespace latta
