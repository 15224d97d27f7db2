#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "varattack/core/config.hpp"
#include "varattack/core/types.hpp"

namespace varattack::lang {

using NameSet = std::set<std::string, std::less<>>;

struct SnippetAnalysis {
  /// Renameable locals in canonical order (first occurrence, then name).
  std::vector<Identifier> variables;
  /// Every identifier-like token of the snippet; substitutes must avoid all
  /// of them.
  NameSet identifiers;
};

/// Locals that are declared and initialized inside the snippet. Names that
/// collide with a field, occur inside macro bodies or invocations, or are
/// bound by imports/definitions are left out; formal parameters only when
/// include_parameters is set. A name bound in several scopes yields one
/// Identifier that holds exactly the spans bound to those local bindings.
///
/// Throws ParseError for input that does not parse cleanly.
SnippetAnalysis analyze_snippet(const SourceUnit& src, bool include_parameters);

std::vector<Identifier> extract_variables(const SourceUnit& src, const AttackConfig& cfg);

/// Identifier-like tokens of src (lenient parse; never throws ParseError).
NameSet identifiers_in(const SourceUnit& src);

}  // namespace varattack::lang
