#pragma once

// Scope analysis shared by the language binders. A binder walks one parse
// tree and records every name binding together with the spans that resolve
// to it; extraction then filters the bindings down to renameable locals.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "syntax.hpp"
#include "varattack/core/types.hpp"
#include "varattack/lang/parse_tree.hpp"

namespace varattack::lang {

enum class BindingKind { Local, Parameter, Global, Field, Import, Callable };

struct Binding {
  std::string name;
  BindingKind kind = BindingKind::Local;
  bool initialized = false;
  std::vector<OccurrenceSpan> spans;
};

struct Analysis {
  std::vector<Binding> bindings;
  std::set<std::string, std::less<>> field_names;
  /// Names that also occur where they cannot be renamed safely (macro
  /// bodies, attributes, match patterns, ...).
  std::set<std::string, std::less<>> tainted;
  /// Every identifier-like token in the source.
  std::set<std::string, std::less<>> identifiers;
};

/// Lexical block scopes with declaration-order visibility (C and Java).
class ScopeStack {
 public:
  explicit ScopeStack(Analysis& analysis) : analysis_(analysis) {}

  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }
  std::size_t depth() const { return scopes_.size(); }

  std::size_t declare(std::string_view name, BindingKind kind, bool initialized,
                      OccurrenceSpan span);
  std::optional<std::size_t> lookup(std::string_view name) const;
  /// Attaches span to the visible binding of name, if any; returns it.
  std::optional<std::size_t> reference(std::string_view name, OccurrenceSpan span);

  Binding& binding(std::size_t index) { return analysis_.bindings[index]; }

 private:
  Analysis& analysis_;
  std::vector<std::map<std::string, std::size_t, std::less<>>> scopes_;
};

class ScopeGuard {
 public:
  explicit ScopeGuard(ScopeStack& s) : s_(s) { s_.push(); }
  ~ScopeGuard() { s_.pop(); }
  ScopeGuard(const ScopeGuard&) = delete;
  ScopeGuard& operator=(const ScopeGuard&) = delete;

 private:
  ScopeStack& s_;
};

/// Adds every identifier-like leaf under n to out.
void collect_identifier_tokens(const Node& n, std::set<std::string, std::less<>>& out);

/// Adds every [A-Za-z_][A-Za-z0-9_]* word of text to out.
void collect_words(std::string_view text, std::set<std::string, std::less<>>& out);

Analysis analyze_c(const ParseTree& tree);
Analysis analyze_python(const ParseTree& tree);
Analysis analyze_java(const ParseTree& tree);

Node root_node(const ParseTree& tree);

}  // namespace varattack::lang
