#pragma once

// Internal view over tree-sitter nodes shared by the per-language binders.

#include <tree_sitter/api.h>

#include <cstring>
#include <optional>
#include <string>
#include <string_view>

#include "varattack/core/types.hpp"

extern "C" {
const TSLanguage* tree_sitter_c(void);
const TSLanguage* tree_sitter_python(void);
const TSLanguage* tree_sitter_java(void);
}

namespace varattack::lang {

class Node {
 public:
  Node() : node_{} {}
  Node(TSNode node, std::string_view source) : node_(node), source_(source) {}

  bool null() const { return ts_node_is_null(node_); }
  explicit operator bool() const { return !null(); }

  std::string_view type() const { return ts_node_type(node_); }
  bool is(std::string_view t) const { return !null() && type() == t; }
  bool named() const { return ts_node_is_named(node_); }

  std::size_t start() const { return ts_node_start_byte(node_); }
  std::size_t end() const { return ts_node_end_byte(node_); }
  OccurrenceSpan span() const { return {start(), end()}; }
  std::string_view text() const { return source_.substr(start(), end() - start()); }

  std::size_t child_count() const { return ts_node_child_count(node_); }
  Node child(std::size_t i) const { return {ts_node_child(node_, static_cast<uint32_t>(i)), source_}; }
  std::size_t named_child_count() const { return ts_node_named_child_count(node_); }
  Node named_child(std::size_t i) const {
    return {ts_node_named_child(node_, static_cast<uint32_t>(i)), source_};
  }
  std::string_view field_of_child(std::size_t i) const {
    const char* f = ts_node_field_name_for_child(node_, static_cast<uint32_t>(i));
    return f ? std::string_view(f) : std::string_view{};
  }
  Node field(std::string_view name) const {
    return {ts_node_child_by_field_name(node_, name.data(), static_cast<uint32_t>(name.size())),
            source_};
  }
  Node parent() const { return {ts_node_parent(node_), source_}; }

  bool operator==(const Node& o) const { return ts_node_eq(node_, o.node_); }

  const TSNode& raw() const { return node_; }
  std::string_view source() const { return source_; }

 private:
  TSNode node_;
  std::string_view source_;
};

/// Calls fn(child) for every child (named or anonymous).
template <typename Fn>
void for_each_child(const Node& n, Fn&& fn) {
  const std::size_t count = n.child_count();
  for (std::size_t i = 0; i < count; ++i) fn(n.child(i));
}

template <typename Fn>
void for_each_named_child(const Node& n, Fn&& fn) {
  const std::size_t count = n.named_child_count();
  for (std::size_t i = 0; i < count; ++i) fn(n.named_child(i));
}

/// Leaf token types that carry a name.
inline bool is_identifier_like(std::string_view type) {
  return type == "identifier" || type.ends_with("_identifier");
}

}  // namespace varattack::lang
