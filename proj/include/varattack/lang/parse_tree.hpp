#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "varattack/core/types.hpp"

struct TSTree;

namespace varattack::lang {

/// Owning handle to the concrete syntax tree of one SourceUnit. Parsing uses
/// a parser instance private to the calling thread.
class ParseTree {
 public:
  /// Throws ParseError if the text does not parse cleanly.
  static ParseTree parse(const SourceUnit& src);

  /// Parses without rejecting error nodes.
  static ParseTree parse_lenient(const SourceUnit& src);

  ParseTree(ParseTree&&) noexcept = default;
  ParseTree& operator=(ParseTree&&) noexcept = default;
  ~ParseTree();

  Language language() const { return language_; }
  const std::string& text() const { return text_; }
  bool has_error() const;

  /// Tree shape as a flat string: every node type in pre-order, with leaf
  /// text for non-identifier tokens. Identifier token text is erased, so two
  /// snippets that differ only by renaming share a signature.
  std::string structure_signature() const;

  /// S-expression dump, for debugging.
  std::string sexp() const;

  const TSTree* raw() const { return tree_.get(); }

 private:
  struct Deleter {
    void operator()(TSTree* t) const;
  };
  ParseTree(Language lang, std::string text, TSTree* tree);

  Language language_;
  std::string text_;
  std::unique_ptr<TSTree, Deleter> tree_;
};

/// Structural isomorphism modulo identifier token text.
bool parse_equivalent(const ParseTree& a, const ParseTree& b);

}  // namespace varattack::lang
