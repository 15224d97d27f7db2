#include "varattack/lang/parse_tree.hpp"

#include <cstdlib>
#include <vector>

#include "syntax.hpp"
#include "varattack/core/errors.hpp"

namespace varattack::lang {
namespace {

const TSLanguage* grammar_for(Language lang) {
  switch (lang) {
    case Language::C:
      return tree_sitter_c();
    case Language::Python:
      return tree_sitter_python();
    case Language::Java:
      return tree_sitter_java();
  }
  throw UnsupportedLanguage("no grammar for language");
}

struct ParserDeleter {
  void operator()(TSParser* p) const { ts_parser_delete(p); }
};

TSParser* thread_parser(Language lang) {
  thread_local std::unique_ptr<TSParser, ParserDeleter> parsers[3];
  auto& slot = parsers[static_cast<int>(lang)];
  if (!slot) {
    slot.reset(ts_parser_new());
    if (!ts_parser_set_language(slot.get(), grammar_for(lang))) {
      throw UnsupportedLanguage("grammar ABI mismatch for " + std::string(to_string(lang)));
    }
  }
  return slot.get();
}

void append_signature(const Node& n, std::string& out) {
  out += '(';
  out += n.type();
  if (n.child_count() == 0) {
    if (!is_identifier_like(n.type())) {
      out += ' ';
      out += n.text();
    }
  } else {
    for_each_child(n, [&](const Node& c) { append_signature(c, out); });
  }
  out += ')';
}

}  // namespace

void ParseTree::Deleter::operator()(TSTree* t) const { ts_tree_delete(t); }

ParseTree::ParseTree(Language lang, std::string text, TSTree* tree)
    : language_(lang), text_(std::move(text)), tree_(tree) {}

ParseTree::~ParseTree() = default;

ParseTree ParseTree::parse_lenient(const SourceUnit& src) {
  TSParser* parser = thread_parser(src.language);
  TSTree* tree = ts_parser_parse_string(parser, nullptr, src.text.data(),
                                        static_cast<uint32_t>(src.text.size()));
  if (!tree) throw ParseError("parser returned no tree for '" + src.origin_id + "'");
  return ParseTree(src.language, src.text, tree);
}

ParseTree ParseTree::parse(const SourceUnit& src) {
  if (src.text.empty()) throw ParseError("empty source for '" + src.origin_id + "'");
  ParseTree tree = parse_lenient(src);
  if (tree.has_error()) {
    throw ParseError("syntax error in " + std::string(to_string(src.language)) + " source '" +
                     src.origin_id + "'");
  }
  return tree;
}

bool ParseTree::has_error() const { return ts_node_has_error(ts_tree_root_node(tree_.get())); }

std::string ParseTree::structure_signature() const {
  std::string out;
  out.reserve(text_.size() * 2);
  append_signature(Node(ts_tree_root_node(tree_.get()), text_), out);
  return out;
}

std::string ParseTree::sexp() const {
  char* s = ts_node_string(ts_tree_root_node(tree_.get()));
  std::string out(s);
  std::free(s);
  return out;
}

bool parse_equivalent(const ParseTree& a, const ParseTree& b) {
  return a.language() == b.language() && a.structure_signature() == b.structure_signature();
}

}  // namespace varattack::lang
