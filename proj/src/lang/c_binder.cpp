#include <algorithm>
#include <cctype>

#include "binder.hpp"
#include "varattack/lang/lexicon.hpp"

namespace varattack::lang {

std::size_t ScopeStack::declare(std::string_view name, BindingKind kind, bool initialized,
                                OccurrenceSpan span) {
  std::size_t index = analysis_.bindings.size();
  analysis_.bindings.push_back({std::string(name), kind, initialized, {span}});
  scopes_.back()[std::string(name)] = index;
  return index;
}

std::optional<std::size_t> ScopeStack::lookup(std::string_view name) const {
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
    auto found = it->find(name);
    if (found != it->end()) return found->second;
  }
  return std::nullopt;
}

std::optional<std::size_t> ScopeStack::reference(std::string_view name, OccurrenceSpan span) {
  auto index = lookup(name);
  if (index) analysis_.bindings[*index].spans.push_back(span);
  return index;
}

void collect_identifier_tokens(const Node& n, std::set<std::string, std::less<>>& out) {
  if (n.child_count() == 0) {
    if (is_identifier_like(n.type())) out.emplace(n.text());
    return;
  }
  for_each_child(n, [&](const Node& c) { collect_identifier_tokens(c, out); });
}

void collect_words(std::string_view text, std::set<std::string, std::less<>>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    auto ch = static_cast<unsigned char>(text[i]);
    if (!is_identifier_byte(ch)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_identifier_byte(static_cast<unsigned char>(text[j]))) ++j;
    if (!std::isdigit(ch)) out.emplace(text.substr(i, j - i));
    i = j;
  }
}

Node root_node(const ParseTree& tree) {
  return Node(ts_tree_root_node(tree.raw()), tree.text());
}

namespace {

// Upper-case call targets are treated as macro invocations.
bool looks_like_macro(std::string_view name) {
  bool letter = false;
  for (char ch : name) {
    if (std::islower(static_cast<unsigned char>(ch))) return false;
    letter = letter || std::isupper(static_cast<unsigned char>(ch));
  }
  return letter && name.size() > 1;
}

class CBinder {
 public:
  explicit CBinder(Analysis& a) : a_(a), scopes_(a) {}

  void run(const Node& root) {
    collect_identifier_tokens(root, a_.identifiers);
    // A snippet with top-level statements is a function-body fragment, so
    // its top-level declarations are locals rather than globals.
    fragment_ = false;
    for_each_named_child(root, [&](const Node& c) {
      const std::string_view t = c.type();
      if (t.ends_with("_statement") && t != "expression_statement") fragment_ = true;
      if (t == "expression_statement") fragment_ = true;
    });
    ScopeGuard file(scopes_);
    visit(root);
  }

 private:
  bool at_file_scope() const { return !fragment_ && scopes_.depth() == 1; }

  void taint_words(const Node& n) {
    collect_words(n.text(), a_.tainted);
    collect_words(n.text(), a_.identifiers);
  }

  void visit_children(const Node& n) {
    for_each_child(n, [&](const Node& c) { visit(c); });
  }

  void visit(const Node& n) {
    const std::string_view t = n.type();
    if (t == "identifier") {
      scopes_.reference(n.text(), n.span());
    } else if (t == "field_identifier") {
      a_.field_names.emplace(n.text());
    } else if (t == "preproc_def" || t == "preproc_function_def") {
      if (Node name = n.field("name")) macros_.emplace(name.text());
      taint_words(n);
    } else if (t == "preproc_call" || t == "preproc_include" || t == "attribute_specifier" ||
               t == "attribute_declaration" || t == "ms_declspec_modifier" ||
               t == "gnu_asm_expression" || t == "macro_type_specifier") {
      taint_words(n);
    } else if (t == "preproc_if" || t == "preproc_ifdef" || t == "preproc_elif" ||
               t == "preproc_elifdef") {
      for (std::size_t i = 0; i < n.child_count(); ++i) {
        auto field = n.field_of_child(i);
        if (field == "condition" || field == "name") {
          taint_words(n.child(i));
        } else {
          visit(n.child(i));
        }
      }
    } else if (t == "function_definition") {
      visit_function(n);
    } else if (t == "declaration") {
      visit_declaration(n);
    } else if (t == "parameter_declaration" || t == "type_definition") {
      // Prototype parameters and typedef declarators name nothing we rename;
      // only walk nested expressions such as array bounds.
      visit_nested_expressions(n);
    } else if (t == "compound_statement" || t == "for_statement") {
      ScopeGuard block(scopes_);
      visit_children(n);
    } else if (t == "enumerator") {
      if (Node name = n.field("name")) {
        scopes_.declare(name.text(), BindingKind::Global, true, name.span());
      }
      if (Node value = n.field("value")) visit(value);
    } else if (t == "assignment_expression") {
      visit_children(n);
      Node left = n.field("left");
      Node op = n.field("operator");
      if (left.is("identifier") && op && op.text() == "=") {
        if (auto index = scopes_.lookup(left.text())) scopes_.binding(*index).initialized = true;
      }
    } else if (t == "call_expression") {
      Node fn = n.field("function");
      if (fn.is("identifier") && (macros_.contains(fn.text()) || looks_like_macro(fn.text()))) {
        if (Node args = n.field("arguments")) collect_identifier_tokens(args, a_.tainted);
      }
      visit_children(n);
    } else {
      visit_children(n);
    }
  }

  // Unwraps pointer/array/parenthesized declarators down to the declared
  // identifier. Array bounds are visited as expressions.
  Node declarator_name(Node d, bool& is_function) {
    while (d) {
      const std::string_view t = d.type();
      if (t == "identifier") return d;
      if (t == "function_declarator") {
        is_function = true;
        if (Node params = d.field("parameters")) visit_nested_expressions(params);
      } else if (t == "array_declarator") {
        if (Node size = d.field("size")) visit(size);
      }
      Node inner = d.field("declarator");
      if (!inner && d.named_child_count() > 0) {
        // parenthesized_declarator / attributed_declarator
        Node next;
        for_each_named_child(d, [&](const Node& c) {
          if (!next && !c.is("attribute_declaration") && !c.is("ms_call_modifier")) next = c;
        });
        inner = next;
      }
      d = inner;
    }
    return {};
  }

  void visit_nested_expressions(const Node& n) {
    for_each_named_child(n, [&](const Node& c) {
      if (c.is("array_declarator")) {
        if (Node size = c.field("size")) visit(size);
        visit_nested_expressions(c);
      } else if (c.is("parameter_declaration") || c.is("parameter_list") ||
                 c.is("pointer_declarator") || c.is("function_declarator") ||
                 c.is("abstract_array_declarator") || c.is("abstract_pointer_declarator") ||
                 c.is("abstract_function_declarator") || c.is("parenthesized_declarator") ||
                 c.is("init_declarator")) {
        visit_nested_expressions(c);
      } else if (c.is("struct_specifier") || c.is("union_specifier") || c.is("enum_specifier") ||
                 c.is("attribute_specifier") || c.is("macro_type_specifier")) {
        visit(c);
      }
    });
  }

  void visit_declaration(const Node& n) {
    bool is_extern = false;
    for (std::size_t i = 0; i < n.child_count(); ++i) {
      Node c = n.child(i);
      auto field = n.field_of_child(i);
      if (c.is("storage_class_specifier") && c.text() == "extern") is_extern = true;
      if (field != "declarator") {
        visit(c);
        continue;
      }
      Node decl = c;
      Node value;
      if (decl.is("init_declarator")) {
        value = decl.field("value");
        decl = decl.field("declarator");
      }
      bool is_function = false;
      Node name = declarator_name(decl, is_function);
      if (name) {
        BindingKind kind = BindingKind::Local;
        if (is_function) {
          kind = BindingKind::Callable;
        } else if (at_file_scope() || is_extern) {
          kind = BindingKind::Global;
        }
        scopes_.declare(name.text(), kind, static_cast<bool>(value), name.span());
      }
      if (value) visit(value);
    }
  }

  void visit_function(const Node& n) {
    for (std::size_t i = 0; i < n.child_count(); ++i) {
      Node c = n.child(i);
      auto field = n.field_of_child(i);
      if (field == "declarator" || field == "body" || c.is("declaration")) continue;
      visit(c);
    }
    Node declarator = n.field("declarator");
    Node fdecl = declarator;
    while (fdecl && !fdecl.is("function_declarator")) fdecl = fdecl.field("declarator");
    bool unused = false;
    if (fdecl) {
      if (Node name = declarator_name(fdecl.field("declarator"), unused)) {
        scopes_.declare(name.text(), BindingKind::Callable, true, name.span());
      }
    }
    ScopeGuard function(scopes_);
    if (fdecl) {
      if (Node params = fdecl.field("parameters")) {
        for_each_named_child(params, [&](const Node& p) {
          if (p.is("identifier")) {  // K&R style name list
            scopes_.declare(p.text(), BindingKind::Parameter, true, p.span());
            return;
          }
          if (!p.is("parameter_declaration")) return;
          if (Node type = p.field("type")) visit(type);
          bool fn_param = false;
          if (Node name = declarator_name(p.field("declarator"), fn_param)) {
            scopes_.declare(name.text(), BindingKind::Parameter, true, name.span());
          }
        });
      }
    }
    // K&R parameter declarations sit between the declarator and the body.
    for (std::size_t i = 0; i < n.child_count(); ++i) {
      if (n.child(i).is("declaration")) {
        // Re-declaring a parameter's type: attach the span to the parameter.
        Node d = n.child(i).field("declarator");
        bool fn = false;
        if (Node name = declarator_name(d, fn)) scopes_.reference(name.text(), name.span());
      }
    }
    if (Node body = n.field("body")) visit(body);
  }

  Analysis& a_;
  ScopeStack scopes_;
  std::set<std::string, std::less<>> macros_;
  bool fragment_ = false;
};

}  // namespace

Analysis analyze_c(const ParseTree& tree) {
  Analysis a;
  CBinder(a).run(root_node(tree));
  return a;
}

}  // namespace varattack::lang
