#include "binder.hpp"

namespace varattack::lang {
namespace {

class JavaBinder {
 public:
  explicit JavaBinder(Analysis& a) : a_(a), scopes_(a) {}

  void run(const Node& root) {
    collect_identifier_tokens(root, a_.identifiers);
    ScopeGuard top(scopes_);
    visit(root);
  }

 private:
  void visit_children(const Node& n) {
    for_each_child(n, [&](const Node& c) { visit(c); });
  }

  void declare(const Node& name, BindingKind kind, bool initialized) {
    if (name.is("identifier")) scopes_.declare(name.text(), kind, initialized, name.span());
  }

  void visit(const Node& n) {
    const std::string_view t = n.type();
    if (t == "identifier") {
      scopes_.reference(n.text(), n.span());
    } else if (t == "class_declaration" || t == "interface_declaration" ||
               t == "enum_declaration" || t == "record_declaration" ||
               t == "annotation_type_declaration") {
      visit_type_declaration(n);
    } else if (t == "object_creation_expression") {
      for_each_child(n, [&](const Node& c) {
        if (c.is("class_body")) {
          visit_class_body(c, {});
        } else {
          visit(c);
        }
      });
    } else if (t == "method_declaration" || t == "constructor_declaration" ||
               t == "compact_constructor_declaration") {
      ScopeGuard method(scopes_);
      declare_parameters(n.field("parameters"));
      if (Node body = n.field("body")) visit(body);
    } else if (t == "lambda_expression") {
      ScopeGuard lambda(scopes_);
      Node params = n.field("parameters");
      if (params.is("identifier")) {
        declare(params, BindingKind::Parameter, true);
      } else if (params.is("inferred_parameters")) {
        for_each_named_child(params, [&](const Node& p) { declare(p, BindingKind::Parameter, true); });
      } else {
        declare_parameters(params);
      }
      if (Node body = n.field("body")) visit(body);
    } else if (t == "local_variable_declaration") {
      visit_variable_declarators(n, BindingKind::Local);
    } else if (t == "block" || t == "for_statement" || t == "switch_block") {
      ScopeGuard block(scopes_);
      visit_children(n);
    } else if (t == "enhanced_for_statement") {
      ScopeGuard loop(scopes_);
      if (Node value = n.field("value")) visit(value);
      declare(n.field("name"), BindingKind::Local, true);
      if (Node body = n.field("body")) visit(body);
    } else if (t == "catch_clause") {
      ScopeGuard clause(scopes_);
      for_each_named_child(n, [&](const Node& c) {
        if (c.is("catch_formal_parameter")) {
          declare(c.field("name"), BindingKind::Local, true);
        } else {
          visit(c);
        }
      });
    } else if (t == "try_with_resources_statement") {
      {
        ScopeGuard resources(scopes_);
        if (Node spec = n.field("resources")) {
          for_each_named_child(spec, [&](const Node& r) {
            if (r.is("resource") && r.field("name")) {
              if (Node value = r.field("value")) visit(value);
              declare(r.field("name"), BindingKind::Local, true);
            } else {
              visit(r);
            }
          });
        }
        if (Node body = n.field("body")) visit(body);
      }
      for_each_named_child(n, [&](const Node& c) {
        if (c.is("catch_clause") || c.is("finally_clause")) visit(c);
      });
    } else if (t == "assignment_expression") {
      visit_children(n);
      Node left = n.field("left");
      Node op = n.field("operator");
      if (left.is("identifier") && op && op.text() == "=") {
        if (auto index = scopes_.lookup(left.text())) scopes_.binding(*index).initialized = true;
      }
    } else if (t == "instanceof_expression") {
      if (Node left = n.field("left")) visit(left);
      Node right = n.field("right");
      if (right && !right.is("type_identifier")) collect_identifier_tokens(right, a_.tainted);
      declare(n.field("name"), BindingKind::Local, true);
    } else if (t == "record_pattern" || t == "type_pattern") {
      collect_identifier_tokens(n, a_.tainted);
    } else if (t == "field_access") {
      if (Node object = n.field("object")) visit(object);
      Node field = n.field("field");
      if (field.is("identifier")) a_.field_names.emplace(field.text());
    } else if (t == "method_invocation") {
      for (std::size_t i = 0; i < n.child_count(); ++i) {
        if (n.field_of_child(i) == "name") continue;
        visit(n.child(i));
      }
    } else if (t == "method_reference") {
      // Only the receiver can be a variable; what follows :: names a method.
      if (n.child_count() > 0 && n.child(0).named()) visit(n.child(0));
    } else if (t == "labeled_statement") {
      for_each_named_child(n, [&](const Node& c) {
        if (!c.is("identifier")) visit(c);
      });
    } else if (t == "break_statement" || t == "continue_statement" ||
               t == "package_declaration" || t == "import_declaration" ||
               t == "marker_annotation" || t == "annotation" || t == "scoped_identifier") {
      // Labels, package paths and annotations are not variable references.
    } else if (t == "explicit_constructor_invocation") {
      for_each_named_child(n, [&](const Node& c) {
        if (c.is("argument_list")) visit(c);
      });
    } else {
      visit_children(n);
    }
  }

  void visit_variable_declarators(const Node& decl, BindingKind kind) {
    for (std::size_t i = 0; i < decl.child_count(); ++i) {
      Node c = decl.child(i);
      if (decl.field_of_child(i) != "declarator") {
        visit(c);
        continue;
      }
      Node value = c.field("value");
      if (kind != BindingKind::Field) declare(c.field("name"), kind, static_cast<bool>(value));
      if (value) visit(value);
      // Dimension suffixes (int a[] = ...) carry no names.
    }
  }

  void declare_parameters(const Node& params) {
    if (!params) return;
    for_each_named_child(params, [&](const Node& p) {
      if (p.is("formal_parameter")) {
        declare(p.field("name"), BindingKind::Parameter, true);
      } else if (p.is("spread_parameter")) {
        for_each_named_child(p, [&](const Node& c) {
          if (c.is("variable_declarator")) declare(c.field("name"), BindingKind::Parameter, true);
        });
      }
    });
  }

  void visit_type_declaration(const Node& n) {
    std::vector<Node> record_components;
    if (n.is("record_declaration")) {
      if (Node params = n.field("parameters")) {
        for_each_named_child(params, [&](const Node& p) {
          if (Node name = p.field("name")) record_components.push_back(name);
        });
      }
    }
    for (std::size_t i = 0; i < n.child_count(); ++i) {
      Node c = n.child(i);
      auto field = n.field_of_child(i);
      if (field == "name" || field == "parameters") continue;
      if (field == "body") {
        visit_class_body(c, record_components);
      } else if (c.is("superclass") || c.is("super_interfaces") || c.is("type_parameters") ||
                 c.is("extends_interfaces") || c.is("permits") || c.is("modifiers")) {
        // Type positions only.
      } else {
        visit(c);
      }
    }
  }

  // Fields are visible throughout their class, so they are declared before
  // any member is visited.
  void visit_class_body(const Node& body, const std::vector<Node>& record_components) {
    ScopeGuard cls(scopes_);
    for (const Node& name : record_components) {
      a_.field_names.emplace(name.text());
      scopes_.declare(name.text(), BindingKind::Field, true, name.span());
    }
    for_each_named_child(body, [&](const Node& member) {
      if (member.is("field_declaration") || member.is("constant_declaration")) {
        for (std::size_t i = 0; i < member.child_count(); ++i) {
          if (member.field_of_child(i) != "declarator") continue;
          if (Node name = member.child(i).field("name")) {
            a_.field_names.emplace(name.text());
            scopes_.declare(name.text(), BindingKind::Field, true, name.span());
          }
        }
      } else if (member.is("enum_constant")) {
        if (Node name = member.field("name")) {
          a_.field_names.emplace(name.text());
          scopes_.declare(name.text(), BindingKind::Field, true, name.span());
        }
      } else if (member.is("enum_body_declarations")) {
        for_each_named_child(member, [&](const Node& inner) {
          if (!inner.is("field_declaration")) return;
          for (std::size_t i = 0; i < inner.child_count(); ++i) {
            if (inner.field_of_child(i) != "declarator") continue;
            if (Node name = inner.child(i).field("name")) {
              a_.field_names.emplace(name.text());
              scopes_.declare(name.text(), BindingKind::Field, true, name.span());
            }
          }
        });
      }
    });
    for_each_named_child(body, [&](const Node& member) { visit_member(member); });
  }

  void visit_member(const Node& member) {
    if (member.is("field_declaration") || member.is("constant_declaration")) {
      visit_variable_declarators(member, BindingKind::Field);
    } else if (member.is("enum_constant")) {
      for_each_named_child(member, [&](const Node& c) {
        if (c.is("argument_list")) visit(c);
        if (c.is("class_body")) visit_class_body(c, {});
      });
    } else if (member.is("enum_body_declarations")) {
      for_each_named_child(member, [&](const Node& c) { visit_member(c); });
    } else {
      visit(member);
    }
  }

  Analysis& a_;
  ScopeStack scopes_;
};

}  // namespace

Analysis analyze_java(const ParseTree& tree) {
  Analysis a;
  JavaBinder(a).run(root_node(tree));
  return a;
}

}  // namespace varattack::lang
