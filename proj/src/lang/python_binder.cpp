#include <map>
#include <tuple>

#include "binder.hpp"

namespace varattack::lang {
namespace {

// Python resolves names per function-like scope rather than per block, and a
// binding anywhere in a scope makes the name local to all of it. Pass one
// records which names each scope binds; pass two resolves every occurrence.

enum class ScopeKind { Module, Function, Class, Comprehension };

struct PyScope {
  ScopeKind kind;
  int parent;
  std::map<std::string, BindingKind, std::less<>> bound;
  std::set<std::string, std::less<>> globals;
  std::set<std::string, std::less<>> nonlocals;
  std::map<std::string, std::size_t, std::less<>> binding_of;
};

using NodeKey = std::tuple<std::size_t, std::size_t, std::string_view>;

NodeKey key_of(const Node& n) { return {n.start(), n.end(), n.type()}; }

bool is_comprehension(std::string_view t) {
  return t == "list_comprehension" || t == "set_comprehension" ||
         t == "dictionary_comprehension" || t == "generator_expression";
}

int rank(BindingKind k) {
  switch (k) {
    case BindingKind::Local:
      return 0;
    case BindingKind::Parameter:
      return 1;
    default:
      return 2;
  }
}

class PythonBinder {
 public:
  explicit PythonBinder(Analysis& a) : a_(a) {}

  void run(const Node& root) {
    collect_identifier_tokens(root, a_.identifiers);
    scopes_.push_back({ScopeKind::Module, -1, {}, {}, {}, {}});
    collect(root, 0);
    for (const auto& p : pending_) apply_pending(p);
    materialize();
    resolve_all(root, 0);
  }

 private:
  struct Pending {
    int scope;
    std::string name;
    BindingKind kind;
  };

  // ---- pass one -------------------------------------------------------

  int new_scope(const Node& n, ScopeKind kind, int parent) {
    scopes_.push_back({kind, parent, {}, {}, {}, {}});
    int id = static_cast<int>(scopes_.size()) - 1;
    scope_of_node_[key_of(n)] = id;
    return id;
  }

  void bind(int scope, std::string_view name, BindingKind kind) {
    pending_.push_back({scope, std::string(name), kind});
  }

  void apply_pending(const Pending& p) {
    int target = p.scope;
    PyScope& s = scopes_[target];
    if (s.nonlocals.contains(p.name)) return;
    if (s.globals.contains(p.name)) target = 0;
    auto& slot = scopes_[target].bound;
    auto it = slot.find(p.name);
    if (it == slot.end()) {
      slot.emplace(p.name, p.kind);
    } else if (rank(p.kind) > rank(it->second)) {
      it->second = p.kind;
    }
  }

  void bind_targets(const Node& target, int scope) {
    const std::string_view t = target.type();
    if (t == "identifier") {
      bind(scope, target.text(), BindingKind::Local);
    } else if (t == "pattern_list" || t == "tuple_pattern" || t == "list_pattern" ||
               t == "tuple" || t == "list" || t == "parenthesized_expression" ||
               t == "list_splat_pattern" || t == "list_splat" || t == "expression_list") {
      for_each_named_child(target, [&](const Node& c) { bind_targets(c, scope); });
    }
  }

  int enclosing_non_comprehension(int scope) const {
    while (scopes_[scope].kind == ScopeKind::Comprehension) scope = scopes_[scope].parent;
    return scope;
  }

  void collect_parameters(const Node& params, int outer, int inner) {
    if (!params) return;
    for_each_named_child(params, [&](const Node& p) {
      const std::string_view t = p.type();
      if (t == "identifier") {
        bind(inner, p.text(), BindingKind::Parameter);
        return;
      }
      if (Node name = p.field("name"); name && name.is("identifier")) {
        bind(inner, name.text(), BindingKind::Parameter);
      } else if (t == "list_splat_pattern" || t == "dictionary_splat_pattern" ||
                 t == "typed_parameter") {
        for_each_named_child(p, [&](const Node& c) {
          if (c.is("identifier")) bind(inner, c.text(), BindingKind::Parameter);
          if (c.is("list_splat_pattern") || c.is("dictionary_splat_pattern")) {
            for_each_named_child(c, [&](const Node& cc) {
              if (cc.is("identifier")) bind(inner, cc.text(), BindingKind::Parameter);
            });
          }
        });
      } else if (t == "tuple_pattern") {
        bind_targets(p, inner);
      }
      if (Node value = p.field("value")) collect(value, outer);
      if (Node type = p.field("type")) collect(type, outer);
    });
  }

  void collect_children(const Node& n, int scope) {
    for_each_child(n, [&](const Node& c) { collect(c, scope); });
  }

  void collect(const Node& n, int scope) {
    const std::string_view t = n.type();
    if (t == "function_definition" || t == "lambda") {
      if (Node name = n.field("name")) bind(scope, name.text(), BindingKind::Callable);
      int inner = new_scope(n, ScopeKind::Function, scope);
      collect_parameters(n.field("parameters"), scope, inner);
      if (Node rt = n.field("return_type")) collect(rt, scope);
      if (Node body = n.field("body")) collect(body, inner);
    } else if (t == "class_definition") {
      if (Node name = n.field("name")) bind(scope, name.text(), BindingKind::Callable);
      if (Node bases = n.field("superclasses")) collect(bases, scope);
      int inner = new_scope(n, ScopeKind::Class, scope);
      if (Node body = n.field("body")) collect(body, inner);
    } else if (is_comprehension(t)) {
      int inner = new_scope(n, ScopeKind::Comprehension, scope);
      bool first_clause = true;
      for_each_named_child(n, [&](const Node& c) {
        if (c.is("for_in_clause")) {
          if (Node left = c.field("left")) bind_targets(left, inner);
          for_each_child(c, [&](const Node& part) {
            if (part == c.field("left")) return;
            collect(part, first_clause ? scope : inner);
          });
          first_clause = false;
        } else {
          collect(c, inner);
        }
      });
    } else if (t == "assignment" || t == "augmented_assignment") {
      if (Node left = n.field("left")) bind_targets(left, scope);
      collect_children(n, scope);
    } else if (t == "for_statement") {
      if (Node left = n.field("left")) bind_targets(left, scope);
      collect_children(n, scope);
    } else if (t == "as_pattern") {
      if (Node alias = n.field("alias")) {
        for_each_named_child(alias, [&](const Node& c) { bind_targets(c, scope); });
      }
      collect_children(n, scope);
    } else if (t == "named_expression") {
      if (Node name = n.field("name")) {
        bind(enclosing_non_comprehension(scope), name.text(), BindingKind::Local);
      }
      collect_children(n, scope);
    } else if (t == "delete_statement") {
      for_each_named_child(n, [&](const Node& c) { bind_targets(c, scope); });
    } else if (t == "import_statement" || t == "import_from_statement" ||
               t == "future_import_statement") {
      for (std::size_t i = 0; i < n.child_count(); ++i) {
        if (n.field_of_child(i) != "name") continue;
        Node name = n.child(i);
        if (name.is("aliased_import")) {
          if (Node alias = name.field("alias")) bind(scope, alias.text(), BindingKind::Import);
        } else if (name.is("dotted_name") && name.named_child_count() > 0) {
          bind(scope, name.named_child(0).text(), BindingKind::Import);
        }
      }
    } else if (t == "global_statement" || t == "nonlocal_statement") {
      auto& names = t == "global_statement" ? scopes_[scope].globals : scopes_[scope].nonlocals;
      for_each_named_child(n, [&](const Node& c) {
        if (c.is("identifier")) names.emplace(c.text());
      });
    } else if (t == "case_clause") {
      for_each_named_child(n, [&](const Node& c) {
        if (c.is("case_pattern")) {
          collect_identifier_tokens(c, a_.tainted);
        } else {
          collect(c, scope);
        }
      });
    } else {
      collect_children(n, scope);
    }
  }

  void materialize() {
    for (auto& s : scopes_) {
      for (const auto& [name, kind] : s.bound) {
        BindingKind k = s.kind == ScopeKind::Class ? BindingKind::Field : kind;
        if (k == BindingKind::Field) a_.field_names.emplace(name);
        s.binding_of[name] = a_.bindings.size();
        a_.bindings.push_back({name, k, true, {}});
      }
    }
  }

  // ---- pass two -------------------------------------------------------

  std::optional<std::size_t> lookup_in(int scope, std::string_view name) const {
    const auto& s = scopes_[scope];
    auto it = s.binding_of.find(name);
    if (it == s.binding_of.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> resolve(int scope, std::string_view name) const {
    const PyScope& s = scopes_[scope];
    if (s.globals.contains(name)) return lookup_in(0, name);
    bool skip_self = s.nonlocals.contains(name);
    if (!skip_self) {
      if (auto b = lookup_in(scope, name)) return b;
    }
    for (int p = s.parent; p >= 0; p = scopes_[p].parent) {
      const PyScope& ps = scopes_[p];
      if (ps.kind == ScopeKind::Class) continue;
      if (skip_self && p == 0) return std::nullopt;
      if (ps.globals.contains(name)) return lookup_in(0, name);
      if (ps.nonlocals.contains(name)) continue;
      if (auto b = lookup_in(p, name)) return b;
    }
    return std::nullopt;
  }

  void occurrence(const Node& id, int scope) {
    if (auto b = resolve(scope, id.text())) a_.bindings[*b].spans.push_back(id.span());
  }

  int scope_of(const Node& n) const { return scope_of_node_.at(key_of(n)); }

  void resolve_parameters(const Node& params, int outer, int inner) {
    if (!params) return;
    for_each_named_child(params, [&](const Node& p) {
      if (p.is("identifier")) {
        occurrence(p, inner);
        return;
      }
      for (std::size_t i = 0; i < p.child_count(); ++i) {
        Node c = p.child(i);
        auto field = p.field_of_child(i);
        if (field == "value" || field == "type") {
          resolve_all(c, outer);
        } else if (c.is("identifier")) {
          occurrence(c, inner);
        } else {
          resolve_all(c, inner);
        }
      }
    });
  }

  void resolve_children(const Node& n, int scope) {
    for_each_child(n, [&](const Node& c) { resolve_all(c, scope); });
  }

  void resolve_all(const Node& n, int scope) {
    const std::string_view t = n.type();
    if (t == "identifier") {
      occurrence(n, scope);
    } else if (t == "function_definition" || t == "lambda") {
      int inner = scope_of(n);
      if (Node name = n.field("name")) occurrence(name, scope);
      resolve_parameters(n.field("parameters"), scope, inner);
      if (Node rt = n.field("return_type")) resolve_all(rt, scope);
      if (Node body = n.field("body")) resolve_all(body, inner);
    } else if (t == "class_definition") {
      int inner = scope_of(n);
      if (Node name = n.field("name")) occurrence(name, scope);
      if (Node bases = n.field("superclasses")) resolve_all(bases, scope);
      if (Node body = n.field("body")) resolve_all(body, inner);
    } else if (is_comprehension(t)) {
      int inner = scope_of(n);
      bool first_clause = true;
      for_each_named_child(n, [&](const Node& c) {
        if (c.is("for_in_clause")) {
          Node left = c.field("left");
          for_each_child(c, [&](const Node& part) {
            resolve_all(part, (part == left || !first_clause) ? inner : scope);
          });
          first_clause = false;
        } else {
          resolve_all(c, inner);
        }
      });
    } else if (t == "attribute") {
      if (Node object = n.field("object")) resolve_all(object, scope);
      if (Node attr = n.field("attribute")) a_.field_names.emplace(attr.text());
    } else if (t == "keyword_argument") {
      if (Node value = n.field("value")) resolve_all(value, scope);
    } else if (t == "import_statement" || t == "import_from_statement" ||
               t == "future_import_statement" || t == "dotted_name") {
      // Module paths and imported names are never renamed.
    } else if (t == "case_clause") {
      for_each_named_child(n, [&](const Node& c) {
        if (!c.is("case_pattern")) resolve_all(c, scope);
      });
    } else {
      resolve_children(n, scope);
    }
  }

  Analysis& a_;
  std::vector<PyScope> scopes_;
  std::vector<Pending> pending_;
  std::map<NodeKey, int> scope_of_node_;
};

}  // namespace

Analysis analyze_python(const ParseTree& tree) {
  Analysis a;
  PythonBinder(a).run(root_node(tree));
  return a;
}

}  // namespace varattack::lang
