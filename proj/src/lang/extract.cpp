#include "varattack/lang/extract.hpp"

#include <algorithm>
#include <map>

#include "binder.hpp"
#include "varattack/core/errors.hpp"
#include "varattack/lang/lexicon.hpp"
#include "varattack/lang/parse_tree.hpp"

namespace varattack::lang {
namespace {

Analysis analyze(const ParseTree& tree) {
  switch (tree.language()) {
    case Language::C:
      return analyze_c(tree);
    case Language::Python:
      return analyze_python(tree);
    case Language::Java:
      return analyze_java(tree);
  }
  throw UnsupportedLanguage("no binder for language");
}

}  // namespace

SnippetAnalysis analyze_snippet(const SourceUnit& src, bool include_parameters) {
  ParseTree tree = ParseTree::parse(src);
  Analysis a = analyze(tree);

  std::map<std::string, std::vector<OccurrenceSpan>, std::less<>> spans_by_name;
  for (const Binding& b : a.bindings) {
    bool eligible = b.kind == BindingKind::Local ||
                    (include_parameters && b.kind == BindingKind::Parameter);
    if (!eligible || !b.initialized) continue;
    if (a.field_names.contains(b.name) || a.tainted.contains(b.name)) continue;
    if (is_reserved(b.name, src.language) || !is_identifier_lexeme(b.name, src.language)) continue;
    auto& spans = spans_by_name[b.name];
    spans.insert(spans.end(), b.spans.begin(), b.spans.end());
  }

  SnippetAnalysis out;
  for (auto& [name, spans] : spans_by_name) {
    std::sort(spans.begin(), spans.end());
    spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
    const bool exact = std::all_of(spans.begin(), spans.end(), [&](const OccurrenceSpan& s) {
      return std::string_view(src.text).substr(s.byte_start, s.size()) == name;
    });
    if (spans.empty() || !exact) continue;
    out.variables.push_back({name, std::move(spans)});
  }
  std::sort(out.variables.begin(), out.variables.end(),
            [](const Identifier& x, const Identifier& y) {
              if (x.first_offset() != y.first_offset()) return x.first_offset() < y.first_offset();
              return x.name < y.name;
            });
  out.identifiers = std::move(a.identifiers);
  return out;
}

std::vector<Identifier> extract_variables(const SourceUnit& src, const AttackConfig& cfg) {
  return analyze_snippet(src, cfg.include_parameters).variables;
}

NameSet identifiers_in(const SourceUnit& src) {
  return analyze(ParseTree::parse_lenient(src)).identifiers;
}

}  // namespace varattack::lang
