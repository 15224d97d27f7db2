#include "varattack/lang/rename.hpp"

#include <algorithm>
#include <set>

#include "varattack/core/errors.hpp"
#include "varattack/lang/lexicon.hpp"
#include "varattack/lang/parse_tree.hpp"

namespace varattack::lang {

SourceUnit mask_occurrence(const SourceUnit& src, const OccurrenceSpan& occ,
                           std::string_view mask_token) {
  if (occ.byte_start >= occ.byte_end || occ.byte_end > src.text.size()) {
    throw SpanError("span [" + std::to_string(occ.byte_start) + ", " +
                    std::to_string(occ.byte_end) + ") is outside the snippet");
  }
  std::string_view slice = std::string_view(src.text).substr(occ.byte_start, occ.size());
  auto word_at = [&](std::size_t i) {
    auto ch = static_cast<unsigned char>(src.text[i]);
    return is_identifier_byte(ch) || (src.language == Language::Java && ch == '$');
  };
  const bool cut = (occ.byte_start > 0 && word_at(occ.byte_start - 1)) ||
                   (occ.byte_end < src.text.size() && word_at(occ.byte_end));
  if (cut || !is_identifier_lexeme(slice, src.language)) {
    throw SpanError("span does not slice an identifier: '" + std::string(slice) + "'");
  }
  SourceUnit out = src;
  out.text.replace(occ.byte_start, occ.size(), mask_token);
  return out;
}

bool is_valid_substitute(std::string_view name, const NameSet& identifiers, Language lang) {
  return is_identifier_lexeme(name, lang) && !is_reserved(name, lang) &&
         !identifiers.contains(name);
}

bool is_valid_substitute(std::string_view name, const SourceUnit& src, Language lang) {
  SourceUnit probe = src;
  probe.language = lang;
  return is_valid_substitute(name, identifiers_in(probe), lang);
}

Renamer::Renamer(SourceUnit src, SnippetAnalysis analysis)
    : src_(std::move(src)), analysis_(std::move(analysis)) {
  signature_ = ParseTree::parse(src_).structure_signature();
}

Renamer Renamer::for_source(const SourceUnit& src, const AttackConfig& cfg) {
  return Renamer(src, analyze_snippet(src, cfg.include_parameters));
}

bool Renamer::is_valid_substitute(std::string_view name) const {
  return lang::is_valid_substitute(name, analysis_.identifiers, src_.language);
}

SourceUnit Renamer::apply(const Chromosome& chromosome) const {
  const auto& vars = analysis_.variables;
  if (chromosome.size() != vars.size()) {
    throw Error("chromosome has " + std::to_string(chromosome.size()) + " genes for " +
                std::to_string(vars.size()) + " variables");
  }
  struct Edit {
    OccurrenceSpan span;
    const std::string* text;
  };
  std::vector<Edit> edits;
  std::set<std::string_view> used;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const Gene& g = chromosome[i];
    if (g.variable != vars[i].name) {
      throw Error("gene " + std::to_string(i) + " is for '" + g.variable + "', expected '" +
                  vars[i].name + "'");
    }
    if (!g.changed()) continue;
    if (!is_identifier_lexeme(g.substitute, src_.language) ||
        is_reserved(g.substitute, src_.language)) {
      throw InvalidName("'" + g.substitute + "' is not a usable variable name");
    }
    if (analysis_.identifiers.contains(g.substitute)) {
      throw CollisionError("'" + g.substitute + "' already occurs in the snippet");
    }
    if (!used.insert(g.substitute).second) {
      throw CollisionError("'" + g.substitute + "' is assigned to two variables");
    }
    for (const auto& span : vars[i].occurrences) edits.push_back({span, &g.substitute});
  }
  if (edits.empty()) return src_;

  std::sort(edits.begin(), edits.end(),
            [](const Edit& a, const Edit& b) { return a.span.byte_start < b.span.byte_start; });
  SourceUnit out;
  out.language = src_.language;
  out.origin_id = src_.origin_id;
  out.text.reserve(src_.text.size() + edits.size() * 8);
  std::size_t cursor = 0;
  for (const Edit& e : edits) {
    out.text.append(src_.text, cursor, e.span.byte_start - cursor);
    out.text += *e.text;
    cursor = e.span.byte_end;
  }
  out.text.append(src_.text, cursor, std::string::npos);

  ParseTree variant = ParseTree::parse_lenient(out);
  if (variant.has_error() || variant.structure_signature() != signature_) {
    throw StructureMismatch("renamed variant of '" + src_.origin_id +
                            "' does not parse into the original tree shape");
  }
  return out;
}

SourceUnit rename(const SourceUnit& src, const Chromosome& chromosome, const AttackConfig& cfg) {
  return Renamer::for_source(src, cfg).apply(chromosome);
}

}  // namespace varattack::lang
