#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "varattack/core/config.hpp"
#include "varattack/core/types.hpp"
#include "varattack/lang/extract.hpp"

namespace varattack::lang {

/// Replaces the single occurrence `occ` by `mask_token`; every other byte is
/// kept. Throws SpanError if occ does not slice an identifier of src.
SourceUnit mask_occurrence(const SourceUnit& src, const OccurrenceSpan& occ,
                           std::string_view mask_token);

/// Lexically valid for `lang`, not reserved, and not already present as an
/// identifier anywhere in src.
bool is_valid_substitute(std::string_view name, const SourceUnit& src, Language lang);
bool is_valid_substitute(std::string_view name, const NameSet& identifiers, Language lang);

/// Applies chromosomes to one snippet. Holds the extracted variables and the
/// original tree signature so that repeated renames (one per search
/// candidate) parse the original only once.
class Renamer {
 public:
  Renamer(SourceUnit src, SnippetAnalysis analysis);
  static Renamer for_source(const SourceUnit& src, const AttackConfig& cfg);

  const SourceUnit& source() const { return src_; }
  const std::vector<Identifier>& variables() const { return analysis_.variables; }
  const NameSet& identifiers() const { return analysis_.identifiers; }
  Chromosome identity() const { return Chromosome::identity(analysis_.variables); }

  bool is_valid_substitute(std::string_view name) const;

  /// Rewrites every occurrence of each changed gene. The result is checked
  /// to re-parse into the original tree shape.
  ///
  /// Throws InvalidName for a substitute that breaks the lexical rule or is
  /// reserved, CollisionError for one that already occurs in the snippet or
  /// is shared by two genes, and StructureMismatch if the variant parses
  /// differently.
  SourceUnit apply(const Chromosome& chromosome) const;

 private:
  SourceUnit src_;
  SnippetAnalysis analysis_;
  std::string signature_;
};

/// One-shot convenience over Renamer.
SourceUnit rename(const SourceUnit& src, const Chromosome& chromosome,
                  const AttackConfig& cfg = {});

}  // namespace varattack::lang
