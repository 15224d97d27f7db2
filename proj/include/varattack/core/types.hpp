#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varattack/core/language.hpp"

namespace varattack {

/// One code snippet. `text` is raw UTF-8 and is addressed by byte offsets.
struct SourceUnit {
  Language language = Language::C;
  std::string text;
  std::string origin_id;

  friend bool operator==(const SourceUnit&, const SourceUnit&) = default;
};

/// Half-open byte range [byte_start, byte_end) covering one identifier token.
struct OccurrenceSpan {
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;

  std::size_t size() const { return byte_end - byte_start; }
  friend auto operator<=>(const OccurrenceSpan&, const OccurrenceSpan&) = default;
};

/// A renameable local variable together with every span bound to it.
struct Identifier {
  std::string name;
  std::vector<OccurrenceSpan> occurrences;  // ascending byte_start

  std::size_t first_offset() const { return occurrences.empty() ? 0 : occurrences.front().byte_start; }
  friend bool operator==(const Identifier&, const Identifier&) = default;
};

std::size_t total_occurrences(std::span<const Identifier> vars);

struct SubstituteCandidate {
  std::string name;
  double similarity = 0.0;

  friend bool operator==(const SubstituteCandidate&, const SubstituteCandidate&) = default;
};

/// Per-variable candidate names, each list sorted by descending similarity.
struct SubstituteSet {
  std::map<std::string, std::vector<SubstituteCandidate>> by_variable;

  /// Empty span for variables that have no entry.
  std::span<const SubstituteCandidate> candidates(const std::string& variable) const;
  bool any_candidates() const;

  friend bool operator==(const SubstituteSet&, const SubstituteSet&) = default;
};

struct Gene {
  std::string variable;
  std::string substitute;

  bool changed() const { return variable != substitute; }
  friend auto operator<=>(const Gene&, const Gene&) = default;
};

/// Complete variable -> substitute assignment, one gene per extracted
/// variable in canonical (first-occurrence) order.
class Chromosome {
 public:
  Chromosome() = default;
  explicit Chromosome(std::vector<Gene> genes) : genes_(std::move(genes)) {}

  static Chromosome identity(std::span<const Identifier> vars);

  const std::vector<Gene>& genes() const { return genes_; }
  std::size_t size() const { return genes_.size(); }
  bool empty() const { return genes_.empty(); }
  const Gene& operator[](std::size_t i) const { return genes_[i]; }

  std::optional<std::size_t> index_of(std::string_view variable) const;
  Chromosome with_substitute(std::size_t index, std::string substitute) const;
  Chromosome with_substitute(std::string_view variable, std::string substitute) const;

  std::size_t changed_count() const;
  bool is_identity() const { return changed_count() == 0; }

  /// `a:x,b:b` form; parse(serialize()) is the identity.
  std::string serialize() const;
  static Chromosome parse(std::string_view text);

  friend auto operator<=>(const Chromosome&, const Chromosome&) = default;

 private:
  std::vector<Gene> genes_;
};

/// Victim output. Validity is not assumed; see prediction_violation().
struct Prediction {
  int label = 0;
  std::vector<double> confidences;

  double confidence(int y) const;
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// nullopt when `p` is a well-formed prediction: >= 2 non-negative
/// confidences summing to 1 within 1e-6 and label == argmax (lowest index on
/// ties). Otherwise a human-readable reason.
std::optional<std::string> prediction_violation(const Prediction& p);

enum class Verdict { Success, Failure, Skipped };
enum class Stage { None, Greedy, GA };

std::string_view to_string(Verdict v);
std::string_view to_string(Stage s);
Verdict parse_verdict(std::string_view s);
Stage parse_stage(std::string_view s);

/// Lowest-confidence-on-y variant seen during an attack.
struct TrackedVariant {
  SourceUnit code;
  Chromosome chromosome;
  double confidence = 1.0;
};

struct AttackOutcome {
  Verdict verdict = Verdict::Skipped;
  Stage stage = Stage::None;
  std::optional<SourceUnit> adversarial;
  std::optional<Chromosome> chromosome;
  long classify_queries = 0;
  long mlm_queries = 0;

  std::size_t num_variables = 0;
  std::optional<TrackedVariant> min_confidence_variant;
  std::string error;  // empty unless a backend error ended the item
};

}  // namespace varattack
