#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "varattack/core/language.hpp"
#include "varattack/core/types.hpp"

namespace varattack::campaign {

/// One JSONL line: {"id", "language", "code", "code_pair"?, "label"}.
struct DatasetRecord {
  std::string id;
  Language language = Language::C;
  std::string code;
  std::optional<std::string> code_pair;
  int label = 0;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

/// Throws DatasetError on malformed lines, unknown languages, negative labels
/// or duplicate ids. Blank lines are ignored.
std::vector<DatasetRecord> read_dataset(std::istream& in);
std::vector<DatasetRecord> load_dataset(const std::string& path);

std::string encode_record(const DatasetRecord& r);
void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records);

struct OutcomeRecord {
  std::string id;
  AttackOutcome outcome;
};

/// One outcomes line. Beyond the fixed fields ("id", "verdict", "stage",
/// "adversarial_code", "changes", "classify_queries", "mlm_queries") it carries
/// "num_variables", "fallback_code", "fallback_confidence" and "error", which
/// metrics and the adversarial-training export read back.
std::string encode_outcome(const OutcomeRecord& r);
OutcomeRecord decode_outcome(std::string_view line, Language language = Language::C);

void write_outcomes(std::ostream& out, const std::vector<OutcomeRecord>& outcomes);
/// Throws DatasetError on malformed lines.
std::vector<OutcomeRecord> read_outcomes(std::istream& in);

/// At most one example per training input, labels unchanged: Skipped items
/// are left out, Success contributes its first-found adversarial example and
/// Failure its lowest-confidence explored variant (if any was explored).
std::vector<DatasetRecord> adversarial_training_set(const std::vector<DatasetRecord>& training,
                                                    const std::vector<OutcomeRecord>& outcomes);
void export_adv_training_set(const std::vector<DatasetRecord>& training,
                             const std::vector<OutcomeRecord>& outcomes, const std::string& path);

}  // namespace varattack::campaign
