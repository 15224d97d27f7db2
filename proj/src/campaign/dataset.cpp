#include "varattack/campaign/dataset.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "varattack/core/errors.hpp"

namespace varattack::campaign {
namespace {

using ojson = nlohmann::ordered_json;

std::string dump(const ojson& j) { return j.dump(-1, ' ', false, ojson::error_handler_t::strict); }

template <typename T>
T field(const nlohmann::json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw DatasetError(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DatasetError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

std::vector<DatasetRecord> read_dataset(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::set<std::string> ids;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "dataset line " + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError(where + ": " + e.what());
    }
    if (!j.is_object()) throw DatasetError(where + ": not a JSON object");
    DatasetRecord r;
    r.id = field<std::string>(j, "id", where);
    auto lang = language_from_string(field<std::string>(j, "language", where));
    if (!lang) throw DatasetError(where + ": unsupported language");
    r.language = *lang;
    r.code = field<std::string>(j, "code", where);
    if (auto it = j.find("code_pair"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) throw DatasetError(where + ": field 'code_pair' has the wrong type");
      r.code_pair = it->get<std::string>();
    }
    auto label = j.find("label");
    if (label == j.end() || !label->is_number_integer()) {
      throw DatasetError(where + ": field 'label' must be an integer");
    }
    if (label->get<long long>() < 0 || label->get<long long>() > 1'000'000) {
      throw DatasetError(where + ": label out of range");
    }
    r.label = label->get<int>();
    if (!ids.insert(r.id).second) throw DatasetError(where + ": duplicate id '" + r.id + "'");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DatasetRecord> load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset '" + path + "'");
  return read_dataset(in);
}

std::string encode_record(const DatasetRecord& r) {
  ojson j;
  j["id"] = r.id;
  j["language"] = std::string(to_string(r.language));
  j["code"] = r.code;
  j["code_pair"] = r.code_pair ? ojson(*r.code_pair) : ojson(nullptr);
  j["label"] = r.label;
  return dump(j);
}

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records) {
  for (const auto& r : records) out << encode_record(r) << '\n';
}

std::string encode_outcome(const OutcomeRecord& r) {
  const AttackOutcome& o = r.outcome;
  ojson j;
  j["id"] = r.id;
  j["verdict"] = std::string(to_string(o.verdict));
  j["stage"] = std::string(to_string(o.stage));
  j["adversarial_code"] = o.adversarial ? ojson(o.adversarial->text) : ojson(nullptr);
  ojson changes = ojson::array();
  if (o.chromosome) {
    for (const auto& g : o.chromosome->genes()) {
      if (g.changed()) changes.push_back({{"from", g.variable}, {"to", g.substitute}});
    }
  }
  j["changes"] = std::move(changes);
  j["classify_queries"] = o.classify_queries;
  j["mlm_queries"] = o.mlm_queries;
  j["num_variables"] = o.num_variables;
  if (o.min_confidence_variant) {
    j["fallback_code"] = o.min_confidence_variant->code.text;
    j["fallback_confidence"] = o.min_confidence_variant->confidence;
  } else {
    j["fallback_code"] = nullptr;
    j["fallback_confidence"] = nullptr;
  }
  j["error"] = o.error.empty() ? ojson(nullptr) : ojson(o.error);
  return dump(j);
}

OutcomeRecord decode_outcome(std::string_view line, Language language) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DatasetError(std::string("outcome: ") + e.what());
  }
  const std::string where = "outcome";
  OutcomeRecord r;
  r.id = field<std::string>(j, "id", where);
  AttackOutcome& o = r.outcome;
  try {
    o.verdict = parse_verdict(field<std::string>(j, "verdict", where));
    o.stage = parse_stage(field<std::string>(j, "stage", where));
  } catch (const DatasetError&) {
    throw;
  } catch (const std::exception& e) {
    throw DatasetError(where + ": " + e.what());
  }
  if (auto it = j.find("adversarial_code"); it != j.end() && it->is_string()) {
    o.adversarial = SourceUnit{language, it->get<std::string>(), r.id};
  }
  std::vector<Gene> genes;
  for (const auto& c : field<nlohmann::json>(j, "changes", where)) {
    genes.push_back({field<std::string>(c, "from", where), field<std::string>(c, "to", where)});
  }
  if (!genes.empty()) o.chromosome = Chromosome(std::move(genes));
  o.classify_queries = field<long>(j, "classify_queries", where);
  o.mlm_queries = field<long>(j, "mlm_queries", where);
  if (j.contains("num_variables")) o.num_variables = field<std::size_t>(j, "num_variables", where);
  if (auto it = j.find("fallback_code"); it != j.end() && it->is_string()) {
    TrackedVariant v;
    v.code = SourceUnit{language, it->get<std::string>(), r.id};
    v.confidence = field<double>(j, "fallback_confidence", where);
    o.min_confidence_variant = std::move(v);
  }
  if (auto it = j.find("error"); it != j.end() && it->is_string()) o.error = it->get<std::string>();
  return r;
}

void write_outcomes(std::ostream& out, const std::vector<OutcomeRecord>& outcomes) {
  for (const auto& r : outcomes) out << encode_outcome(r) << '\n';
}

std::vector<OutcomeRecord> read_outcomes(std::istream& in) {
  std::vector<OutcomeRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(decode_outcome(line));
  }
  return out;
}

std::vector<DatasetRecord> adversarial_training_set(const std::vector<DatasetRecord>& training,
                                                    const std::vector<OutcomeRecord>& outcomes) {
  std::map<std::string, const AttackOutcome*> by_id;
  for (const auto& o : outcomes) by_id.emplace(o.id, &o.outcome);
  std::vector<DatasetRecord> out;
  for (const auto& rec : training) {
    auto it = by_id.find(rec.id);
    if (it == by_id.end()) continue;
    const AttackOutcome& o = *it->second;
    const SourceUnit* chosen = nullptr;
    if (o.verdict == Verdict::Success && o.adversarial) {
      chosen = &*o.adversarial;
    } else if (o.verdict == Verdict::Failure && o.min_confidence_variant) {
      chosen = &o.min_confidence_variant->code;
    }
    if (!chosen) continue;
    DatasetRecord adv = rec;
    adv.code = chosen->text;
    out.push_back(std::move(adv));
  }
  return out;
}

void export_adv_training_set(const std::vector<DatasetRecord>& training,
                             const std::vector<OutcomeRecord>& outcomes, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write '" + path + "'");
  write_dataset(out, adversarial_training_set(training, outcomes));
  if (!out) throw DatasetError("failed writing '" + path + "'");
}

}  // namespace varattack::campaign
