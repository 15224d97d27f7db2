#include "varattack/gateway/wire.hpp"

#include <json.hpp>
#include <set>

#include "varattack/core/errors.hpp"

namespace varattack::gateway::wire {
namespace {

using ojson = nlohmann::ordered_json;

ojson parse_object(std::string_view body, std::string_view what) {
  ojson j;
  try {
    j = ojson::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string(what) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw ProtocolError(std::string(what) + ": body is not a JSON object");
  return j;
}

const ojson& require(const ojson& j, const char* key, std::string_view what) {
  auto it = j.find(key);
  if (it == j.end()) throw ProtocolError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

std::string require_string(const ojson& j, const char* key, std::string_view what) {
  const ojson& v = require(j, key, what);
  if (!v.is_string()) throw ProtocolError(std::string(what) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

long long require_int(const ojson& j, const char* key, std::string_view what) {
  const ojson& v = require(j, key, what);
  if (!v.is_number_integer()) {
    throw ProtocolError(std::string(what) + ": '" + key + "' must be an integer");
  }
  return v.get<long long>();
}

double as_double(const ojson& v, std::string_view what) {
  if (!v.is_number()) throw ProtocolError(std::string(what) + ": expected a number");
  return v.get<double>();
}

ojson encode_variables(const std::vector<Identifier>& vars) {
  ojson arr = ojson::array();
  for (const auto& v : vars) {
    ojson occs = ojson::array();
    for (const auto& o : v.occurrences) {
      occs.push_back(ojson{{"byte_start", o.byte_start}, {"byte_end", o.byte_end}});
    }
    arr.push_back(ojson{{"name", v.name}, {"occurrences", std::move(occs)}});
  }
  return arr;
}

std::string dump(const ojson& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace

std::string encode_classify_request(const ClassifyRequest& req) {
  ojson j;
  j["code"] = req.code;
  j["code_pair"] = req.code_pair ? ojson(*req.code_pair) : ojson(nullptr);
  return dump(j);
}

ClassifyRequest decode_classify_request(std::string_view body) {
  constexpr std::string_view what = "classify request";
  ojson j = parse_object(body, what);
  ClassifyRequest req;
  req.code = require_string(j, "code", what);
  auto it = j.find("code_pair");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ProtocolError("classify request: 'code_pair' must be a string or null");
    req.code_pair = it->get<std::string>();
  }
  return req;
}

std::string encode_prediction(const Prediction& p) {
  ojson j;
  j["label"] = p.label;
  j["confidences"] = p.confidences;
  return dump(j);
}

Prediction decode_prediction(std::string_view body) {
  constexpr std::string_view what = "classify response";
  ojson j = parse_object(body, what);
  Prediction p;
  long long label = require_int(j, "label", what);
  if (label < 0 || label > (1LL << 30)) throw ProtocolError("classify response: label out of range");
  p.label = static_cast<int>(label);
  const ojson& conf = require(j, "confidences", what);
  if (!conf.is_array()) throw ProtocolError("classify response: 'confidences' must be an array");
  for (const auto& c : conf) p.confidences.push_back(as_double(c, what));
  return p;
}

std::string encode_substitutes_request(const SubstitutesRequest& req) {
  ojson j;
  j["code"] = req.code;
  j["top_j"] = req.top_j;
  j["top_k"] = req.top_k;
  j["variables"] = encode_variables(req.variables);
  return dump(j);
}

SubstitutesRequest decode_substitutes_request(std::string_view body) {
  constexpr std::string_view what = "substitutes request";
  ojson j = parse_object(body, what);
  SubstitutesRequest req;
  req.code = require_string(j, "code", what);
  req.top_j = static_cast<int>(require_int(j, "top_j", what));
  req.top_k = static_cast<int>(require_int(j, "top_k", what));
  if (req.top_j < 0 || req.top_k < 0) throw ProtocolError("substitutes request: negative top_j/top_k");
  const ojson& vars = require(j, "variables", what);
  if (!vars.is_array()) throw ProtocolError("substitutes request: 'variables' must be an array");
  for (const auto& v : vars) {
    if (!v.is_object()) throw ProtocolError("substitutes request: variable must be an object");
    Identifier id;
    id.name = require_string(v, "name", what);
    const ojson& occs = require(v, "occurrences", what);
    if (!occs.is_array()) throw ProtocolError("substitutes request: 'occurrences' must be an array");
    for (const auto& o : occs) {
      if (!o.is_object()) throw ProtocolError("substitutes request: occurrence must be an object");
      long long s = require_int(o, "byte_start", what);
      long long e = require_int(o, "byte_end", what);
      if (s < 0 || e <= s) throw ProtocolError("substitutes request: invalid occurrence span");
      id.occurrences.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(e)});
    }
    req.variables.push_back(std::move(id));
  }
  return req;
}

std::string encode_substitutes_response(const RawSubstitutes& subs,
                                        const std::vector<std::string>& order) {
  ojson map = ojson::object();
  auto emit = [&](const std::string& var, const std::vector<SubstituteCandidate>& list) {
    ojson arr = ojson::array();
    for (const auto& c : list) arr.push_back(ojson{{"name", c.name}, {"score", c.similarity}});
    map[var] = std::move(arr);
  };
  std::set<std::string> done;
  for (const auto& var : order) {
    auto it = subs.find(var);
    if (it != subs.end() && done.insert(var).second) emit(var, it->second);
  }
  for (const auto& [var, list] : subs) {
    if (!done.contains(var)) emit(var, list);
  }
  ojson j;
  j["substitutes"] = std::move(map);
  return dump(j);
}

RawSubstitutes decode_substitutes_response(std::string_view body) {
  constexpr std::string_view what = "substitutes response";
  ojson j = parse_object(body, what);
  const ojson& map = require(j, "substitutes", what);
  if (!map.is_object()) throw ProtocolError("substitutes response: 'substitutes' must be an object");
  RawSubstitutes out;
  for (auto it = map.begin(); it != map.end(); ++it) {
    if (!it.value().is_array()) {
      throw ProtocolError("substitutes response: candidates for '" + it.key() + "' must be an array");
    }
    auto& list = out[it.key()];
    for (const auto& c : it.value()) {
      if (!c.is_object()) throw ProtocolError("substitutes response: candidate must be an object");
      SubstituteCandidate cand;
      cand.name = require_string(c, "name", what);
      cand.similarity = as_double(require(c, "score", what), what);
      list.push_back(std::move(cand));
    }
  }
  return out;
}

std::string encode_health(const HealthInfo& h) {
  ojson j;
  j["status"] = h.status;
  j["model"] = h.model;
  return dump(j);
}

HealthInfo decode_health(std::string_view body) {
  constexpr std::string_view what = "health response";
  ojson j = parse_object(body, what);
  return {require_string(j, "status", what), require_string(j, "model", what)};
}

}  // namespace varattack::gateway::wire
