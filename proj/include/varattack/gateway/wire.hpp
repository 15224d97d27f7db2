#pragma once

// JSON bodies of the HTTP protocol:
//   POST /v1/classify     {"code", "code_pair"} -> {"label", "confidences"}
//   POST /v1/substitutes  {"code", "top_j", "top_k", "variables"} -> {"substitutes"}
//   GET  /v1/health       -> {"status", "model"}
// Decoders throw ProtocolError on any schema violation. Unknown extra fields
// are ignored.

#include <optional>
#include <string>
#include <string_view>

#include "varattack/gateway/backend.hpp"

namespace varattack::gateway::wire {

struct ClassifyRequest {
  std::string code;
  std::optional<std::string> code_pair;
};

std::string encode_classify_request(const ClassifyRequest& req);
ClassifyRequest decode_classify_request(std::string_view body);

std::string encode_prediction(const Prediction& p);
/// Schema only; prediction invariants are checked by the Gateway.
Prediction decode_prediction(std::string_view body);

std::string encode_substitutes_request(const SubstitutesRequest& req);
SubstitutesRequest decode_substitutes_request(std::string_view body);

/// Variables are emitted in the order given by `order` (then any others).
std::string encode_substitutes_response(const RawSubstitutes& subs,
                                        const std::vector<std::string>& order = {});
RawSubstitutes decode_substitutes_response(std::string_view body);

std::string encode_health(const HealthInfo& h);
HealthInfo decode_health(std::string_view body);

}  // namespace varattack::gateway::wire
