#include <fstream>
#include <json.hpp>
#include <sstream>

#include "varattack/core/errors.hpp"
#include "varattack/gateway/replay.hpp"
#include "varattack/gateway/wire.hpp"

namespace varattack::gateway {
namespace {

std::vector<std::string> request_order(const SubstitutesRequest& req) {
  std::vector<std::string> order;
  for (const auto& v : req.variables) order.push_back(v.name);
  return order;
}

}  // namespace

SubstitutesCache SubstitutesCache::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open substitutes cache '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  using ojson = nlohmann::ordered_json;
  ojson doc;
  try {
    doc = ojson::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError("substitutes cache '" + path + "': " + e.what());
  }
  if (!doc.is_array()) throw ProtocolError("substitutes cache '" + path + "' must be a JSON array");
  SubstitutesCache cache;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("request") || !entry.contains("response")) {
      throw ProtocolError("substitutes cache '" + path + "': entry needs request and response");
    }
    // Round-trip through the decoders so keys are canonical and bodies valid.
    auto req = wire::decode_substitutes_request(entry["request"].dump());
    auto resp = wire::decode_substitutes_response(entry["response"].dump());
    cache.insert(req, resp);
  }
  return cache;
}

void SubstitutesCache::save(const std::string& path) const {
  using ojson = nlohmann::ordered_json;
  std::lock_guard lock(mu_);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write substitutes cache '" + path + "'");
  out << "[\n";
  bool first = true;
  for (const auto& [req, resp] : entries_) {
    if (!first) out << ",\n";
    first = false;
    ojson entry;
    entry["request"] = ojson::parse(req);
    entry["response"] = ojson::parse(resp);
    out << entry.dump();
  }
  out << "\n]\n";
}

std::optional<RawSubstitutes> SubstitutesCache::lookup(const SubstitutesRequest& request) const {
  std::string key = wire::encode_substitutes_request(request);
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return wire::decode_substitutes_response(it->second);
}

void SubstitutesCache::insert(const SubstitutesRequest& request, const RawSubstitutes& response) {
  std::string key = wire::encode_substitutes_request(request);
  std::string value = wire::encode_substitutes_response(response, request_order(request));
  std::lock_guard lock(mu_);
  entries_[std::move(key)] = std::move(value);
}

std::size_t SubstitutesCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

RawSubstitutes ReplayBackend::substitutes(const SubstitutesRequest& request) {
  if (auto hit = cache_.lookup(request)) return *hit;
  if (mode_ == Mode::Replay) {
    throw ProtocolError("substitutes request not present in the recording");
  }
  RawSubstitutes fresh = inner_.substitutes(request);
  cache_.insert(request, fresh);
  return fresh;
}

}  // namespace varattack::gateway
