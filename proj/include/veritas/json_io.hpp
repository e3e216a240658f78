#pragma once

// Canonical JSON encoding for the shared domain types: snake_case keys,
// enumerations as lowercase snake_case strings, timestamps as "YYYY-MM-DDTHH:MMZ".

#include <string>

#include "json.hpp"
#include "veritas/core.hpp"

namespace veritas {

using Json = nlohmann::json;

Json to_json(const TaggedValue& v);
TaggedValue tagged_value_from_json(const Json& j);

Json to_json(const Epoch& e);
Epoch epoch_from_json(const Json& j);

Json to_json(const PatientContext& c);
PatientContext context_from_json(const Json& j);

Json to_json(const VeritasRecord& r);
VeritasRecord record_from_json(const Json& j);

Json to_json(const AgentClaim& c);
AgentClaim claim_from_json(const Json& j);

Json to_json(const SystemDecision& d);
SystemDecision decision_from_json(const Json& j);

// Small helpers shared by the other decoders. All throw ParseError with the key name.
const Json& require(const Json& j, const char* key);
double require_number(const Json& j, const char* key);
std::string require_string(const Json& j, const char* key);
bool require_bool(const Json& j, const char* key);

template <typename E>
E require_enum(const Json& j, const char* key) {
  return parse_enum<E>(require_string(j, key));
}

template <typename E>
Json enum_json(E e) {
  return std::string(to_string(e));
}

Json parse_json_text(const std::string& text, const std::string& what);

}  // namespace veritas
