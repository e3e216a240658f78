#include "veritas/json_io.hpp"

namespace veritas {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::string require_string(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

bool require_bool(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_boolean()) throw ParseError(std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

namespace {

std::int64_t require_integer(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::optional<double> optional_number(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

Json value_json(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) return {{"type", "bool"}, {"value", x}};
        else if constexpr (std::is_same_v<T, std::int64_t>) return {{"type", "integer"}, {"value", x}};
        else if constexpr (std::is_same_v<T, double>) return {{"type", "real"}, {"value", x}};
        else if constexpr (std::is_same_v<T, std::string>) return {{"type", "text"}, {"value", x}};
        else if constexpr (std::is_same_v<T, AccelLevel>) return {{"type", "accel_level"}, {"value", enum_json(x)}};
        else if constexpr (std::is_same_v<T, DeviceStatus>) return {{"type", "device_status"}, {"value", enum_json(x)}};
        else if constexpr (std::is_same_v<T, Position>) return {{"type", "position"}, {"value", enum_json(x)}};
        else if constexpr (std::is_same_v<T, Activity>) return {{"type", "activity"}, {"value", enum_json(x)}};
        else return {{"type", "timestamp"}, {"value", format_minute(x)}};
      },
      v);
}

FieldValue value_from_json(const Json& j) {
  const std::string type = require_string(j, "type");
  if (type == "bool") return require_bool(j, "value");
  if (type == "integer") return require_integer(j, "value");
  if (type == "real") return require_number(j, "value");
  if (type == "text") return require_string(j, "value");
  if (type == "accel_level") return require_enum<AccelLevel>(j, "value");
  if (type == "device_status") return require_enum<DeviceStatus>(j, "value");
  if (type == "position") return require_enum<Position>(j, "value");
  if (type == "activity") return require_enum<Activity>(j, "value");
  if (type == "timestamp") return parse_minute(require_string(j, "value"));
  throw ParseError("unknown value type '" + type + "'");
}

}  // namespace

Json to_json(const TaggedValue& v) {
  Json j = value_json(v.value());
  j["provenance"] = enum_json(v.provenance());
  j["source_id"] = v.source_id();
  j["observed_at"] = format_minute(v.observed_at());
  return j;
}

TaggedValue tagged_value_from_json(const Json& j) {
  return TaggedValue(value_from_json(j), require_enum<ProvenanceTag>(j, "provenance"),
                     require_string(j, "source_id"), parse_minute(require_string(j, "observed_at")));
}

Json to_json(const Epoch& e) {
  Json j = {{"patient_id", e.patient_id},
            {"timestamp", format_minute(e.timestamp)},
            {"spo2", e.spo2},
            {"hr", e.hr},
            {"accel_level", enum_json(e.accel_level)},
            {"device_status", enum_json(e.device_status)},
            {"probe_cover_present", e.probe_cover_present},
            {"position", enum_json(e.position)}};
  j["self_reported_activity"] =
      e.self_reported_activity ? enum_json(*e.self_reported_activity) : Json(nullptr);
  j["ambient_condition"] = e.ambient_condition ? Json(*e.ambient_condition) : Json(nullptr);
  return j;
}

Epoch epoch_from_json(const Json& j) {
  Epoch e;
  e.patient_id = require_integer(j, "patient_id");
  e.timestamp = parse_minute(require_string(j, "timestamp"));
  e.spo2 = require_number(j, "spo2");
  e.hr = require_number(j, "hr");
  e.accel_level = require_enum<AccelLevel>(j, "accel_level");
  e.device_status = require_enum<DeviceStatus>(j, "device_status");
  e.probe_cover_present = require_bool(j, "probe_cover_present");
  e.position = require_enum<Position>(j, "position");
  if (auto it = j.find("self_reported_activity"); it != j.end() && !it->is_null()) {
    e.self_reported_activity = require_enum<Activity>(j, "self_reported_activity");
  }
  if (auto it = j.find("ambient_condition"); it != j.end() && !it->is_null()) {
    e.ambient_condition = require_string(j, "ambient_condition");
  }
  return e;
}

Json to_json(const PatientContext& c) {
  return {{"patient_id", c.patient_id},
          {"copd_documented", c.copd_documented},
          {"baseline_spo2", c.baseline_spo2 ? Json(*c.baseline_spo2) : Json(nullptr)},
          {"baseline_hr", c.baseline_hr ? Json(*c.baseline_hr) : Json(nullptr)},
          {"rate_limiting_medication", c.rate_limiting_medication}};
}

PatientContext context_from_json(const Json& j) {
  PatientContext c;
  c.patient_id = require_integer(j, "patient_id");
  c.copd_documented = require_bool(j, "copd_documented");
  c.baseline_spo2 = optional_number(j, "baseline_spo2");
  c.baseline_hr = optional_number(j, "baseline_hr");
  c.rate_limiting_medication = require_bool(j, "rate_limiting_medication");
  check_context(c);
  return c;
}

Json to_json(const VeritasRecord& r) {
  Json fields = Json::object();
  for (const auto& [field, value] : r.fields) fields[std::string(to_string(field))] = to_json(value);
  Json flags = Json::array();
  for (const auto& f : r.conversation_flags) flags.push_back(to_json(f));
  return {{"fields", fields}, {"conversation_flags", flags}};
}

VeritasRecord record_from_json(const Json& j) {
  VeritasRecord r;
  for (const auto& [name, value] : require(j, "fields").items()) {
    r.fields.emplace(parse_enum<Field>(name), tagged_value_from_json(value));
  }
  for (const auto& f : require(j, "conversation_flags")) {
    r.conversation_flags.push_back(tagged_value_from_json(f));
  }
  return r;
}

Json to_json(const AgentClaim& c) {
  return {{"domain", enum_json(c.domain)},
          {"recommendation", enum_json(c.recommendation)},
          {"confidence", c.confidence},
          {"risk_level", enum_json(c.risk_level)},
          {"rationale_codes", c.rationale_codes}};
}

AgentClaim claim_from_json(const Json& j) {
  AgentClaim c;
  c.domain = require_enum<AgentDomain>(j, "domain");
  c.recommendation = require_enum<Recommendation>(j, "recommendation");
  c.confidence = require_number(j, "confidence");
  c.risk_level = require_enum<RiskLevel>(j, "risk_level");
  for (const auto& code : require(j, "rationale_codes")) {
    if (!code.is_string()) throw ParseError("rationale codes must be strings");
    c.rationale_codes.push_back(code.get<std::string>());
  }
  check_claim(c);
  return c;
}

Json to_json(const SystemDecision& d) {
  Json claims = Json::array();
  for (const auto& c : d.contributing_claims) claims.push_back(to_json(c));
  return {{"verdict", enum_json(d.verdict)},
          {"contributing_claims", claims},
          {"resolution_path", enum_json(d.resolution_path)},
          {"decided_at", format_minute(d.decided_at)}};
}

SystemDecision decision_from_json(const Json& j) {
  SystemDecision d;
  d.verdict = require_enum<Verdict>(j, "verdict");
  for (const auto& c : require(j, "contributing_claims")) d.contributing_claims.push_back(claim_from_json(c));
  d.resolution_path = require_enum<ResolutionPath>(j, "resolution_path");
  d.decided_at = parse_minute(require_string(j, "decided_at"));
  return d;
}

}  // namespace veritas
