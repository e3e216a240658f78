#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace veritas {

// Wall-clock minute in UTC. Epochs are one-minute rows, so nothing finer is kept.
using Minute = std::chrono::sys_time<std::chrono::minutes>;

using PatientId = std::int64_t;

inline constexpr PatientId kFirstPatientId = 3847291;
inline constexpr PatientId kLastPatientId = 3847388;

inline constexpr double kSpo2Min = 70.0;
inline constexpr double kSpo2Max = 100.0;
inline constexpr double kHrMin = 25.0;
inline constexpr double kHrMax = 220.0;

// Raised when an input string or document does not match the schema.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a value violates a type invariant at construction.
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ProvenanceTag { DeviceVerified, PatientReported, EhrDerived, Inferred };
enum class DeviceStatus { Ok, MotionArtefact, ProbeCover, SystemFlag, ThresholdMarginal, DuplicateAlert };
enum class AccelLevel { Still, Light, Vigorous };
enum class Position { Upright, Supine, Prone, Lateral };
enum class Activity { Resting, Walking, Exercising };
enum class AlertType { LowSpO2, HighHR, LowHR, SignalQuality };
enum class AgentDomain { ProbeIntegrity, ActivityIntegrity, Tachycardia, Bradycardia, Copd, Nocturnal };
enum class Recommendation { Suppress, Escalate, Indeterminate };
enum class RiskLevel { Low, Medium, High };
enum class Verdict { Suppress, Escalate };
enum class ResolutionPath { SingleDomain, WeightedAggregation, AmbiguityDefault, Debounced };

template <typename E>
struct EnumNames;

#define VERITAS_ENUM_NAMES(E, ...)                                                   \
  template <>                                                                        \
  struct EnumNames<E> {                                                              \
    static constexpr auto values = std::to_array<std::pair<E, std::string_view>>({   \
        __VA_ARGS__});                                                               \
    static constexpr std::string_view type_name = #E;                                \
  };

VERITAS_ENUM_NAMES(ProvenanceTag, {ProvenanceTag::DeviceVerified, "device_verified"},
                   {ProvenanceTag::PatientReported, "patient_reported"},
                   {ProvenanceTag::EhrDerived, "ehr_derived"}, {ProvenanceTag::Inferred, "inferred"})
VERITAS_ENUM_NAMES(DeviceStatus, {DeviceStatus::Ok, "ok"},
                   {DeviceStatus::MotionArtefact, "motion_artefact"},
                   {DeviceStatus::ProbeCover, "probe_cover"}, {DeviceStatus::SystemFlag, "system_flag"},
                   {DeviceStatus::ThresholdMarginal, "threshold_marginal"},
                   {DeviceStatus::DuplicateAlert, "duplicate_alert"})
VERITAS_ENUM_NAMES(AccelLevel, {AccelLevel::Still, "still"}, {AccelLevel::Light, "light"},
                   {AccelLevel::Vigorous, "vigorous"})
VERITAS_ENUM_NAMES(Position, {Position::Upright, "upright"}, {Position::Supine, "supine"},
                   {Position::Prone, "prone"}, {Position::Lateral, "lateral"})
VERITAS_ENUM_NAMES(Activity, {Activity::Resting, "resting"}, {Activity::Walking, "walking"},
                   {Activity::Exercising, "exercising"})
VERITAS_ENUM_NAMES(AlertType, {AlertType::LowSpO2, "low_spo2"}, {AlertType::HighHR, "high_hr"},
                   {AlertType::LowHR, "low_hr"}, {AlertType::SignalQuality, "signal_quality"})
VERITAS_ENUM_NAMES(AgentDomain, {AgentDomain::ProbeIntegrity, "probe_integrity"},
                   {AgentDomain::ActivityIntegrity, "activity_integrity"},
                   {AgentDomain::Tachycardia, "tachycardia"},
                   {AgentDomain::Bradycardia, "bradycardia"}, {AgentDomain::Copd, "copd"},
                   {AgentDomain::Nocturnal, "nocturnal"})
VERITAS_ENUM_NAMES(Recommendation, {Recommendation::Suppress, "suppress"},
                   {Recommendation::Escalate, "escalate"},
                   {Recommendation::Indeterminate, "indeterminate"})
VERITAS_ENUM_NAMES(RiskLevel, {RiskLevel::Low, "low"}, {RiskLevel::Medium, "medium"},
                   {RiskLevel::High, "high"})
VERITAS_ENUM_NAMES(Verdict, {Verdict::Suppress, "suppress"}, {Verdict::Escalate, "escalate"})
VERITAS_ENUM_NAMES(ResolutionPath, {ResolutionPath::SingleDomain, "single_domain"},
                   {ResolutionPath::WeightedAggregation, "weighted_aggregation"},
                   {ResolutionPath::AmbiguityDefault, "ambiguity_default"},
                   {ResolutionPath::Debounced, "debounced"})

template <typename E>
constexpr std::string_view to_string(E e) {
  for (const auto& [value, name] : EnumNames<E>::values) {
    if (value == e) return name;
  }
  return "?";
}

template <typename E>
E parse_enum(std::string_view s) {
  for (const auto& [value, name] : EnumNames<E>::values) {
    if (name == s) return value;
  }
  throw ParseError("unknown " + std::string(EnumNames<E>::type_name) + " value '" +
                   std::string(s) + "'");
}

template <typename E>
constexpr auto all_values() {
  std::array<E, EnumNames<E>::values.size()> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = EnumNames<E>::values[i].first;
  return out;
}

// "2022-06-14T02:31Z"
std::string format_minute(Minute t);
Minute parse_minute(std::string_view s);

// Nocturnal window is [22:00, 06:00) in the timestamp's own clock.
bool in_nocturnal_window(Minute t);
int minute_of_day(Minute t);

// Payload of a tagged field. Categorical statements from conversations are plain strings.
using FieldValue = std::variant<bool, std::int64_t, double, std::string, AccelLevel, DeviceStatus,
                                Position, Activity, Minute>;

class TaggedValue {
 public:
  TaggedValue(FieldValue value, ProvenanceTag provenance, std::string source_id, Minute observed_at)
      : value_(std::move(value)),
        provenance_(provenance),
        source_id_(std::move(source_id)),
        observed_at_(observed_at) {}

  const FieldValue& value() const { return value_; }
  ProvenanceTag provenance() const { return provenance_; }
  const std::string& source_id() const { return source_id_; }
  Minute observed_at() const { return observed_at_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(value_);
  }

  bool operator==(const TaggedValue&) const = default;

 private:
  FieldValue value_;
  ProvenanceTag provenance_;
  std::string source_id_;
  Minute observed_at_;
};

struct Epoch {
  PatientId patient_id = 0;
  Minute timestamp{};
  double spo2 = 0.0;
  double hr = 0.0;
  AccelLevel accel_level = AccelLevel::Still;
  DeviceStatus device_status = DeviceStatus::Ok;
  bool probe_cover_present = false;
  Position position = Position::Upright;
  std::optional<Activity> self_reported_activity;
  std::optional<std::string> ambient_condition;

  bool operator==(const Epoch&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationResult validate_epoch(const Epoch& e);
// Stricter check for generated data: the monitoring period is June to August 2022.
bool in_generation_period(Minute t);

struct PatientContext {
  PatientId patient_id = 0;
  bool copd_documented = false;
  std::optional<double> baseline_spo2;
  std::optional<double> baseline_hr;
  bool rate_limiting_medication = false;

  bool operator==(const PatientContext&) const = default;
};

// Throws InvariantError when COPD is documented without a baseline SpO2.
void check_context(const PatientContext& c);

// Every tagged field a record may carry. Identifiers are tagged too; nothing is untagged.
enum class Field {
  PatientId,
  Timestamp,
  Spo2,
  Hr,
  AccelLevel,
  DeviceStatus,
  ProbeCoverPresent,
  Position,
  SelfReportedActivity,
  AmbientCondition,
  CopdDocumented,
  BaselineSpo2,
  BaselineHr,
  RateLimitingMedication,
};

VERITAS_ENUM_NAMES(Field, {Field::PatientId, "patient_id"}, {Field::Timestamp, "timestamp"},
                   {Field::Spo2, "spo2"}, {Field::Hr, "hr"}, {Field::AccelLevel, "accel_level"},
                   {Field::DeviceStatus, "device_status"},
                   {Field::ProbeCoverPresent, "probe_cover_present"},
                   {Field::Position, "position"},
                   {Field::SelfReportedActivity, "self_reported_activity"},
                   {Field::AmbientCondition, "ambient_condition"},
                   {Field::CopdDocumented, "copd_documented"},
                   {Field::BaselineSpo2, "baseline_spo2"}, {Field::BaselineHr, "baseline_hr"},
                   {Field::RateLimitingMedication, "rate_limiting_medication"})

using FieldMap = std::map<Field, TaggedValue>;

// Unified per-epoch record. Optional inputs that were never observed are simply absent.
struct VeritasRecord {
  FieldMap fields;
  std::vector<TaggedValue> conversation_flags;

  const TaggedValue* find(Field f) const {
    auto it = fields.find(f);
    return it == fields.end() ? nullptr : &it->second;
  }

  bool operator==(const VeritasRecord&) const = default;
};

struct AgentClaim {
  AgentDomain domain = AgentDomain::ProbeIntegrity;
  Recommendation recommendation = Recommendation::Indeterminate;
  double confidence = 0.0;
  RiskLevel risk_level = RiskLevel::Low;
  std::vector<std::string> rationale_codes;

  bool operator==(const AgentClaim&) const = default;
};

void check_claim(const AgentClaim& c);

struct SystemDecision {
  Verdict verdict = Verdict::Escalate;
  std::vector<AgentClaim> contributing_claims;
  ResolutionPath resolution_path = ResolutionPath::AmbiguityDefault;
  Minute decided_at{};

  bool operator==(const SystemDecision&) const = default;
};

using AlertTypeSet = std::set<AlertType>;
using DomainSet = std::set<AgentDomain>;

}  // namespace veritas
