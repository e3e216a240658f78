#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "veritas/core.hpp"

namespace veritas {

// Pre-categorised conversation statement, e.g. "breathless" or "felt_dizzy".
struct ConversationEntry {
  PatientId patient_id = 0;
  Minute at{};
  std::string statement;
};

struct SelfReport {
  PatientId patient_id = 0;
  Minute at{};
  Activity activity = Activity::Resting;
};

// The four ground-truth sources for one patient. The patient_reported stream is the
// only source of self-reported activity; the same field on vitals_stream epochs is ignored.
struct SourceBundle {
  PatientContext ehr;
  std::vector<ConversationEntry> conversation_log;
  std::vector<Epoch> vitals_stream;
  std::vector<SelfReport> patient_reported;
};

class NoEpochAtTimestamp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PatientIdMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source identifiers carried on every tagged value.
inline constexpr const char* kSourceVitals = "vitals_stream";
inline constexpr const char* kSourceEhr = "ehr";
inline constexpr const char* kSourcePatientReported = "patient_reported";
inline constexpr const char* kSourceConversation = "conversation_log";

// Builds the bundle for one patient from dataset rows, moving each epoch's self-report
// into the patient_reported stream at that epoch's timestamp.
SourceBundle make_bundle(const PatientContext& context, std::vector<Epoch> epochs);

// Layer 1. Tags every field by source. Self-report and conversation entries are joined
// by recency: the latest entry with timestamp <= at (later list position wins ties).
VeritasRecord assemble(const SourceBundle& bundle, Minute at);

// Read-only view handed to every downstream agent. It can only be produced by
// project_for_specialists, so an Inferred value has no path into it.
class SpecialistView {
 public:
  const FieldMap& fields() const { return fields_; }
  const std::vector<TaggedValue>& conversation_flags() const { return conversation_flags_; }
  const TaggedValue* find(Field f) const;
  bool has(Field f) const { return find(f) != nullptr; }

  std::optional<PatientId> patient_id() const { return get<std::int64_t>(Field::PatientId); }
  std::optional<Minute> timestamp() const { return get<Minute>(Field::Timestamp); }
  std::optional<double> spo2() const { return get<double>(Field::Spo2); }
  std::optional<double> hr() const { return get<double>(Field::Hr); }
  std::optional<AccelLevel> accel_level() const { return get<AccelLevel>(Field::AccelLevel); }
  std::optional<DeviceStatus> device_status() const { return get<DeviceStatus>(Field::DeviceStatus); }
  std::optional<bool> probe_cover_present() const { return get<bool>(Field::ProbeCoverPresent); }
  std::optional<Position> position() const { return get<Position>(Field::Position); }
  std::optional<Activity> self_reported_activity() const {
    return get<Activity>(Field::SelfReportedActivity);
  }
  std::optional<bool> copd_documented() const { return get<bool>(Field::CopdDocumented); }
  std::optional<double> baseline_spo2() const { return get<double>(Field::BaselineSpo2); }
  std::optional<double> baseline_hr() const { return get<double>(Field::BaselineHr); }
  std::optional<bool> rate_limiting_medication() const {
    return get<bool>(Field::RateLimitingMedication);
  }

  bool operator==(const SpecialistView&) const = default;

 private:
  friend SpecialistView project_for_specialists(const VeritasRecord& r);
  SpecialistView() = default;

  template <typename T>
  std::optional<T> get(Field f) const {
    const TaggedValue* v = find(f);
    if (!v) return std::nullopt;
    return v->as<T>();
  }

  FieldMap fields_;
  std::vector<TaggedValue> conversation_flags_;
};

SpecialistView project_for_specialists(const VeritasRecord& r);

}  // namespace veritas
