#include "veritas/provenance.hpp"

#include <algorithm>

namespace veritas {

namespace {

template <typename Entry>
const Entry* latest_at_or_before(const std::vector<Entry>& entries, Minute at) {
  const Entry* best = nullptr;
  for (const auto& e : entries) {
    if (e.at <= at && (!best || e.at >= best->at)) best = &e;
  }
  return best;
}

void check_patient(PatientId expected, PatientId got, const char* source) {
  if (expected != got) {
    throw PatientIdMismatch(std::string(source) + " refers to patient " + std::to_string(got) +
                            ", bundle is for " + std::to_string(expected));
  }
}

}  // namespace

SourceBundle make_bundle(const PatientContext& context, std::vector<Epoch> epochs) {
  SourceBundle b;
  b.ehr = context;
  for (auto& e : epochs) {
    if (e.self_reported_activity) {
      b.patient_reported.push_back({e.patient_id, e.timestamp, *e.self_reported_activity});
      e.self_reported_activity.reset();
    }
  }
  b.vitals_stream = std::move(epochs);
  return b;
}

VeritasRecord assemble(const SourceBundle& bundle, Minute at) {
  const PatientId pid = bundle.ehr.patient_id;
  for (const auto& e : bundle.vitals_stream) check_patient(pid, e.patient_id, kSourceVitals);
  for (const auto& c : bundle.conversation_log) check_patient(pid, c.patient_id, kSourceConversation);
  for (const auto& s : bundle.patient_reported) check_patient(pid, s.patient_id, kSourcePatientReported);

  auto it = std::find_if(bundle.vitals_stream.begin(), bundle.vitals_stream.end(),
                         [at](const Epoch& e) { return e.timestamp == at; });
  if (it == bundle.vitals_stream.end()) {
    throw NoEpochAtTimestamp("no epoch for patient " + std::to_string(pid) + " at " +
                             format_minute(at));
  }
  const Epoch& e = *it;

  VeritasRecord r;
  auto device = [&](Field f, FieldValue v) {
    r.fields.emplace(f, TaggedValue(std::move(v), ProvenanceTag::DeviceVerified, kSourceVitals, at));
  };
  device(Field::PatientId, e.patient_id);
  device(Field::Timestamp, e.timestamp);
  device(Field::Spo2, e.spo2);
  device(Field::Hr, e.hr);
  device(Field::AccelLevel, e.accel_level);
  device(Field::DeviceStatus, e.device_status);
  device(Field::ProbeCoverPresent, e.probe_cover_present);
  device(Field::Position, e.position);
  if (e.ambient_condition) device(Field::AmbientCondition, *e.ambient_condition);

  // EHR facts have no observation minute of their own; they are stamped with the epoch.
  auto ehr = [&](Field f, FieldValue v) {
    r.fields.emplace(f, TaggedValue(std::move(v), ProvenanceTag::EhrDerived, kSourceEhr, at));
  };
  const PatientContext& c = bundle.ehr;
  ehr(Field::CopdDocumented, c.copd_documented);
  if (c.baseline_spo2) ehr(Field::BaselineSpo2, *c.baseline_spo2);
  if (c.baseline_hr) ehr(Field::BaselineHr, *c.baseline_hr);
  ehr(Field::RateLimitingMedication, c.rate_limiting_medication);

  if (const SelfReport* s = latest_at_or_before(bundle.patient_reported, at)) {
    r.fields.emplace(Field::SelfReportedActivity,
                     TaggedValue(s->activity, ProvenanceTag::PatientReported,
                                 kSourcePatientReported, s->at));
  }

  if (const ConversationEntry* latest = latest_at_or_before(bundle.conversation_log, at)) {
    for (const auto& entry : bundle.conversation_log) {
      if (entry.at == latest->at) {
        r.conversation_flags.emplace_back(entry.statement, ProvenanceTag::PatientReported,
                                          kSourceConversation, entry.at);
      }
    }
  }
  return r;
}

const TaggedValue* SpecialistView::find(Field f) const {
  auto it = fields_.find(f);
  return it == fields_.end() ? nullptr : &it->second;
}

SpecialistView project_for_specialists(const VeritasRecord& r) {
  SpecialistView view;
  for (const auto& [field, value] : r.fields) {
    if (value.provenance() != ProvenanceTag::Inferred) view.fields_.emplace(field, value);
  }
  for (const auto& flag : r.conversation_flags) {
    if (flag.provenance() != ProvenanceTag::Inferred) view.conversation_flags_.push_back(flag);
  }
  return view;
}

}  // namespace veritas
