#pragma once

#include <optional>
#include <string>

#include "veritas/core.hpp"
#include "veritas/provenance.hpp"
#include "veritas/routing.hpp"
#include "veritas/sentinel.hpp"

namespace fixtures {

using namespace veritas;

inline Minute at(const std::string& hhmm, const std::string& date = "2022-07-10") {
  return parse_minute(date + "T" + hhmm + "Z");
}

inline Epoch nominal_epoch(Minute t = at("14:00")) {
  Epoch e;
  e.patient_id = kFirstPatientId;
  e.timestamp = t;
  e.spo2 = 97.0;
  e.hr = 72.0;
  return e;
}

inline PatientContext plain_context() {
  PatientContext c;
  c.patient_id = kFirstPatientId;
  return c;
}

inline PatientContext copd_context(double baseline) {
  PatientContext c = plain_context();
  c.copd_documented = true;
  c.baseline_spo2 = baseline;
  return c;
}

inline SpecialistView view_of(const Epoch& e, const PatientContext& c = plain_context()) {
  return project_for_specialists(assemble(make_bundle(c, {e}), e.timestamp));
}

// Alert for a single epoch; the epoch must trip at least one threshold.
inline CandidateAlert alert_of(const Epoch& e, const PatientContext& c = plain_context()) {
  auto a = detect(view_of(e, c), SentinelConfig{});
  if (!a) throw std::logic_error("fixture epoch raised no alert");
  return *a;
}

inline AgentClaim claim(AgentDomain d, Recommendation r, double confidence) {
  AgentClaim c;
  c.domain = d;
  c.recommendation = r;
  c.confidence = confidence;
  return c;
}

}  // namespace fixtures

namespace fixtures {

// View of a single epoch with some fields removed, as if the source never supplied them.
inline SpecialistView view_without(const Epoch& e, const PatientContext& c,
                                   std::initializer_list<Field> missing) {
  VeritasRecord r = assemble(make_bundle(c, {e}), e.timestamp);
  for (Field f : missing) r.fields.erase(f);
  return project_for_specialists(r);
}

inline CandidateAlert manual_alert(const SpecialistView& v, AlertTypeSet types) {
  return CandidateAlert{std::move(types), {}, v, v.timestamp().value_or(Minute{})};
}

inline RoutingDecision routed_to(AgentDomain d) {
  RoutingDecision r;
  r.targets = {d};
  return r;
}

}  // namespace fixtures
