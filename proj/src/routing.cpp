#include "veritas/routing.hpp"

namespace veritas {

namespace {

bool moving(const SpecialistView& v) {
  const auto accel = v.accel_level();
  const auto reported = v.self_reported_activity();
  return (accel && *accel != AccelLevel::Still) ||
         (reported && (*reported == Activity::Walking || *reported == Activity::Exercising));
}

}  // namespace

RoutingDecision route(const CandidateAlert& alert) {
  const SpecialistView& v = alert.view;
  const auto status = v.device_status();
  const bool physio = alert.physiological();
  RoutingDecision d;

  if (alert.has(AlertType::SignalQuality) && status &&
      (*status == DeviceStatus::MotionArtefact || *status == DeviceStatus::ProbeCover ||
       *status == DeviceStatus::SystemFlag)) {
    d.targets.insert(AgentDomain::ProbeIntegrity);
  }
  if (v.probe_cover_present().value_or(false)) d.targets.insert(AgentDomain::ProbeIntegrity);
  if (physio && moving(v)) d.targets.insert(AgentDomain::ActivityIntegrity);
  if (alert.has(AlertType::HighHR)) d.targets.insert(AgentDomain::Tachycardia);
  if (alert.has(AlertType::LowHR)) d.targets.insert(AgentDomain::Bradycardia);

  const bool copd = v.copd_documented().value_or(false);
  if (alert.has(AlertType::LowSpO2) && copd) d.targets.insert(AgentDomain::Copd);

  const auto ts = v.timestamp();
  if (physio && ts && in_nocturnal_window(*ts)) d.targets.insert(AgentDomain::Nocturnal);

  if (d.targets.empty()) d.targets.insert(AgentDomain::ProbeIntegrity);

  d.ambiguity_flag = status && (*status == DeviceStatus::SystemFlag ||
                                *status == DeviceStatus::ThresholdMarginal);
  return d;
}

}  // namespace veritas
