#include "veritas/specialists.hpp"

#include <algorithm>

namespace veritas {

void SpecialistConfig::validate() const {
  if (!(0.0 <= low_confidence && low_confidence < high_confidence && high_confidence <= 1.0)) {
    throw InvariantError("specialist confidences must satisfy 0 <= low < high <= 1");
  }
  if (!(copd_acceptable_spo2 < 94.0)) {
    throw InvariantError("copd_acceptable_spo2 must be below 94");
  }
  if (!(copd_baseline_margin >= 0.0 && hr_activity_allowance >= 0.0 &&
        nocturnal_dip_allowance >= 0.0 && bradycardia_personal_floor > 0.0 &&
        default_baseline_spo2 > 0.0)) {
    throw InvariantError("specialist allowances must be non-negative");
  }
}

namespace {

void require_routed(AgentDomain d, const RoutingDecision& routing) {
  if (!routing.routes_to(d)) {
    throw NotRoutedHere("claim requested from " + std::string(to_string(d)) +
                        " which was not routed this alert");
  }
}

AgentClaim suppress(AgentDomain d, const SpecialistConfig& cfg, std::string code) {
  return {d, Recommendation::Suppress, cfg.high_confidence, RiskLevel::Low, {std::move(code)}};
}

AgentClaim escalate(AgentDomain d, const SpecialistConfig& cfg, std::string code) {
  return {d, Recommendation::Escalate, cfg.high_confidence, RiskLevel::High, {std::move(code)}};
}

AgentClaim indeterminate(AgentDomain d, const SpecialistConfig& cfg, std::string code) {
  return {d, Recommendation::Indeterminate, cfg.low_confidence, RiskLevel::Medium, {std::move(code)}};
}

bool is_artefact(std::optional<DeviceStatus> s) {
  return s && (*s == DeviceStatus::MotionArtefact || *s == DeviceStatus::ProbeCover);
}

bool nocturnal(const SpecialistView& v) {
  const auto ts = v.timestamp();
  return ts && in_nocturnal_window(*ts);
}

}  // namespace

AgentClaim evaluate_probe_integrity(const CandidateAlert& alert, const RoutingDecision& routing,
                                    const SpecialistConfig& cfg) {
  constexpr auto D = AgentDomain::ProbeIntegrity;
  require_routed(D, routing);
  const auto status = alert.view.device_status();
  if (is_artefact(status)) return suppress(D, cfg, "artefact_flagged");
  if (alert.view.probe_cover_present().value_or(false)) return suppress(D, cfg, "probe_cover_present");
  if (!status) return indeterminate(D, cfg, "status_unavailable");
  switch (*status) {
    case DeviceStatus::SystemFlag:
      return indeterminate(D, cfg, "system_flag_no_context");
    case DeviceStatus::Ok:
      return indeterminate(D, cfg, "no_artefact_evidence");
    default:
      return indeterminate(D, cfg, "non_artefact_status");
  }
}

AgentClaim evaluate_activity_integrity(const CandidateAlert& alert, const RoutingDecision& routing,
                                       const SpecialistConfig& cfg) {
  constexpr auto D = AgentDomain::ActivityIntegrity;
  require_routed(D, routing);
  const auto accel = alert.view.accel_level();
  const auto reported = alert.view.self_reported_activity();
  if (!accel) return indeterminate(D, cfg, "accelerometer_unavailable");

  const bool reports_motion =
      reported && (*reported == Activity::Walking || *reported == Activity::Exercising);
  if (*accel != AccelLevel::Still) {
    if (!reported || reports_motion) return suppress(D, cfg, "motion_explains_alert");
    return indeterminate(D, cfg, "activity_contradiction");
  }
  if (reports_motion) return indeterminate(D, cfg, "activity_contradiction");
  return escalate(D, cfg, "no_activity_explanation");
}

AgentClaim evaluate_tachycardia(const CandidateAlert& alert, const RoutingDecision& routing,
                                const SpecialistConfig& cfg) {
  constexpr auto D = AgentDomain::Tachycardia;
  require_routed(D, routing);
  const SpecialistView& v = alert.view;
  const auto accel = v.accel_level();
  if (accel && *accel != AccelLevel::Still) return suppress(D, cfg, "activity_context");
  const auto hr = v.hr();
  const auto baseline = v.baseline_hr();
  if (hr && baseline && *hr <= *baseline + cfg.hr_activity_allowance) {
    return suppress(D, cfg, "within_baseline_allowance");
  }
  if (is_artefact(v.device_status())) return suppress(D, cfg, "artefact_status");
  return escalate(D, cfg, "isolated_high_hr");
}

AgentClaim evaluate_bradycardia(const CandidateAlert& alert, const RoutingDecision& routing,
                                const SpecialistConfig& cfg) {
  constexpr auto D = AgentDomain::Bradycardia;
  require_routed(D, routing);
  const SpecialistView& v = alert.view;
  const auto hr = v.hr();
  if (!hr || *hr < cfg.bradycardia_personal_floor) return escalate(D, cfg, "below_personal_floor");
  if (v.rate_limiting_medication().value_or(false)) return suppress(D, cfg, "rate_limiting_medication");
  if (nocturnal(v)) return suppress(D, cfg, "nocturnal_bradycardia");
  return escalate(D, cfg, "unexplained_bradycardia");
}

AgentClaim evaluate_copd(const CandidateAlert& alert, const RoutingDecision& routing,
                         const SpecialistConfig& cfg) {
  constexpr auto D = AgentDomain::Copd;
  require_routed(D, routing);
  const SpecialistView& v = alert.view;
  if (!v.copd_documented().value_or(false)) return indeterminate(D, cfg, "copd_not_documented");
  const auto spo2 = v.spo2();
  if (!spo2) return indeterminate(D, cfg, "spo2_unavailable");
  if (*spo2 < cfg.copd_acceptable_spo2) return escalate(D, cfg, "below_copd_floor");
  const auto baseline = v.baseline_spo2();
  if (!baseline) return indeterminate(D, cfg, "baseline_unavailable");
  const double floor = std::max(cfg.copd_acceptable_spo2, *baseline - cfg.copd_baseline_margin);
  if (*spo2 >= floor) return suppress(D, cfg, "within_copd_baseline");
  return escalate(D, cfg, "below_copd_floor");
}

AgentClaim evaluate_nocturnal(const CandidateAlert& alert, const RoutingDecision& routing,
                              const SpecialistConfig& cfg) {
  constexpr auto D = AgentDomain::Nocturnal;
  require_routed(D, routing);
  const SpecialistView& v = alert.view;
  if (!nocturnal(v)) return indeterminate(D, cfg, "outside_nocturnal_window");
  if (v.position() != Position::Supine) return indeterminate(D, cfg, "position_not_supine");
  if (v.accel_level() != AccelLevel::Still) return indeterminate(D, cfg, "not_still");
  if (alert.has(AlertType::LowSpO2)) {
    const double baseline = v.baseline_spo2().value_or(cfg.default_baseline_spo2);
    // LowSpO2 only fires with spo2 present.
    if (baseline - *v.spo2() > cfg.nocturnal_dip_allowance) {
      return indeterminate(D, cfg, "dip_exceeds_allowance");
    }
  }
  return suppress(D, cfg, "positional_nocturnal_dip");
}

AgentClaim evaluate(AgentDomain domain, const CandidateAlert& alert, const RoutingDecision& routing,
                    const SpecialistConfig& cfg) {
  switch (domain) {
    case AgentDomain::ProbeIntegrity:
      return evaluate_probe_integrity(alert, routing, cfg);
    case AgentDomain::ActivityIntegrity:
      return evaluate_activity_integrity(alert, routing, cfg);
    case AgentDomain::Tachycardia:
      return evaluate_tachycardia(alert, routing, cfg);
    case AgentDomain::Bradycardia:
      return evaluate_bradycardia(alert, routing, cfg);
    case AgentDomain::Copd:
      return evaluate_copd(alert, routing, cfg);
    case AgentDomain::Nocturnal:
      return evaluate_nocturnal(alert, routing, cfg);
  }
  throw std::logic_error("unhandled agent domain");
}

std::vector<AgentClaim> evaluate_routed(const CandidateAlert& alert, const RoutingDecision& routing,
                                        const SpecialistConfig& cfg) {
  std::vector<AgentClaim> claims;
  claims.reserve(routing.targets.size());
  // std::set iterates in enumerator order.
  for (AgentDomain d : routing.targets) claims.push_back(evaluate(d, alert, routing, cfg));
  return claims;
}

}  // namespace veritas
