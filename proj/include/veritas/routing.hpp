#pragma once

#include "veritas/core.hpp"
#include "veritas/sentinel.hpp"

namespace veritas {

struct RoutingDecision {
  DomainSet targets;
  // Set when the device status alone cannot tell the router which specialist owns the alert.
  bool ambiguity_flag = false;

  bool routes_to(AgentDomain d) const { return targets.count(d) != 0; }
  bool operator==(const RoutingDecision&) const = default;
};

// Layer 3. Fixed routing table over alert types and the provenance-filtered context:
//   ProbeIntegrity     signal-quality alert with motion_artefact / probe_cover / system_flag,
//                      or a probe cover reported on the device
//   ActivityIntegrity  physiological alert while moving (accelerometer or self-report)
//   Tachycardia        high HR
//   Bradycardia        low HR
//   Copd               low SpO2 with documented COPD
//   Nocturnal          physiological alert inside [22:00, 06:00)
// Low SpO2 in a non-COPD patient with no other owner goes to ProbeIntegrity, and so does
// any alert the table leaves unowned.
RoutingDecision route(const CandidateAlert& alert);

}  // namespace veritas
