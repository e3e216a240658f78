#pragma once

#include <stdexcept>
#include <vector>

#include "veritas/core.hpp"
#include "veritas/routing.hpp"
#include "veritas/sentinel.hpp"

namespace veritas {

struct SpecialistConfig {
  double copd_acceptable_spo2 = 86.0;
  // COPD floor is max(copd_acceptable_spo2, baseline_spo2 - copd_baseline_margin).
  double copd_baseline_margin = 2.0;
  double hr_activity_allowance = 20.0;
  double nocturnal_dip_allowance = 3.0;
  // Used by the nocturnal dip rule when the EHR carries no SpO2 baseline.
  double default_baseline_spo2 = 96.0;
  double bradycardia_personal_floor = 40.0;
  double high_confidence = 0.9;
  double low_confidence = 0.4;

  void validate() const;
  bool operator==(const SpecialistConfig&) const = default;
};

// A claim was requested from a specialist the router did not select.
class NotRoutedHere : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

AgentClaim evaluate_probe_integrity(const CandidateAlert& alert, const RoutingDecision& routing,
                                    const SpecialistConfig& cfg);
AgentClaim evaluate_activity_integrity(const CandidateAlert& alert, const RoutingDecision& routing,
                                       const SpecialistConfig& cfg);
AgentClaim evaluate_tachycardia(const CandidateAlert& alert, const RoutingDecision& routing,
                                const SpecialistConfig& cfg);
AgentClaim evaluate_bradycardia(const CandidateAlert& alert, const RoutingDecision& routing,
                                const SpecialistConfig& cfg);
AgentClaim evaluate_copd(const CandidateAlert& alert, const RoutingDecision& routing,
                         const SpecialistConfig& cfg);
AgentClaim evaluate_nocturnal(const CandidateAlert& alert, const RoutingDecision& routing,
                              const SpecialistConfig& cfg);

AgentClaim evaluate(AgentDomain domain, const CandidateAlert& alert, const RoutingDecision& routing,
                    const SpecialistConfig& cfg);

// One claim per routed target, in AgentDomain order.
std::vector<AgentClaim> evaluate_routed(const CandidateAlert& alert, const RoutingDecision& routing,
                                        const SpecialistConfig& cfg);

}  // namespace veritas
