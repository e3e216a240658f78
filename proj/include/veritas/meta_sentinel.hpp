#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "veritas/core.hpp"
#include "veritas/routing.hpp"
#include "veritas/sentinel.hpp"

namespace veritas {

struct MetaConfig {
  double resolution_margin = 0.3;
  std::chrono::minutes cooldown_window{10};
  std::map<AgentDomain, double> domain_weights = default_weights();

  double weight(AgentDomain d) const;
  void validate() const;
  bool operator==(const MetaConfig&) const = default;

  static std::map<AgentDomain, double> default_weights();
};

class EmptyClaims : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class HistoryOrderError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct HistoryEntry {
  Minute at{};
  AlertTypeSet alert_types;
  SystemDecision decision;
};

// Per-patient record of past verdicts used for cooldown. Timestamps strictly increase
// within a patient; different patients are independent.
class DecisionHistory {
 public:
  void append(PatientId patient, HistoryEntry entry);
  const std::vector<HistoryEntry>& of(PatientId patient) const;
  // Latest entry for this patient with the same alert set, decided within `window` of `now`.
  const HistoryEntry* recent_identical(PatientId patient, const AlertTypeSet& types, Minute now,
                                       std::chrono::minutes window) const;

 private:
  std::map<PatientId, std::vector<HistoryEntry>> entries_;
};

// Weighted sums used by the aggregation step. Indeterminate claims contribute to neither.
struct ClaimBalance {
  double suppress = 0.0;
  double escalate = 0.0;
};
ClaimBalance balance(const std::vector<AgentClaim>& claims, const MetaConfig& cfg);

// Layer 5. Always returns Suppress or Escalate:
//   1. same alert set for this patient within the cooldown window -> prior verdict,
//      unless the device reports duplicate_alert
//   2. a single routed domain with a definite claim whose weighted confidence clears the
//      margin -> that claim
//   3. weighted suppress/escalate balance clearing the margin -> the heavier side
//   4. anything else -> Escalate
// The verdict is appended to `history`.
SystemDecision resolve(const std::vector<AgentClaim>& claims, const RoutingDecision& routing,
                       const CandidateAlert& alert, DecisionHistory& history,
                       const MetaConfig& cfg);

}  // namespace veritas
