#include "veritas/meta_sentinel.hpp"

namespace veritas {

std::map<AgentDomain, double> MetaConfig::default_weights() {
  std::map<AgentDomain, double> w;
  for (AgentDomain d : all_values<AgentDomain>()) w[d] = 1.0;
  return w;
}

double MetaConfig::weight(AgentDomain d) const {
  auto it = domain_weights.find(d);
  return it == domain_weights.end() ? 1.0 : it->second;
}

void MetaConfig::validate() const {
  if (!(resolution_margin > 0.0 && resolution_margin < 1.0)) {
    throw InvariantError("resolution_margin must lie in (0,1)");
  }
  if (cooldown_window.count() <= 0) throw InvariantError("cooldown_window must be positive");
  for (const auto& [d, w] : domain_weights) {
    if (!(w > 0.0)) throw InvariantError("weight for " + std::string(to_string(d)) + " must be positive");
  }
}

void DecisionHistory::append(PatientId patient, HistoryEntry entry) {
  auto& seq = entries_[patient];
  if (!seq.empty() && !(seq.back().at < entry.at)) {
    throw HistoryOrderError("decision for patient " + std::to_string(patient) + " at " +
                            format_minute(entry.at) + " is not after " +
                            format_minute(seq.back().at));
  }
  seq.push_back(std::move(entry));
}

const std::vector<HistoryEntry>& DecisionHistory::of(PatientId patient) const {
  static const std::vector<HistoryEntry> empty;
  auto it = entries_.find(patient);
  return it == entries_.end() ? empty : it->second;
}

const HistoryEntry* DecisionHistory::recent_identical(PatientId patient, const AlertTypeSet& types,
                                                      Minute now,
                                                      std::chrono::minutes window) const {
  const auto& seq = of(patient);
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    if (now - it->at > window) break;
    if (it->at <= now && it->alert_types == types) return &*it;
  }
  return nullptr;
}

ClaimBalance balance(const std::vector<AgentClaim>& claims, const MetaConfig& cfg) {
  ClaimBalance b;
  for (const auto& c : claims) {
    if (c.recommendation == Recommendation::Suppress) b.suppress += cfg.weight(c.domain) * c.confidence;
    else if (c.recommendation == Recommendation::Escalate) b.escalate += cfg.weight(c.domain) * c.confidence;
  }
  return b;
}

SystemDecision resolve(const std::vector<AgentClaim>& claims, const RoutingDecision& routing,
                       const CandidateAlert& alert, DecisionHistory& history,
                       const MetaConfig& cfg) {
  if (claims.empty()) throw EmptyClaims("resolve called without specialist claims");

  const PatientId patient = alert.view.patient_id().value_or(0);
  const Minute now = alert.raised_at;
  SystemDecision d;
  d.contributing_claims = claims;
  d.decided_at = now;

  const bool duplicate = alert.view.device_status() == DeviceStatus::DuplicateAlert;
  const HistoryEntry* prior =
      duplicate ? nullptr : history.recent_identical(patient, alert.alert_types, now, cfg.cooldown_window);

  if (prior) {
    d.verdict = prior->decision.verdict;
    d.resolution_path = ResolutionPath::Debounced;
  } else if (routing.targets.size() == 1 && claims.size() == 1 &&
             claims.front().recommendation != Recommendation::Indeterminate &&
             cfg.weight(claims.front().domain) * claims.front().confidence >= cfg.resolution_margin) {
    d.verdict = claims.front().recommendation == Recommendation::Suppress ? Verdict::Suppress
                                                                          : Verdict::Escalate;
    d.resolution_path = ResolutionPath::SingleDomain;
  } else {
    const ClaimBalance b = balance(claims, cfg);
    if (b.suppress - b.escalate >= cfg.resolution_margin) {
      d.verdict = Verdict::Suppress;
      d.resolution_path = ResolutionPath::WeightedAggregation;
    } else if (b.escalate - b.suppress >= cfg.resolution_margin) {
      d.verdict = Verdict::Escalate;
      d.resolution_path = ResolutionPath::WeightedAggregation;
    } else {
      d.verdict = Verdict::Escalate;
      d.resolution_path = ResolutionPath::AmbiguityDefault;
    }
  }

  history.append(patient, {now, alert.alert_types, d});
  return d;
}

}  // namespace veritas
