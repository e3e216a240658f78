#pragma once

#include <map>
#include <optional>

#include "veritas/core.hpp"
#include "veritas/provenance.hpp"

namespace veritas {

struct SentinelConfig {
  double spo2_low_threshold = 94.0;
  double hr_high_threshold = 100.0;
  double hr_low_threshold = 50.0;

  void validate() const;
  bool operator==(const SentinelConfig&) const = default;
};

struct CandidateAlert {
  AlertTypeSet alert_types;
  std::map<AlertType, TaggedValue> triggering_values;
  SpecialistView view;
  Minute raised_at{};

  bool has(AlertType t) const { return alert_types.count(t) != 0; }
  // True when any of LowSpO2, HighHR, LowHR fired.
  bool physiological() const;
};

// Layer 2. Strict comparisons against each threshold; a field absent from the view
// can never trigger. Returns nullopt when nothing fires.
std::optional<CandidateAlert> detect(const SpecialistView& view, const SentinelConfig& cfg);

}  // namespace veritas
