#include "veritas/sentinel.hpp"

namespace veritas {

void SentinelConfig::validate() const {
  if (!(spo2_low_threshold > 0.0 && hr_high_threshold > 0.0 && hr_low_threshold > 0.0)) {
    throw InvariantError("sentinel thresholds must be positive");
  }
  if (!(hr_low_threshold < hr_high_threshold)) {
    throw InvariantError("sentinel hr_low_threshold must be below hr_high_threshold");
  }
}

bool CandidateAlert::physiological() const {
  return has(AlertType::LowSpO2) || has(AlertType::HighHR) || has(AlertType::LowHR);
}

std::optional<CandidateAlert> detect(const SpecialistView& view, const SentinelConfig& cfg) {
  std::map<AlertType, TaggedValue> fired;

  if (const TaggedValue* spo2 = view.find(Field::Spo2)) {
    if (spo2->as<double>() < cfg.spo2_low_threshold) fired.emplace(AlertType::LowSpO2, *spo2);
  }
  if (const TaggedValue* hr = view.find(Field::Hr)) {
    const double v = hr->as<double>();
    if (v > cfg.hr_high_threshold) fired.emplace(AlertType::HighHR, *hr);
    if (v < cfg.hr_low_threshold) fired.emplace(AlertType::LowHR, *hr);
  }
  if (const TaggedValue* status = view.find(Field::DeviceStatus)) {
    if (status->as<DeviceStatus>() != DeviceStatus::Ok) {
      fired.emplace(AlertType::SignalQuality, *status);
    }
  }
  if (fired.empty()) return std::nullopt;

  AlertTypeSet types;
  for (const auto& [type, value] : fired) types.insert(type);
  return CandidateAlert{std::move(types), std::move(fired), view,
                        view.timestamp().value_or(Minute{})};
}

}  // namespace veritas
