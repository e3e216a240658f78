#include "veritas/core.hpp"

#include <charconv>
#include <cstdio>

namespace veritas {

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("malformed timestamp '" + std::string(whole) + "'");
  }
  return out;
}

}  // namespace

std::string format_minute(Minute t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const auto tod = t - day;
  const auto h = duration_cast<hours>(tod).count();
  const auto m = (tod - hours(h)).count();
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(h), static_cast<long long>(m));
  return buf;
}

Minute parse_minute(std::string_view s) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MMZ
  if (s.size() != 17 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != 'Z') {
    throw ParseError("malformed timestamp '" + std::string(s) + "'");
  }
  const year_month_day ymd{year{parse_int(s.substr(0, 4), s)},
                           month{static_cast<unsigned>(parse_int(s.substr(5, 2), s))},
                           day{static_cast<unsigned>(parse_int(s.substr(8, 2), s))}};
  const int h = parse_int(s.substr(11, 2), s);
  const int m = parse_int(s.substr(14, 2), s);
  if (!ymd.ok() || h > 23 || m > 59) {
    throw ParseError("invalid timestamp '" + std::string(s) + "'");
  }
  return Minute{sys_days{ymd}.time_since_epoch()} + hours{h} + minutes{m};
}

int minute_of_day(Minute t) {
  using namespace std::chrono;
  return static_cast<int>((t - floor<days>(t)).count());
}

bool in_nocturnal_window(Minute t) {
  const int m = minute_of_day(t);
  return m >= 22 * 60 || m < 6 * 60;
}

bool in_generation_period(Minute t) {
  using namespace std::chrono;
  const Minute begin{sys_days{year{2022} / June / 1}.time_since_epoch()};
  const Minute end{sys_days{year{2022} / September / 1}.time_since_epoch()};
  return t >= begin && t < end;
}

ValidationResult validate_epoch(const Epoch& e) {
  ValidationResult r;
  auto bound = [&](std::string field, double v, double lo, double hi) {
    // NaN fails both comparisons and is reported.
    if (!(v >= lo && v <= hi)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%s out of [%g,%g]", field.c_str(), lo, hi);
      r.violations.push_back({field, buf});
    }
  };
  bound("spo2", e.spo2, kSpo2Min, kSpo2Max);
  bound("hr", e.hr, kHrMin, kHrMax);
  if (e.patient_id < kFirstPatientId || e.patient_id > kLastPatientId) {
    r.violations.push_back({"patient_id", "patient_id out of [" + std::to_string(kFirstPatientId) +
                                              "," + std::to_string(kLastPatientId) + "]"});
  }
  return r;
}

void check_context(const PatientContext& c) {
  if (c.copd_documented && !c.baseline_spo2) {
    throw InvariantError("patient " + std::to_string(c.patient_id) +
                         ": copd_documented requires baseline_spo2");
  }
}

void check_claim(const AgentClaim& c) {
  if (!(c.confidence >= 0.0 && c.confidence <= 1.0)) {
    throw InvariantError("claim confidence out of [0,1]");
  }
}

}  // namespace veritas
