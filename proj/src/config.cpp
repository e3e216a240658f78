#include "veritas/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace veritas {

void PipelineConfig::validate() const {
  sentinel.validate();
  specialists.validate();
  meta.validate();
  if (specialists.copd_acceptable_spo2 >= sentinel.spo2_low_threshold) {
    throw InvariantError("copd_acceptable_spo2 must be below spo2_low_threshold");
  }
  if (paths.taxonomy.empty() || paths.dataset_dir.empty() || paths.report_dir.empty()) {
    throw InvariantError("config paths must be nonempty");
  }
}

namespace {

void reject_unknown(const Json& j, const char* section, std::initializer_list<const char*> known) {
  if (!j.is_object()) throw ParseError(std::string("config section '") + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const char* k : known) found = found || key == k;
    if (!found) throw ParseError(std::string("unknown config key '") + section + "." + key + "'");
  }
}

void read_number(const Json& j, const char* key, double& out) {
  if (j.contains(key)) out = require_number(j, key);
}

void read_string(const Json& j, const char* key, std::string& out) {
  if (j.contains(key)) out = require_string(j, key);
}

}  // namespace

Json to_json(const PipelineConfig& c) {
  Json weights = Json::object();
  for (const auto& [d, w] : c.meta.domain_weights) weights[std::string(to_string(d))] = w;
  return {
      {"seed", c.seed},
      {"sentinel",
       {{"spo2_low_threshold", c.sentinel.spo2_low_threshold},
        {"hr_high_threshold", c.sentinel.hr_high_threshold},
        {"hr_low_threshold", c.sentinel.hr_low_threshold}}},
      {"specialists",
       {{"copd_acceptable_spo2", c.specialists.copd_acceptable_spo2},
        {"copd_baseline_margin", c.specialists.copd_baseline_margin},
        {"hr_activity_allowance", c.specialists.hr_activity_allowance},
        {"nocturnal_dip_allowance", c.specialists.nocturnal_dip_allowance},
        {"default_baseline_spo2", c.specialists.default_baseline_spo2},
        {"bradycardia_personal_floor", c.specialists.bradycardia_personal_floor},
        {"high_confidence", c.specialists.high_confidence},
        {"low_confidence", c.specialists.low_confidence}}},
      {"meta",
       {{"resolution_margin", c.meta.resolution_margin},
        {"cooldown_window_minutes", c.meta.cooldown_window.count()},
        {"domain_weights", weights}}},
      {"paths",
       {{"taxonomy", c.paths.taxonomy},
        {"dataset_dir", c.paths.dataset_dir},
        {"report_dir", c.paths.report_dir}}},
  };
}

PipelineConfig config_from_json(const Json& j) {
  PipelineConfig c;
  reject_unknown(j, "config", {"seed", "sentinel", "specialists", "meta", "paths"});
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ParseError("config seed must be an unsigned integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("sentinel")) {
    const Json& s = j["sentinel"];
    reject_unknown(s, "sentinel", {"spo2_low_threshold", "hr_high_threshold", "hr_low_threshold"});
    read_number(s, "spo2_low_threshold", c.sentinel.spo2_low_threshold);
    read_number(s, "hr_high_threshold", c.sentinel.hr_high_threshold);
    read_number(s, "hr_low_threshold", c.sentinel.hr_low_threshold);
  }
  if (j.contains("specialists")) {
    const Json& s = j["specialists"];
    reject_unknown(s, "specialists",
                   {"copd_acceptable_spo2", "copd_baseline_margin", "hr_activity_allowance",
                    "nocturnal_dip_allowance", "default_baseline_spo2", "bradycardia_personal_floor",
                    "high_confidence", "low_confidence"});
    auto& o = c.specialists;
    read_number(s, "copd_acceptable_spo2", o.copd_acceptable_spo2);
    read_number(s, "copd_baseline_margin", o.copd_baseline_margin);
    read_number(s, "hr_activity_allowance", o.hr_activity_allowance);
    read_number(s, "nocturnal_dip_allowance", o.nocturnal_dip_allowance);
    read_number(s, "default_baseline_spo2", o.default_baseline_spo2);
    read_number(s, "bradycardia_personal_floor", o.bradycardia_personal_floor);
    read_number(s, "high_confidence", o.high_confidence);
    read_number(s, "low_confidence", o.low_confidence);
  }
  if (j.contains("meta")) {
    const Json& s = j["meta"];
    reject_unknown(s, "meta", {"resolution_margin", "cooldown_window_minutes", "domain_weights"});
    read_number(s, "resolution_margin", c.meta.resolution_margin);
    if (s.contains("cooldown_window_minutes")) {
      if (!s["cooldown_window_minutes"].is_number_integer()) {
        throw ParseError("meta.cooldown_window_minutes must be an integer");
      }
      c.meta.cooldown_window = std::chrono::minutes(s["cooldown_window_minutes"].get<long>());
    }
    if (s.contains("domain_weights")) {
      const Json& w = s["domain_weights"];
      if (!w.is_object()) throw ParseError("meta.domain_weights must be an object");
      for (const auto& [name, value] : w.items()) {
        if (!value.is_number()) throw ParseError("weight for '" + name + "' must be a number");
        c.meta.domain_weights[parse_enum<AgentDomain>(name)] = value.get<double>();
      }
    }
  }
  if (j.contains("paths")) {
    const Json& s = j["paths"];
    reject_unknown(s, "paths", {"taxonomy", "dataset_dir", "report_dir"});
    read_string(s, "taxonomy", c.paths.taxonomy);
    read_string(s, "dataset_dir", c.paths.dataset_dir);
    read_string(s, "report_dir", c.paths.report_dir);
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(parse_json_text(buf.str(), path.string()));
}

}  // namespace veritas
