#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "veritas/json_io.hpp"
#include "veritas/meta_sentinel.hpp"
#include "veritas/sentinel.hpp"
#include "veritas/specialists.hpp"

namespace veritas {

struct PipelinePaths {
  std::string taxonomy = "data/taxonomy.json";
  std::string dataset_dir = "out/dataset";
  std::string report_dir = "out/report";
  bool operator==(const PipelinePaths&) const = default;
};

// Defaults reproduce the reference run.
struct PipelineConfig {
  SentinelConfig sentinel;
  SpecialistConfig specialists;
  MetaConfig meta;
  std::uint64_t seed = 42;
  PipelinePaths paths;

  // Throws InvariantError.
  void validate() const;
  bool operator==(const PipelineConfig&) const = default;
};

Json to_json(const PipelineConfig& c);
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const Json& j);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace veritas
