#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "veritas/core.hpp"
#include "veritas/json_io.hpp"

namespace veritas {

// Scenario class of a taxonomy entry; also the stratification key of the evaluation report.
enum class DomainClass {
  ProbeIntegrity,
  ActivityIntegrity,
  Copd,
  Bradycardia,
  Nocturnal,
  Tachycardia,
  MetaConflict,
  ProbeActivityConflict,
  ProbeConditionConflict,
};

VERITAS_ENUM_NAMES(DomainClass, {DomainClass::ProbeIntegrity, "probe_integrity"},
                   {DomainClass::ActivityIntegrity, "activity_integrity"},
                   {DomainClass::Copd, "copd"}, {DomainClass::Bradycardia, "bradycardia"},
                   {DomainClass::Nocturnal, "nocturnal"},
                   {DomainClass::Tachycardia, "tachycardia"},
                   {DomainClass::MetaConflict, "meta_conflict"},
                   {DomainClass::ProbeActivityConflict, "probe_activity_conflict"},
                   {DomainClass::ProbeConditionConflict, "probe_condition_conflict"})

// Shape the shipped taxonomy must have.
inline constexpr std::size_t kTaxonomyCases = 98;
inline constexpr std::size_t kTaxonomyEpochs = 530;
inline constexpr std::array<std::pair<DomainClass, std::size_t>, 9> kTaxonomyClassCounts{{
    {DomainClass::ProbeIntegrity, 23},
    {DomainClass::ActivityIntegrity, 8},
    {DomainClass::Copd, 13},
    {DomainClass::Bradycardia, 2},
    {DomainClass::Nocturnal, 3},
    {DomainClass::Tachycardia, 8},
    {DomainClass::MetaConflict, 30},
    {DomainClass::ProbeActivityConflict, 8},
    {DomainClass::ProbeConditionConflict, 3},
}};

// Measurement noise added after truncated sampling, N(0, 0.25^2).
inline constexpr double kNoiseSigma = 0.25;
inline constexpr int kMaxRejections = 1000;

class InvalidBounds : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidEntry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TaxonomyInvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deterministic random source. Normal and uniform variates are derived from the raw
// mt19937_64 output so a seed yields the same stream under any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Independent stream for one named unit of work.
  static Rng substream(std::uint64_t seed, const std::string& key);

  double uniform01();
  double normal(double mu, double sigma);
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double sample_truncated_gaussian(double mu, double sigma, double lower, double upper, Rng& rng);

struct ContinuousSpec {
  double mu = 0.0;
  double sigma = 1.0;
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const ContinuousSpec&) const = default;
};

// One value means fixed; several are drawn uniformly. "none" denotes an absent optional.
struct CategoricalSpec {
  std::vector<std::string> choices;
  bool operator==(const CategoricalSpec&) const = default;
};

struct TaxonomyEntry {
  std::string case_id;
  DomainClass domain_class = DomainClass::ProbeIntegrity;
  int epoch_count = 1;
  std::map<std::string, ContinuousSpec> continuous_params;
  std::map<std::string, CategoricalSpec> categorical_params;
  PatientContext context;  // patient_id is assigned at generation
  bool nocturnal = false;
  std::string expected_outcome_note;

  bool operator==(const TaxonomyEntry&) const = default;
};

using Taxonomy = std::vector<TaxonomyEntry>;

// Throws InvalidEntry naming the offending parameter.
void validate_entry(const TaxonomyEntry& e);
// Entry checks plus the shipped shape: case count, epoch total, per-class counts, unique ids.
void validate_taxonomy(const Taxonomy& t);

Json to_json(const TaxonomyEntry& e);
TaxonomyEntry taxonomy_entry_from_json(const Json& j);
Taxonomy load_taxonomy(const std::filesystem::path& path);

struct GeneratedCase {
  std::string case_id;
  DomainClass domain_class = DomainClass::ProbeIntegrity;
  PatientContext context;
  std::vector<Epoch> epochs;
  std::string hash;  // SHA-256 of the case's canonical JSON lines
};

struct Dataset {
  std::uint64_t seed = 0;
  std::vector<GeneratedCase> cases;
  std::size_t epoch_count() const;
};

// All randomness comes from a sub-stream keyed by (seed, case_id).
GeneratedCase generate_case(const TaxonomyEntry& entry, PatientId patient_id, Minute start_time,
                            std::uint64_t seed);

// Start minute for a case: a day in June-August 2022, inside [22:00, 06:00) for nocturnal
// entries and inside 08:00-20:00 otherwise, with every epoch of the case in that window.
Minute schedule_case(const TaxonomyEntry& entry, std::uint64_t seed);

Dataset generate_dataset(const Taxonomy& taxonomy, std::uint64_t seed, unsigned jobs = 1);

std::string sha256_hex(const std::string& data);
std::string case_hash(const GeneratedCase& c);

// epochs.jsonl, contexts.json, manifest.json
inline constexpr const char* kEpochsFile = "epochs.jsonl";
inline constexpr const char* kContextsFile = "contexts.json";
inline constexpr const char* kManifestFile = "manifest.json";

Json manifest_json(const Dataset& d);
void write_dataset(const Dataset& d, const std::filesystem::path& dir);

// Reads the three files back. Cases are rebuilt from the manifest; epochs are grouped by
// patient_id and sorted by timestamp. Throws ParseError on schema problems.
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace veritas
