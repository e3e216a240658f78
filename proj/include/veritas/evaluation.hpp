#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "veritas/config.hpp"
#include "veritas/core.hpp"
#include "veritas/routing.hpp"
#include "veritas/synthgen.hpp"

namespace veritas {

enum class Outcome { TrueSuppression, FalseEscalation, Indeterminate };

VERITAS_ENUM_NAMES(Outcome, {Outcome::TrueSuppression, "true_suppression"},
                   {Outcome::FalseEscalation, "false_escalation"},
                   {Outcome::Indeterminate, "indeterminate"})

class EmptyDecisions : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidCounts : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DatasetTaxonomyMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Case-level rule: all Suppress -> TrueSuppression, any Escalate -> FalseEscalation.
Outcome aggregate_case(std::span<const SystemDecision> decisions);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Wilson score interval for a binomial proportion. For successes == n the lower
// bound is n / (n + z^2).
Interval wilson_interval(long successes, long n, double z = 1.96);

// Exact (Clopper-Pearson) interval, used only to annotate the report.
Interval clopper_pearson_interval(long successes, long n, double alpha = 0.05);

struct EpochTrace {
  PatientId patient_id = 0;
  Minute timestamp{};
  DeviceStatus device_status = DeviceStatus::Ok;
  AlertTypeSet alert_types;  // empty when the sentinel stayed quiet
  std::optional<RoutingDecision> routing;
  std::optional<SystemDecision> decision;
};

struct CaseResult {
  std::string case_id;
  DomainClass domain_class = DomainClass::ProbeIntegrity;
  PatientId patient_id = 0;
  Outcome outcome = Outcome::TrueSuppression;
  std::vector<SystemDecision> epoch_decisions;
  // Device status at the first escalating epoch.
  std::optional<DeviceStatus> failure_device_status;
  std::vector<EpochTrace> epochs;
};

struct DomainRow {
  std::size_t n = 0;
  std::size_t ts = 0;
  std::size_t fe = 0;
  std::size_t ind = 0;
  double tsr = 0.0;
  double fer = 0.0;
};

struct WilsonRow {
  Interval wilson;
  Interval clopper_pearson;
};

struct EvaluationReport {
  std::size_t ts_count = 0;
  std::size_t fe_count = 0;
  std::size_t ind_count = 0;
  double tsr = 0.0;
  double fer = 0.0;
  double indr = 0.0;
  std::map<DomainClass, DomainRow> per_domain;
  std::map<DomainClass, WilsonRow> wilson_cis;
  std::map<DeviceStatus, std::size_t> failure_modes;
  std::size_t cases = 0;
  std::size_t epochs = 0;
  std::size_t quiet_epochs = 0;  // epochs that raised no candidate alert
  double mean_epochs_per_case = 0.0;
  std::vector<std::pair<std::string, Outcome>> case_outcomes;  // sorted by case_id
};

struct EvaluationRun {
  EvaluationReport report;
  std::vector<CaseResult> cases;  // dataset order
};

// Runs one case through all five layers in timestamp order with a fresh decision history.
CaseResult run_case(const GeneratedCase& c, const PipelineConfig& cfg);

// Requires the dataset's case ids to match the taxonomy's one-to-one; stratifies by the
// taxonomy's domain class.
EvaluationRun evaluate(const Dataset& dataset, const Taxonomy& taxonomy, const PipelineConfig& cfg,
                       unsigned jobs = 1);

EvaluationReport summarize(const std::vector<CaseResult>& cases);

Json to_json(const EvaluationReport& r);
EvaluationReport report_from_json(const Json& j);
std::string render_text(const EvaluationReport& r);
// One line per decided epoch, in dataset order.
std::string decision_log_jsonl(const EvaluationRun& run);
// "TSR 83.7% FER 16.3% INDR 0.0%"
std::string summary_line(const EvaluationReport& r);

// Differences between a report and the reference outcome distribution (overall counts,
// per-class rows, failure modes). Empty when they agree exactly.
std::vector<std::string> golden_mismatches(const EvaluationReport& r);

}  // namespace veritas
