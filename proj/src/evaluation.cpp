#include "veritas/evaluation.hpp"

#include <boost/math/distributions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "veritas/meta_sentinel.hpp"
#include "veritas/parallel.hpp"
#include "veritas/provenance.hpp"
#include "veritas/specialists.hpp"

namespace veritas {

Outcome aggregate_case(std::span<const SystemDecision> decisions) {
  if (decisions.empty()) throw EmptyDecisions("aggregate_case needs at least one decision");
  bool all_suppress = true;
  for (const auto& d : decisions) {
    if (d.verdict == Verdict::Escalate) return Outcome::FalseEscalation;
    all_suppress = all_suppress && d.verdict == Verdict::Suppress;
  }
  return all_suppress ? Outcome::TrueSuppression : Outcome::Indeterminate;
}

Interval wilson_interval(long successes, long n, double z) {
  if (n < 1 || successes < 0 || successes > n) {
    throw InvalidCounts("wilson_interval needs 0 <= successes <= n and n >= 1 (got " +
                        std::to_string(successes) + "/" + std::to_string(n) + ")");
  }
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Interval clopper_pearson_interval(long successes, long n, double alpha) {
  if (n < 1 || successes < 0 || successes > n) {
    throw InvalidCounts("clopper_pearson_interval needs 0 <= successes <= n and n >= 1");
  }
  namespace bm = boost::math;
  const double k = static_cast<double>(successes);
  const double nn = static_cast<double>(n);
  Interval out{0.0, 1.0};
  if (successes > 0) out.lower = bm::quantile(bm::beta_distribution<>(k, nn - k + 1.0), alpha / 2.0);
  if (successes < n) out.upper = bm::quantile(bm::beta_distribution<>(k + 1.0, nn - k), 1.0 - alpha / 2.0);
  return out;
}

CaseResult run_case(const GeneratedCase& c, const PipelineConfig& cfg) {
  CaseResult result;
  result.case_id = c.case_id;
  result.domain_class = c.domain_class;
  result.patient_id = c.context.patient_id;

  std::vector<Epoch> ordered = c.epochs;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Epoch& a, const Epoch& b) { return a.timestamp < b.timestamp; });
  const SourceBundle bundle = make_bundle(c.context, ordered);
  DecisionHistory history;

  for (const Epoch& e : ordered) {
    EpochTrace trace;
    trace.patient_id = e.patient_id;
    trace.timestamp = e.timestamp;
    trace.device_status = e.device_status;

    const SpecialistView view = project_for_specialists(assemble(bundle, e.timestamp));
    if (auto alert = detect(view, cfg.sentinel)) {
      trace.alert_types = alert->alert_types;
      const RoutingDecision routing = route(*alert);
      const auto claims = evaluate_routed(*alert, routing, cfg.specialists);
      SystemDecision decision = resolve(claims, routing, *alert, history, cfg.meta);
      if (decision.verdict == Verdict::Escalate && !result.failure_device_status) {
        result.failure_device_status = e.device_status;
      }
      result.epoch_decisions.push_back(decision);
      trace.routing = routing;
      trace.decision = std::move(decision);
    }
    result.epochs.push_back(std::move(trace));
  }

  // A case whose epochs never raised an alert had nothing to escalate.
  result.outcome = result.epoch_decisions.empty() ? Outcome::TrueSuppression
                                                  : aggregate_case(result.epoch_decisions);
  return result;
}

EvaluationRun evaluate(const Dataset& dataset, const Taxonomy& taxonomy, const PipelineConfig& cfg,
                       unsigned jobs) {
  std::map<std::string, const TaxonomyEntry*> by_id;
  for (const auto& e : taxonomy) by_id[e.case_id] = &e;
  if (by_id.size() != taxonomy.size()) throw DatasetTaxonomyMismatch("taxonomy has duplicate case ids");

  std::set<std::string> seen;
  std::set<PatientId> patients;
  for (const auto& c : dataset.cases) {
    if (!by_id.count(c.case_id)) {
      throw DatasetTaxonomyMismatch("dataset case '" + c.case_id + "' is not in the taxonomy");
    }
    if (!seen.insert(c.case_id).second) {
      throw DatasetTaxonomyMismatch("dataset lists case '" + c.case_id + "' twice");
    }
    if (!patients.insert(c.context.patient_id).second) {
      throw DatasetTaxonomyMismatch("patient " + std::to_string(c.context.patient_id) +
                                    " appears in more than one case");
    }
  }
  if (seen.size() != by_id.size()) {
    for (const auto& [id, entry] : by_id) {
      if (!seen.count(id)) throw DatasetTaxonomyMismatch("taxonomy case '" + id + "' has no data");
    }
  }

  EvaluationRun run;
  run.cases.resize(dataset.cases.size());
  parallel_for(dataset.cases.size(), jobs, [&](std::size_t i) {
    run.cases[i] = run_case(dataset.cases[i], cfg);
    run.cases[i].domain_class = by_id.at(dataset.cases[i].case_id)->domain_class;
  });
  run.report = summarize(run.cases);
  return run;
}

EvaluationReport summarize(const std::vector<CaseResult>& cases) {
  EvaluationReport r;
  for (DomainClass d : all_values<DomainClass>()) r.per_domain[d] = {};
  for (DeviceStatus s : all_values<DeviceStatus>()) r.failure_modes[s] = 0;

  for (const auto& c : cases) {
    DomainRow& row = r.per_domain[c.domain_class];
    ++row.n;
    switch (c.outcome) {
      case Outcome::TrueSuppression:
        ++r.ts_count;
        ++row.ts;
        break;
      case Outcome::FalseEscalation:
        ++r.fe_count;
        ++row.fe;
        if (c.failure_device_status) ++r.failure_modes[*c.failure_device_status];
        break;
      case Outcome::Indeterminate:
        ++r.ind_count;
        ++row.ind;
        break;
    }
    r.epochs += c.epochs.size();
    for (const auto& e : c.epochs) r.quiet_epochs += e.decision ? 0 : 1;
    r.case_outcomes.emplace_back(c.case_id, c.outcome);
  }
  std::sort(r.case_outcomes.begin(), r.case_outcomes.end());

  r.cases = cases.size();
  if (r.cases > 0) {
    const double n = static_cast<double>(r.cases);
    r.tsr = static_cast<double>(r.ts_count) / n;
    r.fer = static_cast<double>(r.fe_count) / n;
    r.indr = static_cast<double>(r.ind_count) / n;
    r.mean_epochs_per_case = static_cast<double>(r.epochs) / n;
  }
  for (auto& [d, row] : r.per_domain) {
    if (row.n == 0) continue;
    row.tsr = static_cast<double>(row.ts) / static_cast<double>(row.n);
    row.fer = static_cast<double>(row.fe) / static_cast<double>(row.n);
    const long ts = static_cast<long>(row.ts);
    const long n = static_cast<long>(row.n);
    r.wilson_cis[d] = {wilson_interval(ts, n), clopper_pearson_interval(ts, n)};
  }
  return r;
}

Json to_json(const EvaluationReport& r) {
  Json per_domain = Json::object();
  for (const auto& [d, row] : r.per_domain) {
    per_domain[std::string(to_string(d))] = {{"n", row.n},     {"ts", row.ts},   {"fe", row.fe},
                                             {"ind", row.ind}, {"tsr", row.tsr}, {"fer", row.fer}};
  }
  Json cis = Json::object();
  for (const auto& [d, w] : r.wilson_cis) {
    cis[std::string(to_string(d))] = {{"lower", w.wilson.lower},
                                      {"upper", w.wilson.upper},
                                      {"clopper_pearson_lower", w.clopper_pearson.lower},
                                      {"clopper_pearson_upper", w.clopper_pearson.upper}};
  }
  Json modes = Json::object();
  for (const auto& [s, n] : r.failure_modes) modes[std::string(to_string(s))] = n;
  Json outcomes = Json::array();
  for (const auto& [id, o] : r.case_outcomes) outcomes.push_back({{"case_id", id}, {"outcome", enum_json(o)}});
  return {{"overall",
           {{"ts_count", r.ts_count},
            {"fe_count", r.fe_count},
            {"ind_count", r.ind_count},
            {"tsr", r.tsr},
            {"fer", r.fer},
            {"indr", r.indr}}},
          {"per_domain", per_domain},
          {"wilson_cis", cis},
          {"failure_modes", modes},
          {"totals",
           {{"cases", r.cases},
            {"epochs", r.epochs},
            {"quiet_epochs", r.quiet_epochs},
            {"mean_epochs_per_case", r.mean_epochs_per_case}}},
          {"cases", outcomes}};
}

EvaluationReport report_from_json(const Json& j) {
  auto count = [](const Json& o, const char* key) {
    const Json& v = require(o, key);
    if (!v.is_number_unsigned()) throw ParseError(std::string("field '") + key + "' must be a count");
    return v.get<std::size_t>();
  };
  EvaluationReport r;
  const Json& overall = require(j, "overall");
  r.ts_count = count(overall, "ts_count");
  r.fe_count = count(overall, "fe_count");
  r.ind_count = count(overall, "ind_count");
  r.tsr = require_number(overall, "tsr");
  r.fer = require_number(overall, "fer");
  r.indr = require_number(overall, "indr");
  for (const auto& [name, row] : require(j, "per_domain").items()) {
    r.per_domain[parse_enum<DomainClass>(name)] = {count(row, "n"),  count(row, "ts"),
                                                   count(row, "fe"), count(row, "ind"),
                                                   require_number(row, "tsr"), require_number(row, "fer")};
  }
  for (const auto& [name, ci] : require(j, "wilson_cis").items()) {
    r.wilson_cis[parse_enum<DomainClass>(name)] = {
        {require_number(ci, "lower"), require_number(ci, "upper")},
        {require_number(ci, "clopper_pearson_lower"), require_number(ci, "clopper_pearson_upper")}};
  }
  for (const auto& [name, n] : require(j, "failure_modes").items()) {
    if (!n.is_number_unsigned()) throw ParseError("failure mode counts must be unsigned");
    r.failure_modes[parse_enum<DeviceStatus>(name)] = n.get<std::size_t>();
  }
  const Json& totals = require(j, "totals");
  r.cases = count(totals, "cases");
  r.epochs = count(totals, "epochs");
  r.quiet_epochs = count(totals, "quiet_epochs");
  r.mean_epochs_per_case = require_number(totals, "mean_epochs_per_case");
  for (const auto& c : require(j, "cases")) {
    r.case_outcomes.emplace_back(require_string(c, "case_id"), require_enum<Outcome>(c, "outcome"));
  }
  return r;
}

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double pct(double x) { return 100.0 * x; }

}  // namespace

std::string summary_line(const EvaluationReport& r) {
  return fmt("TSR %.1f%% FER %.1f%% INDR %.1f%%", pct(r.tsr), pct(r.fer), pct(r.indr));
}

std::string render_text(const EvaluationReport& r) {
  std::string out;
  out += "Overall performance\n";
  out += fmt("  %-26s %8s %8s\n", "Metric", "Count", "Rate");
  out += fmt("  %-26s %4zu/%-3zu %7.1f%%\n", "True Suppression (TS)", r.ts_count, r.cases, pct(r.tsr));
  out += fmt("  %-26s %4zu/%-3zu %7.1f%%\n", "False Escalation (FE)", r.fe_count, r.cases, pct(r.fer));
  out += fmt("  %-26s %4zu/%-3zu %7.1f%%\n", "Indeterminate (IND)", r.ind_count, r.cases, pct(r.indr));
  out += fmt("  Total cases %zu, %zu one-minute epochs, mean %.1f per case\n", r.cases, r.epochs,
             r.mean_epochs_per_case);
  if (r.quiet_epochs) out += fmt("  %zu epochs raised no candidate alert\n", r.quiet_epochs);
  out += "\n";

  out += "Stratified by domain\n";
  out += fmt("  %-26s %4s %4s %4s %7s %7s\n", "Domain", "n", "TS", "FE", "TSR", "FER");
  DomainRow total;
  for (const auto& [d, row] : r.per_domain) {
    out += fmt("  %-26s %4zu %4zu %4zu %6.0f%% %6.0f%%\n", std::string(to_string(d)).c_str(), row.n, row.ts,
               row.fe, pct(row.tsr), pct(row.fer));
    total.n += row.n;
    total.ts += row.ts;
    total.fe += row.fe;
  }
  out += fmt("  %-26s %4zu %4zu %4zu %6.1f%% %6.1f%%\n", "total", total.n, total.ts, total.fe, pct(r.tsr),
             pct(r.fer));
  out += "\n";

  out += "Wilson 95% confidence intervals for TSR\n";
  out += fmt("  %-26s %4s %7s %17s\n", "Domain", "n", "TSR", "95% CI");
  std::vector<std::string> notes;
  for (const auto& [d, w] : r.wilson_cis) {
    const DomainRow& row = r.per_domain.at(d);
    const std::string name(to_string(d));
    out += fmt("  %-26s %4zu %6.0f%% %7.1f%%-%5.1f%%\n", name.c_str(), row.n, pct(row.tsr),
               pct(w.wilson.lower), pct(w.wilson.upper));
    const double wl = std::round(pct(w.wilson.lower) * 10.0) / 10.0;
    const double cl = std::round(pct(w.clopper_pearson.lower) * 10.0) / 10.0;
    if (row.ts == row.n && wl != cl) {
      notes.push_back(fmt("  note: %s (%zu/%zu) Wilson lower bound %.1f%% = n/(n+z^2); the "
                          "Clopper-Pearson exact lower bound is %.1f%%.",
                          name.c_str(), row.ts, row.n, wl, cl));
    }
  }
  for (const auto& n : notes) out += n + "\n";
  out += "\n";

  out += "False escalation failure modes by device status at first escalation\n";
  out += fmt("  %-20s %5s\n", "Device status", "Count");
  for (const auto& [s, n] : r.failure_modes) {
    out += fmt("  %-20s %5zu\n", std::string(to_string(s)).c_str(), n);
  }
  out += "\n" + summary_line(r) + "\n";
  return out;
}

std::string decision_log_jsonl(const EvaluationRun& run) {
  std::string out;
  for (const auto& c : run.cases) {
    for (const auto& e : c.epochs) {
      if (!e.decision) continue;
      Json types = Json::array();
      for (AlertType t : e.alert_types) types.push_back(enum_json(t));
      Json targets = Json::array();
      for (AgentDomain d : e.routing->targets) targets.push_back(enum_json(d));
      Json line = {{"case_id", c.case_id},
                   {"patient_id", e.patient_id},
                   {"timestamp", format_minute(e.timestamp)},
                   {"device_status", enum_json(e.device_status)},
                   {"alert_types", types},
                   {"targets", targets},
                   {"ambiguity_flag", e.routing->ambiguity_flag},
                   {"decision", to_json(*e.decision)}};
      out += line.dump() + "\n";
    }
  }
  return out;
}

std::vector<std::string> golden_mismatches(const EvaluationReport& r) {
  struct Row {
    DomainClass d;
    std::size_t n, ts, fe;
  };
  static constexpr Row kRows[] = {
      {DomainClass::ProbeIntegrity, 23, 23, 0}, {DomainClass::ActivityIntegrity, 8, 8, 0},
      {DomainClass::Copd, 13, 13, 0},           {DomainClass::Bradycardia, 2, 2, 0},
      {DomainClass::Nocturnal, 3, 3, 0},        {DomainClass::Tachycardia, 8, 7, 1},
      {DomainClass::MetaConflict, 30, 21, 9},   {DomainClass::ProbeActivityConflict, 8, 5, 3},
      {DomainClass::ProbeConditionConflict, 3, 0, 3},
  };
  static constexpr std::pair<DeviceStatus, std::size_t> kModes[] = {
      {DeviceStatus::SystemFlag, 7},       {DeviceStatus::Ok, 4},
      {DeviceStatus::MotionArtefact, 2},   {DeviceStatus::ProbeCover, 1},
      {DeviceStatus::ThresholdMarginal, 1}, {DeviceStatus::DuplicateAlert, 1},
  };

  std::vector<std::string> out;
  auto check = [&](const std::string& what, std::size_t got, std::size_t want) {
    if (got != want) out.push_back(fmt("%s: got %zu, expected %zu", what.c_str(), got, want));
  };
  check("cases", r.cases, 98);
  check("epochs", r.epochs, 530);
  check("TS", r.ts_count, 82);
  check("FE", r.fe_count, 16);
  check("IND", r.ind_count, 0);
  for (const auto& row : kRows) {
    const std::string name(to_string(row.d));
    auto it = r.per_domain.find(row.d);
    const DomainRow got = it == r.per_domain.end() ? DomainRow{} : it->second;
    check(name + " n", got.n, row.n);
    check(name + " TS", got.ts, row.ts);
    check(name + " FE", got.fe, row.fe);
  }
  for (const auto& [status, n] : kModes) {
    auto it = r.failure_modes.find(status);
    check("failure mode " + std::string(to_string(status)), it == r.failure_modes.end() ? 0 : it->second, n);
  }
  return out;
}

}  // namespace veritas
