// Acceptance checks: one PASS/FAIL line per criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "veritas/config.hpp"
#include "veritas/evaluation.hpp"
#include "veritas/meta_sentinel.hpp"
#include "veritas/provenance.hpp"
#include "veritas/sentinel.hpp"
#include "veritas/synthgen.hpp"

using namespace veritas;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

struct Reference {
  Taxonomy taxonomy;
  Dataset dataset;
  EvaluationRun run;
  double seconds = 0.0;
};

const Reference& reference() {
  static const Reference r = [] {
    Reference out;
    const PipelineConfig cfg;
    const auto t0 = std::chrono::steady_clock::now();
    out.taxonomy = load_taxonomy(VERITAS_TAXONOMY_PATH);
    out.dataset = generate_dataset(out.taxonomy, cfg.seed, 1);
    out.run = evaluate(out.dataset, out.taxonomy, cfg, 1);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }();
  return r;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Check golden_reproduction() {
  Check c;
  const auto& ref = reference();
  const EvaluationReport& r = ref.run.report;
  c.expect(r.ts_count == 82 && r.fe_count == 16 && r.ind_count == 0,
           "counts TS/FE/IND = " + std::to_string(r.ts_count) + "/" + std::to_string(r.fe_count) + "/" +
               std::to_string(r.ind_count));
  c.expect(summary_line(r) == "TSR 83.7% FER 16.3% INDR 0.0%", summary_line(r));
  c.expect(ref.seconds < 10.0, fmt("runtime %.2f s", ref.seconds));
  if (c.ok) c.detail = summary_line(r) + fmt(", %.3f s", ref.seconds);
  return c;
}

Check stratification() {
  Check c;
  const std::vector<std::tuple<DomainClass, std::size_t, std::size_t, std::size_t>> rows = {
      {DomainClass::ProbeIntegrity, 23, 23, 0},       {DomainClass::ActivityIntegrity, 8, 8, 0},
      {DomainClass::Copd, 13, 13, 0},                 {DomainClass::Bradycardia, 2, 2, 0},
      {DomainClass::Nocturnal, 3, 3, 0},              {DomainClass::Tachycardia, 8, 7, 1},
      {DomainClass::MetaConflict, 30, 21, 9},         {DomainClass::ProbeActivityConflict, 8, 5, 3},
      {DomainClass::ProbeConditionConflict, 3, 0, 3},
  };
  const auto& per = reference().run.report.per_domain;
  for (const auto& [d, n, ts, fe] : rows) {
    const DomainRow& row = per.at(d);
    c.expect(row.n == n && row.ts == ts && row.fe == fe,
             std::string(to_string(d)) + " = " + std::to_string(row.n) + "/" + std::to_string(row.ts) + "/" +
                 std::to_string(row.fe));
  }
  if (c.ok) c.detail = "9 rows exact";
  return c;
}

Check failure_modes() {
  Check c;
  const std::map<DeviceStatus, std::size_t> expected = {
      {DeviceStatus::SystemFlag, 7},  {DeviceStatus::Ok, 4},
      {DeviceStatus::MotionArtefact, 2}, {DeviceStatus::ProbeCover, 1},
      {DeviceStatus::ThresholdMarginal, 1}, {DeviceStatus::DuplicateAlert, 1}};
  const auto& got = reference().run.report.failure_modes;
  for (const auto& [s, n] : expected) {
    c.expect(got.at(s) == n, std::string(to_string(s)) + " = " + std::to_string(got.at(s)));
  }
  if (c.ok) c.detail = "system_flag 7, ok 4, motion_artefact 2, probe_cover 1, threshold_marginal 1, duplicate_alert 1";
  return c;
}

Check wilson() {
  Check c;
  const EvaluationReport& r = reference().run.report;
  auto lower_pct = [&](DomainClass d) { return r.wilson_cis.at(d).wilson.lower * 100.0; };
  const double tol = 0.1;
  c.expect(std::abs(lower_pct(DomainClass::Bradycardia) - 34.2) <= tol, fmt("n=2 lower %.3f", lower_pct(DomainClass::Bradycardia)));
  c.expect(std::abs(lower_pct(DomainClass::Nocturnal) - 43.9) <= tol, fmt("n=3 lower %.3f", lower_pct(DomainClass::Nocturnal)));
  c.expect(std::abs(lower_pct(DomainClass::Copd) - 77.2) <= tol, fmt("n=13 lower %.3f", lower_pct(DomainClass::Copd)));
  const double z2 = 1.96 * 1.96;
  const double closed = 23.0 / (23.0 + z2) * 100.0;
  c.expect(std::abs(lower_pct(DomainClass::ProbeIntegrity) - closed) < 1e-9,
           fmt("n=23 lower %.4f vs closed form %.4f", lower_pct(DomainClass::ProbeIntegrity), closed));
  c.expect(std::round(closed * 10.0) / 10.0 == 85.7, fmt("closed form %.2f", closed));
  const double cp = r.wilson_cis.at(DomainClass::ProbeIntegrity).clopper_pearson.lower * 100.0;
  c.expect(std::abs(cp - std::pow(0.025, 1.0 / 23.0) * 100.0) < 1e-6 && std::round(cp * 10.0) / 10.0 == 85.2,
           fmt("Clopper-Pearson lower %.3f", cp));
  const std::string text = render_text(r);
  c.expect(text.find("probe_integrity (23/23) Wilson lower bound 85.7%") != std::string::npos &&
               text.find("Clopper-Pearson exact lower bound is 85.2%") != std::string::npos,
           "report does not flag 85.2% as the Clopper-Pearson bound");
  if (c.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "lower %.2f/%.2f/%.2f%%; n=23 Wilson %.1f%%, Clopper-Pearson %.1f%% flagged",
                  lower_pct(DomainClass::Bradycardia), lower_pct(DomainClass::Nocturnal),
                  lower_pct(DomainClass::Copd), closed, cp);
    c.detail = buf;
  }
  return c;
}

Check dataset_shape() {
  Check c;
  const Dataset& d = reference().dataset;
  const Json m = manifest_json(d);
  c.expect(d.cases.size() == 98, "cases " + std::to_string(d.cases.size()));
  c.expect(d.epoch_count() == 530, "epochs " + std::to_string(d.epoch_count()));
  c.expect(m["mean_epochs_per_case"].get<double>() == 5.4, "mean " + m["mean_epochs_per_case"].dump());
  std::set<PatientId> ids;
  bool in_period = true;
  for (const auto& gc : d.cases) {
    ids.insert(gc.context.patient_id);
    for (const auto& e : gc.epochs) {
      ids.insert(e.patient_id);
      in_period = in_period && in_generation_period(e.timestamp);
    }
  }
  std::set<PatientId> expected;
  for (PatientId p = 3847291; p <= 3847388; ++p) expected.insert(p);
  c.expect(ids == expected, "patient ids are not exactly 3847291-3847388");
  c.expect(in_period, "timestamp outside June-August 2022");
  if (c.ok) c.detail = "98 cases, 530 epochs, mean 5.4, ids 3847291-3847388, Jun-Aug 2022";
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void end_to_end(const fs::path& dir, unsigned jobs) {
  const PipelineConfig cfg;
  const Taxonomy t = load_taxonomy(VERITAS_TAXONOMY_PATH);
  write_dataset(generate_dataset(t, cfg.seed, jobs), dir / "dataset");
  const EvaluationRun run = evaluate(read_dataset(dir / "dataset"), t, cfg, jobs);
  std::ofstream(dir / "report.json", std::ios::binary) << to_json(run.report).dump(2) << "\n";
  std::ofstream(dir / "decisions.jsonl", std::ios::binary) << decision_log_jsonl(run);
}

Check determinism() {
  Check c;
  const fs::path base = fs::temp_directory_path() / "veritas_acceptance_determinism";
  fs::remove_all(base);
  end_to_end(base / "a", 1);
  end_to_end(base / "b", 8);
  for (const fs::path& f : {fs::path("dataset") / kManifestFile, fs::path("dataset") / kEpochsFile,
                           fs::path("decisions.jsonl"), fs::path("report.json")}) {
    const std::string a = slurp(base / "a" / f);
    c.expect(!a.empty() && a == slurp(base / "b" / f), f.string() + " differs between runs");
  }
  fs::remove_all(base);
  if (c.ok) c.detail = "manifest, epochs, decision log and report byte-identical (1 vs 8 threads)";
  return c;
}

Check provenance_safety() {
  Check c;
  std::mt19937_64 rng(20220601);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); };
  const auto fields = all_values<Field>();
  std::size_t alerts_seen = 0;
  for (int i = 0; i < 1000; ++i) {
    Epoch e;
    e.patient_id = kFirstPatientId;
    e.timestamp = parse_minute("2022-07-01T00:00Z") + std::chrono::minutes(pick(24 * 60));
    e.spo2 = std::round(uni(80.0, 100.0) * 10.0) / 10.0;
    e.hr = std::round(uni(30.0, 150.0) * 10.0) / 10.0;
    e.accel_level = all_values<AccelLevel>()[pick(3)];
    e.device_status = all_values<DeviceStatus>()[pick(6)];
    e.probe_cover_present = pick(2) == 1;
    e.position = all_values<Position>()[pick(4)];
    if (pick(2)) e.self_reported_activity = all_values<Activity>()[pick(3)];
    PatientContext ctx;
    ctx.patient_id = kFirstPatientId;
    ctx.copd_documented = pick(2) == 1;
    ctx.baseline_spo2 = 90.0;
    VeritasRecord r = assemble(make_bundle(ctx, {e}), e.timestamp);

    // Inject one Inferred value: either retag an existing field or add an inferred statement.
    const Field target = fields[pick(fields.size())];
    VeritasRecord without = r;
    if (const TaggedValue* v = r.find(target); v && pick(4) != 0) {
      const TaggedValue injected(v->value(), ProvenanceTag::Inferred, "inference", v->observed_at());
      r.fields.erase(target);
      r.fields.emplace(target, injected);
      without.fields.erase(target);
    } else {
      r.conversation_flags.emplace_back(std::string("walking"), ProvenanceTag::Inferred, "inference", e.timestamp);
    }

    const SpecialistView view = project_for_specialists(r);
    for (const auto& [f, v] : view.fields()) {
      c.expect(v.provenance() != ProvenanceTag::Inferred, "view exposes inferred " + std::string(to_string(f)));
    }
    for (const auto& flag : view.conversation_flags()) {
      c.expect(flag.provenance() != ProvenanceTag::Inferred, "view exposes an inferred statement");
    }
    // The alert must equal the one raised when the injected value never existed.
    const auto alert = detect(view, SentinelConfig{});
    const auto reference_alert = detect(project_for_specialists(without), SentinelConfig{});
    c.expect(bool(alert) == bool(reference_alert), "inferred value changed whether an alert fired");
    if (alert && reference_alert) {
      ++alerts_seen;
      c.expect(alert->alert_types == reference_alert->alert_types, "inferred value changed the alert types");
      for (const auto& [type, v] : alert->triggering_values) {
        c.expect(v.provenance() != ProvenanceTag::Inferred, "alert triggered by an inferred value");
      }
    }
  }
  if (c.ok) c.detail = "1000 records, " + std::to_string(alerts_seen) + " alerts, no inferred exposure";
  return c;
}

Check meta_properties() {
  Check c;
  std::mt19937_64 rng(99);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  const auto domains = all_values<AgentDomain>();
  Epoch e;
  e.patient_id = kFirstPatientId;
  e.timestamp = parse_minute("2022-07-01T12:00Z");
  e.spo2 = 90.0;
  e.hr = 120.0;
  PatientContext ctx;
  ctx.patient_id = kFirstPatientId;
  const CandidateAlert alert = *detect(project_for_specialists(assemble(make_bundle(ctx, {e}), e.timestamp)), SentinelConfig{});

  int inside_margin = 0;
  constexpr int kSets = 20000;
  for (int i = 0; i < kSets; ++i) {
    MetaConfig cfg;
    for (auto& [d, w] : cfg.domain_weights) w = uni(0.25, 2.0);
    cfg.resolution_margin = uni(0.05, 0.95);
    std::vector<AgentClaim> claims;
    RoutingDecision routing;
    for (AgentDomain d : domains) {
      if (uni(0.0, 1.0) < 0.4 || (d == domains.back() && claims.empty())) {
        AgentClaim cl;
        cl.domain = d;
        cl.recommendation = all_values<Recommendation>()[static_cast<std::size_t>(uni(0.0, 3.0)) % 3];
        cl.confidence = uni(0.0, 1.0);
        claims.push_back(cl);
        routing.targets.insert(d);
      }
    }
    DecisionHistory h1;
    const SystemDecision d = resolve(claims, routing, alert, h1, cfg);
    c.expect(d.verdict == Verdict::Suppress || d.verdict == Verdict::Escalate, "non-binary verdict");
    const ClaimBalance b = balance(claims, cfg);
    if (std::abs(b.suppress - b.escalate) < cfg.resolution_margin) {
      ++inside_margin;
      c.expect(d.verdict == Verdict::Escalate, "suppressed inside the resolution margin");
    }
    for (double k : {0.125, 0.5, 2.0, 16.0}) {
      MetaConfig scaled = cfg;
      scaled.resolution_margin *= k;
      for (auto& [dom, w] : scaled.domain_weights) w *= k;
      DecisionHistory h2;
      c.expect(resolve(claims, routing, alert, h2, scaled).verdict == d.verdict, "scaling changed a verdict");
    }
  }
  if (c.ok) {
    c.detail = std::to_string(kSets) + " claim sets (" + std::to_string(inside_margin) +
               " inside margin), binary, conservative, scale-invariant";
  }
  return c;
}

Check aggregation_oracle() {
  Check c;
  int vectors = 0;
  for (int k = 1; k <= 6; ++k) {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<SystemDecision> v(static_cast<std::size_t>(k));
      bool any_escalate = false;
      for (int i = 0; i < k; ++i) {
        const bool esc = (mask >> i) & 1u;
        v[static_cast<std::size_t>(i)].verdict = esc ? Verdict::Escalate : Verdict::Suppress;
        any_escalate = any_escalate || esc;
      }
      c.expect(aggregate_case(v) == (any_escalate ? Outcome::FalseEscalation : Outcome::TrueSuppression),
               "mismatch at length " + std::to_string(k) + " mask " + std::to_string(mask));
      ++vectors;
    }
  }
  c.expect(vectors == 126, "enumerated " + std::to_string(vectors) + " vectors");
  if (c.ok) c.detail = "126 vectors";
  return c;
}

Check truncated_gaussian() {
  Check c;
  constexpr double mu = 96.0, sigma = 1.0, lo = 70.0, hi = 100.0;
  auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  const double a = (lo - mu) / sigma, b = (hi - mu) / sigma;
  const double analytic = mu + sigma * (pdf(a) - pdf(b)) / (cdf(b) - cdf(a));
  Rng rng(42);
  double sum = 0.0;
  int out = 0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_truncated_gaussian(mu, sigma, lo, hi, rng);
    sum += x;
    out += (x < lo || x > hi) ? 1 : 0;
  }
  const double mean = sum / n;
  c.expect(std::abs(mean - analytic) <= 0.02, fmt("mean %.4f vs analytic %.4f", mean, analytic));
  c.expect(out == 0, std::to_string(out) + " samples out of bounds");
  if (c.ok) c.detail = fmt("mean %.4f, analytic %.4f, 0 out of bounds", mean, analytic);
  return c;
}

bool full_context(const SpecialistView& v) {
  for (Field f : {Field::PatientId, Field::Timestamp, Field::Spo2, Field::Hr, Field::AccelLevel,
                  Field::DeviceStatus, Field::ProbeCoverPresent, Field::Position, Field::CopdDocumented,
                  Field::RateLimitingMedication}) {
    if (!v.has(f)) return false;
  }
  return true;
}

Check single_domain_safety() {
  Check c;
  const auto& ref = reference();
  std::size_t single = 0;
  std::vector<std::string> exceptions;
  for (std::size_t i = 0; i < ref.run.cases.size(); ++i) {
    const CaseResult& cr = ref.run.cases[i];
    const GeneratedCase& gc = ref.dataset.cases[i];
    const SourceBundle bundle = make_bundle(gc.context, gc.epochs);
    bool qualifies = !cr.epoch_decisions.empty();
    for (const EpochTrace& t : cr.epochs) {
      if (!t.routing) continue;
      qualifies = qualifies && t.routing->targets.size() == 1 && !t.routing->ambiguity_flag &&
                  full_context(project_for_specialists(assemble(bundle, t.timestamp)));
    }
    if (!qualifies) continue;
    ++single;
    if (cr.outcome != Outcome::TrueSuppression) exceptions.push_back(cr.case_id);
  }
  c.expect(single > 0, "no single-domain cases");
  c.expect(exceptions.size() == 1, std::to_string(exceptions.size()) + " single-domain cases not suppressed");
  if (exceptions.size() == 1) {
    std::size_t idx = 0;
    while (ref.run.cases[idx].case_id != exceptions[0]) ++idx;
    const CaseResult& cr = ref.run.cases[idx];
    bool isolated = cr.domain_class == DomainClass::Tachycardia;
    for (const auto& d : cr.epoch_decisions) {
      isolated = isolated && d.contributing_claims.size() == 1 &&
                 d.contributing_claims[0].domain == AgentDomain::Tachycardia &&
                 d.contributing_claims[0].rationale_codes == std::vector<std::string>{"isolated_high_hr"};
    }
    c.expect(isolated, exceptions[0] + " is not the isolated high-HR tachycardia case");
  }
  if (c.ok) {
    c.detail = std::to_string(single) + " single-domain cases, all suppressed except " + exceptions[0] +
               " (isolated high HR)";
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"AC1  golden reproduction", golden_reproduction},
      {"AC2  per-domain stratification", stratification},
      {"AC3  failure-mode distribution", failure_modes},
      {"AC4  Wilson intervals", wilson},
      {"AC5  dataset shape", dataset_shape},
      {"AC6  determinism", determinism},
      {"AC7  provenance safety", provenance_safety},
      {"AC8  meta-sentinel totality and conservatism", meta_properties},
      {"AC9  aggregation oracle", aggregation_oracle},
      {"AC10 truncated-Gaussian statistics", truncated_gaussian},
      {"AC11 single-domain safety", single_domain_safety},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failures += c.ok ? 0 : 1;
    std::printf("%s  %-46s %s\n", c.ok ? "PASS" : "FAIL", name, c.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
