// veritas: generate the synthetic epoch dataset, run the suppression pipeline over it and
// report the outcome tables.
//
// Exit codes: 0 success, 2 input validation, 3 I/O, 4 golden mismatch.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "veritas/config.hpp"
#include "veritas/evaluation.hpp"
#include "veritas/synthgen.hpp"

namespace fs = std::filesystem;
using namespace veritas;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitGolden = 4;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool golden_check = false;
  bool json_only = false;
  std::string taxonomy;
  std::string dataset_dir;
  std::string report_dir;
};

class ExitError : public std::runtime_error {
 public:
  ExitError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

PipelineConfig resolve_config(const Options& opt) {
  PipelineConfig cfg = opt.config_path.empty() ? PipelineConfig{} : load_config(opt.config_path);
  if (const char* env = std::getenv("VERITAS_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("VERITAS_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.taxonomy.empty()) cfg.paths.taxonomy = opt.taxonomy;
  if (!opt.dataset_dir.empty()) cfg.paths.dataset_dir = opt.dataset_dir;
  if (!opt.report_dir.empty()) cfg.paths.report_dir = opt.report_dir;
  cfg.validate();
  return cfg;
}

Taxonomy load_checked_taxonomy(const PipelineConfig& cfg) {
  if (!fs::exists(cfg.paths.taxonomy)) {
    throw ExitError(kExitValidation, "TaxonomyNotFound: " + cfg.paths.taxonomy);
  }
  return load_taxonomy(cfg.paths.taxonomy);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + p.string());
}

int cmd_generate(const Options& opt) {
  const PipelineConfig cfg = resolve_config(opt);
  const Taxonomy taxonomy = load_checked_taxonomy(cfg);
  const Dataset d = generate_dataset(taxonomy, cfg.seed, opt.jobs);
  write_dataset(d, cfg.paths.dataset_dir);
  std::cout << d.cases.size() << " cases, " << d.epoch_count() << " epochs (seed " << cfg.seed
            << ") -> " << cfg.paths.dataset_dir << "\n";
  return kExitOk;
}

int cmd_evaluate(const Options& opt) {
  const PipelineConfig cfg = resolve_config(opt);
  const Taxonomy taxonomy = load_checked_taxonomy(cfg);
  const fs::path dataset_dir = cfg.paths.dataset_dir;
  for (const char* f : {kEpochsFile, kContextsFile, kManifestFile}) {
    if (!fs::exists(dataset_dir / f)) throw IoError("missing dataset file " + (dataset_dir / f).string());
  }
  const Dataset d = read_dataset(dataset_dir);

  const auto t0 = std::chrono::steady_clock::now();
  const EvaluationRun run = evaluate(d, taxonomy, cfg, opt.jobs);
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);

  const fs::path out_dir = cfg.paths.report_dir;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  const std::string json = to_json(run.report).dump(2) + "\n";
  write_file(out_dir / "report.json", json);
  write_file(out_dir / "decisions.jsonl", decision_log_jsonl(run));
  if (opt.json_only) {
    std::cout << json;
  } else {
    const std::string text = render_text(run.report);
    write_file(out_dir / "report.txt", text);
    std::cout << text;
    std::cerr << "evaluated " << run.report.epochs << " epochs in " << elapsed.count() << " ms ("
              << elapsed.count() / static_cast<double>(std::max<std::size_t>(run.report.epochs, 1))
              << " ms/epoch)\n";
  }

  if (opt.golden_check) {
    const auto mismatches = golden_mismatches(run.report);
    if (!mismatches.empty()) {
      for (const auto& m : mismatches) std::cerr << "golden mismatch: " << m << "\n";
      return kExitGolden;
    }
    if (!opt.json_only) std::cout << "golden check passed\n";
  }
  return kExitOk;
}

int cmd_report(const Options& opt) {
  const PipelineConfig cfg = resolve_config(opt);
  const fs::path path = fs::path(cfg.paths.report_dir) / "report.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const EvaluationReport r = report_from_json(parse_json_text(buf.str(), path.string()));
  if (opt.json_only) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << render_text(r);
  }
  if (opt.golden_check && !golden_mismatches(r).empty()) return kExitGolden;
  return kExitOk;
}

int run_guarded(int (*fn)(const Options&), const Options& opt) {
  try {
    return fn(opt);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const IoError& e) {
    std::cerr << "IoError: " << e.what() << "\n";
    return kExitIo;
  } catch (const TaxonomyInvariantViolation& e) {
    std::cerr << "TaxonomyInvariantViolation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DatasetTaxonomyMismatch& e) {
    std::cerr << "DatasetTaxonomyMismatch: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ValidationError: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Provenance-guided false-positive alert suppression: generate, evaluate, report"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Pipeline config (JSON)");
    sub->add_option("--seed", opt.seed, "Generation seed (overrides VERITAS_SEED and the config)");
    sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--taxonomy", opt.taxonomy, "Taxonomy file");
    sub->add_option("--dataset-dir", opt.dataset_dir, "Dataset directory");
    sub->add_option("--report-dir", opt.report_dir, "Report directory");
  };

  auto* generate = app.add_subcommand("generate", "Write epochs.jsonl, contexts.json, manifest.json");
  add_common(generate);
  auto* evaluate = app.add_subcommand("evaluate", "Run the pipeline and write report.json/report.txt");
  add_common(evaluate);
  evaluate->add_flag("--golden-check", opt.golden_check, "Exit 4 unless the reference outcome tables are reproduced");
  evaluate->add_flag("--json-only", opt.json_only, "Emit JSON only");
  auto* report = app.add_subcommand("report", "Render an existing report.json");
  add_common(report);
  report->add_flag("--golden-check", opt.golden_check, "Exit 4 unless the reference outcome tables are reproduced");
  report->add_flag("--json-only", opt.json_only, "Emit JSON only");
  auto* run = app.add_subcommand("run", "generate followed by evaluate");
  add_common(run);
  run->add_flag("--golden-check", opt.golden_check, "Exit 4 unless the reference outcome tables are reproduced");
  run->add_flag("--json-only", opt.json_only, "Emit JSON only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  if (generate->parsed()) return run_guarded(cmd_generate, opt);
  if (evaluate->parsed()) return run_guarded(cmd_evaluate, opt);
  if (report->parsed()) return run_guarded(cmd_report, opt);
  if (run->parsed()) {
    if (const int rc = run_guarded(cmd_generate, opt); rc != kExitOk) return rc;
    return run_guarded(cmd_evaluate, opt);
  }
  return kExitValidation;
}
