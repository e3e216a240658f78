#include "veritas/synthgen.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "veritas/parallel.hpp"

namespace veritas {

// ---------------------------------------------------------------------------
// Random source

Rng Rng::substream(std::uint64_t seed, const std::string& key) {
  std::vector<std::uint32_t> material{static_cast<std::uint32_t>(seed),
                                      static_cast<std::uint32_t>(seed >> 32)};
  for (unsigned char ch : key) material.push_back(ch);
  std::seed_seq seq(material.begin(), material.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return Rng((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal(double mu, double sigma) {
  if (has_spare_) {
    has_spare_ = false;
    return mu + sigma * spare_;
  }
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return mu + sigma * r * std::cos(theta);
}

std::size_t Rng::index(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01() * static_cast<double>(n)));
}

double sample_truncated_gaussian(double mu, double sigma, double lower, double upper, Rng& rng) {
  if (!(lower < upper) || !(sigma > 0.0) || !std::isfinite(mu)) {
    std::ostringstream msg;
    msg << "truncated gaussian needs lower < upper and sigma > 0 (got mu=" << mu
        << " sigma=" << sigma << " bounds=[" << lower << "," << upper << "])";
    throw InvalidBounds(msg.str());
  }
  double x = mu;
  for (int i = 0; i < kMaxRejections; ++i) {
    x = rng.normal(mu, sigma);
    if (x >= lower && x <= upper) return x;
  }
  return std::clamp(x, lower, upper);
}

// ---------------------------------------------------------------------------
// Taxonomy schema

namespace {

const std::array<std::string, 2> kContinuousFields{"spo2", "hr"};
// Draw order for categorical fields; fixed so streams do not depend on map layout.
const std::array<std::string, 6> kCategoricalFields{"accel_level", "device_status",
                                                    "probe_cover_present", "position",
                                                    "self_reported_activity", "ambient_condition"};

std::pair<double, double> physiological_range(const std::string& field) {
  return field == "spo2" ? std::pair{kSpo2Min, kSpo2Max} : std::pair{kHrMin, kHrMax};
}

void check_choice(const std::string& field, const std::string& value) {
  try {
    if (field == "accel_level") parse_enum<AccelLevel>(value);
    else if (field == "device_status") parse_enum<DeviceStatus>(value);
    else if (field == "position") parse_enum<Position>(value);
    else if (field == "self_reported_activity") {
      if (value != "none") parse_enum<Activity>(value);
    } else if (field == "probe_cover_present") {
      if (value != "true" && value != "false") throw ParseError("expected true or false");
    }
  } catch (const ParseError& e) {
    throw InvalidEntry("categorical '" + field + "': " + e.what());
  }
}

}  // namespace

void validate_entry(const TaxonomyEntry& e) {
  const std::string where = "taxonomy entry '" + e.case_id + "': ";
  if (e.case_id.empty()) throw InvalidEntry("taxonomy entry with empty case_id");
  if (e.epoch_count < 1) throw InvalidEntry(where + "epoch_count must be positive");
  for (const auto& f : kContinuousFields) {
    if (!e.continuous_params.count(f)) throw InvalidEntry(where + "missing continuous param '" + f + "'");
  }
  for (const auto& [field, spec] : e.continuous_params) {
    if (std::find(kContinuousFields.begin(), kContinuousFields.end(), field) == kContinuousFields.end()) {
      throw InvalidEntry(where + "unknown continuous param '" + field + "'");
    }
    if (!(spec.sigma > 0.0)) throw InvalidEntry(where + field + " sigma must be positive");
    if (!(spec.lower <= spec.mu && spec.mu <= spec.upper) || !(spec.lower < spec.upper)) {
      throw InvalidEntry(where + field + " needs lower <= mu <= upper with lower < upper");
    }
    const auto [lo, hi] = physiological_range(field);
    if (spec.lower < lo || spec.upper > hi) {
      throw InvalidEntry(where + field + " bounds leave the physiological range");
    }
  }
  for (const auto& [field, spec] : e.categorical_params) {
    if (std::find(kCategoricalFields.begin(), kCategoricalFields.end(), field) == kCategoricalFields.end()) {
      throw InvalidEntry(where + "unknown categorical param '" + field + "'");
    }
    if (spec.choices.empty()) throw InvalidEntry(where + field + " has no choices");
    for (const auto& c : spec.choices) check_choice(field, c);
  }
  try {
    check_context(e.context);
  } catch (const InvariantError& err) {
    throw InvalidEntry(where + err.what());
  }
}

void validate_taxonomy(const Taxonomy& t) {
  for (const auto& e : t) {
    try {
      validate_entry(e);
    } catch (const InvalidEntry& err) {
      throw TaxonomyInvariantViolation(err.what());
    }
  }
  if (t.size() != kTaxonomyCases) {
    throw TaxonomyInvariantViolation("taxonomy has " + std::to_string(t.size()) + " entries, expected " +
                                     std::to_string(kTaxonomyCases));
  }
  std::set<std::string> ids;
  std::size_t epochs = 0;
  std::map<DomainClass, std::size_t> per_class;
  for (const auto& e : t) {
    if (!ids.insert(e.case_id).second) throw TaxonomyInvariantViolation("duplicate case_id '" + e.case_id + "'");
    epochs += static_cast<std::size_t>(e.epoch_count);
    ++per_class[e.domain_class];
  }
  if (epochs != kTaxonomyEpochs) {
    throw TaxonomyInvariantViolation("taxonomy epoch_count sums to " + std::to_string(epochs) +
                                     ", expected " + std::to_string(kTaxonomyEpochs));
  }
  for (const auto& [cls, n] : kTaxonomyClassCounts) {
    if (per_class[cls] != n) {
      throw TaxonomyInvariantViolation("class " + std::string(to_string(cls)) + " has " +
                                       std::to_string(per_class[cls]) + " entries, expected " +
                                       std::to_string(n));
    }
  }
}

Json to_json(const TaxonomyEntry& e) {
  Json cont = Json::object();
  for (const auto& [f, s] : e.continuous_params) {
    cont[f] = {{"mu", s.mu}, {"sigma", s.sigma}, {"lower", s.lower}, {"upper", s.upper}};
  }
  Json cat = Json::object();
  for (const auto& [f, s] : e.categorical_params) {
    cat[f] = s.choices.size() == 1 ? Json{{"fixed", s.choices.front()}} : Json{{"uniform", s.choices}};
  }
  Json ctx = to_json(e.context);
  ctx.erase("patient_id");
  return {{"case_id", e.case_id},
          {"domain_class", enum_json(e.domain_class)},
          {"epoch_count", e.epoch_count},
          {"continuous_params", cont},
          {"categorical_params", cat},
          {"context", ctx},
          {"nocturnal", e.nocturnal},
          {"expected_outcome_note", e.expected_outcome_note}};
}

TaxonomyEntry taxonomy_entry_from_json(const Json& j) {
  TaxonomyEntry e;
  e.case_id = require_string(j, "case_id");
  try {
    e.domain_class = require_enum<DomainClass>(j, "domain_class");
    const Json& count = require(j, "epoch_count");
    if (!count.is_number_integer()) throw ParseError("field 'epoch_count' must be an integer");
    e.epoch_count = count.get<int>();
    for (const auto& [f, s] : require(j, "continuous_params").items()) {
      e.continuous_params[f] = {require_number(s, "mu"), require_number(s, "sigma"),
                                require_number(s, "lower"), require_number(s, "upper")};
    }
    for (const auto& [f, s] : require(j, "categorical_params").items()) {
      CategoricalSpec spec;
      if (s.contains("fixed")) {
        spec.choices.push_back(require_string(s, "fixed"));
      } else {
        for (const auto& c : require(s, "uniform")) {
          if (!c.is_string()) throw ParseError("choices for '" + f + "' must be strings");
          spec.choices.push_back(c.get<std::string>());
        }
      }
      e.categorical_params[f] = std::move(spec);
    }
    Json ctx = require(j, "context");
    ctx["patient_id"] = 0;
    e.context = context_from_json(ctx);
    e.nocturnal = require_bool(j, "nocturnal");
    if (auto it = j.find("expected_outcome_note"); it != j.end() && it->is_string()) {
      e.expected_outcome_note = it->get<std::string>();
    }
  } catch (const InvariantError& err) {
    throw ParseError("taxonomy entry '" + e.case_id + "': " + err.what());
  } catch (const ParseError& err) {
    throw ParseError("taxonomy entry '" + e.case_id + "': " + err.what());
  }
  return e;
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open taxonomy file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const Json j = parse_json_text(buf.str(), path.string());
  if (!j.is_array()) throw ParseError(path.string() + ": taxonomy must be a JSON array");
  Taxonomy t;
  for (const auto& entry : j) t.push_back(taxonomy_entry_from_json(entry));
  return t;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

double draw_continuous(const ContinuousSpec& s, Rng& rng) {
  double x = sample_truncated_gaussian(s.mu, s.sigma, s.lower, s.upper, rng);
  x = std::clamp(x + rng.normal(0.0, kNoiseSigma), s.lower, s.upper);
  // Devices report one decimal place.
  return std::clamp(std::round(x * 10.0) / 10.0, s.lower, s.upper);
}

std::string draw_choice(const TaxonomyEntry& e, const std::string& field, const std::string& fallback,
                        Rng& rng) {
  auto it = e.categorical_params.find(field);
  if (it == e.categorical_params.end()) return fallback;
  const auto& choices = it->second.choices;
  return choices.size() == 1 ? choices.front() : choices[rng.index(choices.size())];
}

}  // namespace

GeneratedCase generate_case(const TaxonomyEntry& entry, PatientId patient_id, Minute start_time,
                            std::uint64_t seed) {
  validate_entry(entry);
  Rng rng = Rng::substream(seed, entry.case_id);

  GeneratedCase out;
  out.case_id = entry.case_id;
  out.domain_class = entry.domain_class;
  out.context = entry.context;
  out.context.patient_id = patient_id;
  out.epochs.reserve(static_cast<std::size_t>(entry.epoch_count));

  for (int i = 0; i < entry.epoch_count; ++i) {
    Epoch ep;
    ep.patient_id = patient_id;
    ep.timestamp = start_time + std::chrono::minutes(i);
    ep.spo2 = draw_continuous(entry.continuous_params.at("spo2"), rng);
    ep.hr = draw_continuous(entry.continuous_params.at("hr"), rng);
    ep.accel_level = parse_enum<AccelLevel>(draw_choice(entry, "accel_level", "still", rng));
    ep.device_status = parse_enum<DeviceStatus>(draw_choice(entry, "device_status", "ok", rng));
    ep.probe_cover_present = draw_choice(entry, "probe_cover_present", "false", rng) == "true";
    ep.position = parse_enum<Position>(draw_choice(entry, "position", "upright", rng));
    if (auto a = draw_choice(entry, "self_reported_activity", "none", rng); a != "none") {
      ep.self_reported_activity = parse_enum<Activity>(a);
    }
    if (auto a = draw_choice(entry, "ambient_condition", "", rng); !a.empty()) {
      ep.ambient_condition = a;
    }
    out.epochs.push_back(std::move(ep));
  }
  out.hash = case_hash(out);
  return out;
}

Minute schedule_case(const TaxonomyEntry& entry, std::uint64_t seed) {
  using namespace std::chrono;
  Rng rng = Rng::substream(seed, entry.case_id + "/schedule");
  const sys_days first{year{2022} / June / 1};
  const int n = entry.epoch_count;
  if (entry.nocturnal) {
    // 22:00 on day d to 06:00 on d+1; the last start day keeps the night inside August.
    constexpr int kWindow = 8 * 60;
    if (n > kWindow) throw InvalidEntry("nocturnal case '" + entry.case_id + "' longer than the night window");
    const auto day = first + days(static_cast<int>(rng.index(91)));
    const auto offset = static_cast<int>(rng.index(static_cast<std::size_t>(kWindow - n + 1)));
    return Minute{day.time_since_epoch()} + hours(22) + minutes(offset);
  }
  constexpr int kWindow = 12 * 60;
  if (n > kWindow) throw InvalidEntry("case '" + entry.case_id + "' longer than the daytime window");
  const auto day = first + days(static_cast<int>(rng.index(92)));
  const auto offset = static_cast<int>(rng.index(static_cast<std::size_t>(kWindow - n + 1)));
  return Minute{day.time_since_epoch()} + hours(8) + minutes(offset);
}

std::size_t Dataset::epoch_count() const {
  std::size_t n = 0;
  for (const auto& c : cases) n += c.epochs.size();
  return n;
}

Dataset generate_dataset(const Taxonomy& taxonomy, std::uint64_t seed, unsigned jobs) {
  validate_taxonomy(taxonomy);
  Dataset d;
  d.seed = seed;
  d.cases.resize(taxonomy.size());
  parallel_for(taxonomy.size(), jobs, [&](std::size_t i) {
    const auto& entry = taxonomy[i];
    d.cases[i] = generate_case(entry, kFirstPatientId + static_cast<PatientId>(i),
                               schedule_case(entry, seed), seed);
  });
  return d;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string case_hash(const GeneratedCase& c) {
  std::string text = to_json(c.context).dump() + "\n";
  for (const auto& e : c.epochs) text += to_json(e).dump() + "\n";
  return sha256_hex(text);
}

// ---------------------------------------------------------------------------
// Files

Json manifest_json(const Dataset& d) {
  Json cases = Json::array();
  std::string all;
  for (const auto& c : d.cases) {
    cases.push_back({{"case_id", c.case_id},
                     {"patient_id", c.context.patient_id},
                     {"domain_class", enum_json(c.domain_class)},
                     {"epoch_count", c.epochs.size()},
                     {"sha256", c.hash}});
    all += c.hash;
  }
  const std::size_t epochs = d.epoch_count();
  const double mean = d.cases.empty() ? 0.0 : static_cast<double>(epochs) / static_cast<double>(d.cases.size());
  return {{"seed", d.seed},
          {"case_count", d.cases.size()},
          {"epoch_count", epochs},
          {"mean_epochs_per_case", std::round(mean * 10.0) / 10.0},
          {"dataset_sha256", sha256_hex(all)},
          {"cases", cases}};
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed for " + p.string());
}

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

void write_dataset(const Dataset& d, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::string epochs;
  Json contexts = Json::object();
  for (const auto& c : d.cases) {
    for (const auto& e : c.epochs) epochs += to_json(e).dump() + "\n";
    contexts[std::to_string(c.context.patient_id)] = to_json(c.context);
  }
  write_text(dir / kEpochsFile, epochs);
  write_text(dir / kContextsFile, contexts.dump(2) + "\n");
  write_text(dir / kManifestFile, manifest_json(d).dump(2) + "\n");
}

Dataset read_dataset(const std::filesystem::path& dir) {
  const Json manifest = parse_json_text(read_text(dir / kManifestFile), kManifestFile);
  const Json contexts = parse_json_text(read_text(dir / kContextsFile), kContextsFile);

  std::map<PatientId, std::vector<Epoch>> by_patient;
  std::istringstream lines(read_text(dir / kEpochsFile));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      Epoch e = epoch_from_json(parse_json_text(line, kEpochsFile));
      by_patient[e.patient_id].push_back(std::move(e));
    } catch (const ParseError& err) {
      throw ParseError(std::string(kEpochsFile) + " line " + std::to_string(lineno) + ": " + err.what());
    }
  }

  Dataset d;
  const Json& seed = require(manifest, "seed");
  if (!seed.is_number_unsigned()) throw ParseError("manifest seed must be an unsigned integer");
  d.seed = seed.get<std::uint64_t>();
  for (const auto& entry : require(manifest, "cases")) {
    GeneratedCase c;
    c.case_id = require_string(entry, "case_id");
    c.domain_class = require_enum<DomainClass>(entry, "domain_class");
    c.hash = require_string(entry, "sha256");
    const auto pid = static_cast<PatientId>(require_number(entry, "patient_id"));
    const std::string key = std::to_string(pid);
    if (!contexts.contains(key)) throw ParseError("no context for patient " + key);
    c.context = context_from_json(contexts.at(key));
    if (c.context.patient_id != pid) throw ParseError("context key " + key + " holds another patient");
    auto it = by_patient.find(pid);
    if (it != by_patient.end()) {
      c.epochs = std::move(it->second);
      by_patient.erase(it);
    }
    std::stable_sort(c.epochs.begin(), c.epochs.end(),
                     [](const Epoch& a, const Epoch& b) { return a.timestamp < b.timestamp; });
    d.cases.push_back(std::move(c));
  }
  if (!by_patient.empty()) {
    throw ParseError("epochs for patient " + std::to_string(by_patient.begin()->first) +
                     " are not listed in the manifest");
  }
  return d;
}

}  // namespace veritas
