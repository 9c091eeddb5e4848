#include "emergence/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "emergence/inequalities.hpp"
#include "emergence/io.hpp"
#include "emergence/kernels.hpp"
#include "emergence/quantization.hpp"

#ifndef EMERGENCE_VERSION
#define EMERGENCE_VERSION "0.0.0"
#endif

namespace emergence::cli {

namespace {

using io::Json;

struct RunConfig {
  std::string command;
  std::string family;  // certify: hamming | hyperspace | periodic
  std::string system_spec;
  std::string n_range = "1..6";
  std::string eps_exponents = "1..3";
  std::string eps;  // explicit scale for single-scale commands
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string format = "both";
  unsigned workers = 0;
  std::size_t samples = 32;
  std::size_t pairs = 50;
  std::size_t set_pairs = 0;
  std::size_t full_check = 16;
  std::size_t code = 0;
  std::size_t code_cap = 512;
  std::size_t exact_max = 3;
  std::size_t candidate_cap = 400;
  int grid_steps = 4;
  int max_support = 6;
  int max_length = 6;
  std::string space = "points";
  std::string direction = "separated";
  std::string ensemble;
  std::string orbits;
  std::string vx;
  int resolution = 0;
  bool invariant = false;
  std::string certificate;
};

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (!c.family.empty()) j["family"] = c.family;
  j["system"] = c.system_spec;
  j["n"] = c.n_range;
  j["eps_exp"] = c.eps_exponents;
  j["eps"] = c.eps;
  j["seed"] = c.seed;
  j["out"] = c.out_dir;
  j["format"] = c.format;
  j["workers"] = c.workers;
  j["samples"] = c.samples;
  j["pairs"] = c.pairs;
  j["set_pairs"] = c.set_pairs;
  j["full_check"] = c.full_check;
  j["code"] = c.code;
  j["code_cap"] = c.code_cap;
  j["exact_max"] = c.exact_max;
  j["candidate_cap"] = c.candidate_cap;
  j["grid_steps"] = c.grid_steps;
  j["max_support"] = c.max_support;
  j["max_length"] = c.max_length;
  j["space"] = c.space;
  j["direction"] = c.direction;
  j["ensemble"] = c.ensemble;
  j["orbits"] = c.orbits;
  j["vx"] = c.vx;
  j["resolution"] = c.resolution;
  j["invariant"] = c.invariant;
  j["certificate"] = c.certificate;
  return j;
}

IntRange parse_range(const std::string& text) {
  IntRange r;
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoi(text);
    } else {
      r.lo = std::stoi(text.substr(0, dots));
      r.hi = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw InvalidArgument("range \"" + text + "\" must look like a..b");
  }
  if (r.lo < 1 || r.hi < r.lo) throw InvalidArgument("range \"" + text + "\" must satisfy 1 <= a <= b");
  return r;
}

std::vector<int> parse_exponents(const std::string& text) {
  if (text.find("..") != std::string::npos) return parse_range(text).values();
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InvalidArgument("exponent list \"" + text + "\" must be a..b or k1,k2,...");
    }
    if (out.back() < 1) throw InvalidArgument("exponents must be positive");
  }
  if (out.empty()) throw InvalidArgument("empty exponent list");
  return out;
}

SystemHandle load_system(const std::string& spec) {
  if (spec.empty()) throw InvalidArgument("--system is required");
  if (std::filesystem::exists(spec)) return io::system_from_json(io::read_json_file(spec));
  // Built-in shorthands: full:M[:lambda], golden[:lambda].
  std::vector<std::string> parts;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ':')) parts.push_back(item);
  try {
    if (parts.size() >= 2 && parts.size() <= 3 && parts[0] == "full") {
      const Rational lambda = parts.size() == 3 ? parse_rational(parts[2]) : Rational(1, 2);
      return make_handle(SymbolicSystem::full_shift(std::stoi(parts[1]), lambda));
    }
    if (!parts.empty() && parts.size() <= 2 && parts[0] == "golden") {
      const Rational lambda = parts.size() == 2 ? parse_rational(parts[1]) : Rational(1, 2);
      return make_handle(SymbolicSystem::subshift({{true, true}, {true, false}}, lambda));
    }
  } catch (const std::invalid_argument&) {
  } catch (const InvalidArgument& e) {
    throw FormatError("system \"" + spec + "\": " + e.what());
  }
  throw FormatError("system \"" + spec + "\" is neither a readable file nor full:M / golden");
}

std::vector<Rational> eps_grid(const SymbolicSystem& system, const RunConfig& c) {
  std::vector<Rational> grid;
  for (int k : parse_exponents(c.eps_exponents)) grid.push_back(system.lambda_pow(k));
  return grid;
}

Rational single_eps(const SymbolicSystem& system, const RunConfig& c) {
  if (!c.eps.empty()) {
    Rational e = parse_rational(c.eps);
    if (e <= 0) throw InvalidArgument("--eps must be positive");
    return e;
  }
  return system.lambda_pow(parse_exponents(c.eps_exponents).front());
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

class Artifacts {
 public:
  Artifacts(const RunConfig& config, const std::vector<std::string>& args) : config_(config) {
    std::filesystem::create_directories(config.out_dir);
    manifest_["tool"] = "emergence_lab";
    manifest_["version"] = EMERGENCE_VERSION;
    manifest_["gmp"] = gmp_version;
    manifest_["kernels"] = kernels::active_isa() == kernels::Isa::avx2 ? "avx2" : "scalar";
    manifest_["args"] = args;
    manifest_["config"] = config_json(config);
    manifest_["outputs"] = Json::array();
  }

  std::string path(const std::string& name) const { return (std::filesystem::path(config_.out_dir) / name).string(); }

  void json(const std::string& name, const Json& doc) {
    io::write_json_file(path(name), doc);
    manifest_["outputs"].push_back(name);
  }

  void report(const std::string& stem, const ScalingReport& report, const Json& extra = Json::object()) {
    if (config_.format == "csv" || config_.format == "both") {
      std::ofstream out(path(stem + ".csv"));
      io::write_csv(out, report);
      manifest_["outputs"].push_back(stem + ".csv");
    }
    if (config_.format == "json" || config_.format == "both") {
      Json doc = io::to_json(report);
      for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
      json(stem + ".json", doc);
    }
  }

  void set_system(const SymbolicSystem& system) { manifest_["system"] = io::to_json(system); }
  void result(const std::string& key, Json value) { manifest_["result"][key] = std::move(value); }

  void finish(int status) {
    manifest_["exit_status"] = status;
    io::write_json_file(path("manifest.json"), manifest_);
  }

 private:
  const RunConfig& config_;
  Json manifest_;
};

void print_fits(std::ostream& out, const std::string& label, const std::vector<SlopeFit>& fits) {
  for (const auto& f : fits) {
    out << label << " eps=" << to_string(f.eps) << " [" << fmt(f.lower) << ", " << fmt(f.upper) << "]";
    if (f.exact_over_log_m) out << " exact=" << to_string(*f.exact_over_log_m) << "*log(m)";
    out << '\n';
  }
}

OrderPolicy order_policy(const RunConfig& c) {
  OrderPolicy p;
  p.samples = c.samples;
  p.seed = c.seed;
  p.code_cap = c.code_cap;
  p.pairs.pairs = c.pairs;
  p.pairs.full_check_limit = c.full_check;
  p.pairs.seed = c.seed;
  p.workers = c.workers;
  return p;
}

QuantizationOptions quantization_options(const RunConfig& c) {
  QuantizationOptions q;
  q.grid_steps = c.grid_steps;
  q.exact_max = c.exact_max;
  q.candidate_cap = c.candidate_cap;
  q.workers = c.workers;
  return q;
}

std::vector<Word> split_words(const std::string& text) {
  std::vector<Word> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(word_from_string(item));
  if (out.empty()) throw InvalidArgument("empty word list");
  return out;
}

int resolution_for(const RunConfig& c, const std::vector<Word>& cycles) {
  if (c.resolution > 0) return c.resolution;
  std::size_t longest = 1;
  for (const auto& w : cycles) longest = std::max(longest, w.size());
  return static_cast<int>(2 * longest + 8);
}

std::vector<DiscreteMeasure> orbit_measures(const SystemHandle& system, const RunConfig& c) {
  const auto cycles = split_words(c.orbits);
  const int resolution = resolution_for(c, cycles);
  std::vector<DiscreteMeasure> out;
  for (const auto& w : cycles) out.push_back(periodic_orbit_measure(system, w, resolution));
  return out;
}

MeasureEnsemble load_ensemble(const SystemHandle& system, const RunConfig& c) {
  if (!c.ensemble.empty()) {
    Json doc = io::read_json_file(c.ensemble);
    if (!doc.contains("atoms") || !doc["atoms"].is_array()) throw FormatError("ensemble needs an \"atoms\" array");
    std::vector<EnsembleAtom> atoms;
    try {
      for (const auto& a : doc["atoms"])
        atoms.push_back({io::measure_from_json(system, a.at("measure")), parse_rational(a.at("weight").get<std::string>())});
      return MeasureEnsemble(std::move(atoms));
    } catch (const InvalidArgument& e) {
      throw FormatError(c.ensemble + ": " + e.what());
    }
  }
  if (c.orbits.empty()) throw InvalidArgument("quantize needs --ensemble or --orbits");
  return MeasureEnsemble::uniform(orbit_measures(system, c));
}

// ---------------------------------------------------------------------------

int cmd_entropy(const RunConfig& c, Artifacts& art, std::ostream& out) {
  auto system = load_system(c.system_spec);
  art.set_system(*system);
  auto report = entropy_estimate(system, parse_range(c.n_range), eps_grid(*system, c));
  art.report("entropy", report);
  print_fits(out, "entropy", report.single_log);
  return kOk;
}

int order_summary(const ScalingReport& report, const std::string& stem, Artifacts& art, std::ostream& out) {
  bool bounds = true;
  for (const auto& cell : report.cells) bounds = bounds && cell.bound_ok;
  art.report(stem, report, Json{{"bounds_ok", bounds}});
  print_fits(out, stem + " loglog", report.double_log);
  out << stem << " bounds " << (bounds ? "ok" : "VIOLATED") << '\n';
  art.result("bounds_ok", bounds);
  return bounds ? kOk : kVerificationFailed;
}

int cmd_order_measures(const RunConfig& c, Artifacts& art, std::ostream& out) {
  auto system = load_system(c.system_spec);
  art.set_system(*system);
  auto report = measure_space_entropy_order(system, parse_range(c.n_range), eps_grid(*system, c), order_policy(c));
  return order_summary(report, "order_measures", art, out);
}

int cmd_order_hyperspace(const RunConfig& c, Artifacts& art, std::ostream& out) {
  auto system = load_system(c.system_spec);
  art.set_system(*system);
  auto report = hyperspace_entropy_order(system, parse_range(c.n_range), eps_grid(*system, c), order_policy(c));
  return order_summary(report, "order_hyperspace", art, out);
}

int cmd_metric_order(const RunConfig& c, Artifacts& art, std::ostream& out) {
  auto system = load_system(c.system_spec);
  art.set_system(*system);
  const auto grid = eps_grid(*system, c);
  if (c.space == "points") {
    auto report = dimension_estimate(system, grid);
    art.report("dimension", report);
    print_fits(out, "dimension", report.ratios);
    return kOk;
  }
  if (c.space == "hyperspace") {
    Sandwich s = hyperspace_sandwich(system, grid, order_policy(c));
    art.report("dimension", s.dimension);
    art.report("metric_order_hyperspace", s.hyperspace,
               Json{{"dimension_estimate_float", s.dimension_limit}, {"contains_dimension", s.contains_dimension}});
    print_fits(out, "metric_order hyperspace", s.hyperspace.ratios);
    out << "dimension estimate " << fmt(s.dimension_limit) << (s.contains_dimension ? " inside" : " OUTSIDE")
        << " every bracket\n";
    art.result("contains_dimension", s.contains_dimension);
    return s.contains_dimension ? kOk : kVerificationFailed;
  }
  if (c.space == "measures") {
    auto report = measure_metric_order(system, grid, order_policy(c));
    art.report("metric_order_measures", report);
    print_fits(out, "metric_order measures", report.ratios);
    return kOk;
  }
  throw InvalidArgument("--space must be points, hyperspace or measures");
}

int cmd_metric_check(const RunConfig& c, Artifacts& art, std::ostream& out) {
  auto system = load_system(c.system_spec.empty() ? std::string("full:2") : c.system_spec);
  art.set_system(*system);
  SuiteOptions options;
  options.measure_pairs = c.pairs;
  options.set_pairs = c.set_pairs ? c.set_pairs : c.pairs;
  options.max_support = c.max_support;
  options.max_length = c.max_length;
  options.seed = c.seed;
  SuiteReport report = run_metric_suite(system, options);
  Json doc;
  for (const auto& [name, count] : report.checks)
    doc["checks"][name] = {{"checked", count}, {"violations", report.violations.at(name)}};
  doc["violations"] = report.total_violations();
  doc["examples"] = report.examples;
  art.json("metric_check.json", doc);
  for (const auto& [name, count] : report.checks)
    out << name << " checked=" << count << " violations=" << report.violations.at(name) << '\n';
  art.result("violations", report.total_violations());
  return report.total_violations() == 0 ? kOk : kVerificationFailed;
}

int cmd_quantize(const RunConfig& c, Artifacts& art, std::ostream& out) {
  auto system = load_system(c.system_spec);
  art.set_system(*system);
  MeasureEnsemble ensemble = load_ensemble(system, c);
  const auto options = quantization_options(c);
  const IntRange range = parse_range(c.n_range);
  const std::vector<Rational> grid = c.eps.empty() ? eps_grid(*system, c) : std::vector<Rational>{single_eps(*system, c)};
  if (c.invariant) {
    auto report = measure_emergence(ensemble, range, grid, options);
    art.report("measure_emergence", report);
    for (const auto& cell : report.cells)
      out << "n=" << cell.n << " eps=" << to_string(cell.eps) << " E_mu in [" << cell.lower << ", " << cell.upper << "]\n";
    return kOk;
  }
  ScalingReport report;
  report.mode = ReportMode::entropy_order;
  Json books = Json::array();
  for (const auto& eps : grid)
    for (int n : range.values()) {
      QuantizationResult q = quantization(ensemble, n, eps, options);
      ScalingCell cell;
      cell.n = n;
      cell.eps = eps;
      cell.lower = BigInt(static_cast<unsigned long>(q.lower));
      cell.upper = BigInt(static_cast<unsigned long>(q.q));
      cell.exact = q.exact;
      cell.witness = "codebook " + std::to_string(q.q) + " cost " + to_string(q.cost);
      report.cells.push_back(cell);
      Json book = Json::array();
      for (const auto& m : q.codebook) book.push_back(io::to_json(m));
      books.push_back({{"n", n}, {"epsilon", to_string(eps)}, {"cost", to_string(q.cost)},
                       {"exhaustive", q.exhaustive}, {"codebook", std::move(book)}});
      out << "n=" << n << " eps=" << to_string(eps) << " Q in [" << q.lower << ", " << q.q << "]"
          << (q.exact ? " exact" : "") << '\n';
    }
  fit_report(report, system->alphabet_size());
  art.report("quantize", report);
  art.json("codebooks.json", books);
  return kOk;
}

int cmd_pointwise(const RunConfig& c, Artifacts& art, std::ostream& out) {
  auto system = load_system(c.system_spec);
  art.set_system(*system);
  std::vector<DiscreteMeasure> vx;
  if (!c.vx.empty()) {
    Json doc = io::read_json_file(c.vx);
    if (!doc.contains("measures") || !doc["measures"].is_array()) throw FormatError("V(x) file needs a \"measures\" array");
    try {
      for (const auto& m : doc["measures"]) vx.push_back(io::measure_from_json(system, m));
    } catch (const InvalidArgument& e) {
      throw FormatError(c.vx + ": " + e.what());
    }
  } else if (!c.orbits.empty()) {
    vx = orbit_measures(system, c);
  } else {
    throw InvalidArgument("pointwise needs --vx or --orbits");
  }
  const IntRange range = parse_range(c.n_range);
  const Rational eps = single_eps(*system, c);
  Json rows = Json::array();
  for (int n : range.values()) {
    PointwiseResult r = pointwise_emergence(vx, n, eps, quantization_options(c));
    rows.push_back({{"n", n}, {"epsilon", to_string(eps)}, {"count", r.count}, {"exact", r.exact}});
    out << "n=" << n << " eps=" << to_string(eps) << " E_x=" << r.count << (r.exact ? " exact" : " upper") << '\n';
  }
  art.json("pointwise.json", Json{{"cells", rows}});
  return kOk;
}

int self_check(const Certificate& cert, const RunConfig& c, Artifacts& art, std::ostream& out, std::ostream& err) {
  const VerificationOutcome v = verify_certificate(cert);
  const RecountResult r = v.passed ? recount_certificate(cert, c.workers) : RecountResult{false, 0, v.first_failure};
  art.result("family_size", to_string(cert.family_size));
  art.result("verified", v.passed && r.passed);
  out << to_string(cert.kind) << " n=" << cert.n << " eps=" << to_string(cert.eps)
      << " family=" << to_string(cert.family_size) << " pairs=" << v.pairs_checked
      << " recounted=" << r.compared << '\n';
  if (!v.passed || !r.passed) {
    err << "certificate failed: " << (v.passed ? r.first_failure : v.first_failure) << '\n';
    return kVerificationFailed;
  }
  return kOk;
}

int cmd_certify(const RunConfig& c, Artifacts& art, std::ostream& out, std::ostream& err) {
  auto system = load_system(c.system_spec);
  art.set_system(*system);
  const int n = parse_range(c.n_range).lo;
  const Rational eps = single_eps(*system, c);
  SampleOptions sample;
  sample.pairs = c.pairs;
  sample.full_check_limit = c.full_check;
  sample.seed = c.seed;

  Certificate cert;
  if (c.family == "periodic") {
    cert = apart_measure_family(system, n, eps, ApartSource::periodic);
  } else if (c.family == "hamming") {
    Certificate base = apart_measure_family(system, n, eps, ApartSource::dirac);
    const std::size_t code = c.code ? c.code : best_code_length(base.measures.size(), c.code_cap);
    if (code < 8) throw InvalidArgument("apart base has fewer than 8 members at this scale");
    cert = hamming_measure_family(base, code, sample);
  } else if (c.family == "hyperspace") {
    SetDirection direction;
    if (c.direction == "separated") direction = SetDirection::separated;
    else if (c.direction == "split") direction = SetDirection::split;
    else throw InvalidArgument("--direction must be separated or split");
    std::size_t available = 0;
    if (direction == SetDirection::separated) {
      available = point_count(*system, n, eps, CoverConvention::closed);
    } else {
      available = split_base_family(system, n, eps).sets.size();
    }
    const std::size_t code = c.code ? c.code : best_code_length(available, c.code_cap);
    if (code < 8) throw InvalidArgument("fewer than 8 base elements at this scale");
    cert = hyperspace_family(system, n, eps, code, direction, sample);
  } else {
    throw InvalidArgument("certify needs hamming, hyperspace or periodic");
  }
  art.json("certificate.json", io::to_json(cert));
  return self_check(cert, c, art, out, err);
}

int cmd_verify(const RunConfig& c, Artifacts& art, std::ostream& out, std::ostream& err) {
  io::LoadedCertificate loaded = io::certificate_from_json(io::read_json_file(c.certificate));
  art.set_system(*loaded.cert.system);
  if (!loaded.defects.empty()) {
    err << "certificate failed: " << loaded.defects.front() << '\n';
    art.result("verified", false);
    art.result("first_failure", loaded.defects.front());
    return kVerificationFailed;
  }
  return self_check(loaded.cert, c, art, out, err);
}

void add_common(CLI::App* sub, RunConfig& c, bool grid = true) {
  sub->add_option("--system", c.system_spec, "System spec: JSON file, full:M[:lambda] or golden[:lambda]");
  sub->add_option("--seed", c.seed, "Seed for every random choice");
  sub->add_option("--out", c.out_dir, "Artifact directory");
  sub->add_option("--format", c.format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
  sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  if (grid) {
    sub->add_option("--n", c.n_range, "Horizon range a..b");
    sub->add_option("--eps-exp", c.eps_exponents, "Scale exponents k (eps = lambda^k): a..b or k1,k2");
  }
}

void add_order(CLI::App* sub, RunConfig& c) {
  sub->add_option("--samples", c.samples, "Random elements checked against each upper family");
  sub->add_option("--pairs", c.pairs, "Sampled certificate pairs");
  sub->add_option("--full-check", c.full_check, "Families up to this size are checked on every pair");
  sub->add_option("--code-cap", c.code_cap, "Largest code length");
}

void add_quantize(CLI::App* sub, RunConfig& c) {
  sub->add_option("--eps", c.eps, "Scale as a rational or decimal (overrides --eps-exp)");
  sub->add_option("--orbits", c.orbits, "Comma-separated periodic cycles, e.g. 0,01");
  sub->add_option("--resolution", c.resolution, "Word length of orbit atoms");
  sub->add_option("--grid-steps", c.grid_steps, "Mixture grid resolution");
  sub->add_option("--exact-max", c.exact_max, "Exhaustive search up to this codebook size");
  sub->add_option("--candidate-cap", c.candidate_cap, "Largest candidate set");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Exact entropy, entropy-order and emergence estimates on symbolic systems"};
  app.require_subcommand(1);

  auto* entropy = app.add_subcommand("entropy", "Topological entropy from exact cylinder counts");
  add_common(entropy, c);
  auto* order_m = app.add_subcommand("order-measures", "Entropy order of the induced measure system");
  add_common(order_m, c);
  add_order(order_m, c);
  auto* order_k = app.add_subcommand("order-hyperspace", "Entropy order of the induced hyperspace system");
  add_common(order_k, c);
  add_order(order_k, c);
  auto* metric = app.add_subcommand("metric-order", "Box dimension and metric order brackets");
  add_common(metric, c);
  add_order(metric, c);
  metric->add_option("--space", c.space, "points, hyperspace or measures");
  auto* check = app.add_subcommand("metric-check", "Seeded metric inequality suite");
  add_common(check, c, false);
  check->add_option("--pairs", c.pairs, "Random measure pairs");
  check->add_option("--set-pairs", c.set_pairs, "Random set pairs (default: --pairs)");
  check->add_option("--max-support", c.max_support, "Largest support or set size");
  check->add_option("--max-length", c.max_length, "Longest word");
  auto* quantize = app.add_subcommand("quantize", "Quantization number of a measure ensemble");
  add_common(quantize, c);
  add_quantize(quantize, c);
  quantize->add_option("--ensemble", c.ensemble, "Ensemble JSON file");
  quantize->add_flag("--invariant", c.invariant, "Require invariant atoms (measure emergence)");
  auto* pointwise = app.add_subcommand("pointwise", "Pointwise emergence of a limit set V(x)");
  add_common(pointwise, c);
  add_quantize(pointwise, c);
  pointwise->add_option("--vx", c.vx, "JSON file with a \"measures\" array");
  auto* certify = app.add_subcommand("certify", "Emit and self-check a lower-bound certificate");
  add_common(certify, c);
  certify->add_option("family", c.family, "hamming, hyperspace or periodic")->required();
  certify->add_option("--eps", c.eps, "Scale as a rational or decimal (overrides --eps-exp)");
  certify->add_option("--code", c.code, "Code length (multiple of 8)");
  certify->add_option("--code-cap", c.code_cap, "Largest automatic code length");
  certify->add_option("--pairs", c.pairs, "Sampled pairs");
  certify->add_option("--full-check", c.full_check, "Families up to this size are checked on every pair");
  certify->add_option("--direction", c.direction, "separated or split");
  auto* verify = app.add_subcommand("verify", "Re-verify a certificate file");
  add_common(verify, c, false);
  verify->add_option("certificate", c.certificate, "Certificate JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  std::optional<Artifacts> art;
  int status = kFailure;
  try {
    art.emplace(c, args);
    if (c.command == "entropy") status = cmd_entropy(c, *art, out);
    else if (c.command == "order-measures") status = cmd_order_measures(c, *art, out);
    else if (c.command == "order-hyperspace") status = cmd_order_hyperspace(c, *art, out);
    else if (c.command == "metric-order") status = cmd_metric_order(c, *art, out);
    else if (c.command == "metric-check") status = cmd_metric_check(c, *art, out);
    else if (c.command == "quantize") status = cmd_quantize(c, *art, out);
    else if (c.command == "pointwise") status = cmd_pointwise(c, *art, out);
    else if (c.command == "certify") status = cmd_certify(c, *art, out, err);
    else if (c.command == "verify") status = cmd_verify(c, *art, out, err);
  } catch (const FormatError& e) {
    err << "malformed input: " << e.what() << '\n';
    status = kMalformedInput;
  } catch (const nlohmann::json::exception& e) {
    err << "malformed input: " << e.what() << '\n';
    status = kMalformedInput;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    status = kVerificationFailed;
  } catch (const ResourceCap& e) {
    err << "resource cap: " << e.what() << '\n';
    status = kResourceCap;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    status = kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    status = kFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    status = kFailure;
  }
  if (art) {
    try {
      art->finish(status);
    } catch (const std::exception& e) {
      err << "cannot write manifest: " << e.what() << '\n';
    }
  }
  return status;
}

}  // namespace emergence::cli
