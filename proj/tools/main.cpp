#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <regex>

#include "CLI11.hpp"
#include "json.hpp"

#include "expression.hpp"
#include "gcelab/catalog.hpp"
#include "gcelab/characteristic.hpp"
#include "gcelab/error.hpp"
#include "gcelab/homogenize.hpp"
#include "gcelab/models.hpp"
#include "suite.hpp"

namespace {

using namespace gcelab;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInvariant = 3;

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvariantViolation:
    case ErrorCode::InvalidSasakian:
      return kExitInvariant;
    default:
      return kExitInputError;
  }
}

struct Options {
  double tol = kDefaultTolerance;
  unsigned seed = 0;
  int count = 3;
  std::string alpha;
  bool compact = false;
  bool timing = false;
  std::string target;
  std::string homogenize_case;
  std::string f;
  std::optional<double> period;
  std::optional<double> a0;
  std::optional<double> c;
  int steps = kDefaultOdeSteps;
  int samples = 32;
  bool symmetrize = false;
  std::string output;
};

void emit(const json& doc, const Options& o) {
  std::cout << (o.compact ? doc.dump() : doc.dump(2)) << "\n";
}

bool stderr_is_terminal() { return isatty(STDERR_FILENO) != 0; }

std::string catalog_path() {
  if (const char* env = std::getenv("GCELAB_CATALOG"); env && *env) return env;
  return GCELAB_DEFAULT_CATALOG;
}

std::complex<double> parse_alpha(const std::string& text) {
  static const std::regex full(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i)?\s*$)");
  static const std::regex imaginary(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i\s*$)");
  std::smatch m;
  double re = 0.0;
  double im = 0.0;
  if (std::regex_match(text, m, imaginary)) {
    const std::string b = m[1].str();
    im = b.empty() || b == "+" ? 1.0 : b == "-" ? -1.0 : std::stod(b);
  } else if (std::regex_match(text, m, full) && m[2].matched) {
    re = m[1].matched ? std::stod(m[1].str()) : 0.0;
    im = m[3].matched ? std::stod(m[3].str()) : 1.0;
    if (m[2].str() == "-") im = -im;
  } else {
    throw Error(ErrorCode::ParseError, "alpha '" + text + "' is not of the form a+bi");
  }
  if (!(im > 0.0)) throw Error(ErrorCode::InvalidParameter, "alpha needs Im > 0, got '" + text + "'");
  return {re, im};
}

std::string format_alpha(std::complex<double> a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", a.real(), a.imag());
  return buf;
}

std::vector<CatalogEntry> select_models(const std::vector<CatalogEntry>& catalog,
                                        const std::string& target) {
  if (target == "catalog" || target == "all") return catalog;
  for (const CatalogEntry& e : catalog)
    if (e.name == target) return {e};
  std::vector<CatalogEntry> out;
  for (const CatalogEntry& e : catalog)
    if (e.name.rfind(target + "_", 0) == 0) out.push_back(e);
  if (out.empty()) throw Error(ErrorCode::InvalidParameter, "unknown model '" + target + "'");
  return out;
}

std::pair<SasakianKind, SasakianKind> parse_pairing(const std::string& name) {
  const std::size_t x = name.find('x');
  if (x == std::string::npos) {
    throw Error(ErrorCode::InvalidParameter, "'" + name + "' is not a product pairing like su2xnil");
  }
  return {parse_sasakian_kind(name.substr(0, x)), parse_sasakian_kind(name.substr(x + 1))};
}

void print_table(const std::vector<cli::ModelReport>& reports) {
  for (const cli::ModelReport& r : reports) {
    std::fprintf(stderr, "%s%s%s  [%s]\n", r.name.c_str(), r.alpha.empty() ? "" : " alpha=",
                 r.alpha.c_str(), r.pass() ? "pass" : "FAIL");
    for (const cli::Check& c : r.checks) {
      if (c.residual) {
        std::fprintf(stderr, "  %-36s %-5s %10.3e  %s\n", c.id.c_str(), c.pass ? "ok" : "FAIL",
                     *c.residual, c.detail.c_str());
      } else {
        std::fprintf(stderr, "  %-36s %-5s %10s  %s\n", c.id.c_str(), c.pass ? "ok" : "FAIL", "-",
                     c.detail.c_str());
      }
    }
  }
}

int cmd_classify(const Options& o) {
  HermitianFrame F = [&] {
    if (std::filesystem::exists(o.target)) return frame_from_json(read_json_file(o.target));
    const std::vector<CatalogEntry> catalog = load_catalog(catalog_path());
    return find_model(catalog, o.target).frame;
  }();
  json doc = cli::classification_report(F, o.tol);
  doc["source"] = o.target;
  emit(doc, o);
  if (stderr_is_terminal()) {
    for (const auto& [name, flag] : doc["flags"].items()) {
      std::fprintf(stderr, "  %-18s %-5s %10.3e\n", name.c_str(),
                   flag["value"].get<bool>() ? "true" : "false", flag["residual"].get<double>());
    }
    std::fprintf(stderr, "  case_tag           %s\n", doc["case_tag"].get<std::string>().c_str());
  }
  return kExitPass;
}

int cmd_verify(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  cli::SuiteOptions so{o.tol, o.seed, o.count};
  std::vector<cli::ModelReport> reports;
  if (!o.alpha.empty()) {
    const std::complex<double> alpha = parse_alpha(o.alpha);
    const auto [a, b] = parse_pairing(o.target);
    CatalogEntry model{o.target, "calabi_eckmann", "built from --alpha",
                       calabi_eckmann(sasakian_model(a), sasakian_model(b), alpha)};
    reports.push_back(cli::run_suite(model, so));
    reports.back().alpha = format_alpha(alpha);
  } else {
    const std::vector<CatalogEntry> catalog = load_catalog(catalog_path());
    reports = cli::run_suites(select_models(catalog, o.target), so);
  }
  bool pass = true;
  json models = json::array();
  for (const cli::ModelReport& r : reports) {
    pass = pass && r.pass();
    models.push_back(cli::to_json(r));
  }
  json doc{{"tool", "gcelab"}, {"version", GCELAB_VERSION}, {"tolerance", o.tol},
           {"seed", o.seed},   {"count", o.count},         {"target", o.target}};
  doc["models"] = models;
  doc["pass"] = pass;
  if (o.timing) {
    doc["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  emit(doc, o);
  if (stderr_is_terminal()) print_table(reports);
  return pass ? kExitPass : kExitCheckFailure;
}

int cmd_sweep(const Options& o) {
  const auto [a, b] = parse_pairing(o.target);
  std::mt19937 rng(o.seed);
  std::uniform_real_distribution<double> re(-2.0, 2.0);
  std::uniform_real_distribution<double> im(0.2, 2.0);
  json rows = json::array();
  bool pass = true;
  for (int i = 0; i < o.count; ++i) {
    const std::complex<double> alpha(re(rng), im(rng));
    const HermitianFrame F = calabi_eckmann(sasakian_model(a), sasakian_model(b), alpha);
    const MetricClassification mc = classify_metric(F, o.tol);
    const bool ok = mc.gce.value && mc.lp_constant && *mc.lp_constant > 0.0;
    pass = pass && ok;
    rows.push_back({{"alpha", format_alpha(alpha)},
                    {"c", mc.lp_constant ? json(*mc.lp_constant) : json(nullptr)},
                    {"nijenhuis", mc.integrable.residual},
                    {"parallel_torsion", mc.parallel_torsion.residual},
                    {"lee_potential", mc.lp.residual},
                    {"gce", mc.gce.value}});
    if (stderr_is_terminal()) {
      std::fprintf(stderr, "  alpha=%-28s c=%-12.6g gce=%s\n", format_alpha(alpha).c_str(),
                   mc.lp_constant ? *mc.lp_constant : NAN, mc.gce.value ? "true" : "false");
    }
  }
  json doc{{"tool", "gcelab"}, {"version", GCELAB_VERSION}, {"pairing", o.target},
           {"tolerance", o.tol}, {"seed", o.seed}};
  doc["sweep"] = rows;
  doc["pass"] = pass;
  emit(doc, o);
  return pass ? kExitPass : kExitCheckFailure;
}

PeriodicFunction load_function(const Options& o, std::optional<double> period) {
  if (o.f.empty()) throw Error(ErrorCode::InvalidParameter, "--f is required");
  if (std::filesystem::is_regular_file(o.f)) {
    const json doc = read_json_file(o.f);
    if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array()) {
      throw Error(ErrorCode::ParseError, o.f + ": expected {\"samples\": [...], \"period\": p}");
    }
    std::vector<double> samples;
    for (const json& v : doc["samples"]) {
      if (!v.is_number()) throw Error(ErrorCode::ParseError, o.f + ": samples must be numbers");
      samples.push_back(v.get<double>());
    }
    if (doc.contains("period")) {
      if (!doc["period"].is_number()) throw Error(ErrorCode::ParseError, o.f + ": period must be a number");
      period = doc["period"].get<double>();
    }
    if (!period) throw Error(ErrorCode::InvalidParameter, "sampled function needs a period");
    return PeriodicFunction::from_samples(std::move(samples), *period);
  }
  const cli::Expression e = cli::Expression::parse(o.f);
  if (!period) throw Error(ErrorCode::InvalidParameter, "a period is required");
  return PeriodicFunction([e](double t) { return e(t); }, *period);
}

json solution_table(const PeriodicSolution& s, int samples) {
  const int steps = static_cast<int>(s.values.size()) - 1;
  const int stride = std::max(1, steps / std::max(1, samples));
  json t = json::array();
  json v = json::array();
  for (int k = 0; k <= steps; k += stride) {
    t.push_back(s.t[k]);
    v.push_back(s.values[k]);
  }
  return json{{"t", t}, {"value", v}};
}

int cmd_homogenize(const Options& o) {
  json doc{{"tool", "gcelab"}, {"version", GCELAB_VERSION}, {"case", o.homogenize_case}, {"f", o.f}};
  PeriodicSolution s;
  if (o.homogenize_case == "flat") {
    const PeriodicFunction f = load_function(o, o.period);
    s = solve_flat_case(f, o.steps);
    if (o.symmetrize) s = symmetrize_flat_solution(s, f);
    doc["period"] = f.period();
    doc["symmetrized"] = o.symmetrize;
  } else {
    const PeriodicFunction f = load_function(o, o.a0 ? o.a0 : o.period);
    const double c = o.c ? *o.c : f.mean(o.steps);
    s = solve_hyperbolic_case(f, c, o.steps);
    const PeriodicSolution trial = integrate_hyperbolic(f, c, 0.0, o.steps);
    doc["a0"] = f.period();
    doc["drift"] = trial.values.back() - trial.values.front();
  }
  doc["steps"] = o.steps;
  doc["c"] = s.c;
  doc["residuals"] = {{"periodicity", s.periodicity_residual}, {"ode", s.ode_residual}};
  doc["solution"] = solution_table(s, o.samples);
  emit(doc, o);
  if (stderr_is_terminal()) {
    std::fprintf(stderr, "  c = %.12g  periodicity %.3e  ode %.3e\n", s.c, s.periodicity_residual,
                 s.ode_residual);
  }
  return kExitPass;
}

// One model per block, fixed key order, each matrix on a single line.
std::string format_catalog(const json& doc) {
  static const char* keys[] = {"name", "kind", "provenance", "dim", "metric", "J", "brackets"};
  std::string out = "{\n  \"models\": [";
  const json& models = doc.at("models");
  for (std::size_t i = 0; i < models.size(); ++i) {
    out += i == 0 ? "\n    {" : ",\n    {";
    for (std::size_t k = 0; k < std::size(keys); ++k) {
      out += k == 0 ? "\n      " : ",\n      ";
      out += json(keys[k]).dump() + ": " + models[i].at(keys[k]).dump();
    }
    out += "\n    }";
  }
  return out + "\n  ]\n}\n";
}

int cmd_catalog_export(const Options& o) {
  const std::string text = format_catalog(catalog_to_json(build_catalog()));
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    if (!out) throw Error(ErrorCode::InvalidParameter, "cannot write " + o.output);
    out << text;
  }
  return kExitPass;
}

int cmd_catalog_list(const Options& o) {
  json rows = json::array();
  for (const CatalogEntry& e : load_catalog(catalog_path())) {
    rows.push_back({{"name", e.name}, {"kind", e.kind}, {"dim", e.frame.dim()}});
  }
  emit(json{{"catalog", catalog_path()}, {"models", rows}}, o);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Hermitian structures with parallel characteristic torsion on Lie algebras", "gcelab"};
  app.set_version_flag("--version", GCELAB_VERSION);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", o.tol, "Tolerance for residual checks")->check(CLI::PositiveNumber);
    cmd->add_flag("--json", o.compact, "Single-line JSON output");
  };

  CLI::App* classify = app.add_subcommand("classify", "Classify a frame file or catalog model");
  classify->add_option("frame", o.target, "Frame JSON file or catalog model name")->required();
  add_common(classify);

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite");
  verify->add_option("target", o.target, "'catalog', a model name or a name prefix")->required();
  add_common(verify);
  verify->add_option("--seed", o.seed, "Seed for random forms and modifications");
  verify->add_option("--count", o.count, "Random samples per check")->check(CLI::PositiveNumber);
  verify->add_option("--alpha", o.alpha, "Calabi-Eckmann parameter a+bi with b > 0");
  verify->add_flag("--timing", o.timing, "Include wall time in the report");

  CLI::App* sweep = app.add_subcommand("sweep", "Calabi-Eckmann structures for random alpha");
  sweep->add_option("pairing", o.target, "Product pairing, e.g. su2xnil")->required();
  add_common(sweep);
  sweep->add_option("--seed", o.seed, "Seed for alpha");
  sweep->add_option("--count", o.count, "Number of alpha values")->check(CLI::PositiveNumber);

  CLI::App* homogenize = app.add_subcommand("homogenize", "Solve the homogenization ODEs");
  homogenize->add_option("case", o.homogenize_case, "flat or hyperbolic")
      ->required()
      ->check(CLI::IsMember({"flat", "hyperbolic"}));
  homogenize->add_option("--f", o.f, "Expression in t, or a JSON file with samples")->required();
  homogenize->add_option("--period", o.period, "Period of f");
  homogenize->add_option("--a0", o.a0, "Period of f in the hyperbolic case");
  homogenize->add_option("--c", o.c, "Constant c of the hyperbolic case (default: mean of f)");
  homogenize->add_option("--steps", o.steps, "Integration steps per period")->check(CLI::Range(16, 1 << 22));
  homogenize->add_option("--samples", o.samples, "Rows in the solution table")->check(CLI::PositiveNumber);
  homogenize->add_flag("--symmetrize", o.symmetrize, "Average the flat solution with its reflection");
  homogenize->add_flag("--json", o.compact, "Single-line JSON output");

  CLI::App* catalog = app.add_subcommand("catalog", "Catalog utilities");
  catalog->require_subcommand(1);
  CLI::App* cat_export = catalog->add_subcommand("export", "Build, validate and print the catalog");
  cat_export->add_option("-o,--output", o.output, "Write to a file instead of standard output");
  CLI::App* cat_list = catalog->add_subcommand("list", "List models of the active catalog");
  cat_list->add_flag("--json", o.compact, "Single-line JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitInputError;
  }

  try {
    if (*classify) return cmd_classify(o);
    if (*verify) return cmd_verify(o);
    if (*sweep) return cmd_sweep(o);
    if (*homogenize) return cmd_homogenize(o);
    if (*cat_export) return cmd_catalog_export(o);
    if (*cat_list) return cmd_catalog_list(o);
  } catch (const Error& e) {
    std::cerr << "gcelab: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "gcelab: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
