// Command-line front end: load algebroid input files, run verification
// suites, compute homology reports, and emit JSON or text.
//
// Exit codes (stable contract):
//   0  everything requested passed
//   1  a verification check failed
//   2  usage, parse, or input error
//
// Output: the JSON report goes to stdout by default, to a file with --out,
// or to canonical per-command files with --golden (directory taken from the
// LIEJETS_OUT_DIR environment variable, default ./golden).  --out and
// --golden conflict.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liejets/config.hpp"
#include "liejets/homology.hpp"
#include "liejets/suites.hpp"

namespace {

using namespace liejets;

struct Options {
  std::string config_path;
  int order = 0;   // 0 = take the spec default
  int degree = 0;  // cochain window bound N
  int arity = 0;   // sweep arity bound P
  std::string point_str;
  std::uint64_t seed = kDefaultSeed;
  int jobs = 1;
  bool force = false;
  std::string out_path;
  bool golden = false;
};

std::vector<Rational> resolve_point(const AlgebroidSpec& spec,
                                    const std::string& point_str) {
  if (point_str.empty()) return spec.point;
  const std::vector<std::string> parts =
      detail::config_split(point_str, ',');
  if (static_cast<int>(parts.size()) != spec.m)
    throw ParseError("--point needs " + std::to_string(spec.m) +
                     " comma-separated rationals");
  std::vector<Rational> point;
  point.reserve(parts.size());
  for (const std::string& p : parts)
    point.push_back(detail::config_rational(p, "--point"));
  return point;
}

// Write or print the report; return the process exit code.
int emit(const Report& rep, const Options& opts, const std::string& slug) {
  const nlohmann::json j = rep.to_json();
  if (opts.golden) {
    const char* env = std::getenv("LIEJETS_OUT_DIR");
    const std::filesystem::path dir = env ? env : "golden";
    std::filesystem::create_directories(dir);
    const std::filesystem::path file = dir / (slug + ".json");
    std::ofstream out(file);
    if (!out) throw ParseError("cannot write '" + file.string() + "'");
    out << j.dump(2) << "\n";
    std::cout << "wrote " << file.string() << "\n" << rep.text_summary();
  } else if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    if (!out) throw ParseError("cannot write '" + opts.out_path + "'");
    out << j.dump(2) << "\n";
    std::cout << rep.text_summary();
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return rep.all_passed() ? 0 : 1;
}

// Axiom gate for the heavier commands: refuse to compute on an input that
// fails the bracket axioms, unless --force.
std::optional<int> gate_axioms(const AlgebroidSpec& spec, const Options& opts) {
  if (opts.force) return std::nullopt;
  const Report rep = check_axioms(spec, opts.seed);
  if (rep.all_passed()) return std::nullopt;
  std::cerr << "axiom gate failed for '" << spec.name
            << "' (use --force to compute anyway):\n"
            << rep.text_summary();
  return 1;
}

int cmd_check(const Options& opts) {
  const AlgebroidSpec spec = load_spec_file(opts.config_path);
  const Report rep = check_axioms(spec, opts.seed);
  return emit(rep, opts, "check-" + spec.name);
}

int cmd_groupoid(const Options& opts) {
  const AlgebroidSpec spec = load_spec_file(opts.config_path);
  const int q = opts.order ? opts.order : spec.q;
  if (q < 2)
    throw ParseError("groupoid: --order must be at least 2 (a window of "
                     "order 1 has no room for any generator action)");
  if (auto code = gate_axioms(spec, opts)) return *code;
  const GroupoidData gd = build_groupoid(spec, q, opts.jobs);
  const Report rep = verify_groupoid(gd, opts.seed, opts.jobs);
  return emit(rep, opts, "groupoid-" + spec.name + "-q" + std::to_string(q));
}

int cmd_complexes(const Options& opts) {
  const AlgebroidSpec spec = load_spec_file(opts.config_path);
  const int q = opts.order ? opts.order : spec.q;
  const int N = opts.degree ? opts.degree : spec.N;
  const int P = opts.arity ? opts.arity : spec.P;
  if (q < 3)
    throw ParseError("complexes: --order must be at least 3 so capped "
                     "chains keep a certified window");
  if (N < 1 || P < 1) throw ParseError("complexes: bounds must be >= 1");
  if (auto code = gate_axioms(spec, opts)) return *code;
  const Report rep = complexes_report(spec, q, N, P, opts.seed);
  return emit(rep, opts,
              "complexes-" + spec.name + "-q" + std::to_string(q) + "-N" +
                  std::to_string(N) + "-P" + std::to_string(P));
}

int cmd_homology(const Options& opts) {
  const AlgebroidSpec spec = load_spec_file(opts.config_path);
  const int q = opts.order ? opts.order : spec.q;
  const int N = opts.degree ? opts.degree : spec.N;
  const int P = opts.arity ? opts.arity : spec.P;
  if (q < 2) throw ParseError("homology: --order must be at least 2");
  if (N < 1 || P < 1) throw ParseError("homology: bounds must be >= 1");
  const std::vector<Rational> point = resolve_point(spec, opts.point_str);
  if (auto code = gate_axioms(spec, opts)) return *code;
  const Report rep = hh_report(spec, q, N, P, point, opts.seed, opts.jobs);
  return emit(rep, opts,
              "homology-" + spec.name + "-q" + std::to_string(q) + "-N" +
                  std::to_string(N));
}

int cmd_demo_tangent(const Options& opts) {
  const int q = opts.order ? opts.order : 4;
  if (q < 2) throw ParseError("demo-tangent: --order must be at least 2");
  const Report rep = diagonal_model_report(q, opts.seed);
  return emit(rep, opts, "demo-tangent-q" + std::to_string(q));
}

void add_common_flags(CLI::App* cmd, Options& opts, bool with_config) {
  if (with_config)
    cmd->add_option("config", opts.config_path,
                    "algebroid input file (key = value format)")
        ->required();
  cmd->add_option("--order", opts.order, "truncation order q");
  cmd->add_option("--degree", opts.degree, "cochain window bound N");
  cmd->add_option("--arity", opts.arity, "sweep arity bound P");
  cmd->add_option("--point", opts.point_str,
                  "base point, comma-separated rationals");
  cmd->add_option("--seed", opts.seed, "seed for randomized sweeps");
  cmd->add_option("--jobs", opts.jobs, "worker threads for parallel sweeps")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--force", opts.force, "skip the axiom gate");
  auto* out = cmd->add_option("--out", opts.out_path,
                              "write the JSON report to this file");
  auto* golden = cmd->add_flag(
      "--golden", opts.golden,
      "write the canonical JSON file into $LIEJETS_OUT_DIR (default ./golden)");
  out->excludes(golden);
  golden->excludes(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact verification tool for jet-groupoid calculus on Lie algebroids"};
  app.require_subcommand(1);

  Options opts;
  CLI::App* check = app.add_subcommand(
      "check", "run the bracket axiom checks on an input file");
  add_common_flags(check, opts, true);
  CLI::App* groupoid = app.add_subcommand(
      "groupoid", "verify the full jet-groupoid identity suite");
  add_common_flags(groupoid, opts, true);
  CLI::App* complexes = app.add_subcommand(
      "complexes", "verify the chain/cochain complex identity sweeps");
  add_common_flags(complexes, opts, true);
  CLI::App* homology = app.add_subcommand(
      "homology", "compute homology tables and agreement findings");
  add_common_flags(homology, opts, true);
  CLI::App* demo = app.add_subcommand(
      "demo-tangent", "print the closed-form diagonal model reproduction");
  add_common_flags(demo, opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(opts);
    if (groupoid->parsed()) return cmd_groupoid(opts);
    if (complexes->parsed()) return cmd_complexes(opts);
    if (homology->parsed()) return cmd_homology(opts);
    if (demo->parsed()) return cmd_demo_tangent(opts);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const liejets::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const liejets::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const liejets::OrderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
