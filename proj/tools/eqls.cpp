// eqls: evolutionary qutrit logic synthesis driver.
//
//   eqls run --target <name|file> [flags]   single or repeated GA runs
//   eqls bench <name> [flags]               seeded benchmark campaign
//   eqls verify                             deterministic construction checks
//   eqls list-gates                         print the gate catalog
//
// All flags can also be given through --config <file> with key=value lines.
// EQLS_WORKERS controls the evaluation worker count unless --workers is set.

#include <algorithm>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "eqls/bench.hpp"

namespace {

struct RunOptions {
  std::string target;
  std::string mode = "classical";
  std::string fitness = "f0";
  double alpha = 0.9;
  double beta = 0.1;
  std::vector<std::string> restrict_specs;
  bool no_restrictions = false;
  int pop = 50;
  int gens = 10000;
  double mutation_rate = 0.05;
  double crossover_rate = 0.8;
  std::uint64_t seed = 1;
  int runs = 1;
  std::string report;
  std::string seed_circuit;
  bool dump_merges = false;
  bool no_elitism = false;
  bool no_wgs = false;
  bool no_eigs = false;
  bool any_toffoli_variant = false;
  int workers = 0;  // 0: fall back to EQLS_WORKERS
  std::string config_file;
};

eqls::GAMode parse_mode(const std::string& s) {
  if (s == "classical") return eqls::GAMode::Classical;
  if (s == "baldwinian") return eqls::GAMode::Baldwinian;
  if (s == "lamarckian") return eqls::GAMode::Lamarckian;
  throw CLI::ValidationError("--mode", "unknown mode '" + s + "'");
}

eqls::RestrictionMap parse_restrictions(
    const std::vector<std::string>& specs) {
  eqls::RestrictionMap out;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CLI::ValidationError("--restrict",
                                 "expected <gate>=<wires>, got '" + spec + "'");
    std::set<int> wires;
    std::istringstream ws(spec.substr(eq + 1));
    std::string piece;
    while (std::getline(ws, piece, ','))
      wires.insert(std::stoi(piece));
    if (wires.empty())
      throw CLI::ValidationError("--restrict", "no wires in '" + spec + "'");
    out[spec.substr(0, eq)] = std::move(wires);
  }
  return out;
}

/// Resolves --target: a known benchmark name (with its default
/// restrictions) or a truth-table/unitary file.
eqls::Benchmark resolve_target(const std::string& target) {
  const auto names = eqls::benchmark_names();
  if (std::find(names.begin(), names.end(), target) != names.end())
    return eqls::load_benchmark(target);
  eqls::Benchmark b;
  b.name = target;
  b.target = eqls::load_target_file(target, 3);
  return b;
}

eqls::GAConfig build_config(const RunOptions& opt,
                            const eqls::Benchmark& bench) {
  eqls::GAConfig cfg;
  cfg.mode = parse_mode(opt.mode);
  cfg.population_size = opt.pop;
  cfg.max_generations = opt.gens;
  cfg.mutation_rate = opt.mutation_rate;
  cfg.crossover_rate = opt.crossover_rate;
  cfg.rng_seed = opt.seed;
  cfg.elitism = !opt.no_elitism;
  cfg.use_wgs = !opt.no_wgs;
  cfg.use_eigs = !opt.no_eigs;
  cfg.fitness_params.mode = opt.fitness == "f1"
                                ? eqls::FitnessParams::Mode::f1
                                : eqls::FitnessParams::Mode::f0;
  cfg.fitness_params.alpha = opt.alpha;
  cfg.fitness_params.beta = opt.beta;
  cfg.workers = opt.workers > 0 ? opt.workers : eqls::default_workers();

  cfg.restrictions = bench.restrictions;
  if (opt.no_restrictions) cfg.restrictions.clear();
  for (auto& [id, wires] : parse_restrictions(opt.restrict_specs))
    cfg.restrictions[id] = wires;

  if (!opt.seed_circuit.empty()) {
    std::ifstream f(opt.seed_circuit);
    if (!f) throw std::runtime_error("cannot open " + opt.seed_circuit);
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#') continue;
      cfg.seed_circuits.push_back(eqls::genome_from_line(line));
    }
  }
  return cfg;
}

void add_run_flags(CLI::App* cmd, RunOptions& opt, bool with_target) {
  if (with_target)
    cmd->add_option("--target", opt.target, "benchmark name or target file")
        ->required();
  cmd->add_option("--mode", opt.mode, "classical|baldwinian|lamarckian");
  cmd->add_option("--fitness", opt.fitness, "f0|f1");
  cmd->add_option("--alpha", opt.alpha, "f1 error weight");
  cmd->add_option("--beta", opt.beta, "f1 cost weight");
  cmd->add_option("--restrict", opt.restrict_specs,
                  "<gate>=<wires>, e.g. X02=2 or H3=1,2");
  cmd->add_flag("--no-restrictions", opt.no_restrictions,
                "drop the benchmark's default restrictions");
  cmd->add_option("--pop", opt.pop, "population size");
  cmd->add_option("--gens", opt.gens, "generation limit");
  cmd->add_option("--mutation-rate", opt.mutation_rate, "per-gate rate");
  cmd->add_option("--crossover-rate", opt.crossover_rate);
  cmd->add_option("--seed", opt.seed, "RNG seed (run i uses seed+i)");
  cmd->add_option("--runs", opt.runs, "number of seeded runs");
  cmd->add_option("--report", opt.report, "write reports to this file");
  cmd->add_option("--seed-circuit", opt.seed_circuit,
                  "genome file seeding the initial population");
  cmd->add_flag("--dump-merges", opt.dump_merges, "print merge events");
  cmd->add_flag("--no-elitism", opt.no_elitism);
  cmd->add_flag("--no-wgs", opt.no_wgs, "uniform instead of weighted mutation");
  cmd->add_flag("--no-eigs", opt.no_eigs,
                "mutate from primitives only (lamarckian)");
  cmd->add_option("--workers", opt.workers, "evaluation worker count");
  cmd->add_option("--config", opt.config_file,
                  "read key=value flag defaults from a file");
}

/// Expand `--config <file>` into trailing flag tokens. Each `key=value` line
/// becomes `--key=value` (or a bare `--key` for boolean flags) unless the
/// same flag already appears on the command line, so explicit flags win.
std::vector<std::string> apply_config_defaults(std::vector<std::string> args) {
  static const std::set<std::string> boolean_flags{
      "no-restrictions", "dump-merges", "no-elitism",
      "no-wgs",          "no-eigs",     "any-toffoli-variant"};
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  while (std::getline(f, line)) {
    const std::size_t eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& a : args)
      given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given) continue;
    if (boolean_flags.count(key)) {
      if (value == "1" || value == "true" || value == "yes" || value == "on")
        args.push_back(flag);
    } else {
      args.push_back(flag + "=" + value);
    }
  }
  return args;
}

int cmd_run(const RunOptions& opt) {
  const eqls::Benchmark bench = resolve_target(opt.target);
  std::ostringstream all;
  bool any_success = false;
  for (int r = 0; r < opt.runs; ++r) {
    eqls::GAConfig cfg = build_config(opt, bench);
    cfg.rng_seed = opt.seed + static_cast<std::uint64_t>(r);
    eqls::Engine engine(cfg, bench.target);
    const eqls::RunReport rep = engine.run();
    any_success = any_success || rep.success;
    all << rep.to_text();
    if (opt.dump_merges)
      for (const auto& ev : rep.merge_events)
        all << "merge " << eqls::merge_event_line(ev) << "\n";
  }
  std::cout << all.str();
  if (!opt.report.empty()) {
    std::ofstream f(opt.report);
    if (!f) throw std::runtime_error("cannot write " + opt.report);
    f << all.str();
  }
  return any_success ? 0 : 1;
}

int cmd_bench(const std::string& name, const RunOptions& opt) {
  eqls::Benchmark bench = resolve_target(name);
  eqls::CampaignConfig cc;
  cc.label = opt.mode + "/" + opt.fitness +
             (bench.restrictions.empty() || opt.no_restrictions
                  ? "/unrestricted"
                  : "/restricted");
  cc.ga = build_config(opt, bench);
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < opt.runs; ++r)
    seeds.push_back(opt.seed + static_cast<std::uint64_t>(r));

  const eqls::TargetSpec variant = eqls::toffoli_variant_target();
  const eqls::TargetSpec* alt =
      opt.any_toffoli_variant && name == "Toffoli" ? &variant : nullptr;
  const eqls::CampaignResult res =
      eqls::run_campaign(bench, {cc}, seeds, alt);

  std::ostringstream out;
  out << res.table() << "\n" << res.per_run_table();
  std::cout << out.str();
  if (!opt.report.empty()) {
    std::ofstream f(opt.report);
    if (!f) throw std::runtime_error("cannot write " + opt.report);
    f << out.str() << "\n";
    for (const auto& [label, rep] : res.reports)
      f << "# " << label << "\n" << rep.to_text();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolutionary qutrit logic synthesis"};
  app.require_subcommand(1);

  RunOptions run_opt;
  CLI::App* run_cmd = app.add_subcommand("run", "run the genetic algorithm");
  add_run_flags(run_cmd, run_opt, true);

  RunOptions bench_opt;
  std::string bench_name;
  CLI::App* bench_cmd = app.add_subcommand("bench", "benchmark campaign");
  bench_cmd->add_option("name", bench_name, "benchmark name")->required();
  bench_cmd->add_flag("--any-toffoli-variant", bench_opt.any_toffoli_variant,
                      "accept the [101,100] Toffoli variant as success");
  add_run_flags(bench_cmd, bench_opt, false);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "verify reference constructions");
  CLI::App* list_cmd = app.add_subcommand("list-gates", "print gate catalog");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config_defaults(std::move(args));
    std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_opt);
    if (bench_cmd->parsed()) return cmd_bench(bench_name, bench_opt);
    if (verify_cmd->parsed()) {
      const eqls::VerifyReport rep = eqls::verify_constructions();
      std::cout << rep.text();
      return rep.ok() ? 0 : 1;
    }
    if (list_cmd->parsed()) {
      std::cout << eqls::catalog_listing(eqls::builtin_catalog());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
