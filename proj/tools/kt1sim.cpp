#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kt1/graph.hpp"
#include "kt1/harness.hpp"

using namespace kt1;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::string policy;
  std::string out;
  std::string check;
  std::string graph;
  unsigned jobs = 0;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "experiment config file")->required()->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "run only this seed");
  app->add_option("--policy", o.policy, "delay policy name");
  app->add_option("--out", o.out, "output directory for CSV and JSON reports");
  app->add_option("--check", o.check, "invariant checks: off, phase or full");
  app->add_option("--jobs", o.jobs, "concurrent runs");
}

ExperimentConfig load(const Overrides& o) {
  auto cfg = ExperimentConfig::load(o.config);
  if (o.seed) cfg.seeds = {*o.seed};
  if (o.n) cfg.sizes = {*o.n};
  if (!o.policy.empty()) {
    auto p = DelayPolicy::parse(o.policy);
    cfg.policy.kind = p.kind;
  }
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.check.empty()) cfg.check = parse_check_level(o.check);
  if (o.jobs) cfg.jobs = o.jobs;
  return cfg;
}

void summary(const RunReport& r) {
  std::cout << protocol_name(r.protocol) << " n=" << r.n << " m=" << r.m << " seed=" << r.seed
            << " policy=" << r.policy << " messages=" << r.metrics.total << " phases=" << r.phases
            << " mst_phases=" << r.mst_phases << " oracle="
            << (r.verdict == Verdict::Match ? "match" : r.verdict == Verdict::Mismatch ? "mismatch" : "n/a")
            << " violations=" << r.violations.size();
  if (r.livelock) std::cout << " livelock";
  std::cout << '\n';
  for (std::size_t i = 0; i < r.violations.size() && i < 5; ++i)
    std::cout << "  " << r.violations[i].check << ": " << r.violations[i].detail << '\n';
  if (!r.error.empty() && !r.livelock) std::cout << "  error: " << r.error << '\n';
}

int finish(const ExperimentConfig& cfg, const std::vector<RunReport>& reports) {
  for (auto& r : reports) summary(r);
  write_reports(cfg, reports);
  return aggregate_exit(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous KT1 CONGEST simulator for spanning tree, MST and MSF protocols"};
  app.require_subcommand(1);

  Overrides run_o, sweep_o, verify_o;
  auto* run = app.add_subcommand("run", "one run: first n and first seed of the config");
  add_common(run, run_o);
  run->add_option("--n", run_o.n, "node count");
  run->add_option("--graph", run_o.graph, "graph file (header \"n c\", then \"u v w\" lines)")
      ->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "every (n, seed) pair; writes CSV and JSON reports");
  add_common(sweep, sweep_o);

  auto* verify = app.add_subcommand("verify", "every (n, seed) pair with full checks");
  add_common(verify, verify_o);

  std::string csv_path, protocol;
  double bound = 0;
  std::size_t min_sizes = 4, min_seeds = 10;
  std::vector<double> fit;
  auto* scaling = app.add_subcommand("scaling", "log-log slope of median total messages against n");
  scaling->add_option("--csv", csv_path, "runs CSV")->required()->check(CLI::ExistingFile);
  scaling->add_option("--bound", bound, "largest accepted slope")->required();
  scaling->add_option("--protocol", protocol, "only rows of this protocol");
  scaling->add_option("--min-sizes", min_sizes, "distinct n required");
  scaling->add_option("--min-seeds", min_seeds, "seeds required per n");
  scaling->add_option("--fit", fit, "also fit K in total <= K n^a log2(n)^b; give a b")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      auto cfg = load(run_o);
      if (cfg.sizes.empty() && run_o.graph.empty()) throw ConfigError("no n given");
      std::uint64_t seed = cfg.seeds.front();
      RunReport r;
      if (!run_o.graph.empty()) {
        std::ifstream in(run_o.graph);
        auto g = read_graph(in);
        r = run_on(cfg, g, seed);
      } else {
        r = run_one(cfg, cfg.sizes.front(), seed);
      }
      return finish(cfg, {r});
    }
    if (*sweep) {
      auto cfg = load(sweep_o);
      return finish(cfg, run_all(cfg));
    }
    if (*verify) {
      auto cfg = load(verify_o);
      cfg.check = CheckLevel::Full;
      auto reports = run_all(cfg);
      int code = finish(cfg, reports);
      std::size_t match = 0;
      for (auto& r : reports) match += r.verdict == Verdict::Match;
      std::cout << "oracle match " << match << "/" << reports.size() << '\n';
      return code;
    }
    if (*scaling) {
      std::ifstream in(csv_path);
      auto rows = read_csv(in);
      if (!protocol.empty())
        std::erase_if(rows, [&](const CsvRow& r) { return r.protocol != protocol; });
      auto res = scaling_check(rows, bound, min_sizes, min_seeds);
      for (auto [n, med] : res.medians) std::cout << "n=" << n << " median=" << med << '\n';
      std::cout << "slope " << res.slope << " bound " << bound << (res.pass ? " pass" : " fail") << '\n';
      if (fit.size() == 2) {
        auto k = fit_bound(rows, fit[0], fit[1]);
        for (auto [n, ratio] : k.ratios) std::cout << "n=" << n << " K=" << ratio << '\n';
        std::cout << "fitted K " << k.k << '\n';
      }
      return res.pass ? kExitOk : kExitInvariant;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
