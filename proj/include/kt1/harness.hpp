#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kt1/generators.hpp"
#include "kt1/inspector.hpp"
#include "kt1/simnet.hpp"

namespace kt1 {

inline constexpr int kCsvSchema = 1;
inline constexpr int kJsonSchema = 1;

enum class ProtocolKind { FindSt, FindMst, Msf, Pipeline };

ProtocolKind parse_protocol(const std::string& s);
std::string protocol_name(ProtocolKind p);

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitMismatch = 3, kExitInvariant = 4, kExitLivelock = 5 };

struct ExperimentConfig {
  ProtocolKind protocol = ProtocolKind::FindSt;
  FamilySpec family;
  std::size_t parts = 0;  // disconnected without explicit components: mixed sizes per seed
  std::vector<std::size_t> sizes;  // n sweep
  unsigned c = 2;
  std::vector<std::uint64_t> seeds{1};
  DelayPolicy policy;
  CheckLevel check = CheckLevel::Full;
  std::string out_dir;  // empty: no files
  std::string csv = "runs.csv";
  bool json = true;
  std::optional<double> star_probability;
  std::optional<double> degree_threshold;
  bool zero_exit = true;
  std::uint64_t event_cap = 0;
  unsigned jobs = 1;

  // Flat "key = value" text; list values separated by commas or spaces, a..b for ranges.
  static ExperimentConfig parse(std::istream& is);
  static ExperimentConfig load(const std::string& path);
  std::map<std::string, std::string> echo() const;
};

enum class Verdict { Match, Mismatch, NotApplicable };

struct RunReport {
  ProtocolKind protocol = ProtocolKind::FindSt;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::string policy;
  std::string family;
  Metrics metrics;
  std::uint64_t deliveries = 0;
  std::uint64_t phases = 0;      // findst phases, msf expansions of the busiest leader
  std::uint64_t mst_phases = 0;  // FindMST merging phases
  std::vector<PhaseEntry> phase_log;
  std::vector<EdgeName> edges;
  Verdict verdict = Verdict::NotApplicable;
  std::vector<EdgeName> missing;  // oracle edges not produced
  std::vector<EdgeName> extra;    // produced edges not in the oracle
  std::vector<Violation> violations;
  bool livelock = false;
  std::string error;
  double wallclock_ms = 0;

  int exit_code() const;
};

// One simulation of the configured protocol on an explicit graph.
RunReport run_on(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed);
// Generates the family graph for (n, seed) and runs it.
RunReport run_one(const ExperimentConfig& cfg, std::size_t n, std::uint64_t seed);
// Cross product of sizes and seeds, in (n, seed) order.
std::vector<RunReport> run_all(const ExperimentConfig& cfg);

// Worst exit code over the reports: livelock, then oracle mismatch, then invariant violation.
int aggregate_exit(const std::vector<RunReport>& reports);

std::string csv_header();
// wallclock: include the wallclock column (last).
std::string csv_row(const RunReport& r, bool wallclock = true);
std::string to_json(const RunReport& r, const ExperimentConfig& cfg);
// Writes the CSV and one JSON per run under cfg.out_dir.
void write_reports(const ExperimentConfig& cfg, const std::vector<RunReport>& reports);

struct CsvRow {
  std::string protocol;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t total = 0;
};
std::vector<CsvRow> read_csv(std::istream& is);

struct ScalingResult {
  double slope = 0;
  double intercept = 0;
  std::vector<std::pair<std::size_t, double>> medians;  // (n, median total)
  bool pass = false;
};

// Least-squares fit of log(median total) against log(n), intercept free.
// Needs at least min_sizes distinct n with min_seeds rows each.
ScalingResult scaling_check(const std::vector<CsvRow>& rows, double bound, std::size_t min_sizes = 4,
                            std::size_t min_seeds = 10);

struct BoundFit {
  double k = 0;                            // max over n of median / f(n)
  std::vector<std::pair<std::size_t, double>> ratios;  // (n, median / f(n))
};
// Fits K in total <= K * n^a * log2(n)^b over per-n medians.
BoundFit fit_bound(const std::vector<CsvRow>& rows, double a, double b);

}  // namespace kt1
