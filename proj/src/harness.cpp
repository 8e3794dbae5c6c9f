#include "kt1/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kt1/findmst.hpp"
#include "kt1/findst.hpp"
#include "kt1/msf.hpp"
#include "kt1/oracle.hpp"

namespace kt1 {

ProtocolKind parse_protocol(const std::string& s) {
  if (s == "findst") return ProtocolKind::FindSt;
  if (s == "findmst") return ProtocolKind::FindMst;
  if (s == "msf") return ProtocolKind::Msf;
  if (s == "pipeline") return ProtocolKind::Pipeline;
  throw ConfigError("unknown protocol '" + s + "'");
}

std::string protocol_name(ProtocolKind p) {
  switch (p) {
    case ProtocolKind::FindSt: return "findst";
    case ProtocolKind::FindMst: return "findmst";
    case ProtocolKind::Msf: return "msf";
    case ProtocolKind::Pipeline: return "pipeline";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    auto x = std::stoull(v, &used);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a non-negative integer");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    auto x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  }
}

// "1..10" expands to 1, 2, ..., 10
std::vector<std::uint64_t> to_u64_list(const std::string& key, const std::string& v) {
  std::vector<std::uint64_t> out;
  for (auto& item : split_list(v)) {
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_u64(key, item));
      continue;
    }
    auto a = to_u64(key, item.substr(0, dots));
    auto b = to_u64(key, item.substr(dots + 2));
    if (b < a) throw ConfigError("key '" + key + "': empty range " + item);
    for (auto x = a; x <= b; ++x) out.push_back(x);
  }
  if (out.empty()) throw ConfigError("key '" + key + "' has no values");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::string check_name(CheckLevel l) {
  switch (l) {
    case CheckLevel::Off: return "off";
    case CheckLevel::Phase: return "phase";
    case CheckLevel::Full: return "full";
  }
  return "?";
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// Mixed component sizes summing to n, drawn from the run seed.
std::vector<std::size_t> split_sizes(std::size_t n, std::size_t parts, std::uint64_t seed) {
  parts = std::max<std::size_t>(1, std::min(parts, n));
  auto rng = make_stream(seed, {stream::kGraph, 0x5153});
  std::vector<double> w(parts);
  for (auto& x : w) x = std::exponential_distribution<double>(1.0)(rng) + 0.1;
  double total = 0;
  for (auto x : w) total += x;
  std::vector<std::size_t> out(parts, 1);
  std::size_t left = n - parts;
  for (std::size_t i = 0; i + 1 < parts; ++i) {
    auto extra = std::min(left, static_cast<std::size_t>(std::floor(w[i] / total * double(n - parts))));
    out[i] += extra;
    left -= extra;
  }
  out.back() += left;
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& is) {
  ExperimentConfig cfg;
  bool have_sizes = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto val = trim(line.substr(eq + 1));
    if (val.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' has no value");
    if (key == "protocol") cfg.protocol = parse_protocol(val);
    else if (key == "family") cfg.family.family = parse_family(val);
    else if (key == "p") cfg.family.p = to_double(key, val);
    else if (key == "connected") cfg.family.connected = to_bool(key, val);
    else if (key == "components") {
      cfg.family.sizes.clear();
      for (auto x : to_u64_list(key, val)) cfg.family.sizes.push_back(x);
    } else if (key == "parts") cfg.parts = to_u64(key, val);
    else if (key == "n") {
      cfg.sizes.clear();
      for (auto x : to_u64_list(key, val)) cfg.sizes.push_back(x);
      have_sizes = true;
    } else if (key == "c") cfg.c = static_cast<unsigned>(to_u64(key, val));
    else if (key == "seeds") cfg.seeds = to_u64_list(key, val);
    else if (key == "policy") {
      auto keep = cfg.policy;
      cfg.policy = DelayPolicy::parse(val);
      cfg.policy.max_delay = keep.max_delay;
      cfg.policy.tail_alpha = keep.tail_alpha;
      cfg.policy.tail_cap = keep.tail_cap;
      cfg.policy.stalled = keep.stalled;
      cfg.policy.stall_factor = keep.stall_factor;
    } else if (key == "max_delay") cfg.policy.max_delay = to_u64(key, val);
    else if (key == "tail_alpha") cfg.policy.tail_alpha = to_double(key, val);
    else if (key == "tail_cap") cfg.policy.tail_cap = to_u64(key, val);
    else if (key == "stall_factor") cfg.policy.stall_factor = to_u64(key, val);
    else if (key == "stalled") {
      cfg.policy.stalled.clear();
      for (auto x : to_u64_list(key, val)) cfg.policy.stalled.push_back(static_cast<NodeIndex>(x));
    } else if (key == "check") cfg.check = parse_check_level(val);
    else if (key == "out") cfg.out_dir = val;
    else if (key == "csv") cfg.csv = val;
    else if (key == "json") cfg.json = to_bool(key, val);
    else if (key == "star_probability") cfg.star_probability = to_double(key, val);
    else if (key == "degree_threshold") cfg.degree_threshold = to_double(key, val);
    else if (key == "zero_exit") cfg.zero_exit = to_bool(key, val);
    else if (key == "event_cap") cfg.event_cap = to_u64(key, val);
    else if (key == "jobs") cfg.jobs = static_cast<unsigned>(std::max<std::uint64_t>(1, to_u64(key, val)));
    else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (!have_sizes) throw ConfigError("missing key 'n'");
  if (cfg.c < 2) throw ConfigError("c must be at least 2");
  for (auto n : cfg.sizes)
    if (n < 2) throw ConfigError("n must be at least 2");
  if (cfg.star_probability && (*cfg.star_probability < 0 || *cfg.star_probability > 1))
    throw ConfigError("star_probability outside [0, 1]");
  if (cfg.family.family == Family::Disconnected && cfg.family.sizes.empty() && cfg.parts == 0)
    throw ConfigError("family disconnected needs 'components' or 'parts'");
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse(in);
}

std::map<std::string, std::string> ExperimentConfig::echo() const {
  std::map<std::string, std::string> e;
  e["protocol"] = protocol_name(protocol);
  e["family"] = family_name(family.family);
  e["p"] = fmt_double(family.p);
  std::string list;
  for (auto n : sizes) list += (list.empty() ? "" : ",") + std::to_string(n);
  e["n"] = list;
  list.clear();
  for (auto s : seeds) list += (list.empty() ? "" : ",") + std::to_string(s);
  e["seeds"] = list;
  e["c"] = std::to_string(c);
  e["policy"] = policy.name();
  e["max_delay"] = std::to_string(policy.max_delay);
  e["check"] = check_name(check);
  e["zero_exit"] = zero_exit ? "true" : "false";
  if (star_probability) e["star_probability"] = fmt_double(*star_probability);
  if (degree_threshold) e["degree_threshold"] = fmt_double(*degree_threshold);
  if (!family.sizes.empty()) {
    list.clear();
    for (auto s : family.sizes) list += (list.empty() ? "" : ",") + std::to_string(s);
    e["components"] = list;
  }
  if (parts) e["parts"] = std::to_string(parts);
  return e;
}

int RunReport::exit_code() const {
  if (livelock) return kExitLivelock;
  if (verdict == Verdict::Mismatch) return kExitMismatch;
  if (!violations.empty()) return kExitInvariant;
  return kExitOk;
}

namespace {

RoleOptions role_options(const ExperimentConfig& cfg, std::uint64_t seed) {
  RoleOptions r;
  r.seed = seed;
  r.star_probability = cfg.star_probability;
  r.degree_threshold = cfg.degree_threshold;
  return r;
}

SimOptions sim_options(const ExperimentConfig& cfg, std::uint64_t seed) {
  SimOptions o;
  o.policy = cfg.policy;
  o.seed = seed;
  o.c = cfg.c;
  o.event_cap = cfg.event_cap;
  return o;
}

void compare(RunReport& r, const std::vector<EdgeName>& want) {
  std::set_difference(want.begin(), want.end(), r.edges.begin(), r.edges.end(),
                      std::back_inserter(r.missing));
  std::set_difference(r.edges.begin(), r.edges.end(), want.begin(), want.end(),
                      std::back_inserter(r.extra));
  r.verdict = r.missing.empty() && r.extra.empty() ? Verdict::Match : Verdict::Mismatch;
}

// True when edges form a spanning tree of the component of root.
bool spans_component(const Graph& g, const std::vector<EdgeIndex>& edges, NodeIndex root) {
  auto label = component_labels(g);
  std::size_t size = std::count(label.begin(), label.end(), label[root]);
  if (edges.size() + 1 != size) return false;
  DisjointSets ds(g.n());
  for (auto e : edges) {
    const auto& ed = g.edge(e);
    if (label[ed.u] != label[root] || !ds.unite(ed.u, ed.v)) return false;
  }
  return true;
}

void absorb(RunReport& r, const SimResult& s) {
  r.metrics += s.metrics;
  r.deliveries += s.deliveries;
}

ControlTree roots_per_component(const Graph& g) {
  auto label = component_labels(g);
  std::vector<bool> seen(g.n(), false);
  std::vector<NodeIndex> roots;
  for (NodeIndex x = 0; x < g.n(); ++x)
    if (!seen[label[x]]) {
      seen[label[x]] = true;
      roots.push_back(x);
    }
  return ControlTree::bfs(g, roots);
}

SimResult run_findst(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed, RunReport& r,
                     std::vector<NodeIndex>* parents) {
  FindStConfig sc;
  sc.c = cfg.c;
  sc.roles = role_options(cfg, seed);
  sc.zero_exit = cfg.zero_exit;
  FindSt st(g, seed, sc);
  Inspector insp(cfg.check);
  insp.attach(st);
  Simulator sim(g, sim_options(cfg, seed));
  insp.watch(sim);
  auto res = sim.run(insp.wrap(st));
  insp.finish(st, res);
  r.violations.insert(r.violations.end(), insp.violations().begin(), insp.violations().end());
  r.phase_log = insp.phase_log();
  r.phases = st.phases();
  auto edges = st.tree_edges();
  r.edges = sorted_names(g, edges);
  r.verdict = spans_component(g, edges, st.leader()) ? Verdict::Match : Verdict::Mismatch;
  if (parents) {
    parents->assign(g.n(), kNoNode);
    for (NodeIndex x = 0; x < g.n(); ++x) (*parents)[x] = st.node(x).parent;
  }
  return res;
}

SimResult run_findmst(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed, RunReport& r,
                      ControlTree control) {
  FindMstConfig mc;
  mc.c = cfg.c;
  FindMst mst(g, std::move(control), seed, mc);
  Inspector insp(cfg.check);
  insp.attach(mst);
  Simulator sim(g, sim_options(cfg, seed));
  insp.watch(sim);
  auto res = sim.run(insp.wrap(mst));
  insp.finish(mst, res);
  r.violations.insert(r.violations.end(), insp.violations().begin(), insp.violations().end());
  r.mst_phases = mst.max_phases();
  r.edges = sorted_names(g, mst.tree_edges());
  compare(r, oracle_msf(g));
  return res;
}

SimResult run_msf(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed, RunReport& r) {
  MsfConfig mc;
  mc.c = cfg.c;
  mc.roles = role_options(cfg, seed);
  mc.zero_exit = cfg.zero_exit;
  Msf msf(g, seed, mc);
  Inspector insp(cfg.check);
  insp.attach(msf);
  Simulator sim(g, sim_options(cfg, seed));
  insp.watch(sim);
  auto res = sim.run(insp.wrap(msf));
  insp.finish(msf, res);
  r.violations.insert(r.violations.end(), insp.violations().begin(), insp.violations().end());
  for (NodeIndex x = 0; x < g.n(); ++x) r.phases = std::max(r.phases, msf.node(x).phase);
  r.mst_phases = msf.mst().max_phases();
  r.edges = sorted_names(g, msf.forest_edges());
  compare(r, oracle_msf(g));
  return res;
}

}  // namespace

RunReport run_on(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed) {
  RunReport r;
  r.protocol = cfg.protocol;
  r.n = g.n();
  r.m = g.m();
  r.seed = seed;
  r.policy = cfg.policy.name();
  r.family = family_name(cfg.family.family);
  auto t0 = std::chrono::steady_clock::now();
  try {
    switch (cfg.protocol) {
      case ProtocolKind::FindSt: absorb(r, run_findst(cfg, g, seed, r, nullptr)); break;
      case ProtocolKind::FindMst: absorb(r, run_findmst(cfg, g, seed, r, roots_per_component(g))); break;
      case ProtocolKind::Msf: absorb(r, run_msf(cfg, g, seed, r)); break;
      case ProtocolKind::Pipeline: {
        if (!is_connected(g)) throw ConfigError("pipeline needs a connected graph");
        std::vector<NodeIndex> parents;
        absorb(r, run_findst(cfg, g, seed, r, &parents));
        if (r.verdict == Verdict::Mismatch) break;
        r.edges.clear();
        absorb(r, run_findmst(cfg, g, seed, r, ControlTree::from_parents(parents)));
        break;
      }
    }
  } catch (const LivelockError& e) {
    r.livelock = true;
    r.error = e.what();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    r.error = e.what();
    r.violations.push_back({"model", e.what()});
  }
  if (!r.livelock && r.error.empty() && r.metrics.total != r.deliveries)
    r.violations.push_back({"metrics", "total " + std::to_string(r.metrics.total) + " differs from " +
                                           std::to_string(r.deliveries) + " deliveries"});
  r.wallclock_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

RunReport run_one(const ExperimentConfig& cfg, std::size_t n, std::uint64_t seed) {
  auto spec = cfg.family;
  if (spec.family == Family::Disconnected && spec.sizes.empty()) spec.sizes = split_sizes(n, cfg.parts, seed);
  auto g = generate(spec, n, cfg.c, seed);
  return run_on(cfg, g, seed);
}

std::vector<RunReport> run_all(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (auto n : cfg.sizes)
    for (auto s : cfg.seeds) jobs.emplace_back(n, s);
  std::vector<RunReport> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        out[i] = run_one(cfg, jobs[i].first, jobs[i].second);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned k = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

int aggregate_exit(const std::vector<RunReport>& reports) {
  int worst = kExitOk;
  auto rank = [](int code) {
    switch (code) {
      case kExitLivelock: return 3;
      case kExitMismatch: return 2;
      case kExitInvariant: return 1;
      default: return 0;
    }
  };
  for (auto& r : reports)
    if (rank(r.exit_code()) > rank(worst)) worst = r.exit_code();
  return worst;
}

std::string csv_header() {
  std::string h = "n,m,protocol,family,policy,seed,total_messages";
  for (std::size_t k = 0; k < kKindCount; ++k) h += ",msg_" + std::string(kind_name(static_cast<Kind>(k)));
  h += ",max_payload_bits,phases,mst_phases,oracle_match,violations,livelock,wallclock_ms";
  return h;
}

std::string csv_row(const RunReport& r, bool wallclock) {
  std::ostringstream os;
  os << r.n << ',' << r.m << ',' << protocol_name(r.protocol) << ',' << r.family << ',' << r.policy << ','
     << r.seed << ',' << r.metrics.total;
  for (auto v : r.metrics.per_kind) os << ',' << v;
  os << ',' << r.metrics.max_payload_bits << ',' << r.phases << ',' << r.mst_phases << ','
     << (r.verdict == Verdict::Match ? "true" : r.verdict == Verdict::Mismatch ? "false" : "na") << ','
     << r.violations.size() << ',' << (r.livelock ? "true" : "false");
  if (wallclock) os << ',' << std::fixed << std::setprecision(3) << r.wallclock_ms;
  return os.str();
}

std::string to_json(const RunReport& r, const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["schema"] = kJsonSchema;
  j["config"] = cfg.echo();
  j["protocol"] = protocol_name(r.protocol);
  j["n"] = r.n;
  j["m"] = r.m;
  j["seed"] = r.seed;
  j["policy"] = r.policy;
  j["family"] = r.family;
  nlohmann::ordered_json per_kind;
  for (std::size_t k = 0; k < kKindCount; ++k)
    if (r.metrics.per_kind[k]) per_kind[std::string(kind_name(static_cast<Kind>(k)))] = r.metrics.per_kind[k];
  j["metrics"] = {{"total", r.metrics.total},
                  {"deliveries", r.deliveries},
                  {"max_payload_bits", r.metrics.max_payload_bits},
                  {"per_kind", per_kind}};
  j["phases"] = r.phases;
  j["mst_phases"] = r.mst_phases;
  auto log = nlohmann::ordered_json::array();
  for (auto& e : r.phase_log)
    log.push_back({{"phase", e.phase},
                   {"kind", phase_kind_name(e.kind)},
                   {"tree_size", e.tree_size},
                   {"outgoing_low", e.outgoing_low},
                   {"high_in_tree", e.high_in_tree},
                   {"ratio", e.ratio}});
  j["phase_log"] = log;
  auto names = [](const std::vector<EdgeName>& v) {
    auto a = nlohmann::ordered_json::array();
    for (auto e : v) a.push_back(e.value);
    return a;
  };
  j["edges"] = names(r.edges);
  j["oracle"] = {{"verdict", r.verdict == Verdict::Match      ? "match"
                             : r.verdict == Verdict::Mismatch ? "mismatch"
                                                              : "n/a"},
                 {"missing", names(r.missing)},
                 {"extra", names(r.extra)}};
  auto viol = nlohmann::ordered_json::array();
  for (auto& v : r.violations) viol.push_back({{"check", v.check}, {"detail", v.detail}});
  j["violations"] = viol;
  j["livelock"] = r.livelock;
  j["error"] = r.error;
  j["wallclock_ms"] = r.wallclock_ms;
  return j.dump(2);
}

void write_reports(const ExperimentConfig& cfg, const std::vector<RunReport>& reports) {
  if (cfg.out_dir.empty()) return;
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream csv(std::filesystem::path(cfg.out_dir) / cfg.csv);
  if (!csv) throw ConfigError("cannot write '" + cfg.csv + "' in '" + cfg.out_dir + "'");
  csv << csv_header() << '\n';
  for (auto& r : reports) csv << csv_row(r) << '\n';
  if (!cfg.json) return;
  for (auto& r : reports) {
    auto name = protocol_name(r.protocol) + "_n" + std::to_string(r.n) + "_s" + std::to_string(r.seed) + ".json";
    std::ofstream js(std::filesystem::path(cfg.out_dir) / name);
    js << to_json(r, cfg) << '\n';
  }
}

std::vector<CsvRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty CSV");
  auto cols = split_list(line);
  auto col = [&](const std::string& name) {
    auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end()) throw ConfigError("CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - cols.begin());
  };
  auto cn = col("n"), cp = col("protocol"), cs = col("seed"), ct = col("total_messages");
  std::vector<CsvRow> out;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() < cols.size()) throw ConfigError("short CSV row: " + line);
    CsvRow r;
    r.protocol = f[cp];
    r.n = to_u64("n", f[cn]);
    r.seed = to_u64("seed", f[cs]);
    r.total = to_u64("total_messages", f[ct]);
    out.push_back(r);
  }
  return out;
}

namespace {

std::vector<std::pair<std::size_t, double>> medians(const std::vector<CsvRow>& rows, std::size_t min_sizes,
                                                    std::size_t min_seeds) {
  std::map<std::size_t, std::vector<std::uint64_t>> by_n;
  for (auto& r : rows) by_n[r.n].push_back(r.total);
  if (by_n.size() < min_sizes)
    throw ConfigError("scaling needs " + std::to_string(min_sizes) + " distinct n, got " +
                      std::to_string(by_n.size()));
  std::vector<std::pair<std::size_t, double>> out;
  for (auto& [n, v] : by_n) {
    if (v.size() < min_seeds)
      throw ConfigError("scaling needs " + std::to_string(min_seeds) + " seeds at n=" + std::to_string(n) +
                        ", got " + std::to_string(v.size()));
    std::sort(v.begin(), v.end());
    double med = v.size() % 2 ? double(v[v.size() / 2]) : (double(v[v.size() / 2 - 1]) + double(v[v.size() / 2])) / 2;
    out.emplace_back(n, med);
  }
  return out;
}

}  // namespace

ScalingResult scaling_check(const std::vector<CsvRow>& rows, double bound, std::size_t min_sizes,
                            std::size_t min_seeds) {
  ScalingResult res;
  res.medians = medians(rows, min_sizes, min_seeds);
  double sx = 0, sy = 0, sxx = 0, sxy = 0, k = double(res.medians.size());
  for (auto [n, med] : res.medians) {
    double x = std::log(double(n)), y = std::log(std::max(med, 1.0));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  res.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  res.intercept = (sy - res.slope * sx) / k;
  res.pass = res.slope <= bound;
  return res;
}

BoundFit fit_bound(const std::vector<CsvRow>& rows, double a, double b) {
  BoundFit fit;
  for (auto [n, med] : medians(rows, 1, 1)) {
    double f = std::pow(double(n), a) * std::pow(std::log2(double(n)), b);
    fit.ratios.emplace_back(n, med / f);
    fit.k = std::max(fit.k, med / f);
  }
  return fit;
}

}  // namespace kt1
