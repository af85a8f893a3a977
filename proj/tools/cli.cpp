// gwprune command line: sample | transform | prune | verify | experiment.
//
// Every subcommand reads a key=value config file (--config) with optional
// --seed/--out/--workers overrides, and drops a manifest.txt recording the
// seed, generator name and a hash of the effective parameters next to its
// outputs.  Exit codes: 0 all verdicts pass, 2 config error, 3 test failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gwprune/mechanism.hpp"
#include "gwprune/offspring.hpp"
#include "gwprune/prune.hpp"
#include "gwprune/realtree.hpp"
#include "gwprune/sampler.hpp"
#include "gwprune/verify.hpp"

namespace fs = std::filesystem;
using namespace gwprune;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::map<std::string, std::string> kv;
  std::string raw;

  bool has(const std::string& k) const { return kv.count(k) > 0; }
  std::string str(const std::string& k) const {
    auto it = kv.find(k);
    if (it == kv.end()) throw ConfigError("missing config key '" + k + "'");
    return it->second;
  }
  std::string str_or(const std::string& k, const std::string& d) const {
    auto it = kv.find(k);
    return it == kv.end() ? d : it->second;
  }
  double num(const std::string& k) const {
    try {
      return std::stod(str(k));
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      throw ConfigError("config key '" + k + "' is not a number");
    }
  }
  double num_or(const std::string& k, double d) const { return has(k) ? num(k) : d; }
  long long integer(const std::string& k) const {
    return static_cast<long long>(std::llround(num(k)));
  }
  long long integer_or(const std::string& k, long long d) const {
    return has(k) ? integer(k) : d;
  }
};

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    c.raw += line + "\n";
    std::string s = line.substr(0, line.find('#'));
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string v) {
      std::size_t b = v.find_first_not_of(" \t\r");
      std::size_t e = v.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    c.kv[key] = trim(s.substr(eq + 1));
  }
  return c;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// "binary:0.5", "poisson:1.0", "delta:2", or a law file path
OffspringLaw parse_law(const std::string& spec) {
  auto parts = split(spec, ':');
  try {
    if (parts[0] == "binary") return binary_law(std::stod(parts.at(1)));
    if (parts[0] == "poisson") return poisson_law(std::stod(parts.at(1)));
    if (parts[0] == "delta") return delta_law(static_cast<std::size_t>(std::stoul(parts.at(1))));
  } catch (const std::exception&) {
    throw ConfigError("bad law spec '" + spec + "'");
  }
  std::ifstream in(spec);
  if (!in) throw ConfigError("cannot open law file '" + spec + "'");
  return read_law(in);
}

// "quadratic:beta", "stable:index[:scale]", "linearquad:alpha:beta", or a file
Mechanism parse_mechanism(const std::string& spec) {
  auto parts = split(spec, ':');
  try {
    if (parts[0] == "quadratic") return Mechanism::quadratic(parts.size() > 1 ? std::stod(parts[1]) : 1.0);
    if (parts[0] == "stable")
      return Mechanism::stable(std::stod(parts.at(1)), parts.size() > 2 ? std::stod(parts[2]) : 1.0);
    if (parts[0] == "linearquad") return Mechanism(std::stod(parts.at(1)), std::stod(parts.at(2)), {});
  } catch (const std::exception&) {
    throw ConfigError("bad mechanism spec '" + spec + "'");
  }
  std::ifstream in(spec);
  if (!in) throw ConfigError("cannot open mechanism file '" + spec + "'");
  return read_mechanism(in);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_manifest(const fs::path& dir, const std::string& generator, std::uint64_t seed,
                    const Config& cfg) {
  std::ofstream os(dir / "manifest.txt");
  os << "generator=" << generator << "\n";
  os << "seed=" << seed << "\n";
  os << "param_hash=" << fnv1a(cfg.raw + "|" + std::to_string(seed)) << "\n";
}

Caps caps_from(const Config& cfg) {
  Caps caps;
  caps.max_nodes = cfg.integer_or("max_nodes", caps.max_nodes);
  caps.max_height = cfg.num_or("max_height", caps.max_height);
  return caps;
}

int cmd_sample(const Config& cfg, std::uint64_t seed, const fs::path& out, int /*workers*/) {
  fs::create_directories(out);
  const std::string kind = cfg.str_or("kind", "gw_unit");
  const long long count = cfg.integer_or("count", 1);
  Caps caps = caps_from(cfg);
  for (long long i = 0; i < count; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    RealTree t;
    if (kind == "gw_unit") {
      t = gw_unit(parse_law(cfg.str("law")), parse_law(cfg.str_or("mu", "delta:1")), caps, rng);
    } else if (kind == "gw_exp") {
      t = gw_exp(parse_law(cfg.str("law")), cfg.num("c"), parse_law(cfg.str_or("mu", "delta:1")),
                 caps, rng);
    } else if (kind == "kesten_unit") {
      t = kesten_unit(parse_law(cfg.str("law")), static_cast<int>(cfg.integer("spine_height")),
                      caps, rng)
              .tree;
    } else if (kind == "levy_erased") {
      t = levy_erased(parse_mechanism(cfg.str("mechanism")), cfg.num("h"), cfg.num("x"), caps,
                      rng);
    } else {
      throw ConfigError("unknown sample kind '" + kind + "'");
    }
    std::ofstream os(out / ("tree_" + std::to_string(i) + ".txt"));
    write_tree(os, t);
  }
  write_manifest(out, "sample/" + kind, seed, cfg);
  return 0;
}

int cmd_transform(const Config& cfg, std::uint64_t seed, const fs::path& out, int /*workers*/) {
  fs::create_directories(out);
  const std::string op = cfg.str("op");
  std::ofstream law_os(out / "law.txt");
  std::ofstream meta(out / "meta.txt");
  meta.precision(17);

  if (op == "erase_discrete") {
    ErasedDiscrete e = erase_discrete(parse_law(cfg.str("law")),
                                      parse_law(cfg.str_or("mu", "delta:1")),
                                      static_cast<int>(cfg.integer("h")));
    write_law(law_os, e.xi);
    std::ofstream mu_os(out / "mu.txt");
    write_law(mu_os, e.mu);
    meta << "p=" << e.p << "\n";
  } else if (op == "pruned_law") {
    std::string fam = cfg.str_or("family", "branch_points");
    PruneTimeFamily H = fam == "equal_rate"
                            ? PruneTimeFamily::equal_rate(cfg.num_or("rate", 1.0))
                            : PruneTimeFamily::branch_points();
    write_law(law_os, pruned_law(parse_law(cfg.str("law")), H, cfg.num("theta")));
  } else if (op == "erased_prune_law_discrete") {
    ErasedPruneDiscrete e = erased_prune_law_discrete(
        parse_law(cfg.str("law")), static_cast<int>(cfg.integer("h")), cfg.num("theta"));
    write_law(law_os, e.xi);
    meta << "p=" << e.p << "\n";
  } else if (op == "erased_law") {
    ErasedLevyLaw e = parse_mechanism(cfg.str("mechanism")).erased_law(cfg.num("h"), cfg.num("x"));
    write_law(law_os, e.xi);
    std::ofstream mu_os(out / "mu.txt");
    write_law(mu_os, e.mu);
    meta << "c=" << e.c << "\neta=" << e.eta << "\nmu_mean=" << e.mu_mean << "\n";
  } else if (op == "ad_prune_law") {
    PruneLawBundle b = parse_mechanism(cfg.str("mechanism")).ad_prune_law(cfg.num("h"));
    meta << "theta_max=" << b.theta_max << "\n";
    for (double th : {0.25, 0.5, 1.0, 2.0})
      meta << "hbar1(" << th << ")=" << b.hbar1(th) << "\n";
    write_law(law_os, OffspringLaw{});
  } else if (op == "domain_family") {
    DomainFamily f = parse_mechanism(cfg.str("mechanism")).domain_family(cfg.integer("n"));
    write_law(law_os, f.xi);
    meta << "gamma=" << f.gamma << "\nn=" << f.n << "\n";
  } else {
    throw ConfigError("unknown transform op '" + op + "'");
  }
  write_manifest(out, "transform/" + op, seed, cfg);
  return 0;
}

int cmd_prune(const Config& cfg, std::uint64_t seed, const fs::path& out, int /*workers*/) {
  fs::create_directories(out);
  Caps caps = caps_from(cfg);
  RngStream rng(seed, 0);
  RealTree t = gw_unit(parse_law(cfg.str("law")), parse_law(cfg.str_or("mu", "delta:1")), caps,
                       rng);
  const std::string regime = cfg.str_or("regime", "branch_points");
  MarkSet marks;
  if (regime == "branch_points")
    marks = mark_branchpoints(t, rng);
  else if (regime == "edges")
    marks = mark_edges(t, rng);
  else if (regime == "equal_rate")
    marks = mark_H(t, PruneTimeFamily::equal_rate(cfg.num_or("rate", 1.0)), rng);
  else
    throw ConfigError("unknown prune regime '" + regime + "'");
  {
    std::ofstream os(out / "tree.txt");
    write_tree(os, t);
    write_marks(os, marks);
  }
  if (cfg.has("theta")) {
    std::ofstream os(out / "cut.txt");
    write_tree(os, cut(t, marks, cfg.num("theta")));
  }
  write_manifest(out, "prune/" + regime, seed, cfg);
  return 0;
}

int emit_reports(std::vector<TestReport> reports, const fs::path& out,
                 const std::string& generator, std::uint64_t seed, const Config& cfg) {
  fs::create_directories(out);
  // byte-identical outputs for identical (suite, seed): drop the timings
  for (TestReport& r : reports) r.seconds = 0.0;
  {
    std::ofstream os(out / "reports.csv");
    write_csv(os, reports);
  }
  write_csv(std::cout, reports);
  write_manifest(out, generator, seed, cfg);
  for (const TestReport& r : reports)
    if (!r.pass) return 3;
  return 0;
}

int cmd_verify(const Config& cfg, std::uint64_t seed, const fs::path& out, int workers) {
  return emit_reports(run_suite(cfg.str_or("suite", "all"), seed, workers), out,
                      "verify/" + cfg.str_or("suite", "all"), seed, cfg);
}

int cmd_experiment(const Config& cfg, std::uint64_t seed, const fs::path& out, int workers) {
  const std::string name = cfg.str("name");
  std::vector<TestReport> reports;
  if (name == "height") {
    reports.push_back(experiment_height(parse_mechanism(cfg.str("mechanism")),
                                        cfg.integer_or("n", 1000), cfg.num_or("h", 1.0),
                                        cfg.num_or("x", 1.0), cfg.num_or("tol", 0.01),
                                        "experiment_height"));
  } else if (name == "ascension") {
    VerifyOptions opt{seed, cfg.integer_or("N", 10000), workers, 0.001};
    reports = experiment_ascension(parse_mechanism(cfg.str("mechanism")),
                                   cfg.integer_or("n", 1000), cfg.num("theta"),
                                   cfg.num_or("x", 1.0), cfg.num_or("tol", 0.01), opt,
                                   "experiment_ascension");
  } else if (name == "limits") {
    reports = limit_checks(parse_mechanism(cfg.str("mechanism")), cfg.integer_or("n", 10000),
                           cfg.num_or("tol", 1e-3), "experiment_limits");
    for (TestReport& r : reports) r.seed = seed;
  } else if (name == "marginal") {
    VerifyOptions opt{seed, cfg.integer_or("N", 10000), workers, cfg.num_or("significance", 0.001)};
    const std::string regime = cfg.str_or("regime", "branch");
    PruneRegime pr = regime == "edge"        ? PruneRegime::Edge
                     : regime == "equal_rate" ? PruneRegime::EqualRate
                                              : PruneRegime::Branch;
    reports.push_back(experiment_marginal_convergence(
        parse_mechanism(cfg.str("mechanism")), cfg.integer_or("n", 500), cfg.num_or("h", 1.0),
        cfg.num_or("x", 1.0), cfg.num("theta"), cfg.num_or("theta_limit", cfg.num("theta")), pr,
        opt, "experiment_marginal"));
  } else {
    throw ConfigError("unknown experiment '" + name + "'");
  }
  return emit_reports(std::move(reports), out, "experiment/" + name, seed, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galton-Watson real-tree pruning toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 42;
  int workers = 1;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--seed", seed, "random seed (default 42)");
  app.add_option("--out", out_dir, "output directory (default ./out)");
  app.add_option("--workers", workers, "worker threads (results are worker-count independent)");

  auto* sc_sample = app.add_subcommand("sample", "sample GW/Kesten/Levy real trees");
  auto* sc_transform = app.add_subcommand("transform", "apply an analytic law transform");
  auto* sc_prune = app.add_subcommand("prune", "sample a tree with pruning marks");
  auto* sc_verify = app.add_subcommand("verify", "run a verification suite");
  auto* sc_experiment = app.add_subcommand("experiment", "run a single experiment");
  for (auto* sc : {sc_sample, sc_transform, sc_prune, sc_verify, sc_experiment})
    sc->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    if (const char* env_out = std::getenv("GWPRUNE_OUT"); env_out && *env_out) out_dir = env_out;
    fs::path out(out_dir);
    if (sc_sample->parsed()) return cmd_sample(cfg, seed, out, workers);
    if (sc_transform->parsed()) return cmd_transform(cfg, seed, out, workers);
    if (sc_prune->parsed()) return cmd_prune(cfg, seed, out, workers);
    if (sc_verify->parsed()) return cmd_verify(cfg, seed, out, workers);
    if (sc_experiment->parsed()) return cmd_experiment(cfg, seed, out, workers);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
