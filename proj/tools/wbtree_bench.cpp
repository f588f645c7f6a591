#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wbtree/balance_params.hpp"
#include "wbtree/experiments.hpp"
#include "wbtree/keygen.hpp"
#include "wbtree/op_sequence.hpp"
#include "wbtree/results.hpp"

namespace {

using namespace wbtree;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAudit = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> variants{"bottom-up", "top-down", "red-black"};
  std::vector<std::string> params{"classic"};
  std::string dist = "uniform";
  std::vector<std::uint64_t> sizes{1000, 10000, 100000};
  std::optional<std::uint64_t> seed;
  std::uint64_t base_trees = 10;
  std::uint64_t time_floor_ms = 1000;
  std::uint64_t sample_interval = 10000;
  double zipf_s = 1.0;
  std::uint64_t universe = std::uint64_t{1} << 62;
  SkewWindows windows{};
  std::optional<std::uint64_t> ops;
  std::string out;
  std::string format = "csv";
  bool audit = false;
  bool serial = false;
  int double_counts_as = 2;
  unsigned jobs = 0;
  std::string sequence;
  std::uint64_t repetitions = 10;
  std::string keys;
  std::uint64_t count = 1000;
  unsigned absent_pct = 10;
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("WBTREE_SEED")) {
    try {
      std::size_t used = 0;
      const std::string text(env);
      const auto value = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing characters");
      return value;
    } catch (const std::exception&) {
      throw UsageError("WBTREE_SEED is not an unsigned integer");
    }
  }
  return 1;
}

WorkloadConfig workload_of(const Options& o) {
  WorkloadConfig w;
  w.distribution = parse_distribution(o.dist);
  w.universe = o.universe;
  w.zipf_s = o.zipf_s;
  w.windows = o.windows;
  return w;
}

std::vector<TreeVariant> variants_of(const Options& o) {
  std::vector<Scheme> schemes;
  for (const auto& v : o.variants) schemes.push_back(parse_scheme(v));
  std::vector<BalanceParams> params;
  for (const auto& p : o.params) params.push_back(parse_params(p));
  return make_variants(schemes, params);
}

ExperimentSpec spec_of(const Options& o, ExperimentKind kind) {
  ExperimentSpec spec;
  spec.experiment = kind;
  spec.variants = variants_of(o);
  spec.workload = workload_of(o);
  spec.sizes = o.sizes;
  spec.base_trees = o.base_trees;
  spec.seed = resolve_seed(o);
  spec.time_floor_ms = o.time_floor_ms;
  spec.sample_interval = o.sample_interval;
  spec.ops = o.ops;
  spec.audit = o.audit;
  spec.serial = o.serial;
  spec.double_counts_as = o.double_counts_as;
  spec.replay_repetitions = o.repetitions;
  spec.jobs = o.jobs;
  spec.check();
  return spec;
}

// Writes through a buffer so a failed run never leaves a partial file.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed to write to stdout");
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  os.flush();
  if (!os) throw IoError("failed to write '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  return is;
}

OpSequence load_sequence(const std::string& path) {
  auto is = open_input(path);
  try {
    return parse_sequence(is);
  } catch (const SequenceParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

std::string render(const std::vector<MetricsRecord>& rows, const std::string& format) {
  std::ostringstream os;
  emit_results(os, rows, parse_output_format(format));
  return os.str();
}

void add_workload_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--dist", o.dist, "uniform|zipf|skewed|presorted")->capture_default_str();
  cmd.add_option("--seed", o.seed, "Base seed (falls back to WBTREE_SEED, then 1)");
  cmd.add_option("--zipf-s", o.zipf_s, "Zipf exponent")->capture_default_str();
  cmd.add_option("--universe", o.universe, "Key space size for uniform/zipf/skewed")->capture_default_str();
  cmd.add_option("--skew-a-lo", o.windows.a_lo, "Skewed window A start (fraction)")->capture_default_str();
  cmd.add_option("--skew-a-hi", o.windows.a_hi, "Skewed window A end (fraction)")->capture_default_str();
  cmd.add_option("--skew-b-lo", o.windows.b_lo, "Skewed window B start (fraction)")->capture_default_str();
  cmd.add_option("--skew-b-hi", o.windows.b_hi, "Skewed window B end (fraction)")->capture_default_str();
}

void add_variant_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--variants", o.variants, "bottom-up,top-down,red-black")
      ->delimiter(',')
      ->capture_default_str();
  cmd.add_option("--params", o.params, "classic,integral,topdown,tight,overtight,custom:<dn>/<dd>:<gn>/<gd>")
      ->delimiter(',')
      ->capture_default_str();
}

void add_output_options(CLI::App& cmd, Options& o) {
  cmd.add_option("--out", o.out, "Output path (default stdout)");
  cmd.add_option("--format", o.format, "csv|jsonl")->capture_default_str();
}

void add_run_options(CLI::App& cmd, Options& o) {
  add_variant_options(cmd, o);
  add_output_options(cmd, o);
  cmd.add_option("--base-trees", o.base_trees, "Base trees per size")->capture_default_str();
  cmd.add_option("--time-floor-ms", o.time_floor_ms, "Minimum timed duration per cell")->capture_default_str();
  cmd.add_flag("--audit", o.audit, "Validate structure and balance after every phase");
  cmd.add_flag("--serial", o.serial, "Run cells sequentially");
  cmd.add_option("--jobs", o.jobs, "Worker threads (0 = hardware concurrency)")->capture_default_str();
  cmd.add_option("--double-counts-as", o.double_counts_as, "Rotations counted per double rotation")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
}

int run(int argc, char** argv) {
  CLI::App app{"Weight-balanced tree benchmarks"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::pair<std::string, ExperimentKind>> experiments{
      {"insert-pct", ExperimentKind::InsertPct},
      {"erase-pct", ExperimentKind::ErasePct},
      {"depth-churn", ExperimentKind::DepthChurn},
      {"violations", ExperimentKind::ViolationsOverTime},
      {"rotations", ExperimentKind::Rotations},
  };
  const std::vector<std::string> descriptions{
      "Time inserting 5% fresh keys into base trees",
      "Time erasing 5% of the keys of base trees",
      "Average depth after deleting and reinserting every node",
      "Violation counts sampled over delete/insert pairs",
      "Cumulative rotation counts sampled over delete/insert pairs",
  };
  std::vector<CLI::App*> experiment_cmds;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    auto* cmd = app.add_subcommand(experiments[i].first, descriptions[i]);
    add_workload_options(*cmd, o);
    add_run_options(*cmd, o);
    cmd->add_option("--sizes", o.sizes, "Base sizes")->delimiter(',')->capture_default_str();
    cmd->add_option("--sample-interval", o.sample_interval, "Op-pairs between samples")->capture_default_str();
    cmd->add_option("--ops", o.ops, "Op-pairs per run (default: base size)");
    experiment_cmds.push_back(cmd);
  }

  auto* replay = app.add_subcommand("replay", "Replay an operation sequence on every variant");
  add_run_options(*replay, o);
  replay->add_option("--sequence", o.sequence, "Sequence file (i <key> / d <key>)")->required();
  replay->add_option("--repetitions", o.repetitions, "Timed replays per variant")->capture_default_str();

  auto* gen_keys = app.add_subcommand("gen-keys", "Write a key workload file");
  add_workload_options(*gen_keys, o);
  gen_keys->add_option("--count", o.count, "Number of keys")->capture_default_str();
  gen_keys->add_option("--out", o.out, "Output path (default stdout)");

  auto* gen_seq = app.add_subcommand("gen-sequence", "Write a synthetic operation sequence");
  add_workload_options(*gen_seq, o);
  gen_seq->add_option("--count", o.count, "Number of inserts")->capture_default_str();
  gen_seq->add_option("--absent-pct", o.absent_pct, "Percent of deletes aimed at absent keys")
      ->check(CLI::Range(0u, 100u))
      ->capture_default_str();
  gen_seq->add_option("--out", o.out, "Output path (default stdout)");

  auto* shape = app.add_subcommand("shape", "Dump the tree built from a key file or sequence");
  std::string scheme = "bottom-up";
  std::string param = "classic";
  shape->add_option("--variant", scheme, "bottom-up|top-down|red-black")->capture_default_str();
  shape->add_option("--params", param, "Parameter set")->capture_default_str();
  auto* keys_opt = shape->add_option("--keys", o.keys, "Key workload file");
  auto* seq_opt = shape->add_option("--sequence", o.sequence, "Sequence file");
  keys_opt->excludes(seq_opt);
  shape->add_option("--out", o.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (std::size_t i = 0; i < experiments.size(); ++i) {
      if (*experiment_cmds[i]) {
        const auto rows = run_experiment(spec_of(o, experiments[i].second));
        write_output(o.out, render(rows, o.format));
        return kExitOk;
      }
    }
    if (*replay) {
      const auto spec = spec_of(o, ExperimentKind::Replay);
      const auto seq = load_sequence(o.sequence);
      write_output(o.out, render(run_replay(seq, spec), o.format));
      return kExitOk;
    }
    if (*gen_keys) {
      const auto w = generate(workload_of(o), o.count, resolve_seed(o));
      std::ostringstream os;
      write_workload(os, w);
      write_output(o.out, os.str());
      return kExitOk;
    }
    if (*gen_seq) {
      const std::uint64_t seed = resolve_seed(o);
      const auto w = generate(workload_of(o), o.count, seed);
      std::ostringstream os;
      write_sequence(os, synthesize_sequence(w.keys, derive_seed(seed, {kOpChoice}), o.absent_pct));
      write_output(o.out, os.str());
      return kExitOk;
    }
    if (*shape) {
      if (o.keys.empty() == o.sequence.empty()) throw UsageError("shape needs exactly one of --keys, --sequence");
      TreeVariant variant{parse_scheme(scheme), std::nullopt};
      if (variant.scheme != Scheme::RedBlack) variant.params = parse_params(param);
      std::string dump;
      if (!o.keys.empty()) {
        auto is = open_input(o.keys);
        KeyWorkload w;
        try {
          w = read_workload(is);
        } catch (const std::runtime_error& e) {
          throw UsageError(o.keys + ": " + e.what());
        }
        dump = build_shape(variant, w.keys);
      } else {
        dump = replay_shape(variant, load_sequence(o.sequence));
      }
      write_output(o.out, dump);
      return kExitOk;
    }
  } catch (const AuditFailure& e) {
    std::cerr << "audit failure: " << e.what() << '\n';
    return kExitAudit;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
