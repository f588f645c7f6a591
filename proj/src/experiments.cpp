#include "wbtree/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <thread>
#include <type_traits>
#include <variant>

#include "wbtree/metrics.hpp"
#include "wbtree/rb_tree.hpp"
#include "wbtree/reference_oracle.hpp"
#include "wbtree/weight_balanced_tree.hpp"

namespace wbtree {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::InsertPct: return "insert-pct";
    case ExperimentKind::ErasePct: return "erase-pct";
    case ExperimentKind::DepthChurn: return "depth-churn";
    case ExperimentKind::ViolationsOverTime: return "violations";
    case ExperimentKind::Rotations: return "rotations";
    case ExperimentKind::Replay: return "replay";
  }
  return "?";
}

ExperimentKind parse_experiment(std::string_view text) {
  for (auto k : {ExperimentKind::InsertPct, ExperimentKind::ErasePct, ExperimentKind::DepthChurn,
                 ExperimentKind::ViolationsOverTime, ExperimentKind::Rotations, ExperimentKind::Replay}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown experiment '" + std::string(text) + "'");
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::BottomUp: return "bottom-up";
    case Scheme::TopDown: return "top-down";
    case Scheme::RedBlack: return "red-black";
  }
  return "?";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "bottom-up") return Scheme::BottomUp;
  if (text == "top-down") return Scheme::TopDown;
  if (text == "red-black" || text == "rb") return Scheme::RedBlack;
  throw std::invalid_argument("unknown tree variant '" + std::string(text) + "'");
}

std::string TreeVariant::params_name() const { return params ? params->name() : "-"; }

bool TreeVariant::feasible() const {
  if (scheme == Scheme::RedBlack || !params) return true;
  const Feasibility f = classify_feasibility(*params);
  return scheme == Scheme::BottomUp ? f.bottom_up_feasible : f.top_down_feasible;
}

std::vector<TreeVariant> make_variants(const std::vector<Scheme>& schemes,
                                       const std::vector<BalanceParams>& params) {
  std::vector<TreeVariant> out;
  for (Scheme s : schemes) {
    if (s == Scheme::RedBlack) {
      out.push_back({s, std::nullopt});
      continue;
    }
    for (const auto& p : params) out.push_back({s, p});
  }
  return out;
}

void ExperimentSpec::check() const {
  if (base_trees < 1) throw std::invalid_argument("base-tree count must be >= 1");
  if (sizes.empty()) throw std::invalid_argument("at least one size is required");
  for (auto s : sizes) {
    if (s == 0) throw std::invalid_argument("sizes must be positive");
  }
  if (sample_interval == 0) throw std::invalid_argument("sample interval must be positive");
  if (double_counts_as != 1 && double_counts_as != 2) {
    throw std::invalid_argument("double-counts-as must be 1 or 2");
  }
  if (replay_repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  for (const auto& v : variants) {
    if (v.scheme != Scheme::RedBlack && !v.params) {
      throw std::invalid_argument("weight-balanced variant without parameters");
    }
  }
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::uint64_t size, std::uint64_t base_tree,
                        std::uint64_t purpose) {
  return derive_seed(base_seed, {size, base_tree, purpose});
}

namespace {

using Key = std::int64_t;
using AnyTree = std::variant<BottomUpTree<Key>, TopDownTree<Key>, RbTree<Key>>;

template <typename Tree>
constexpr bool kIsWeightBalanced = !std::is_same_v<Tree, RbTree<Key>>;

AnyTree make_tree(const TreeVariant& v) {
  switch (v.scheme) {
    case Scheme::BottomUp: return AnyTree(std::in_place_type<BottomUpTree<Key>>, *v.params);
    case Scheme::TopDown: return AnyTree(std::in_place_type<TopDownTree<Key>>, *v.params);
    case Scheme::RedBlack: break;
  }
  return AnyTree(std::in_place_type<RbTree<Key>>);
}

template <typename Tree>
std::uint64_t violations_of(const Tree& t) {
  if constexpr (kIsWeightBalanced<Tree>) {
    return count_violations(t, t.params());
  } else {
    return 0;
  }
}

template <typename Tree>
void audit_tree(const Tree& t, const TreeVariant& v, std::string_view phase) {
  std::ostringstream err;
  if constexpr (kIsWeightBalanced<Tree>) {
    for (const auto& x : t.validate()) err << to_string(x.kind) << " at " << x.key << ": " << x.details << "; ";
  } else {
    for (const auto& s : t.validate()) err << s << "; ";
  }
  for (const auto& x : oracle::audit_structure(t)) err << x.kind << " at " << x.key << ": " << x.details << "; ";
  if constexpr (kIsWeightBalanced<Tree>) {
    if (v.feasible()) {
      const auto bad = oracle::audit_balance(t, t.params());
      if (!bad.empty()) {
        err << bad.size() << " unbalanced nodes, first at " << bad.front().key << " (" << bad.front().details
            << ")";
      }
    }
  }
  const std::string msg = err.str();
  if (!msg.empty()) {
    throw AuditFailure(std::string(to_string(v.scheme)) + " " + v.params_name() + " after " +
                       std::string(phase) + ": " + msg);
  }
}

template <typename Tree>
void fill(Tree& t, const std::vector<Key>& keys) {
  for (Key k : keys) t.insert(k);
}

MetricsRecord base_row(const ExperimentSpec& spec, const TreeVariant& v, std::uint64_t size,
                       std::uint64_t base_tree, std::string_view operation) {
  MetricsRecord r;
  r.experiment = std::string(to_string(spec.experiment));
  r.tree_variant = std::string(to_string(v.scheme));
  r.params = v.params_name();
  r.distribution = std::string(to_string(spec.workload.distribution));
  r.base_size = size;
  r.operation = std::string(operation);
  r.repetition = base_tree;
  r.seed = spec.seed;
  return r;
}

template <typename Tree>
void record_state(MetricsRecord& r, const Tree& t, const MetricsSink& sink) {
  r.rotation_count = sink.rotation_count;
  r.rotated_weight_total = sink.rotated_weight_total;
  r.violation_count = violations_of(t);
  r.average_depth = average_depth(t);
  r.tree_size = t.size();
}

void record_timing(MetricsRecord& r, const TimingSummary& s, std::uint64_t ops) {
  r.ops = ops;
  r.repetitions = s.repetitions;
  r.elapsed_ns = s.total_ns;
  r.mean_ns_per_op = s.mean_ns_per_op;
  r.stddev_ns_per_op = s.stddev_ns_per_op;
}

MetricsSink make_sink(const ExperimentSpec& spec) {
  MetricsSink sink;
  sink.double_counts_as = spec.double_counts_as;
  return sink;
}

/// Runs fn(i) for i in [0, count), possibly on several threads, and
/// concatenates the results in index order.
template <typename Fn>
std::vector<MetricsRecord> run_cells(const ExperimentSpec& spec, std::size_t count, Fn fn) {
  std::vector<std::vector<MetricsRecord>> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned jobs = spec.serial ? 1 : (spec.jobs ? spec.jobs : std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(std::max(jobs, 1u), count));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<MetricsRecord> rows;
  for (auto& part : out) {
    for (auto& r : part) rows.push_back(std::move(r));
  }
  return rows;
}

struct Cell {
  const TreeVariant* variant;
  std::uint64_t size;
  std::uint64_t base_tree;
};

std::vector<Cell> grid(const ExperimentSpec& spec) {
  std::vector<Cell> cells;
  for (const auto& v : spec.variants) {
    for (auto size : spec.sizes) {
      for (std::uint64_t b = 0; b < spec.base_trees; ++b) cells.push_back({&v, size, b});
    }
  }
  return cells;
}

std::uint64_t five_percent(std::uint64_t size) { return (size * 5 + 99) / 100; }

std::vector<MetricsRecord> insert_cell(const ExperimentSpec& spec, const Cell& c) {
  const TreeVariant& v = *c.variant;
  const auto keys = generate(spec.workload, c.size, cell_seed(spec.seed, c.size, c.base_tree, kBaseKeys));
  const std::uint64_t m = five_percent(c.size);
  const auto fresh = generate(spec.workload, m, cell_seed(spec.seed, c.size, c.base_tree, kFreshKeys));
  AnyTree any = make_tree(v);

  return std::visit(
      [&](auto& base) {
        using Tree = std::decay_t<decltype(base)>;
        fill(base, keys.keys);
        if (spec.audit) audit_tree(base, v, "build");

        std::optional<Tree> work;
        const TimingSummary timing = repeat_timed(
            std::chrono::milliseconds(spec.time_floor_ms), m,
            [&] {
              work.reset();
              work.emplace(base);
            },
            [&] {
              for (Key k : fresh.keys) work->insert(k);
            });
        work.reset();

        Tree probe(base);
        MetricsSink sink = make_sink(spec);
        probe.set_sink(&sink);
        for (Key k : fresh.keys) probe.insert(k);
        if (spec.audit) audit_tree(probe, v, "insert");

        MetricsRecord r = base_row(spec, v, c.size, c.base_tree, "insert");
        record_timing(r, timing, m);
        record_state(r, probe, sink);
        return std::vector<MetricsRecord>{r};
      },
      any);
}

/// m keys drawn without replacement from the multiset `keys`.
std::vector<Key> choose_present(std::vector<Key> keys, std::uint64_t m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  m = std::min<std::uint64_t>(m, keys.size());
  for (std::uint64_t i = 0; i < m; ++i) std::swap(keys[i], keys[i + rng.below(keys.size() - i)]);
  keys.resize(m);
  return keys;
}

std::vector<MetricsRecord> erase_cell(const ExperimentSpec& spec, const Cell& c) {
  const TreeVariant& v = *c.variant;
  const auto keys = generate(spec.workload, c.size, cell_seed(spec.seed, c.size, c.base_tree, kBaseKeys));
  const std::uint64_t m = five_percent(c.size);
  const auto doomed = choose_present(keys.keys, m, cell_seed(spec.seed, c.size, c.base_tree, kEraseChoice));
  AnyTree any = make_tree(v);

  return std::visit(
      [&](auto& base) {
        using Tree = std::decay_t<decltype(base)>;
        fill(base, keys.keys);
        if (spec.audit) audit_tree(base, v, "build");

        std::optional<Tree> work;
        const TimingSummary timing = repeat_timed(
            std::chrono::milliseconds(spec.time_floor_ms), doomed.size(),
            [&] {
              work.reset();
              work.emplace(base);
            },
            [&] {
              for (Key k : doomed) work->erase(k);
            });
        work.reset();

        Tree probe(base);
        MetricsSink sink = make_sink(spec);
        probe.set_sink(&sink);
        std::uint64_t failed = 0;
        for (Key k : doomed) failed += probe.erase(k) ? 0 : 1;
        if (spec.audit) audit_tree(probe, v, "erase");

        MetricsRecord r = base_row(spec, v, c.size, c.base_tree, "erase");
        record_timing(r, timing, doomed.size());
        record_state(r, probe, sink);
        r.failed_ops = failed;
        return std::vector<MetricsRecord>{r};
      },
      any);
}

std::vector<MetricsRecord> churn_cell(const ExperimentSpec& spec, const Cell& c) {
  const TreeVariant& v = *c.variant;
  const auto keys = generate(spec.workload, c.size, cell_seed(spec.seed, c.size, c.base_tree, kBaseKeys));
  const auto redraw = generate(spec.workload, c.size, cell_seed(spec.seed, c.size, c.base_tree, kChurnKeys));
  AnyTree any = make_tree(v);

  return std::visit(
      [&](auto& tree) {
        fill(tree, keys.keys);
        if (spec.audit) audit_tree(tree, v, "build");

        MetricsSink sink = make_sink(spec);
        tree.set_sink(&sink);
        std::uint64_t failed = 0;
        const std::uint64_t ns = time_block([&] {
          for (std::size_t i = 0; i < keys.keys.size(); ++i) {
            failed += tree.erase(keys.keys[i]) ? 0 : 1;
            tree.insert(redraw.keys[i]);
          }
        });
        if (spec.audit) audit_tree(tree, v, "churn");

        MetricsRecord r = base_row(spec, v, c.size, c.base_tree, "churn");
        record_timing(r, summarize_timings({ns}, c.size), c.size);
        record_state(r, tree, sink);
        r.failed_ops = failed;
        return std::vector<MetricsRecord>{r};
      },
      any);
}

// Op-pair workload shared by the violations and rotations experiments: each
// pair removes a uniformly chosen present key and inserts a fresh one.
std::vector<MetricsRecord> op_pair_cell(const ExperimentSpec& spec, const Cell& c) {
  const TreeVariant& v = *c.variant;
  const std::uint64_t total = spec.ops.value_or(c.size);
  const auto keys = generate(spec.workload, c.size, cell_seed(spec.seed, c.size, c.base_tree, kBaseKeys));
  const auto fresh = generate(spec.workload, total, cell_seed(spec.seed, c.size, c.base_tree, kFreshKeys));
  SplitMix64 choice(cell_seed(spec.seed, c.size, c.base_tree, kOpChoice));
  AnyTree any = make_tree(v);

  return std::visit(
      [&](auto& tree) {
        fill(tree, keys.keys);
        if (spec.audit) audit_tree(tree, v, "build");

        MetricsSink sink = make_sink(spec);
        tree.set_sink(&sink);
        std::vector<Key> present = keys.keys;
        std::vector<MetricsRecord> rows;
        std::uint64_t elapsed = 0;
        std::uint64_t failed = 0;

        auto sample = [&](std::uint64_t step) {
          MetricsRecord r = base_row(spec, v, c.size, c.base_tree, "op-pair");
          r.step = step;
          r.ops = total;
          r.elapsed_ns = elapsed;
          r.failed_ops = failed;
          record_state(r, tree, sink);
          rows.push_back(std::move(r));
          if (spec.audit) audit_tree(tree, v, "step " + std::to_string(step));
        };

        sample(0);
        std::uint64_t step = 0;
        while (step < total) {
          const std::uint64_t stop = std::min(total, (step / spec.sample_interval + 1) * spec.sample_interval);
          elapsed += time_block([&] {
            for (; step < stop; ++step) {
              const std::uint64_t idx = choice.below(present.size());
              const Key victim = present[idx];
              present[idx] = present.back();
              present.pop_back();
              failed += tree.erase(victim) ? 0 : 1;
              const Key k = fresh.keys[step];
              tree.insert(k);
              present.push_back(k);
            }
          });
          sample(step);
        }
        return rows;
      },
      any);
}

template <typename CellFn>
std::vector<MetricsRecord> run_grid(const ExperimentSpec& spec, CellFn fn) {
  spec.check();
  const auto cells = grid(spec);
  return run_cells(spec, cells.size(), [&](std::size_t i) { return fn(spec, cells[i]); });
}

ExperimentSpec with_kind(ExperimentSpec spec, ExperimentKind kind) {
  spec.experiment = kind;
  return spec;
}

template <typename Tree>
std::uint64_t replay_into(Tree& tree, const OpSequence& sequence) {
  std::uint64_t failed = 0;
  for (const auto& op : sequence.ops) {
    if (op.kind == OpKind::Insert) {
      tree.insert(op.key);
    } else {
      failed += tree.erase(op.key) ? 0 : 1;
    }
  }
  return failed;
}

bool is_baseline(const TreeVariant& v) {
  return v.scheme == Scheme::BottomUp && v.params && v.params->name() == classic_params().name();
}

}  // namespace

std::vector<MetricsRecord> run_insert_pct(const ExperimentSpec& spec) {
  return run_grid(with_kind(spec, ExperimentKind::InsertPct), insert_cell);
}

std::vector<MetricsRecord> run_erase_pct(const ExperimentSpec& spec) {
  return run_grid(with_kind(spec, ExperimentKind::ErasePct), erase_cell);
}

std::vector<MetricsRecord> run_depth_churn(const ExperimentSpec& spec) {
  return run_grid(with_kind(spec, ExperimentKind::DepthChurn), churn_cell);
}

std::vector<MetricsRecord> run_violations_over_time(const ExperimentSpec& spec) {
  return run_grid(with_kind(spec, ExperimentKind::ViolationsOverTime), op_pair_cell);
}

std::vector<MetricsRecord> run_rotations(const ExperimentSpec& spec) {
  return run_grid(with_kind(spec, ExperimentKind::Rotations), op_pair_cell);
}

std::vector<MetricsRecord> run_replay(const OpSequence& sequence, const ExperimentSpec& input) {
  ExperimentSpec spec = with_kind(input, ExperimentKind::Replay);
  spec.check();
  std::vector<TreeVariant> variants = spec.variants;
  std::size_t baseline = variants.size();
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (is_baseline(variants[i])) baseline = i;
  }
  if (baseline == variants.size()) variants.push_back({Scheme::BottomUp, classic_params()});

  const std::uint64_t ops = sequence.ops.size();
  auto rows = run_cells(spec, variants.size(), [&](std::size_t i) {
    const TreeVariant& v = variants[i];
    std::vector<std::uint64_t> durations;
    for (std::uint64_t rep = 0; rep < spec.replay_repetitions; ++rep) {
      AnyTree any = make_tree(v);
      std::visit([&](auto& tree) { durations.push_back(time_block([&] { replay_into(tree, sequence); })); }, any);
    }

    AnyTree any = make_tree(v);
    return std::visit(
        [&](auto& tree) {
          MetricsSink sink = make_sink(spec);
          tree.set_sink(&sink);
          const std::uint64_t failed = replay_into(tree, sequence);
          if (spec.audit) audit_tree(tree, v, "replay");

          MetricsRecord r = base_row(spec, v, 0, 0, "replay");
          r.distribution = "sequence";
          record_timing(r, summarize_timings(durations, ops), ops);
          record_state(r, tree, sink);
          r.failed_ops = failed;
          return std::vector<MetricsRecord>{r};
        },
        any);
  });

  const double base_mean = rows[baseline].mean_ns_per_op;
  for (auto& r : rows) r.normalized_time = base_mean > 0.0 ? r.mean_ns_per_op / base_mean : 0.0;
  return rows;
}

std::vector<MetricsRecord> run_experiment(const ExperimentSpec& spec) {
  switch (spec.experiment) {
    case ExperimentKind::InsertPct: return run_insert_pct(spec);
    case ExperimentKind::ErasePct: return run_erase_pct(spec);
    case ExperimentKind::DepthChurn: return run_depth_churn(spec);
    case ExperimentKind::ViolationsOverTime: return run_violations_over_time(spec);
    case ExperimentKind::Rotations: return run_rotations(spec);
    case ExperimentKind::Replay: break;
  }
  throw std::invalid_argument("replay needs an operation sequence");
}

std::string build_shape(const TreeVariant& variant, const std::vector<std::int64_t>& keys) {
  AnyTree any = make_tree(variant);
  return std::visit(
      [&](auto& tree) {
        fill(tree, keys);
        return tree.dump();
      },
      any);
}

std::string replay_shape(const TreeVariant& variant, const OpSequence& sequence) {
  AnyTree any = make_tree(variant);
  return std::visit(
      [&](auto& tree) {
        replay_into(tree, sequence);
        return tree.dump();
      },
      any);
}

}  // namespace wbtree
