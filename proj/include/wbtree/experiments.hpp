#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wbtree/balance_params.hpp"
#include "wbtree/keygen.hpp"
#include "wbtree/op_sequence.hpp"
#include "wbtree/results.hpp"

namespace wbtree {

enum class ExperimentKind { InsertPct, ErasePct, DepthChurn, ViolationsOverTime, Rotations, Replay };

std::string_view to_string(ExperimentKind kind);
/// Accepts the CLI subcommand names: insert-pct, erase-pct, depth-churn,
/// violations, rotations, replay.
ExperimentKind parse_experiment(std::string_view text);

enum class Scheme { BottomUp, TopDown, RedBlack };

std::string_view to_string(Scheme scheme);
/// Accepts bottom-up, top-down, red-black (also rb).
Scheme parse_scheme(std::string_view text);

struct TreeVariant {
  Scheme scheme = Scheme::BottomUp;
  std::optional<BalanceParams> params;  // empty for red-black

  std::string params_name() const;
  /// Whether the balance criterion is guaranteed after every operation.
  bool feasible() const;
};

/// Every weight-balanced scheme paired with every parameter set; red-black
/// appears once, without parameters.
std::vector<TreeVariant> make_variants(const std::vector<Scheme>& schemes,
                                       const std::vector<BalanceParams>& params);

struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::InsertPct;
  std::vector<TreeVariant> variants;
  WorkloadConfig workload{};
  std::vector<std::uint64_t> sizes{1000, 10000, 100000};
  std::uint64_t base_trees = 10;
  std::uint64_t seed = 1;
  std::uint64_t time_floor_ms = 1000;
  std::uint64_t sample_interval = 10000;
  /// Op-pairs for violations and rotations runs; defaults to the base size.
  std::optional<std::uint64_t> ops;
  bool audit = false;
  bool serial = false;
  int double_counts_as = 2;
  std::uint64_t replay_repetitions = 10;
  /// Worker threads; 0 picks the hardware concurrency. Ignored when serial.
  unsigned jobs = 0;

  /// Throws std::invalid_argument when a field is out of range.
  void check() const;
};

/// Raised when --audit finds a structural error or a balance violation in a
/// feasible configuration.
class AuditFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seed of the key stream for one (size, base tree, purpose) cell. Variants
/// share it, so every variant sees the same base tree and operations.
std::uint64_t cell_seed(std::uint64_t base_seed, std::uint64_t size, std::uint64_t base_tree,
                        std::uint64_t purpose);

enum SeedPurpose : std::uint64_t { kBaseKeys = 0, kFreshKeys = 1, kEraseChoice = 2, kChurnKeys = 3, kOpChoice = 4 };

std::vector<MetricsRecord> run_insert_pct(const ExperimentSpec& spec);
std::vector<MetricsRecord> run_erase_pct(const ExperimentSpec& spec);
std::vector<MetricsRecord> run_depth_churn(const ExperimentSpec& spec);
std::vector<MetricsRecord> run_violations_over_time(const ExperimentSpec& spec);
std::vector<MetricsRecord> run_rotations(const ExperimentSpec& spec);
/// Adds the (bottom-up, classic) baseline when missing; normalized_time is
/// relative to it.
std::vector<MetricsRecord> run_replay(const OpSequence& sequence, const ExperimentSpec& spec);

/// Dispatches every kind except Replay.
std::vector<MetricsRecord> run_experiment(const ExperimentSpec& spec);

/// Tree dump after inserting keys in order.
std::string build_shape(const TreeVariant& variant, const std::vector<std::int64_t>& keys);
/// Tree dump after replaying sequence on an empty tree.
std::string replay_shape(const TreeVariant& variant, const OpSequence& sequence);

}  // namespace wbtree
