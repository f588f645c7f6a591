#pragma once

#include <chrono>
#include <cstdint>
#include <utility>
#include <vector>

#include "wbtree/balance_params.hpp"

namespace wbtree {

/// Per-tree instrumentation. Trees hold a nullable pointer to one of these;
/// a null or disabled sink leaves tree behaviour untouched.
struct MetricsSink {
  std::uint64_t rotation_count = 0;
  /// Sum of the pre-rotation weights of every rotation pivot.
  std::uint64_t rotated_weight_total = 0;
  /// Nodes visited or restructured; used for pass-complexity checks.
  std::uint64_t touch_count = 0;
  bool enabled = true;
  /// How many rotations a double rotation adds to rotation_count (1 or 2).
  /// The weight of both pivots is always added.
  int double_counts_as = 2;

  void on_single_rotation(Weight pivot_weight) noexcept {
    if (!enabled) return;
    ++rotation_count;
    rotated_weight_total += pivot_weight;
    touch_count += 2;
  }

  void on_double_rotation(Weight inner_pivot_weight, Weight outer_pivot_weight) noexcept {
    if (!enabled) return;
    rotation_count += static_cast<std::uint64_t>(double_counts_as);
    rotated_weight_total += inner_pivot_weight + outer_pivot_weight;
    touch_count += 3;
  }

  void on_touch() noexcept {
    if (enabled) ++touch_count;
  }

  void reset() noexcept {
    rotation_count = 0;
    rotated_weight_total = 0;
    touch_count = 0;
  }
};

template <typename NodePtr>
inline Weight weight_of(NodePtr n) noexcept {
  return n ? n->weight : 1;
}

/// Number of nodes whose stored child weights break the balance criterion.
/// Full traversal; expects validate() to be clean.
template <typename Tree>
std::size_t count_violations(const Tree& tree, const BalanceParams& params) {
  using NodePtr = decltype(tree.root());
  std::size_t violations = 0;
  std::vector<NodePtr> stack;
  if (tree.root()) stack.push_back(tree.root());
  while (!stack.empty()) {
    NodePtr v = stack.back();
    stack.pop_back();
    if (!is_balanced(weight_of(v->left), weight_of(v->right), params)) ++violations;
    if (v->left) stack.push_back(v->left);
    if (v->right) stack.push_back(v->right);
  }
  return violations;
}

/// Mean node depth with the root at depth 0; 0 for an empty tree.
template <typename Tree>
double average_depth(const Tree& tree) {
  using NodePtr = decltype(tree.root());
  std::uint64_t total = 0;
  std::uint64_t nodes = 0;
  std::vector<std::pair<NodePtr, std::uint64_t>> stack;
  if (tree.root()) stack.emplace_back(tree.root(), 0);
  while (!stack.empty()) {
    auto [v, depth] = stack.back();
    stack.pop_back();
    total += depth;
    ++nodes;
    if (v->left) stack.emplace_back(v->left, depth + 1);
    if (v->right) stack.emplace_back(v->right, depth + 1);
  }
  return nodes == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(nodes);
}

/// Average depth of the most compact binary tree on n nodes.
double perfect_tree_average_depth(std::uint64_t n);

/// Wall-clock duration of one call, monotonic clock.
template <typename Thunk>
std::uint64_t time_block(Thunk&& thunk) {
  const auto start = std::chrono::steady_clock::now();
  std::forward<Thunk>(thunk)();
  const auto stop = std::chrono::steady_clock::now();
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
}

struct TimingSummary {
  std::uint64_t repetitions = 0;
  std::uint64_t total_ns = 0;
  double mean_ns_per_op = 0.0;
  double stddev_ns_per_op = 0.0;
};

/// Summarizes per-repetition durations into per-op mean and sample standard
/// deviation.
TimingSummary summarize_timings(const std::vector<std::uint64_t>& durations_ns,
                                std::uint64_t ops_per_repetition);

/// Runs setup (untimed) then body (timed) until the timed total reaches
/// floor. Always runs at least once.
template <typename Setup, typename Body>
TimingSummary repeat_timed(std::chrono::nanoseconds floor, std::uint64_t ops_per_repetition,
                           Setup&& setup, Body&& body) {
  std::vector<std::uint64_t> durations;
  std::uint64_t total = 0;
  do {
    setup();
    const std::uint64_t ns = time_block(body);
    durations.push_back(ns);
    total += ns;
  } while (total < static_cast<std::uint64_t>(floor.count()));
  return summarize_timings(durations, ops_per_repetition);
}

}  // namespace wbtree
