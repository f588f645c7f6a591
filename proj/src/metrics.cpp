#include "wbtree/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace wbtree {

double perfect_tree_average_depth(std::uint64_t n) {
  if (n == 0) return 0.0;
  std::uint64_t total = 0;
  std::uint64_t placed = 0;
  std::uint64_t level_size = 1;
  for (std::uint64_t depth = 0; placed < n; ++depth, level_size *= 2) {
    const std::uint64_t here = std::min(level_size, n - placed);
    total += here * depth;
    placed += here;
  }
  return static_cast<double>(total) / static_cast<double>(n);
}

TimingSummary summarize_timings(const std::vector<std::uint64_t>& durations_ns,
                                std::uint64_t ops_per_repetition) {
  TimingSummary s;
  s.repetitions = durations_ns.size();
  if (durations_ns.empty()) return s;

  const double ops = static_cast<double>(ops_per_repetition == 0 ? 1 : ops_per_repetition);
  double sum = 0.0;
  for (auto d : durations_ns) {
    s.total_ns += d;
    sum += static_cast<double>(d) / ops;
  }
  s.mean_ns_per_op = sum / static_cast<double>(durations_ns.size());
  if (durations_ns.size() > 1) {
    double sq = 0.0;
    for (auto d : durations_ns) {
      const double x = static_cast<double>(d) / ops - s.mean_ns_per_op;
      sq += x * x;
    }
    s.stddev_ns_per_op = std::sqrt(sq / static_cast<double>(durations_ns.size() - 1));
  }
  return s;
}

}  // namespace wbtree
