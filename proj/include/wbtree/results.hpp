#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wbtree {

/// One output row. Every row carries its full configuration.
struct MetricsRecord {
  std::string experiment;
  std::string tree_variant;
  std::string params;
  std::string distribution;
  std::uint64_t base_size = 0;
  std::string operation;
  std::uint64_t repetition = 0;  // base-tree (or seed) index
  std::uint64_t seed = 0;
  std::uint64_t step = 0;        // op-pairs done at a sample point
  std::uint64_t ops = 0;         // operations per timed repetition
  std::uint64_t repetitions = 0; // timed repetitions
  std::uint64_t elapsed_ns = 0;
  double mean_ns_per_op = 0.0;
  double stddev_ns_per_op = 0.0;
  double normalized_time = 0.0;
  std::uint64_t rotation_count = 0;
  std::uint64_t rotated_weight_total = 0;
  std::uint64_t violation_count = 0;
  double average_depth = 0.0;
  std::uint64_t tree_size = 0;
  std::uint64_t failed_ops = 0;

  bool operator==(const MetricsRecord&) const = default;
};

enum class OutputFormat { Csv, Jsonl };

OutputFormat parse_output_format(std::string_view text);

/// Column names in output order.
const std::vector<std::string>& csv_columns();

void write_csv(std::ostream& os, const std::vector<MetricsRecord>& rows);
void write_jsonl(std::ostream& os, const std::vector<MetricsRecord>& rows);
void emit_results(std::ostream& os, const std::vector<MetricsRecord>& rows, OutputFormat format);

/// Throws std::runtime_error when the header or a field does not parse.
std::vector<MetricsRecord> read_csv(std::istream& is);

}  // namespace wbtree
