#include "wbtree/results.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace wbtree {

namespace {

// Field accessors in column order. Each entry formats and parses one field.
struct Column {
  const char* name;
  std::string (*get)(const MetricsRecord&);
  void (*set)(MetricsRecord&, const std::string&);
};

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_field(const std::string& text, const char* name) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error(std::string("csv: bad value for ") + name + ": '" + text + "'");
  }
  return value;
}

#define WB_STR(field) \
  {#field, [](const MetricsRecord& r) { return r.field; }, [](MetricsRecord& r, const std::string& s) { r.field = s; }}
#define WB_U64(field)                                                    \
  {#field, [](const MetricsRecord& r) { return fmt_u64(r.field); },      \
   [](MetricsRecord& r, const std::string& s) { r.field = parse_field<std::uint64_t>(s, #field); }}
#define WB_DBL(field)                                                    \
  {#field, [](const MetricsRecord& r) { return fmt_double(r.field); },   \
   [](MetricsRecord& r, const std::string& s) { r.field = parse_field<double>(s, #field); }}

const Column kColumns[] = {
    WB_STR(experiment),     WB_STR(tree_variant),       WB_STR(params),          WB_STR(distribution),
    WB_U64(base_size),      WB_STR(operation),          WB_U64(repetition),      WB_U64(seed),
    WB_U64(step),           WB_U64(ops),                WB_U64(repetitions),     WB_U64(elapsed_ns),
    WB_DBL(mean_ns_per_op), WB_DBL(stddev_ns_per_op),   WB_DBL(normalized_time), WB_U64(rotation_count),
    WB_U64(rotated_weight_total), WB_U64(violation_count), WB_DBL(average_depth), WB_U64(tree_size),
    WB_U64(failed_ops),
};

#undef WB_STR
#undef WB_U64
#undef WB_DBL

void write_csv_field(std::ostream& os, const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    os << s;
    return;
  }
  os << '"';
  for (char c : s) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

// Splits one CSV record; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quote");
  return out;
}

}  // namespace

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "jsonl") return OutputFormat::Jsonl;
  throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : kColumns) v.emplace_back(c.name);
    return v;
  }();
  return names;
}

void write_csv(std::ostream& os, const std::vector<MetricsRecord>& rows) {
  bool first = true;
  for (const auto& c : kColumns) {
    if (!first) os << ',';
    os << c.name;
    first = false;
  }
  os << '\n';
  for (const auto& r : rows) {
    first = true;
    for (const auto& c : kColumns) {
      if (!first) os << ',';
      write_csv_field(os, c.get(r));
      first = false;
    }
    os << '\n';
  }
}

void write_jsonl(std::ostream& os, const std::vector<MetricsRecord>& rows) {
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["tree_variant"] = r.tree_variant;
    j["params"] = r.params;
    j["distribution"] = r.distribution;
    j["base_size"] = r.base_size;
    j["operation"] = r.operation;
    j["repetition"] = r.repetition;
    j["seed"] = r.seed;
    j["step"] = r.step;
    j["ops"] = r.ops;
    j["repetitions"] = r.repetitions;
    j["elapsed_ns"] = r.elapsed_ns;
    j["mean_ns_per_op"] = r.mean_ns_per_op;
    j["stddev_ns_per_op"] = r.stddev_ns_per_op;
    j["normalized_time"] = r.normalized_time;
    j["rotation_count"] = r.rotation_count;
    j["rotated_weight_total"] = r.rotated_weight_total;
    j["violation_count"] = r.violation_count;
    j["average_depth"] = r.average_depth;
    j["tree_size"] = r.tree_size;
    j["failed_ops"] = r.failed_ops;
    os << j.dump() << '\n';
  }
}

void emit_results(std::ostream& os, const std::vector<MetricsRecord>& rows, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    write_csv(os, rows);
  } else {
    write_jsonl(os, rows);
  }
}

std::vector<MetricsRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: missing header");
  if (split_csv_line(line) != csv_columns()) throw std::runtime_error("csv: unexpected header");

  std::vector<MetricsRecord> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != std::size(kColumns)) throw std::runtime_error("csv: wrong field count");
    MetricsRecord r;
    for (std::size_t i = 0; i < fields.size(); ++i) kColumns[i].set(r, fields[i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace wbtree
