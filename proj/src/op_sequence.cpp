#include "wbtree/op_sequence.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "wbtree/keygen.hpp"

namespace wbtree {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

OpSequence parse_sequence(std::istream& is) {
  OpSequence seq;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    Op op;
    switch (line.front()) {
      case 'i': op.kind = OpKind::Insert; break;
      case 'd': op.kind = OpKind::Delete; break;
      default: throw SequenceParseError(line_no, "expected 'i' or 'd'");
    }
    if (line.size() < 2 || (line[1] != ' ' && line[1] != '\t')) {
      throw SequenceParseError(line_no, "expected whitespace after op letter");
    }
    const std::string_view num = trim(line.substr(2));
    if (num.empty()) throw SequenceParseError(line_no, "missing key");
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), op.key);
    if (ec == std::errc::result_out_of_range) throw SequenceParseError(line_no, "key out of range");
    if (ec != std::errc{} || ptr != num.data() + num.size()) {
      throw SequenceParseError(line_no, "malformed key '" + std::string(num) + "'");
    }
    seq.ops.push_back(op);
  }
  if (is.bad()) throw std::runtime_error("read error while parsing sequence");
  return seq;
}

void write_sequence(std::ostream& os, const OpSequence& seq) {
  for (const auto& op : seq.ops) os << (op.kind == OpKind::Insert ? 'i' : 'd') << ' ' << op.key << '\n';
}

OpSequence synthesize_sequence(const std::vector<std::int64_t>& keys, std::uint64_t seed,
                               unsigned delete_absent_pct) {
  OpSequence seq;
  SplitMix64 rng(seed);
  std::vector<std::int64_t> present;
  std::int64_t min_key = 0, max_key = 0;
  for (auto k : keys) {
    min_key = std::min(min_key, k);
    max_key = std::max(max_key, k);
  }
  constexpr std::int64_t kGap = 1 << 20;
  const bool above = max_key <= std::numeric_limits<std::int64_t>::max() - 2 * kGap;

  for (auto k : keys) {
    seq.ops.push_back({OpKind::Insert, k});
    present.push_back(k);
    if (rng.below(2) == 0) continue;
    if (delete_absent_pct > 0 && rng.below(100) < delete_absent_pct) {
      // Keys outside the generated range are never present.
      const auto gap = static_cast<std::int64_t>(rng.below(kGap));
      seq.ops.push_back({OpKind::Delete, above ? max_key + 1 + gap : min_key - 1 - gap});
      continue;
    }
    const auto idx = rng.below(present.size());
    seq.ops.push_back({OpKind::Delete, present[idx]});
    present[idx] = present.back();
    present.pop_back();
  }
  return seq;
}

}  // namespace wbtree
