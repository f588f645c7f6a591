#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace wbtree {

enum class OpKind { Insert, Delete };

struct Op {
  OpKind kind = OpKind::Insert;
  std::int64_t key = 0;

  bool operator==(const Op&) const = default;
};

/// Text format: one op per line, `i <key>` or `d <key>`. Lines starting with
/// `#` and blank lines are ignored.
struct OpSequence {
  std::vector<Op> ops;

  bool operator==(const OpSequence&) const = default;
};

class SequenceParseError : public std::runtime_error {
 public:
  SequenceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

OpSequence parse_sequence(std::istream& is);
void write_sequence(std::ostream& os, const OpSequence& seq);

/// Inserts every key in order; after each insert, with probability 1/2,
/// deletes a uniformly chosen key that is currently present. A fraction of
/// deletes (delete_absent_pct percent) target a key that is not present.
OpSequence synthesize_sequence(const std::vector<std::int64_t>& keys, std::uint64_t seed,
                               unsigned delete_absent_pct = 0);

}  // namespace wbtree
