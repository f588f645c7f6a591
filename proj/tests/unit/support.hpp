#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wbtree/keygen.hpp"
#include "wbtree/wbt_core.hpp"

namespace wbtree::test {

using Key = std::int64_t;

/// Appends a node below parent (or as root) with no rebalancing. Weights of
/// ancestors are not updated; call fix_weights afterwards.
template <typename Tree>
typename Tree::Node* hang(Tree& tree, typename Tree::Node* parent, Key key, Direction side) {
  auto* n = tree.make_node(key);
  if (parent) {
    Tree::attach(parent, n, side);
  } else {
    tree.set_root(n);
  }
  tree.note_inserted();
  return n;
}

/// Recomputes every stored weight from the shape.
template <typename Node>
Weight fix_weights(Node* n) {
  if (!n) return 1;
  n->weight = fix_weights(n->left) + fix_weights(n->right);
  return n->weight;
}

/// A path of `length` nodes hanging to the left: keys length..1 from the root.
template <typename Tree>
void build_left_path(Tree& tree, int length) {
  typename Tree::Node* p = nullptr;
  for (int k = length; k >= 1; --k) p = hang(tree, p, k, Direction::Left);
  fix_weights(tree.root());
}

/// Mixed operation stream: mostly inserts until target size is reached,
/// then balanced inserts and deletes. Some deletes target absent keys.
struct MixedOp {
  bool insert;
  Key key;
};

inline std::vector<MixedOp> mixed_ops(std::uint64_t count, std::uint64_t target, std::uint64_t universe,
                                      std::uint64_t seed, unsigned absent_pct = 10) {
  SplitMix64 rng(seed);
  std::vector<MixedOp> ops;
  std::vector<Key> present;
  for (std::uint64_t i = 0; i < count; ++i) {
    const bool grow = present.size() < target;
    const bool do_insert = present.empty() || rng.below(100) < (grow ? 75u : 50u);
    if (do_insert) {
      const Key k = static_cast<Key>(rng.below(universe));
      ops.push_back({true, k});
      present.push_back(k);
    } else if (rng.below(100) < absent_pct) {
      ops.push_back({false, static_cast<Key>(universe + rng.below(universe))});
    } else {
      const auto idx = rng.below(present.size());
      ops.push_back({false, present[idx]});
      present[idx] = present.back();
      present.pop_back();
    }
  }
  return ops;
}

}  // namespace wbtree::test

namespace wbtree::test {

/// Number of nodes on the longest root-to-leaf path.
template <typename Node>
std::size_t height(const Node* n) {
  std::size_t best = 0;
  std::vector<std::pair<const Node*, std::size_t>> stack;
  if (n) stack.emplace_back(n, 1);
  while (!stack.empty()) {
    auto [v, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (v->left) stack.emplace_back(v->left, d + 1);
    if (v->right) stack.emplace_back(v->right, d + 1);
  }
  return best;
}

/// Tree structure line of a dump.
inline std::string structure_of(const std::string& dump) { return dump.substr(dump.find('\n') + 1); }

}  // namespace wbtree::test
