#pragma once

#include "wbtree/wbt_core.hpp"

// Classic weight-balanced insertion and deletion: an unbalanced BST
// modification followed by a rebalancing walk from the modification point
// back up to the root.

namespace wbtree::bottom_up {

/// Restores balance at v with at most one single or double rotation, using
/// the stored (already final) weights of v's children. Returns the node now
/// occupying v's position.
template <typename Tree>
typename Tree::Node* rebalance_at(Tree& tree, typename Tree::Node* v) {
  const BalanceParams& p = tree.params();
  switch (overhang_side(weight_of(v->left), weight_of(v->right), p)) {
    case Side::Right: {
      auto* heavy = v->right;
      if (!single_rotation_suffices(weight_of(heavy->left), weight_of(heavy->right), p)) {
        return tree.rotate_double(v, Direction::Left);
      }
      return tree.rotate_single(v, Direction::Left);
    }
    case Side::Left: {
      auto* heavy = v->left;
      if (!single_rotation_suffices(weight_of(heavy->right), weight_of(heavy->left), p)) {
        return tree.rotate_double(v, Direction::Right);
      }
      return tree.rotate_single(v, Direction::Right);
    }
    case Side::None:
      break;
  }
  return v;
}

/// Walks from start to the root, applying adjust to each node's weight and
/// then rebalancing it. Every ancestor is checked.
template <typename Tree, typename Adjust>
void repair_upwards(Tree& tree, typename Tree::Node* start, Adjust adjust) {
  for (auto* u = start; u;) {
    tree.touch();
    adjust(u);
    u = rebalance_at(tree, u);
    u = u->parent;
  }
}

template <typename Tree>
typename Tree::Node* insert(Tree& tree, const typename Tree::key_type& key) {
  using Node = typename Tree::Node;
  Node* n = tree.make_node(key);
  tree.note_inserted();
  if (!tree.root()) {
    tree.set_root(n);
    return n;
  }

  Node* v = tree.root();
  for (;;) {
    tree.touch();
    ++v->weight;
    if (tree.goes_left(key, v)) {
      if (!v->left) {
        Tree::attach(v, n, Direction::Left);
        break;
      }
      v = v->left;
    } else {
      if (!v->right) {
        Tree::attach(v, n, Direction::Right);
        break;
      }
      v = v->right;
    }
  }

  repair_upwards(tree, v, [](Node*) {});
  return n;
}

/// Removes one node holding key. Two-child nodes are replaced by the
/// largest node of their left subtree (nodes are relinked, keys never move).
template <typename Tree>
bool erase(Tree& tree, const typename Tree::key_type& key) {
  using Node = typename Tree::Node;
  Node* z = tree.search(key);
  if (!z) return false;

  Node* start;
  if (z->left && z->right) {
    Node* y = Tree::maximum(z->left);
    start = y->parent == z ? y : y->parent;
    tree.splice(y);
    tree.transplant(z, y);
  } else {
    start = z->parent;
    tree.splice(z);
  }
  tree.destroy_node(z);
  tree.note_erased();

  repair_upwards(tree, start, [](Node* u) { --u->weight; });
  return true;
}

}  // namespace wbtree::bottom_up
