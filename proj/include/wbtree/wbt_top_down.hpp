#pragma once

#include "wbtree/wbt_core.hpp"

// Top-down weight-balanced insertion and deletion. Rebalancing happens on
// the single descent: before stepping below a node, the node is rotated as
// if the pending modification had already happened in the subtree we are
// about to enter.
//
// Weight bookkeeping during a descent: the current node and all of its
// ancestors already carry their post-operation weight; every other node
// carries its actual weight. A rotation hands the current node's weight to
// the risen node and recomputes the nodes that moved down from their
// (untouched) children, so the invariant survives rotations and the descent
// simply adjusts each node again when it visits it.

namespace wbtree::top_down {

template <typename Node>
struct InsertionRepair {
  Node* subtree_root;  // node now at the position the repair was called on
  Node* inserted;      // non-null if the repair had to link the new node
};

/// Repair step for inserting node n somewhere below v. v's own weight has
/// already been incremented; its children's weights have not, hence the +1
/// terms.
///
/// A rotation may need a node that does not exist yet: the heavy child
/// itself (single rotation, only possible for Delta < 2) or the heavy
/// child's inner child (double rotation). In both cases that empty slot is
/// exactly where n belongs, so n is linked there first and the rotation is
/// applied around it; the insertion is then complete.
template <typename Tree>
InsertionRepair<typename Tree::Node> repair_during_insertion(Tree& tree, typename Tree::Node* n,
                                                             typename Tree::Node* v) {
  using Node = typename Tree::Node;
  const BalanceParams& p = tree.params();
  const bool to_left = tree.goes_left(n->key, v);
  const Direction heavy_side = to_left ? Direction::Left : Direction::Right;
  const Direction rotate_dir = to_left ? Direction::Right : Direction::Left;

  Node* heavy = to_left ? v->left : v->right;
  Node* light = to_left ? v->right : v->left;
  if (!p.exceeds_delta(weight_of(heavy) + 1, weight_of(light))) return {v, nullptr};

  if (!heavy) {
    Tree::attach(v, n, heavy_side);
    return {tree.rotate_single(v, rotate_dir), n};
  }

  // Outer grandchild: same side as heavy is of v. Inner: the other one.
  Node* outer = to_left ? heavy->left : heavy->right;
  Node* inner = to_left ? heavy->right : heavy->left;
  const bool into_outer = tree.goes_left(n->key, heavy) == to_left;
  const bool double_rotation =
      into_outer ? p.exceeds_gamma(weight_of(inner), weight_of(outer) + 1)
                 : p.exceeds_gamma(weight_of(inner) + 1, weight_of(outer));

  if (!double_rotation) return {tree.rotate_single(v, rotate_dir), nullptr};

  if (!inner) {
    assert(!into_outer);
    ++heavy->weight;
    Tree::attach(heavy, n, to_left ? Direction::Right : Direction::Left);
    return {tree.rotate_double(v, rotate_dir), n};
  }
  return {tree.rotate_double(v, rotate_dir), nullptr};
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
  tree.touch();
  ++v->weight;
  for (;;) {
    auto [sub, inserted] = repair_during_insertion(tree, n, v);
    if (inserted) break;
    // After a rotation, continue from whatever node now holds v's position.
    v = sub;
    const Direction side = tree.goes_left(key, v) ? Direction::Left : Direction::Right;
    Node* next = side == Direction::Left ? v->left : v->right;
    if (!next) {
      Tree::attach(v, n, side);
      break;
    }
    v = next;
    tree.touch();
    ++v->weight;
  }
  return n;
}

/// Repair step for removing a node from v's subtree on side `from`. v's
/// weight is already decremented, the child on `from` is not (hence -1).
/// Only the opposite side can become too heavy, and its grandchildren are
/// unaffected by the removal, so the Gamma test uses their stored weights.
template <typename Tree>
typename Tree::Node* repair_during_deletion(Tree& tree, typename Tree::Node* v, Direction from) {
  using Node = typename Tree::Node;
  const BalanceParams& p = tree.params();
  Node* shrinking = from == Direction::Left ? v->left : v->right;
  Node* other = from == Direction::Left ? v->right : v->left;
  assert(shrinking);
  if (!p.exceeds_delta(weight_of(other), shrinking->weight - 1)) return v;

  Node* inner = from == Direction::Left ? other->left : other->right;
  Node* outer = from == Direction::Left ? other->right : other->left;
  if (needs_double_rotation(weight_of(inner), weight_of(outer), p)) {
    return tree.rotate_double(v, from);
  }
  return tree.rotate_single(v, from);
}

namespace detail {

template <typename Node>
Node* child(Node* v, Direction d) {
  return d == Direction::Left ? v->left : v->right;
}

/// Undoes the decrements of an aborted deletion descent.
template <typename Node>
void restore_weights(Node* from) {
  for (Node* x = from; x; x = x->parent) ++x->weight;
}

/// z has been reached and it, together with its ancestors, is decremented.
template <typename Tree>
void remove_found(Tree& tree, typename Tree::Node* z) {
  using Node = typename Tree::Node;

  // The in-order predecessor will leave L(z). A left rotation here moves z
  // down to the left child of the risen node; z then needs visiting again.
  while (z->left && z->right) {
    Node* risen = repair_during_deletion(tree, z, Direction::Left);
    if (risen == z) break;
    tree.touch();
    --z->weight;
  }

  if (!(z->left && z->right)) {
    tree.splice(z);
  } else {
    Node* u = z->left;
    tree.touch();
    --u->weight;
    while (u->right) {
      // Whatever rotation happens, the maximum stays in the right subtree
      // of the node now at u's position.
      Node* here = repair_during_deletion(tree, u, Direction::Right);
      u = here->right;
      tree.touch();
      --u->weight;
    }
    tree.splice(u);
    tree.transplant(z, u);
  }
  tree.destroy_node(z);
  tree.note_erased();
}

}  // namespace detail

/// Removes one node holding key in a single descent. When key is absent the
/// descent ends at an empty slot and a second pass up the parent chain
/// restores the weights; rotations already performed stay (they preserve
/// order and weights).
template <typename Tree>
bool erase(Tree& tree, const typename Tree::key_type& key) {
  using Node = typename Tree::Node;
  Node* u = tree.root();
  if (!u) return false;
  tree.touch();
  --u->weight;

  for (;;) {
    if (tree.equal(key, u->key)) break;
    Direction d = tree.less(key, u->key) ? Direction::Left : Direction::Right;
    if (!detail::child(u, d)) {
      detail::restore_weights(u);
      return false;
    }
    Node* here = repair_during_deletion(tree, u, d);
    if (here != u) {
      if (tree.equal(key, here->key)) {
        u = here;
        break;
      }
      d = tree.less(key, here->key) ? Direction::Left : Direction::Right;
      if (!detail::child(here, d)) {
        detail::restore_weights(here);
        return false;
      }
    }
    u = detail::child(here, d);
    tree.touch();
    --u->weight;
  }

  detail::remove_found(tree, u);
  return true;
}

}  // namespace wbtree::top_down
