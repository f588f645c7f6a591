#pragma once

#include <cassert>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wbtree/balance_params.hpp"
#include "wbtree/metrics.hpp"

namespace wbtree {

enum class Direction { Left, Right };

template <typename Key>
struct WbNode {
  explicit WbNode(const Key& k) : key(k) {}

  Key key;
  WbNode* left = nullptr;
  WbNode* right = nullptr;
  WbNode* parent = nullptr;
  Weight weight = 2;
};

enum class StructureViolationKind { OrderViolation, WeightMismatch, ParentMismatch, SizeMismatch };

const char* to_string(StructureViolationKind kind);

template <typename Key>
struct StructureViolation {
  StructureViolationKind kind;
  Key key{};  // offending node; default for tree-level violations
  std::string details;
};

template <typename Key>
using ValidationReport = std::vector<StructureViolation<Key>>;

/// Shared representation for both weight-balanced schemes: node ownership,
/// weight-maintaining rotations, navigation and structural validation.
///
/// Ordering is non-strict: keys in L(v) <= key(v) <= keys in R(v). Descent
/// for insertion goes left iff the new key is <= the node key, so
/// duplicates are inserted to the left; rotations may later move an equal
/// key into a right subtree.
///
/// The low-level mutators (set_root, attach, splice, transplant and the
/// rotations) are public so the rebalancing algorithms can live in their own
/// headers. They do not maintain weights beyond what each one documents.
template <typename Key, typename Compare = std::less<Key>>
class WbTree {
 public:
  using key_type = Key;
  using Node = WbNode<Key>;

  explicit WbTree(BalanceParams params, MetricsSink* sink = nullptr, Compare comp = Compare{})
      : params_(params), sink_(sink), comp_(std::move(comp)) {}

  /// Deep copy with identical shape. The copy starts without a sink.
  WbTree(const WbTree& other) : params_(other.params_), sink_(nullptr), comp_(other.comp_) {
    root_ = clone_subtree(other.root_, nullptr);
    size_ = other.size_;
  }

  WbTree& operator=(const WbTree& other) {
    if (this != &other) {
      WbTree copy(other);
      swap(copy);
    }
    return *this;
  }

  WbTree(WbTree&& other) noexcept
      : root_(std::exchange(other.root_, nullptr)),
        size_(std::exchange(other.size_, 0)),
        params_(other.params_),
        sink_(std::exchange(other.sink_, nullptr)),
        comp_(std::move(other.comp_)) {}

  WbTree& operator=(WbTree&& other) noexcept {
    if (this != &other) {
      clear();
      swap(other);
    }
    return *this;
  }

  ~WbTree() { clear(); }

  void swap(WbTree& other) noexcept {
    using std::swap;
    swap(root_, other.root_);
    swap(size_, other.size_);
    swap(params_, other.params_);
    swap(sink_, other.sink_);
    swap(comp_, other.comp_);
  }

  Node* root() const noexcept { return root_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  const BalanceParams& params() const noexcept { return params_; }
  MetricsSink* sink() const noexcept { return sink_; }
  void set_sink(MetricsSink* sink) noexcept { sink_ = sink; }

  void clear() noexcept {
    Node* n = root_;
    // Iterative teardown: rotate left children up until a node has none.
    while (n) {
      if (n->left) {
        Node* l = n->left;
        n->left = l->right;
        l->right = n;
        n = l;
      } else {
        Node* next = n->right;
        delete n;
        n = next;
      }
    }
    root_ = nullptr;
    size_ = 0;
  }

  // --- comparisons -------------------------------------------------------

  /// key <= v, i.e. the insertion descent goes left.
  bool goes_left(const Key& key, const Node* v) const { return !comp_(v->key, key); }
  bool less(const Key& a, const Key& b) const { return comp_(a, b); }
  bool equal(const Key& a, const Key& b) const { return !comp_(a, b) && !comp_(b, a); }

  // --- navigation --------------------------------------------------------

  /// First node holding key on the root-to-leaf search path.
  Node* search(const Key& key) const {
    Node* v = root_;
    while (v) {
      touch();
      if (comp_(key, v->key)) {
        v = v->left;
      } else if (comp_(v->key, key)) {
        v = v->right;
      } else {
        return v;
      }
    }
    return nullptr;
  }

  static Node* minimum(Node* v) noexcept {
    if (!v) return nullptr;
    while (v->left) v = v->left;
    return v;
  }

  static Node* maximum(Node* v) noexcept {
    if (!v) return nullptr;
    while (v->right) v = v->right;
    return v;
  }

  /// Largest node in L(v), the replacement used for two-child deletions.
  static Node* predecessor_in_subtree(Node* v) noexcept { return v ? maximum(v->left) : nullptr; }

  std::vector<Key> inorder() const {
    std::vector<Key> out;
    out.reserve(size_);
    for_each_inorder([&](const Node* n) { out.push_back(n->key); });
    return out;
  }

  template <typename Fn>
  void for_each_inorder(Fn&& fn) const {
    std::vector<const Node*> stack;
    const Node* v = root_;
    while (v || !stack.empty()) {
      while (v) {
        stack.push_back(v);
        v = v->left;
      }
      v = stack.back();
      stack.pop_back();
      fn(v);
      v = v->right;
    }
  }

  // --- low-level mutation --------------------------------------------------

  Node* make_node(const Key& key) const { return new Node(key); }
  void destroy_node(Node* n) const noexcept { delete n; }

  void touch() const noexcept {
    if (sink_) sink_->on_touch();
  }

  void set_root(Node* n) noexcept {
    root_ = n;
    if (n) n->parent = nullptr;
  }

  void note_inserted() noexcept { ++size_; }
  void note_erased() noexcept { --size_; }

  /// Points parent's link that referred to old_child at new_child (or the
  /// root when parent is null). Does not touch new_child->parent.
  void replace_child(Node* parent, Node* old_child, Node* new_child) noexcept {
    if (!parent) {
      root_ = new_child;
    } else if (parent->left == old_child) {
      parent->left = new_child;
    } else {
      assert(parent->right == old_child);
      parent->right = new_child;
    }
  }

  static void attach(Node* parent, Node* child, Direction side) noexcept {
    (side == Direction::Left ? parent->left : parent->right) = child;
    child->parent = parent;
  }

  /// Removes a node with at most one child by linking that child to its
  /// parent. Weights are left alone.
  void splice(Node* x) noexcept {
    assert(!(x->left && x->right));
    Node* c = x->left ? x->left : x->right;
    if (c) c->parent = x->parent;
    replace_child(x->parent, x, c);
  }

  /// Puts y where z is: y takes z's parent, children and weight.
  void transplant(Node* z, Node* y) noexcept {
    y->left = z->left;
    if (y->left) y->left->parent = y;
    y->right = z->right;
    if (y->right) y->right->parent = y;
    y->parent = z->parent;
    replace_child(z->parent, z, y);
    y->weight = z->weight;
  }

  /// Single rotation at v. Left lifts R(v). The risen node takes v's
  /// current weight; v is recomputed from its new children. One rotation
  /// with v's pre-rotation weight is reported to the sink.
  Node* rotate_single(Node* v, Direction dir) {
    if (sink_) sink_->on_single_rotation(v->weight);
    return rotate_raw(v, dir);
  }

  /// Double rotation at v. Left: right around R(v), then left around v,
  /// lifting L(R(v)). Reported as one double rotation with both pivot weights.
  Node* rotate_double(Node* v, Direction dir) {
    Node* child = dir == Direction::Left ? v->right : v->left;
    assert(child);
    const Weight inner_pivot = child->weight;
    const Weight outer_pivot = v->weight;
    if (sink_) sink_->on_double_rotation(inner_pivot, outer_pivot);
    rotate_raw(child, dir == Direction::Left ? Direction::Right : Direction::Left);
    return rotate_raw(v, dir);
  }

  // --- diagnostics ---------------------------------------------------------

  /// Checks ordering, the weight identity, parent links and the size
  /// counter. Violations are returned, never thrown.
  ValidationReport<Key> validate() const {
    ValidationReport<Key> report;
    if (root_ && root_->parent) {
      report.push_back({StructureViolationKind::ParentMismatch, root_->key, "root has a parent"});
    }

    std::size_t count = 0;
    const Node* prev = nullptr;
    for_each_inorder([&](const Node* n) {
      ++count;
      if (prev && comp_(n->key, prev->key)) {
        report.push_back({StructureViolationKind::OrderViolation, n->key,
                          "in-order sequence decreases"});
      }
      prev = n;
      const Weight expect = weight_of(n->left) + weight_of(n->right);
      if (n->weight != expect) {
        std::ostringstream os;
        os << "stored weight " << n->weight << ", children sum to " << expect;
        report.push_back({StructureViolationKind::WeightMismatch, n->key, os.str()});
      }
      if ((n->left && n->left->parent != n) || (n->right && n->right->parent != n)) {
        report.push_back({StructureViolationKind::ParentMismatch, n->key,
                          "child does not point back to node"});
      }
    });

    if (count != size_ || (root_ && root_->weight != size_ + 1)) {
      std::ostringstream os;
      os << "size " << size_ << ", nodes " << count << ", root weight " << weight_of(root_);
      report.push_back({StructureViolationKind::SizeMismatch, Key{}, os.str()});
    }
    return report;
  }

  /// In-order `key:weight` pairs on the first line, `(key L R)` structure
  /// with `.` for empty subtrees on the second.
  std::string dump() const {
    std::ostringstream os;
    bool first = true;
    for_each_inorder([&](const Node* n) {
      if (!first) os << ' ';
      first = false;
      os << n->key << ':' << n->weight;
    });
    os << '\n';
    dump_structure(os, root_);
    return os.str();
  }

 private:
  Node* rotate_raw(Node* v, Direction dir) noexcept {
    Node* up;
    if (dir == Direction::Left) {
      up = v->right;
      assert(up);
      v->right = up->left;
      if (up->left) up->left->parent = v;
      up->left = v;
    } else {
      up = v->left;
      assert(up);
      v->left = up->right;
      if (up->right) up->right->parent = v;
      up->right = v;
    }
    up->parent = v->parent;
    replace_child(v->parent, v, up);
    v->parent = up;
    up->weight = v->weight;
    v->weight = weight_of(v->left) + weight_of(v->right);
    return up;
  }

  static Node* clone_subtree(const Node* src, Node* parent) {
    if (!src) return nullptr;
    // Explicit stack; keeps deep (unbalanced) trees safe to copy.
    Node* out = new Node(src->key);
    out->weight = src->weight;
    out->parent = parent;
    std::vector<std::pair<const Node*, Node*>> stack{{src, out}};
    while (!stack.empty()) {
      auto [s, d] = stack.back();
      stack.pop_back();
      if (s->left) {
        d->left = new Node(s->left->key);
        d->left->weight = s->left->weight;
        d->left->parent = d;
        stack.emplace_back(s->left, d->left);
      }
      if (s->right) {
        d->right = new Node(s->right->key);
        d->right->weight = s->right->weight;
        d->right->parent = d;
        stack.emplace_back(s->right, d->right);
      }
    }
    return out;
  }

  static void dump_structure(std::ostream& os, const Node* n) {
    if (!n) {
      os << '.';
      return;
    }
    os << '(' << n->key << ' ';
    dump_structure(os, n->left);
    os << ' ';
    dump_structure(os, n->right);
    os << ')';
  }

  Node* root_ = nullptr;
  std::size_t size_ = 0;
  BalanceParams params_;
  MetricsSink* sink_ = nullptr;
  Compare comp_;
};

inline const char* to_string(StructureViolationKind kind) {
  switch (kind) {
    case StructureViolationKind::OrderViolation: return "OrderViolation";
    case StructureViolationKind::WeightMismatch: return "WeightMismatch";
    case StructureViolationKind::ParentMismatch: return "ParentMismatch";
    case StructureViolationKind::SizeMismatch: return "SizeMismatch";
  }
  return "?";
}

}  // namespace wbtree
