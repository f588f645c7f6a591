#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wbtree/metrics.hpp"

namespace wbtree {

enum class Color : std::uint8_t { Red, Black };

template <typename Key>
struct RbNode {
  explicit RbNode(const Key& k) : key(k) {}

  Key key;
  RbNode* left = nullptr;
  RbNode* right = nullptr;
  RbNode* parent = nullptr;
  Color color = Color::Red;
};

/// Bottom-up red-black multiset (textbook insertion and deletion fixups),
/// used as the comparison baseline. Insertion descends left iff key <= node,
/// like the weight-balanced trees.
///
/// The nodes carry no weights. When a sink is attached, each rotation's
/// pivot weight is obtained by counting the pivot's subtree, so the rotated
/// weight totals are comparable with the weight-balanced trees.
template <typename Key, typename Compare = std::less<Key>>
class RbTree {
 public:
  using key_type = Key;
  using Node = RbNode<Key>;

  explicit RbTree(MetricsSink* sink = nullptr, Compare comp = Compare{})
      : sink_(sink), comp_(std::move(comp)) {}

  RbTree(const RbTree& other) : sink_(nullptr), comp_(other.comp_) {
    root_ = clone_subtree(other.root_, nullptr);
    size_ = other.size_;
  }

  RbTree& operator=(const RbTree& other) {
    if (this != &other) {
      RbTree copy(other);
      swap(copy);
    }
    return *this;
  }

  RbTree(RbTree&& other) noexcept
      : root_(std::exchange(other.root_, nullptr)),
        size_(std::exchange(other.size_, 0)),
        sink_(std::exchange(other.sink_, nullptr)),
        comp_(std::move(other.comp_)) {}

  RbTree& operator=(RbTree&& other) noexcept {
    if (this != &other) {
      clear();
      swap(other);
    }
    return *this;
  }

  ~RbTree() { clear(); }

  void swap(RbTree& other) noexcept {
    using std::swap;
    swap(root_, other.root_);
    swap(size_, other.size_);
    swap(sink_, other.sink_);
    swap(comp_, other.comp_);
  }

  Node* root() const noexcept { return root_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  MetricsSink* sink() const noexcept { return sink_; }
  void set_sink(MetricsSink* sink) noexcept { sink_ = sink; }

  void clear() noexcept {
    Node* n = root_;
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

  Node* insert(const Key& key) {
    Node* z = new Node(key);
    ++size_;
    Node* parent = nullptr;
    Node* v = root_;
    bool left = false;
    while (v) {
      touch();
      parent = v;
      left = !comp_(v->key, key);
      v = left ? v->left : v->right;
    }
    z->parent = parent;
    if (!parent) {
      root_ = z;
    } else if (left) {
      parent->left = z;
    } else {
      parent->right = z;
    }
    insert_fixup(z);
    return z;
  }

  bool erase(const Key& key) {
    Node* z = search(key);
    if (!z) return false;

    Node* x = nullptr;
    Node* x_parent = nullptr;
    Color removed_color = z->color;
    if (!z->left) {
      x = z->right;
      x_parent = z->parent;
      transplant(z, z->right);
    } else if (!z->right) {
      x = z->left;
      x_parent = z->parent;
      transplant(z, z->left);
    } else {
      Node* y = minimum(z->right);
      removed_color = y->color;
      x = y->right;
      if (y->parent == z) {
        x_parent = y;
      } else {
        x_parent = y->parent;
        transplant(y, y->right);
        y->right = z->right;
        y->right->parent = y;
      }
      transplant(z, y);
      y->left = z->left;
      y->left->parent = y;
      y->color = z->color;
    }
    delete z;
    --size_;
    if (removed_color == Color::Black) erase_fixup(x, x_parent);
    return true;
  }

  static Node* minimum(Node* v) noexcept {
    if (!v) return nullptr;
    while (v->left) v = v->left;
    return v;
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

  std::vector<Key> inorder() const {
    std::vector<Key> out;
    out.reserve(size_);
    for_each_inorder([&](const Node* n) { out.push_back(n->key); });
    return out;
  }

  /// Order, parent links, size, root colour, red-red edges and black
  /// heights. Empty result means a valid red-black tree.
  std::vector<std::string> validate() const {
    std::vector<std::string> report;
    if (root_ && root_->color != Color::Black) report.push_back("root is red");
    if (root_ && root_->parent) report.push_back("root has a parent");

    std::size_t count = 0;
    const Node* prev = nullptr;
    for_each_inorder([&](const Node* n) {
      ++count;
      std::ostringstream os;
      if (prev && comp_(n->key, prev->key)) {
        os << "order violated at key " << n->key;
        report.push_back(os.str());
      }
      prev = n;
      if ((n->left && n->left->parent != n) || (n->right && n->right->parent != n)) {
        os.str("");
        os << "parent link mismatch below key " << n->key;
        report.push_back(os.str());
      }
      if (n->color == Color::Red && (is_red(n->left) || is_red(n->right))) {
        os.str("");
        os << "red node " << n->key << " has a red child";
        report.push_back(os.str());
      }
    });
    if (count != size_) {
      report.push_back("size " + std::to_string(size_) + " but " + std::to_string(count) +
                       " nodes");
    }
    if (black_height(root_) < 0) report.push_back("unequal black heights");
    return report;
  }

  std::string dump() const {
    std::ostringstream os;
    bool first = true;
    for_each_inorder([&](const Node* n) {
      if (!first) os << ' ';
      first = false;
      os << n->key << ':' << (n->color == Color::Red ? 'R' : 'B');
    });
    os << '\n';
    dump_structure(os, root_);
    return os.str();
  }

  void touch() const noexcept {
    if (sink_) sink_->on_touch();
  }

 private:
  static bool is_red(const Node* n) noexcept { return n && n->color == Color::Red; }
  static bool is_black(const Node* n) noexcept { return !is_red(n); }

  /// Black height of the subtree, or -1 if it differs between paths.
  static long black_height(const Node* n) {
    if (!n) return 1;
    const long l = black_height(n->left);
    if (l < 0) return -1;
    const long r = black_height(n->right);
    if (r < 0 || r != l) return -1;
    return l + (n->color == Color::Black ? 1 : 0);
  }

  static std::uint64_t subtree_count(const Node* n) {
    std::uint64_t count = 0;
    std::vector<const Node*> stack;
    if (n) stack.push_back(n);
    while (!stack.empty()) {
      const Node* v = stack.back();
      stack.pop_back();
      ++count;
      if (v->left) stack.push_back(v->left);
      if (v->right) stack.push_back(v->right);
    }
    return count;
  }

  void record_rotation(const Node* pivot) {
    if (sink_ && sink_->enabled) sink_->on_single_rotation(subtree_count(pivot) + 1);
  }

  void replace_child(Node* parent, Node* old_child, Node* new_child) noexcept {
    if (!parent) {
      root_ = new_child;
    } else if (parent->left == old_child) {
      parent->left = new_child;
    } else {
      parent->right = new_child;
    }
  }

  void transplant(Node* u, Node* v) noexcept {
    replace_child(u->parent, u, v);
    if (v) v->parent = u->parent;
  }

  void rotate_left(Node* x) {
    record_rotation(x);
    Node* y = x->right;
    x->right = y->left;
    if (y->left) y->left->parent = x;
    y->parent = x->parent;
    replace_child(x->parent, x, y);
    y->left = x;
    x->parent = y;
  }

  void rotate_right(Node* x) {
    record_rotation(x);
    Node* y = x->left;
    x->left = y->right;
    if (y->right) y->right->parent = x;
    y->parent = x->parent;
    replace_child(x->parent, x, y);
    y->right = x;
    x->parent = y;
  }

  void insert_fixup(Node* z) {
    while (z != root_ && is_red(z->parent)) {
      Node* p = z->parent;
      Node* g = p->parent;
      if (p == g->left) {
        Node* uncle = g->right;
        if (is_red(uncle)) {
          p->color = Color::Black;
          uncle->color = Color::Black;
          g->color = Color::Red;
          z = g;
        } else {
          if (z == p->right) {
            z = p;
            rotate_left(z);
            p = z->parent;
          }
          p->color = Color::Black;
          g->color = Color::Red;
          rotate_right(g);
        }
      } else {
        Node* uncle = g->left;
        if (is_red(uncle)) {
          p->color = Color::Black;
          uncle->color = Color::Black;
          g->color = Color::Red;
          z = g;
        } else {
          if (z == p->left) {
            z = p;
            rotate_right(z);
            p = z->parent;
          }
          p->color = Color::Black;
          g->color = Color::Red;
          rotate_left(g);
        }
      }
    }
    root_->color = Color::Black;
  }

  // x may be null; x_parent is its parent in that case.
  void erase_fixup(Node* x, Node* x_parent) {
    while (x != root_ && is_black(x)) {
      if (x == x_parent->left) {
        Node* w = x_parent->right;
        if (is_red(w)) {
          w->color = Color::Black;
          x_parent->color = Color::Red;
          rotate_left(x_parent);
          w = x_parent->right;
        }
        if (is_black(w->left) && is_black(w->right)) {
          w->color = Color::Red;
          x = x_parent;
          x_parent = x->parent;
        } else {
          if (is_black(w->right)) {
            w->left->color = Color::Black;
            w->color = Color::Red;
            rotate_right(w);
            w = x_parent->right;
          }
          w->color = x_parent->color;
          x_parent->color = Color::Black;
          w->right->color = Color::Black;
          rotate_left(x_parent);
          x = root_;
          break;
        }
      } else {
        Node* w = x_parent->left;
        if (is_red(w)) {
          w->color = Color::Black;
          x_parent->color = Color::Red;
          rotate_right(x_parent);
          w = x_parent->left;
        }
        if (is_black(w->right) && is_black(w->left)) {
          w->color = Color::Red;
          x = x_parent;
          x_parent = x->parent;
        } else {
          if (is_black(w->left)) {
            w->right->color = Color::Black;
            w->color = Color::Red;
            rotate_left(w);
            w = x_parent->left;
          }
          w->color = x_parent->color;
          x_parent->color = Color::Black;
          w->left->color = Color::Black;
          rotate_right(x_parent);
          x = root_;
          break;
        }
      }
    }
    if (x) x->color = Color::Black;
  }

  static Node* clone_subtree(const Node* src, Node* parent) {
    if (!src) return nullptr;
    Node* out = new Node(src->key);
    out->color = src->color;
    out->parent = parent;
    std::vector<std::pair<const Node*, Node*>> stack{{src, out}};
    while (!stack.empty()) {
      auto [s, d] = stack.back();
      stack.pop_back();
      for (int side = 0; side < 2; ++side) {
        const Node* sc = side == 0 ? s->left : s->right;
        if (!sc) continue;
        Node* dc = new Node(sc->key);
        dc->color = sc->color;
        dc->parent = d;
        (side == 0 ? d->left : d->right) = dc;
        stack.emplace_back(sc, dc);
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
  MetricsSink* sink_ = nullptr;
  Compare comp_;
};

}  // namespace wbtree
