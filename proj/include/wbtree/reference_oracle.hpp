#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wbtree/balance_params.hpp"

// Independent correctness oracles. Nothing here reads stored weights for
// size computations or calls into the balance predicates of BalanceParams.

namespace wbtree::oracle {

/// Obviously-correct multiset: a sorted vector.
template <typename Key>
class SortedMultisetOracle {
 public:
  void insert(const Key& key) { keys_.insert(std::upper_bound(keys_.begin(), keys_.end(), key), key); }

  bool erase(const Key& key) {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return false;
    keys_.erase(it);
    return true;
  }

  bool contains(const Key& key) const { return std::binary_search(keys_.begin(), keys_.end(), key); }
  const std::vector<Key>& inorder() const { return keys_; }
  std::size_t size() const { return keys_.size(); }

 private:
  std::vector<Key> keys_;
};

template <typename Tree, typename Key>
bool equivalence_check(const Tree& tree, const SortedMultisetOracle<Key>& oracle) {
  if (tree.size() != oracle.size()) return false;
  bool same = true;
  auto it = oracle.inorder().begin();
  tree.for_each_inorder([&](const auto* n) {
    if (!same) return;
    if (it == oracle.inorder().end() || n->key != *it) {
      same = false;
      return;
    }
    ++it;
  });
  return same && it == oracle.inorder().end();
}

struct AuditViolation {
  std::string kind;
  std::string key;
  std::string details;
};

using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact value of a finite double.
inline BigRational exact_rational(double v) {
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  // mant * 2^53 is an integer for any double.
  BigInt m(static_cast<std::int64_t>(std::ldexp(mant, 53)));
  exp -= 53;
  if (exp >= 0) return BigRational(m << exp);
  return BigRational(m, BigInt(1) << -exp);
}

inline BigRational exact_delta(const BalanceParams& p) {
  if (p.mode() == ArithmeticMode::Rational) {
    return BigRational(BigInt(p.delta_ratio().num), BigInt(p.delta_ratio().den));
  }
  return exact_rational(p.delta());
}

/// |L|·Δ >= |R| and |R|·Δ >= |L| in arbitrary precision.
inline bool exact_is_balanced(std::uint64_t left, std::uint64_t right, const BigRational& delta) {
  const BigRational l(left), r(right);
  return l * delta >= r && r * delta >= l;
}

namespace detail {

template <typename Node>
std::string key_string(const Node* n) {
  std::ostringstream os;
  os << n->key;
  return os.str();
}

/// Node counts of every subtree, computed by traversal only.
template <typename Node>
std::unordered_map<const Node*, std::uint64_t> subtree_sizes(const Node* root) {
  std::unordered_map<const Node*, std::uint64_t> sizes;
  std::vector<const Node*> order;
  std::vector<const Node*> stack;
  if (root) stack.push_back(root);
  while (!stack.empty()) {
    const Node* v = stack.back();
    stack.pop_back();
    order.push_back(v);
    if (v->left) stack.push_back(v->left);
    if (v->right) stack.push_back(v->right);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Node* v = *it;
    std::uint64_t s = 1;
    if (v->left) s += sizes.at(v->left);
    if (v->right) s += sizes.at(v->right);
    sizes[v] = s;
  }
  return sizes;
}

}  // namespace detail

/// Recomputes subtree sizes and checks stored weights (when the node type
/// has them), ordering, parent links and the size counter.
template <typename Tree>
std::vector<AuditViolation> audit_structure(const Tree& tree) {
  using Node = std::remove_pointer_t<decltype(tree.root())>;
  std::vector<AuditViolation> out;
  const Node* root = tree.root();
  const auto sizes = detail::subtree_sizes(root);

  if (root && root->parent) out.push_back({"parent", detail::key_string(root), "root has parent"});
  if (sizes.size() != tree.size()) {
    out.push_back({"size", "", "tree reports " + std::to_string(tree.size()) + ", counted " +
                                   std::to_string(sizes.size())});
  }

  for (const auto& [v, s] : sizes) {
    if constexpr (requires { v->weight; }) {
      if (v->weight != s + 1) {
        out.push_back({"weight", detail::key_string(v),
                       "stored " + std::to_string(v->weight) + ", actual " + std::to_string(s + 1)});
      }
    }
    if ((v->left && v->left->parent != v) || (v->right && v->right->parent != v)) {
      out.push_back({"parent", detail::key_string(v), "child does not point back"});
    }
  }

  std::vector<const Node*> stack;
  const Node* v = root;
  const Node* prev = nullptr;
  while (v || !stack.empty()) {
    while (v) {
      stack.push_back(v);
      v = v->left;
    }
    v = stack.back();
    stack.pop_back();
    if (prev && v->key < prev->key) out.push_back({"order", detail::key_string(v), "in-order decrease"});
    prev = v;
    v = v->right;
  }
  return out;
}

/// Nodes where the balance criterion fails, judged on recomputed sizes with
/// exact rational arithmetic.
template <typename Tree>
std::vector<AuditViolation> audit_balance(const Tree& tree, const BalanceParams& params) {
  using Node = std::remove_pointer_t<decltype(tree.root())>;
  std::vector<AuditViolation> out;
  const auto sizes = detail::subtree_sizes(static_cast<const Node*>(tree.root()));
  const BigRational delta = exact_delta(params);
  for (const auto& [v, s] : sizes) {
    const std::uint64_t l = (v->left ? sizes.at(v->left) : 0) + 1;
    const std::uint64_t r = (v->right ? sizes.at(v->right) : 0) + 1;
    if (!exact_is_balanced(l, r, delta)) {
      out.push_back({"balance", detail::key_string(v),
                     "|L|=" + std::to_string(l) + " |R|=" + std::to_string(r)});
    }
  }
  return out;
}

}  // namespace wbtree::oracle
