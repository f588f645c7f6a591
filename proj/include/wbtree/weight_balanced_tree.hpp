#pragma once

#include "wbtree/wbt_bottom_up.hpp"
#include "wbtree/wbt_core.hpp"
#include "wbtree/wbt_top_down.hpp"

namespace wbtree {

template <typename Key, typename Compare = std::less<Key>>
class BottomUpTree : public WbTree<Key, Compare> {
 public:
  using Base = WbTree<Key, Compare>;
  using typename Base::Node;
  using Base::Base;

  Node* insert(const Key& key) { return bottom_up::insert(*this, key); }
  bool erase(const Key& key) { return bottom_up::erase(*this, key); }
};

template <typename Key, typename Compare = std::less<Key>>
class TopDownTree : public WbTree<Key, Compare> {
 public:
  using Base = WbTree<Key, Compare>;
  using typename Base::Node;
  using Base::Base;

  Node* insert(const Key& key) { return top_down::insert(*this, key); }
  bool erase(const Key& key) { return top_down::erase(*this, key); }
};

}  // namespace wbtree
