#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "wbtree/metrics.hpp"
#include "wbtree/weight_balanced_tree.hpp"

using namespace wbtree;
using namespace wbtree::test;

namespace {

using Tree = WbTree<Key>;

// (2 (1 . .) (4 (3 . .) (5 . .))) with correct weights.
void build_fig(Tree& t) {
  auto* v = hang(t, nullptr, 2, Direction::Left);
  hang(t, v, 1, Direction::Left);
  auto* r = hang(t, v, 4, Direction::Right);
  hang(t, r, 3, Direction::Left);
  hang(t, r, 5, Direction::Right);
  fix_weights(t.root());
}

std::string structure(const Tree& t) {
  const std::string d = t.dump();
  return d.substr(d.find('\n') + 1);
}

}  // namespace

TEST_SUITE("wbt_core") {
  TEST_CASE("single left rotation recomputes the two touched weights") {
    Tree t(integral_params());
    auto* v = hang(t, nullptr, 1, Direction::Left);
    auto* r = hang(t, v, 2, Direction::Right);
    hang(t, r, 3, Direction::Right);
    fix_weights(t.root());
    REQUIRE(v->weight == 4);

    MetricsSink sink;
    t.set_sink(&sink);
    auto* up = t.rotate_single(v, Direction::Left);
    CHECK(up == r);
    CHECK(t.root() == r);
    CHECK(r->weight == 4);
    CHECK(v->weight == 2);
    CHECK(r->parent == nullptr);
    CHECK(v->parent == r);
    CHECK(sink.rotation_count == 1);
    CHECK(sink.rotated_weight_total == 4);
    CHECK(t.validate().empty());
    CHECK(t.inorder() == std::vector<Key>{1, 2, 3});
  }

  TEST_CASE("opposite rotations restore the shape") {
    Tree t(integral_params());
    build_fig(t);
    const std::string before = t.dump();
    auto* up = t.rotate_single(t.root(), Direction::Left);
    CHECK(up->key == 4);
    t.rotate_single(up, Direction::Right);
    CHECK(t.dump() == before);
    CHECK(t.validate().empty());
  }

  TEST_CASE("rotation below the root relinks the parent") {
    Tree t(integral_params());
    build_fig(t);
    auto* r = t.root()->right;
    auto* up = t.rotate_single(r, Direction::Right);
    CHECK(up->key == 3);
    CHECK(t.root()->right == up);
    CHECK(up->parent == t.root());
    CHECK(t.validate().empty());
    CHECK(t.inorder() == std::vector<Key>{1, 2, 3, 4, 5});
  }

  TEST_CASE("double rotation lifts the inner grandchild") {
    Tree t(integral_params());
    build_fig(t);
    auto* v = t.root();
    auto* r = v->right;
    auto* rl = r->left;
    MetricsSink sink;
    t.set_sink(&sink);
    const Weight total = v->weight;
    auto* up = t.rotate_double(v, Direction::Left);
    CHECK(up == rl);
    CHECK(up->left == v);
    CHECK(up->right == r);
    // rl was a leaf: its empty children are handed to v and r.
    CHECK(v->right == nullptr);
    CHECK(r->left == nullptr);
    CHECK(up->weight == total);
    CHECK(t.validate().empty());
    CHECK(sink.rotation_count == 2);
    CHECK(sink.rotated_weight_total == 4 + 6);
    CHECK(structure(t) == "(3 (2 (1 . .) .) (4 . (5 . .)))");
  }

  TEST_CASE("double rotation can be counted as one") {
    Tree t(integral_params());
    build_fig(t);
    MetricsSink sink;
    sink.double_counts_as = 1;
    t.set_sink(&sink);
    t.rotate_double(t.root(), Direction::Left);
    CHECK(sink.rotation_count == 1);
    CHECK(sink.rotated_weight_total == 10);
  }

  TEST_CASE("disabled sink records nothing") {
    Tree t(integral_params());
    build_fig(t);
    MetricsSink sink;
    sink.enabled = false;
    t.set_sink(&sink);
    t.rotate_double(t.root(), Direction::Left);
    t.search(3);
    CHECK(sink.rotation_count == 0);
    CHECK(sink.rotated_weight_total == 0);
    CHECK(sink.touch_count == 0);
  }

  TEST_CASE("validate reports the expected violations") {
    Tree empty(integral_params());
    CHECK(empty.validate().empty());

    Tree t(integral_params());
    auto* v = hang(t, nullptr, 2, Direction::Left);
    hang(t, v, 1, Direction::Right);
    fix_weights(t.root());
    v->weight = 5;
    const auto report = t.validate();
    const auto mismatches = std::count_if(report.begin(), report.end(), [](const auto& x) {
      return x.kind == StructureViolationKind::WeightMismatch;
    });
    CHECK(mismatches == 1);
    CHECK(std::any_of(report.begin(), report.end(),
                      [](const auto& x) { return x.kind == StructureViolationKind::OrderViolation; }));
  }

  TEST_CASE("validate flags broken parent links and size") {
    Tree t(integral_params());
    build_fig(t);
    t.root()->left->parent = nullptr;
    auto report = t.validate();
    CHECK(std::any_of(report.begin(), report.end(),
                      [](const auto& x) { return x.kind == StructureViolationKind::ParentMismatch; }));
    t.root()->left->parent = t.root();
    t.note_inserted();
    report = t.validate();
    CHECK(std::any_of(report.begin(), report.end(),
                      [](const auto& x) { return x.kind == StructureViolationKind::SizeMismatch; }));
    t.note_erased();
    CHECK(t.validate().empty());
  }

  TEST_CASE("search and navigation") {
    BottomUpTree<Key> t(integral_params());
    CHECK(t.search(5) == nullptr);
    t.insert(5);
    t.insert(5);
    auto* hit = t.search(5);
    REQUIRE(hit != nullptr);
    CHECK(hit->key == 5);
    CHECK(t.search(6) == nullptr);

    Tree f(integral_params());
    build_fig(f);
    CHECK(Tree::minimum(f.root())->key == 1);
    CHECK(Tree::maximum(f.root())->key == 5);
    CHECK(Tree::predecessor_in_subtree(f.root()->right)->key == 3);
    CHECK(Tree::predecessor_in_subtree(f.root())->key == 1);
    CHECK(Tree::maximum(f.root()->left)->key == 1);
  }

  TEST_CASE("copies are deep and independent") {
    BottomUpTree<Key> t(integral_params());
    for (Key k = 0; k < 100; ++k) t.insert(k);
    BottomUpTree<Key> c(t);
    CHECK(c.dump() == t.dump());
    CHECK(c.root() != t.root());
    c.erase(50);
    CHECK(t.size() == 100);
    CHECK(c.size() == 99);
    CHECK(t.validate().empty());
    CHECK(c.validate().empty());

    BottomUpTree<Key> m(std::move(c));
    CHECK(m.size() == 99);
    CHECK(m.validate().empty());
  }

  TEST_CASE("dump format") {
    Tree t(integral_params());
    build_fig(t);
    CHECK(t.dump() == "1:2 2:6 3:2 4:4 5:2\n(2 (1 . .) (4 (3 . .) (5 . .)))");
    Tree empty(integral_params());
    CHECK(empty.dump() == "\n.");
  }

  TEST_CASE("root weight tracks inserts minus deletes") {
    TopDownTree<Key> t(top_down_params());
    SplitMix64 rng(5);
    std::int64_t live = 0;
    for (int i = 0; i < 2000; ++i) {
      if (live > 0 && rng.below(3) == 0) {
        live -= t.erase(static_cast<Key>(rng.below(500))) ? 1 : 0;
      } else {
        t.insert(static_cast<Key>(rng.below(500)));
        ++live;
      }
      CHECK(weight_of(t.root()) == static_cast<Weight>(live) + 1);
    }
  }
}
