#ifndef ALPHAHASH_PMAP_HPP
#define ALPHAHASH_PMAP_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

#include "alphahash/expr.hpp"

namespace alphahash {

// Node allocations across all PMap instantiations; lets tests watch memory
// growth when many map versions are retained.
inline std::atomic<std::uint64_t> pmap_alloc_count{0};

// Immutable weight-balanced map from Name to V with path copying: every
// update returns a new map sharing all untouched nodes with the old one.
// Same balance scheme as the classic Adams trees (delta 3, ratio 2).
// Lookup/alter/remove are O(log n); size is O(1).
template <class V>
class PMap {
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Name key;
    V val;
    std::uint64_t count;
    NodePtr left;
    NodePtr right;
  };

  static constexpr std::uint64_t kDelta = 3;
  static constexpr std::uint64_t kRatio = 2;

public:
  PMap() = default;

  std::uint64_t size() const { return count(root_); }
  bool empty() const { return !root_; }

  const V* find(Name k) const {
    const Node* n = root_.get();
    while (n) {
      if (k < n->key) n = n->left.get();
      else if (n->key < k) n = n->right.get();
      else return &n->val;
    }
    return nullptr;
  }

  // Binds k to f(old) where old is nullptr when k is absent.
  template <class F>
  PMap alter(Name k, F&& f) const {
    return PMap(alter_rec(root_, k, f));
  }

  PMap insert(Name k, V v) const {
    return alter(k, [&v](const V*) { return std::move(v); });
  }

  // Removes k if present. Returns the old value, or nullopt (and an
  // unchanged map, sharing the same root) when absent.
  std::pair<PMap, std::optional<V>> remove(Name k) const {
    const V* p = find(k);
    if (!p) return {*this, std::nullopt};
    V old = *p;
    return {PMap(remove_rec(root_, k)), std::move(old)};
  }

  // In-order traversal: f(Name, const V&).
  template <class F>
  void for_each(F&& f) const {
    walk(root_.get(), f);
  }

  // The unique entry of a singleton map.
  std::pair<Name, V> only_entry() const {
    if (size() != 1) throw std::logic_error("only_entry: map is not a singleton");
    return {root_->key, root_->val};
  }

  bool same_root(const PMap& other) const { return root_ == other.root_; }

  // Test hook: checks the weight-balance and ordering invariants.
  bool well_formed() const { return check(root_.get(), nullptr, nullptr); }

private:
  explicit PMap(NodePtr root) : root_(std::move(root)) {}

  static std::uint64_t count(const NodePtr& n) { return n ? n->count : 0; }

  static NodePtr make(Name k, V v, NodePtr l, NodePtr r) {
    pmap_alloc_count.fetch_add(1, std::memory_order_relaxed);
    std::uint64_t c = 1 + count(l) + count(r);
    return std::make_shared<const Node>(Node{k, std::move(v), c, std::move(l), std::move(r)});
  }

  static NodePtr balance(Name k, V v, NodePtr l, NodePtr r) {
    std::uint64_t ln = count(l), rn = count(r);
    if (ln + rn <= 1) return make(k, std::move(v), std::move(l), std::move(r));
    if (rn > kDelta * ln) {
      // right heavy
      if (count(r->left) < kRatio * count(r->right)) {
        // single left rotation
        return make(r->key, r->val,
                    make(k, std::move(v), std::move(l), r->left), r->right);
      }
      const NodePtr& rl = r->left;
      return make(rl->key, rl->val,
                  make(k, std::move(v), std::move(l), rl->left),
                  make(r->key, r->val, rl->right, r->right));
    }
    if (ln > kDelta * rn) {
      if (count(l->right) < kRatio * count(l->left)) {
        return make(l->key, l->val, l->left,
                    make(k, std::move(v), l->right, std::move(r)));
      }
      const NodePtr& lr = l->right;
      return make(lr->key, lr->val,
                  make(l->key, l->val, l->left, lr->left),
                  make(k, std::move(v), lr->right, std::move(r)));
    }
    return make(k, std::move(v), std::move(l), std::move(r));
  }

  template <class F>
  static NodePtr alter_rec(const NodePtr& n, Name k, F& f) {
    if (!n) return make(k, f(static_cast<const V*>(nullptr)), nullptr, nullptr);
    if (k < n->key)
      return balance(n->key, n->val, alter_rec(n->left, k, f), n->right);
    if (n->key < k)
      return balance(n->key, n->val, n->left, alter_rec(n->right, k, f));
    return make(n->key, f(&n->val), n->left, n->right);
  }

  static NodePtr remove_rec(const NodePtr& n, Name k) {
    if (k < n->key)
      return balance(n->key, n->val, remove_rec(n->left, k), n->right);
    if (n->key < k)
      return balance(n->key, n->val, n->left, remove_rec(n->right, k));
    return glue(n->left, n->right);
  }

  static NodePtr glue(const NodePtr& l, const NodePtr& r) {
    if (!l) return r;
    if (!r) return l;
    if (count(l) > count(r)) {
      Name k;
      const V* v;
      NodePtr rest = extract_max(l, k, v);
      return balance(k, *v, std::move(rest), r);
    }
    Name k;
    const V* v;
    NodePtr rest = extract_min(r, k, v);
    return balance(k, *v, l, std::move(rest));
  }

  static NodePtr extract_max(const NodePtr& n, Name& k, const V*& v) {
    if (!n->right) {
      k = n->key;
      v = &n->val;
      return n->left;
    }
    return balance(n->key, n->val, n->left, extract_max(n->right, k, v));
  }

  static NodePtr extract_min(const NodePtr& n, Name& k, const V*& v) {
    if (!n->left) {
      k = n->key;
      v = &n->val;
      return n->right;
    }
    return balance(n->key, n->val, extract_min(n->left, k, v), n->right);
  }

  template <class F>
  static void walk(const Node* n, F& f) {
    if (!n) return;
    walk(n->left.get(), f);
    f(n->key, n->val);
    walk(n->right.get(), f);
  }

  static bool check(const Node* n, const Name* lo, const Name* hi) {
    if (!n) return true;
    if (lo && !(*lo < n->key)) return false;
    if (hi && !(n->key < *hi)) return false;
    if (n->count != 1 + count(n->left) + count(n->right)) return false;
    std::uint64_t ln = count(n->left), rn = count(n->right);
    if (ln + rn > 1 && (ln > kDelta * rn || rn > kDelta * ln)) return false;
    return check(n->left.get(), lo, &n->key) && check(n->right.get(), &n->key, hi);
  }

  NodePtr root_;
};

}  // namespace alphahash

#endif
