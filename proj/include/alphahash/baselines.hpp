#ifndef ALPHAHASH_BASELINES_HPP
#define ALPHAHASH_BASELINES_HPP

#include <vector>

#include "alphahash/expr.hpp"
#include "alphahash/hashing.hpp"

namespace alphahash {

// Comparison hashers. Each annotates every node with a hash code in preorder
// (same node order as hash_all), so partitions can be compared directly.

// Plain compositional hashing, variable names included verbatim. O(n).
// Alpha-renamed terms get different hashes by design.
std::vector<HashCode> structural_hash_all(const HashContext& ctx, const Expr& e);

// One pass with a binder-depth environment. Bound occurrences hash their
// 1-based index (intervening lambdas, binder included); free variables hash
// by name. Indices are relative to the whole expression, so subterm hashes
// are context-dependent: this baseline has both false negatives and false
// positives.
std::vector<HashCode> debruijn_hash_all(const HashContext& ctx, const Expr& e);

// Each node hashed as its subtree de-Bruijn-ized in isolation. Correct for
// alpha-equivalence but re-hashes the whole body at every lambda: O(n^2 log n)
// worst case, kept deliberately straightforward.
std::vector<HashCode> locally_nameless_hash_all(const HashContext& ctx, const Expr& e);

}  // namespace alphahash

#endif
