#ifndef ALPHAHASH_LINEAR_HPP
#define ALPHAHASH_LINEAR_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "alphahash/expr.hpp"
#include "alphahash/hashing.hpp"
#include "alphahash/pmap.hpp"

namespace alphahash {

// Invertible linear function f(x) = a*x + b over b-bit hash codes, a odd.
// Carried together with its precomputed inverse so composing pairs stays O(1).
struct LinearFn {
  std::uint64_t a;
  std::uint64_t b;
  std::uint64_t a_inv;
  std::uint64_t b_inv;
  std::uint64_t mask;

  static LinearFn identity(std::uint64_t mask) { return {1, 0, 1, 0, mask}; }
  // Throws std::invalid_argument when a is even (not invertible mod 2^b).
  static LinearFn make(std::uint64_t a, std::uint64_t b, std::uint64_t mask);
  LinearFn inverse() const { return {a_inv, b_inv, a, b, mask}; }
};

inline HashCode lf_apply(const LinearFn& f, HashCode x) {
  return (f.a * x + f.b) & f.mask;
}
inline HashCode lf_apply_inv(const LinearFn& f, HashCode x) {
  return (f.a_inv * x + f.b_inv) & f.mask;
}

// f after g: (f.a*g.a, f.a*g.b + f.b); the inverse pair composes the other
// way around.
LinearFn lf_compose(const LinearFn& f, const LinearFn& g);

// Variable map with a lazy transformation: the logical value of an entry is
// pending(stored). Applying a linear function to every value is O(1) (compose
// it into pending); an insert stores the value through pending^-1 so a later
// lookup returns it unchanged.
//
// agg is the XOR over entries of entry hashes computed on the *stored*
// values, not the logical ones. A lazy map-all changes every logical value at
// once, so no O(1) adjustment of a logical-value aggregate exists; the stored
// values, however, are untouched by map-all, so this aggregate never needs
// one. It is still a sound map fingerprint when paired with the structure
// hash: the pending transformation is a function of the merge decisions,
// which the structure records exactly (shape plus leftBigger flags), so for
// a fixed structure the stored entries determine the logical map.
struct LazyVarMap {
  PMap<HashCode> stored;
  LinearFn pending = LinearFn::identity(~0ull);
  HashCode agg = 0;
  std::uint64_t count() const { return stored.size(); }
};

LazyVarMap lazy_singleton(const HashContext& ctx, Name name, HashCode logical,
                          MapOpCounts* ops = nullptr);

std::optional<HashCode> lazy_lookup(const LazyVarMap& m, Name name);

// O(1): logical values of all entries pass through f.
LazyVarMap lazy_map_all(const LinearFn& f, LazyVarMap m);

LazyVarMap lazy_insert(const HashContext& ctx, LazyVarMap m, Name name,
                       HashCode logical, MapOpCounts* ops = nullptr);

std::pair<LazyVarMap, std::optional<HashCode>> lazy_remove(const HashContext& ctx,
                                                           LazyVarMap m, Name name,
                                                           MapOpCounts* ops = nullptr);

// The two fixed transformations applied to child maps at App nodes, drawn
// from the context seed with a uniformly chosen odd multiplier.
std::pair<LinearFn, LinearFn> linear_fns(const HashContext& ctx);

struct LinearSummary {
  HashCode struct_hash;
  std::uint64_t struct_size;
  LazyVarMap varmap;
};

HashCode linear_summary_hash(const HashContext& ctx, const LinearSummary& s);

// Same contract as summarise_hashed, with lazily transformed variable maps
// instead of tagged joins. Binders must be unique.
LinearSummary summarise_linear(const HashContext& ctx, const Expr& e,
                               MapOpCounts* ops = nullptr);

// Per-node hashes in preorder. Hash values differ from hash_all's, but the
// resulting partition of nodes must not.
std::vector<HashCode> linear_hash_all(const HashContext& ctx, const Expr& e,
                                      MapOpCounts* ops = nullptr);

}  // namespace alphahash

#endif
