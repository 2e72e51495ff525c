#ifndef ALPHAHASH_HASHING_HPP
#define ALPHAHASH_HASHING_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "alphahash/esummary_tagged.hpp"
#include "alphahash/expr.hpp"
#include "alphahash/pmap.hpp"
#include "alphahash/util.hpp"

namespace alphahash {

// Hash codes are b-bit values stored in a uint64_t; all arithmetic is modulo
// 2^b with b fixed per context.
using HashCode = std::uint64_t;

// One keyed combiner per constructor / role in the scheme.
enum class Role : std::uint8_t {
  Name,       // variable names, hashed by interned text
  SVar, SLam, SApp,
  PtHere, PtJoin,
  PtLeftOnly, PtRightOnly, PtBoth,  // linear backend's position extensions
  Entry,      // (name, position) pairs in the variable map
  TopPair,    // (structure hash, varmap hash)
  BVar, BLam, BApp,                 // structural baseline
  DbFreeVar, DbBoundVar, DbLam, DbApp,  // de Bruijn / locally nameless
  LinearParams,                     // stream the linear backend draws f_L/f_R from
  kCount
};

// Seeded family of keyed combiners at width b in {8, 16, 32, 64}. Same
// (seed, width) gives identical codes on every run and platform. Immutable.
class HashContext {
public:
  HashContext(std::uint64_t seed, int width);

  std::uint64_t seed() const { return seed_; }
  int width() const { return width_; }
  std::uint64_t mask() const { return mask_; }

  // Keyed mix of (role key, size salt, inputs), truncated to b bits.
  // Sequential chaining makes the result order-sensitive in the inputs.
  HashCode combine(Role role, std::uint64_t size,
                   std::initializer_list<std::uint64_t> inputs) const {
    std::uint64_t h = keys_[static_cast<std::size_t>(role)];
    h = mix64(h ^ (size + kGolden));
    for (std::uint64_t x : inputs) h = mix64(h ^ (x + kGolden));
    return h & mask_;
  }

  HashCode name_hash(Name n) const;

  // Raw 64-bit deterministic stream (not truncated); index selects the draw.
  std::uint64_t raw_stream(Role role, std::uint64_t index) const {
    return mix64(keys_[static_cast<std::size_t>(role)] + kGolden * (index + 1));
  }

private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
  std::uint64_t seed_;
  int width_;
  std::uint64_t mask_;
  std::array<std::uint64_t, static_cast<std::size_t>(Role::kCount)> keys_;
};

// Hashed position tree: just its hash code plus the constructor-call count
// that salts the enclosing combiners.
struct PosHC {
  HashCode hash;
  std::uint64_t size;
  friend bool operator==(const PosHC& a, const PosHC& b) = default;
};

// Variable map over hashed position trees. agg is the XOR over all entries of
// entry_hash(name, pos); it is maintained incrementally and recomputable from
// scratch. The entry map is persistent, so old versions stay valid (and
// cheap) when summaries are retained per node.
struct HashedVarMap {
  PMap<PosHC> entries;
  HashCode agg = 0;
  std::uint64_t count() const { return entries.size(); }
};

HashCode entry_hash(const HashContext& ctx, Name name, PosHC pos);

HashedVarMap vm_singleton(const HashContext& ctx, Name name, PosHC pos,
                          MapOpCounts* ops = nullptr);

// f: (const PosHC* old) -> PosHC; old is nullptr when absent.
template <class F>
HashedVarMap vm_alter(const HashContext& ctx, F&& f, Name name, HashedVarMap m,
                      MapOpCounts* ops = nullptr) {
  if (ops) ++ops->alters;
  const PosHC* old = m.entries.find(name);
  PosHC next = f(old);
  if (old) m.agg ^= entry_hash(ctx, name, *old);
  m.agg ^= entry_hash(ctx, name, next);
  m.entries = m.entries.insert(name, next);
  return m;
}

std::pair<HashedVarMap, std::optional<PosHC>> vm_remove(const HashContext& ctx,
                                                        Name name, HashedVarMap m,
                                                        MapOpCounts* ops = nullptr);

// Hashed structure: hash code plus cached size (combiner salt) and depth
// (the structure tag the merge stamps into joins).
struct StructHC {
  HashCode hash;
  std::uint64_t size;
  std::uint64_t depth;
};

struct HashedSummary {
  StructHC structure;
  HashedVarMap varmap;
};

// Structure / position combiners.
PosHC pt_here(const HashContext& ctx);
PosHC pt_join(const HashContext& ctx, std::uint64_t tag, const PosHC* big, PosHC small);
StructHC struct_svar(const HashContext& ctx);
StructHC struct_slam(const HashContext& ctx, const PosHC* occ, StructHC body);
StructHC struct_sapp(const HashContext& ctx, bool left_bigger, StructHC left, StructHC right);

HashCode hash_summary(const HashContext& ctx, const HashedSummary& s);

// Summary of e over hashed representations; same merge discipline as
// summarise_tagged. Binders must be unique.
HashedSummary summarise_hashed(const HashContext& ctx, const Expr& e,
                               MapOpCounts* ops = nullptr);

// Per-node alpha-invariant hash codes in preorder (node, then children; fun
// before arg). O(n (log n)^2).
std::vector<HashCode> hash_all(const HashContext& ctx, const Expr& e,
                               MapOpCounts* ops = nullptr);

// Root hash only, computed with throwaway destructive maps. Same algorithm
// and same result as hash_all's root entry; used by the collision experiment
// where millions of roots are hashed and nothing is retained.
HashCode root_hash(const HashContext& ctx, const Expr& e);

// Groups preorder indices by hash code. Groups ordered by smallest member,
// members ascending — the same canonical form oracle_classes uses.
std::vector<std::vector<std::uint32_t>> group_by_hash(const std::vector<HashCode>& hashes);

}  // namespace alphahash

#endif
