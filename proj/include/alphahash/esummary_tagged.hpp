#ifndef ALPHAHASH_ESUMMARY_TAGGED_HPP
#define ALPHAHASH_ESUMMARY_TAGGED_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <utility>

#include "alphahash/esummary_ref.hpp"
#include "alphahash/expr.hpp"

namespace alphahash {

// Counts variable-map mutations; used to check the small-to-large bound.
struct MapOpCounts {
  std::uint64_t singletons = 0;
  std::uint64_t alters = 0;
  std::uint64_t removes = 0;
  std::uint64_t alter_remove() const { return alters + removes; }
  std::uint64_t total() const { return singletons + alters + removes; }
};

// Position tree for the small-to-large summary. A Join records that at an App
// whose structure carries `tag`, the entry from the smaller child map (small)
// was merged over whatever the bigger map had (big, possibly absent). Tags
// strictly decrease along any root-to-leaf chain of a well-formed summary.
class TagPosTree;
using TagPosPtr = std::shared_ptr<TagPosTree>;

class TagPosTree {
public:
  enum class Kind : std::uint8_t { Here, Join };

  static TagPosPtr here();
  static TagPosPtr join(std::uint64_t tag, TagPosPtr big /*may be null*/, TagPosPtr small);

  Kind kind() const { return kind_; }
  std::uint64_t tag() const { return tag_; }
  const TagPosPtr& big() const { return big_; }
  const TagPosPtr& small() const { return small_; }

  ~TagPosTree();  // iterative teardown; join chains get deep on spine trees
  TagPosTree(const TagPosTree&) = delete;
  TagPosTree& operator=(const TagPosTree&) = delete;

private:
  TagPosTree(Kind k, std::uint64_t tag, TagPosPtr big, TagPosPtr small)
      : kind_(k), tag_(tag), big_(std::move(big)), small_(std::move(small)) {}
  Kind kind_;
  std::uint64_t tag_;
  TagPosPtr big_, small_;
};

bool equal(const TagPosTree& a, const TagPosTree& b);

// Structure with a leftBigger flag on App (which child's varmap was larger at
// construction) and the depth cached; depth serves as the structure tag.
class TagStructure;
using TagStructPtr = std::shared_ptr<TagStructure>;

class TagStructure {
public:
  enum class Kind : std::uint8_t { Var, Lam, App };

  static TagStructPtr svar();
  static TagStructPtr slam(TagPosPtr occ /*may be null*/, TagStructPtr body);
  static TagStructPtr sapp(bool left_bigger, TagStructPtr left, TagStructPtr right);

  Kind kind() const { return kind_; }
  std::uint64_t depth() const { return depth_; }
  bool left_bigger() const { return left_bigger_; }
  const TagPosPtr& occ() const { return occ_; }
  const TagStructPtr& body() const { return left_; }
  const TagStructPtr& left() const { return left_; }
  const TagStructPtr& right() const { return right_; }

  ~TagStructure();
  TagStructure(const TagStructure&) = delete;
  TagStructure& operator=(const TagStructure&) = delete;

private:
  TagStructure(Kind k, bool lb, std::uint64_t depth, TagPosPtr occ,
               TagStructPtr l, TagStructPtr r)
      : kind_(k), left_bigger_(lb), depth_(depth), occ_(std::move(occ)),
        left_(std::move(l)), right_(std::move(r)) {}
  Kind kind_;
  bool left_bigger_ = false;
  std::uint64_t depth_;
  TagPosPtr occ_;
  TagStructPtr left_, right_;
};

bool equal(const TagStructure& a, const TagStructure& b);

// The cached depth: differs from the tag of every proper substructure. O(1).
std::uint64_t structure_tag(const TagStructure& s);

using TagVarMap = std::map<Name, TagPosPtr>;

struct TagESummary {
  TagStructPtr structure;
  TagVarMap varmap;
};

bool equal(const TagESummary& a, const TagESummary& b);

// Binds key to f(previous) where previous is nullptr when absent. Value
// semantics: pass the map with std::move to get the O(log n) update.
template <class F>
TagVarMap alter_vm(F&& f, Name key, TagVarMap m) {
  auto it = m.lower_bound(key);
  if (it != m.end() && it->first == key) {
    const TagPosPtr old = it->second;
    it->second = f(&old);
  } else {
    m.emplace_hint(it, key, f(static_cast<const TagPosPtr*>(nullptr)));
  }
  return m;
}

// Removes key if present, returning its position tree.
std::pair<TagVarMap, TagPosPtr> remove_vm(Name key, TagVarMap m);

// Small-to-large summary: each App folds the smaller child map into the
// larger one entry by entry, stamping Joins with the App's structure tag.
TagESummary summarise_tagged(const Expr& e, MapOpCounts* ops = nullptr);

// Inverse up to alpha; fresh binders r0, r1, ... Throws IntegrityError when
// the summary is inconsistent.
ExprPtr rebuild_tagged(const TagESummary& s);

}  // namespace alphahash

#endif
