#ifndef ALPHAHASH_ESUMMARY_REF_HPP
#define ALPHAHASH_ESUMMARY_REF_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>

#include "alphahash/expr.hpp"

namespace alphahash {

// Raised when a summary fails a structural-integrity check during rebuild.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reference position tree: marks every occurrence of one variable inside a
// structure. Always one or more occurrences.
class RefPosTree;
using RefPosPtr = std::shared_ptr<const RefPosTree>;

class RefPosTree {
public:
  enum class Kind : std::uint8_t { Here, LeftOnly, RightOnly, Both };

  static RefPosPtr here();
  static RefPosPtr left_only(RefPosPtr child);
  static RefPosPtr right_only(RefPosPtr child);
  static RefPosPtr both(RefPosPtr left, RefPosPtr right);

  Kind kind() const { return kind_; }
  const RefPosPtr& left() const { return left_; }    // LeftOnly child lives here too
  const RefPosPtr& right() const { return right_; }  // RightOnly child lives here too

private:
  RefPosTree(Kind k, RefPosPtr l, RefPosPtr r)
      : kind_(k), left_(std::move(l)), right_(std::move(r)) {}
  Kind kind_;
  RefPosPtr left_, right_;
};

bool equal(const RefPosTree& a, const RefPosTree& b);

// Structure: the expression shape with variable identities erased. A lambda
// carries the position tree of its bound variable (absent when unused).
class RefStructure;
using RefStructPtr = std::shared_ptr<const RefStructure>;

class RefStructure {
public:
  enum class Kind : std::uint8_t { Var, Lam, App };

  static RefStructPtr svar();
  static RefStructPtr slam(RefPosPtr occ /*may be null*/, RefStructPtr body);
  static RefStructPtr sapp(RefStructPtr left, RefStructPtr right);

  Kind kind() const { return kind_; }
  const RefPosPtr& occ() const { return occ_; }
  const RefStructPtr& body() const { return left_; }
  const RefStructPtr& left() const { return left_; }
  const RefStructPtr& right() const { return right_; }

private:
  RefStructure(Kind k, RefPosPtr occ, RefStructPtr l, RefStructPtr r)
      : kind_(k), occ_(std::move(occ)), left_(std::move(l)), right_(std::move(r)) {}
  Kind kind_;
  RefPosPtr occ_;
  RefStructPtr left_, right_;
};

bool equal(const RefStructure& a, const RefStructure& b);

// Free-variable map: each free variable to the positions where it occurs.
using RefVarMap = std::map<Name, RefPosPtr>;

bool equal(const RefVarMap& a, const RefVarMap& b);

struct RefESummary {
  RefStructPtr structure;
  RefVarMap varmap;
};

bool equal(const RefESummary& a, const RefESummary& b);

// Merges two variable maps. Keys only in m1 pass through on_left, keys only
// in m2 through on_right, keys in both through on_both.
template <class FL, class FR, class FB>
RefVarMap merge_vm(FL&& on_left, FR&& on_right, FB&& on_both,
                   const RefVarMap& m1, const RefVarMap& m2) {
  RefVarMap out;
  auto it1 = m1.begin(), it2 = m2.begin();
  while (it1 != m1.end() || it2 != m2.end()) {
    if (it2 == m2.end() || (it1 != m1.end() && it1->first < it2->first)) {
      out.emplace_hint(out.end(), it1->first, on_left(it1->second));
      ++it1;
    } else if (it1 == m1.end() || it2->first < it1->first) {
      out.emplace_hint(out.end(), it2->first, on_right(it2->second));
      ++it2;
    } else {
      out.emplace_hint(out.end(), it1->first, on_both(it1->second, it2->second));
      ++it1;
      ++it2;
    }
  }
  return out;
}

// The quadratic summary: every App merges full child maps. Kept as the
// executable correctness oracle for the optimized variants. merge_touches,
// when given, accumulates the number of map entries the merges handled.
RefESummary summarise_ref(const Expr& e, std::uint64_t* merge_touches = nullptr);

// Inverse of summarise_ref up to alpha; fresh binders are r0, r1, ... in
// preorder. Throws IntegrityError on malformed summaries.
ExprPtr rebuild_ref(const RefESummary& s);

}  // namespace alphahash

#endif
