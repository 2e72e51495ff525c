#ifndef ALPHAHASH_INCREMENTAL_HPP
#define ALPHAHASH_INCREMENTAL_HPP

#include <memory>
#include <vector>

#include "alphahash/expr.hpp"
#include "alphahash/hashing.hpp"

namespace alphahash {

// Expression node with its hashed summary and node hash cached. Immutable;
// rewrites build new spines and share every untouched branch, so the struct
// doubles as a persistent store of per-node summaries (the variable maps
// inside share structure across versions).
struct AnnNode;
using AnnPtr = std::shared_ptr<AnnNode>;

struct AnnNode {
  ExprPtr expr;
  HashedSummary summary;
  HashCode hash = 0;
  AnnPtr first;   // Lam body / App fun
  AnnPtr second;  // App arg

  ~AnnNode();
  AnnNode() = default;
  AnnNode(const AnnNode&) = delete;
  AnnNode& operator=(const AnnNode&) = delete;
};

struct AnnotatedExpr {
  AnnPtr root;
};

// Full summarise pass with every node's summary retained. Binders unique.
AnnotatedExpr annotate(const HashContext& ctx, const ExprPtr& e,
                       MapOpCounts* ops = nullptr);

// Replaces the subtree at `at` and recomputes summaries for the new subtree
// and the spine up to the root only; all other nodes are shared unchanged.
// The replacement's binders must not occur anywhere in the annotated tree
// (prepare it with uniquify_fresh). Throws std::invalid_argument on a bad
// path or a freshness violation.
AnnotatedExpr rewrite(const HashContext& ctx, const AnnotatedExpr& t, const Path& at,
                      const ExprPtr& replacement, MapOpCounts* ops = nullptr);

std::vector<HashCode> preorder_hashes(const AnnotatedExpr& t);

// Node-for-node equality of hashes and cached summary fields.
bool annotations_equal(const AnnotatedExpr& a, const AnnotatedExpr& b);

}  // namespace alphahash

#endif
