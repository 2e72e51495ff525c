#include <doctest.h>

#include "alphahash/incremental.hpp"
#include "alphahash/lab.hpp"
#include "alphahash/pmap.hpp"

using namespace alphahash;

namespace {

// Deepest Var node; the rewrite targets a leaf.
Path deepest_leaf(const ExprPtr& e) {
  Path best;
  std::size_t best_len = 0;
  auto subs = subexpressions(e);
  for (auto& [p, n] : subs) {
    if (n->is_var() && p.steps.size() >= best_len) {
      best_len = p.steps.size();
      best = p;
    }
  }
  return best;
}

ExprPtr fresh_replacement(const ExprPtr& tree, const char* text) {
  return uniquify_fresh(parse(text), all_names(*tree));
}

}  // namespace

TEST_CASE("annotate reproduces hash_all node for node") {
  HashContext ctx(211, 64);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    ExprPtr e = uniquify(seed % 2 == 0 ? gen_balanced(seed, 180)
                                       : gen_unbalanced(seed, 180));
    CHECK(preorder_hashes(annotate(ctx, e)) == hash_all(ctx, *e));
  }
}

TEST_CASE("annotate is stable across print/parse") {
  HashContext ctx(223, 64);
  ExprPtr e = uniquify(gen_balanced(3, 120));
  ExprPtr reparsed = parse(to_text(*e));
  CHECK(preorder_hashes(annotate(ctx, e)) == preorder_hashes(annotate(ctx, reparsed)));
}

TEST_CASE("rewrite equals scratch annotation") {
  HashContext ctx(227, 64);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ExprPtr e = uniquify(gen_balanced(seed ^ 0x9e37, 200));
    AnnotatedExpr t = annotate(ctx, e);
    Path at = deepest_leaf(e);
    ExprPtr repl = fresh_replacement(e, "(lam w (app w (app w q)))");
    AnnotatedExpr rewritten = rewrite(ctx, t, at, repl);

    // splice the same replacement by hand and annotate from scratch
    struct Splice {
      static ExprPtr run(const ExprPtr& n, const Path& p, std::size_t i, const ExprPtr& r) {
        if (i == p.steps.size()) return r;
        switch (p.steps[i]) {
          case Step::Body:
            return Expr::lam(n->name(), run(n->body(), p, i + 1, r));
          case Step::Fun:
            return Expr::app(run(n->fun(), p, i + 1, r), n->arg());
          case Step::Arg:
            return Expr::app(n->fun(), run(n->arg(), p, i + 1, r));
        }
        return nullptr;
      }
    };
    ExprPtr spliced = Splice::run(e, at, 0, repl);
    CHECK(equal(*rewritten.root->expr, *spliced));
    CHECK(annotations_equal(rewritten, annotate(ctx, spliced)));
  }
}

TEST_CASE("rewriting with an identical copy changes nothing") {
  HashContext ctx(229, 64);
  ExprPtr e = uniquify(gen_balanced(11, 160));
  AnnotatedExpr t = annotate(ctx, e);
  Path at = deepest_leaf(e);
  ExprPtr copy = resolve(e, at);  // a leaf has no binders, so freshness holds
  AnnotatedExpr rewritten = rewrite(ctx, t, at, copy);
  CHECK(annotations_equal(t, rewritten));
}

TEST_CASE("untouched branches are shared, not recomputed") {
  HashContext ctx(233, 64);
  ExprPtr e = uniquify(parse("(app (app a b) (lam x (app x (app c d))))"));
  AnnotatedExpr t = annotate(ctx, e);
  // rewrite inside the right subtree; the left App subtree must be the same node
  AnnotatedExpr r = rewrite(ctx, t, Path::parse("aba"), fresh_replacement(e, "(lam k k)"));
  CHECK(r.root->first.get() == t.root->first.get());
  CHECK(r.root->second.get() != t.root->second.get());
}

TEST_CASE("rewrite validates paths and binder freshness") {
  HashContext ctx(239, 64);
  ExprPtr e = uniquify(parse("(lam x (app x y))"));
  AnnotatedExpr t = annotate(ctx, e);
  CHECK_THROWS_AS(rewrite(ctx, t, Path::parse("f"), parse("z")), std::invalid_argument);
  // v0 is the tree's binder; reusing it in the replacement must be rejected
  CHECK_THROWS_AS(rewrite(ctx, t, Path::parse("ba"), parse("(lam v0 v0)")),
                  std::invalid_argument);
  // and the prepared variant passes
  AnnotatedExpr ok = rewrite(ctx, t, Path::parse("ba"),
                             uniquify_fresh(parse("(lam v0 v0)"), all_names(*e)));
  CHECK(ok.root->hash != t.root->hash);
}

TEST_CASE("leaf rewrites do far fewer map operations than full annotation") {
  HashContext ctx(241, 64);
  ExprPtr e = uniquify(gen_balanced(17, 1 << 12));
  MapOpCounts full;
  AnnotatedExpr t = annotate(ctx, e, &full);
  MapOpCounts delta;
  rewrite(ctx, t, deepest_leaf(e), fresh_replacement(e, "(lam w w)"), &delta);
  CHECK(delta.total() * 8 <= full.total());
}

TEST_CASE("retained summaries grow sub-quadratically in allocations") {
  HashContext ctx(251, 64);
  auto allocs_for = [&](std::uint64_t n) {
    ExprPtr e = uniquify(gen_balanced(23, n));
    std::uint64_t before = pmap_alloc_count.load();
    AnnotatedExpr t = annotate(ctx, e);
    std::uint64_t after = pmap_alloc_count.load();
    (void)t;
    return after - before;
  };
  std::uint64_t small = allocs_for(1 << 10);
  std::uint64_t big = allocs_for(1 << 12);
  // 4x nodes: n log n predicts ~4.8x allocations; quadratic would be 16x
  CHECK(big <= 8 * small);
}
