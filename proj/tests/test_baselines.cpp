#include <doctest.h>

#include "alphahash/baselines.hpp"
#include "alphahash/lab.hpp"
#include "alphahash/vectors.hpp"

using namespace alphahash;

namespace {

ExprPtr U(const char* s) { return uniquify(parse(s)); }

HashCode node_hash(const std::vector<HashCode>& hashes, const ExprPtr& root,
                   const char* path) {
  auto paths = preorder_paths(*root);
  Path want = Path::parse(path);
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (paths[i] == want) return hashes[i];
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("structural: renamed binders hash apart, identical trees together") {
  HashContext ctx(61, 64);
  CHECK(structural_hash_all(ctx, *parse("(lam x x)"))[0] !=
        structural_hash_all(ctx, *parse("(lam y y)"))[0]);
  CHECK(structural_hash_all(ctx, *parse("(lam x (app x y))")) ==
        structural_hash_all(ctx, *parse("(lam x (app x y))")));
}

TEST_CASE("structural: binder uniquification removes name-overloading false positives") {
  HashContext ctx(67, 64);
  // two syntactically identical subterms under unrelated binders named x
  const char* text =
      "(app (app foo (app (lam x (app (app add x) two)) bar))"
      " (app (lam x (app (app add x) two)) pub))";
  ExprPtr raw = parse(text);
  auto raw_hashes = structural_hash_all(ctx, *raw);
  HashCode a_raw = node_hash(raw_hashes, raw, "fafb");
  HashCode b_raw = node_hash(raw_hashes, raw, "afb");
  CHECK(a_raw == b_raw);  // the shared-name collision before preprocessing

  ExprPtr e = uniquify(raw);
  CHECK(!alpha_equiv(*resolve(e, Path::parse("fafb")), *resolve(e, Path::parse("afb"))));
  auto hashes = structural_hash_all(ctx, *e);
  CHECK(node_hash(hashes, e, "fafb") != node_hash(hashes, e, "afb"));
}

TEST_CASE("debruijn: indexed form matches a by-hand transcription") {
  HashContext ctx(71, 64);
  // (lam x (lam y (app (app add x) y))): add stays a free name, x becomes
  // index 2, y index 1.
  ExprPtr e = parse("(lam x (lam y (app (app add x) y)))");
  HashCode h_add = ctx.combine(Role::DbFreeVar, 1, {ctx.name_hash(Name::intern("add"))});
  HashCode h_x = ctx.combine(Role::DbBoundVar, 1, {2});
  HashCode h_y = ctx.combine(Role::DbBoundVar, 1, {1});
  HashCode h_inner = ctx.combine(Role::DbApp, 3, {h_add, h_x});
  HashCode h_app = ctx.combine(Role::DbApp, 5, {h_inner, h_y});
  HashCode h_lam_y = ctx.combine(Role::DbLam, 6, {h_app});
  HashCode h_lam_x = ctx.combine(Role::DbLam, 7, {h_lam_y});
  CHECK(debruijn_hash_all(ctx, *e)[0] == h_lam_x);
}

TEST_CASE("baseline verdicts on every fixed vector") {
  HashContext ctx(73, 64);
  for (const VectorCase& vc : builtin_vectors()) {
    CAPTURE(vc.name);
    ExprPtr e = U(vc.text);
    auto st = structural_hash_all(ctx, *e);
    auto db = debruijn_hash_all(ctx, *e);
    auto ln = locally_nameless_hash_all(ctx, *e);
    HashCode sa = node_hash(st, e, vc.path_a), sb = node_hash(st, e, vc.path_b);
    HashCode da = node_hash(db, e, vc.path_a), dbb = node_hash(db, e, vc.path_b);
    HashCode la = node_hash(ln, e, vc.path_a), lb = node_hash(ln, e, vc.path_b);
    CHECK((sa == sb) == vc.structural_equal);
    CHECK((da == dbb) == vc.debruijn_equal);
    CHECK((la == lb) == vc.equivalent);  // locally nameless is correct
  }
}

TEST_CASE("locally nameless matches the oracle partition") {
  HashContext ctx(79, 64);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ExprPtr e = uniquify(seed % 2 == 0 ? gen_balanced(seed, 1 + (seed * 29) % 200)
                                       : gen_unbalanced(seed, 1 + (seed * 43) % 200));
    CHECK(group_by_hash(locally_nameless_hash_all(ctx, *e)) == oracle_classes(e));
    // and therefore agrees with our partition
    CHECK(group_by_hash(locally_nameless_hash_all(ctx, *e)) ==
          group_by_hash(hash_all(ctx, *e)));
  }
}
