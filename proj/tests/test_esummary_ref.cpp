#include <doctest.h>

#include "alphahash/esummary_ref.hpp"
#include "alphahash/lab.hpp"
#include "alphahash/vectors.hpp"

using namespace alphahash;

namespace {

ExprPtr P(const char* s) { return parse(s); }
ExprPtr U(const char* s) { return uniquify(parse(s)); }

}  // namespace

TEST_CASE("summarise_ref: variable case") {
  RefESummary s = summarise_ref(*P("x"));
  CHECK(s.structure->kind() == RefStructure::Kind::Var);
  REQUIRE(s.varmap.size() == 1);
  CHECK(s.varmap.begin()->first.str() == "x");
  CHECK(s.varmap.begin()->second->kind() == RefPosTree::Kind::Here);
}

TEST_CASE("summarise_ref: position tree of repeated occurrences") {
  // occurrences of x in (app (app f x) x): Both (RightOnly Here) Here
  RefESummary s = summarise_ref(*P("(app (app f x) x)"));
  REQUIRE(s.varmap.size() == 2);
  const RefPosPtr& px = s.varmap.at(Name::intern("x"));
  REQUIRE(px->kind() == RefPosTree::Kind::Both);
  REQUIRE(px->left()->kind() == RefPosTree::Kind::RightOnly);
  CHECK(px->left()->right()->kind() == RefPosTree::Kind::Here);
  CHECK(px->right()->kind() == RefPosTree::Kind::Here);

  const RefPosPtr& pf = s.varmap.at(Name::intern("f"));
  REQUIRE(pf->kind() == RefPosTree::Kind::LeftOnly);
  REQUIRE(pf->left()->kind() == RefPosTree::Kind::LeftOnly);
  CHECK(pf->left()->left()->kind() == RefPosTree::Kind::Here);
}

TEST_CASE("summarise_ref: alpha-renamed binders summarise identically") {
  CHECK(equal(summarise_ref(*P("(lam x x)")), summarise_ref(*P("(lam y y)"))));
  CHECK(!equal(summarise_ref(*P("(lam x x)")), summarise_ref(*P("(lam y x)"))));
}

TEST_CASE("merge_vm basics") {
  auto left = [](const RefPosPtr& p) { return RefPosTree::left_only(p); };
  auto right = [](const RefPosPtr& p) { return RefPosTree::right_only(p); };
  auto both = [](const RefPosPtr& l, const RefPosPtr& r) { return RefPosTree::both(l, r); };

  CHECK(merge_vm(left, right, both, {}, {}).empty());

  RefVarMap m1{{Name::intern("x"), RefPosTree::here()}};
  RefVarMap out = merge_vm(left, right, both, m1, {});
  REQUIRE(out.size() == 1);
  CHECK(out.begin()->second->kind() == RefPosTree::Kind::LeftOnly);

  RefVarMap m2{{Name::intern("x"), RefPosTree::here()}};
  out = merge_vm(left, right, both, m1, m2);
  REQUIRE(out.size() == 1);
  const RefPosPtr& p = out.begin()->second;
  REQUIRE(p->kind() == RefPosTree::Kind::Both);
  CHECK(p->left()->kind() == RefPosTree::Kind::Here);
  CHECK(p->right()->kind() == RefPosTree::Kind::Here);
}

TEST_CASE("rebuild_ref: inverse on fixed cases") {
  RefESummary sv = summarise_ref(*P("x"));
  CHECK(to_text(*rebuild_ref(sv)) == "x");

  ExprPtr e = P("(lam x (lam y (app x y)))");
  CHECK(alpha_equiv(*rebuild_ref(summarise_ref(*e)), *e));

  // fresh names come from a deterministic preorder counter
  CHECK(to_text(*rebuild_ref(summarise_ref(*P("(lam a (lam b (app a b)))")))) ==
        "(lam r0 (lam r1 (app r0 r1)))");
}

TEST_CASE("rebuild_ref: inverse on random corpora") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    ExprPtr e = uniquify(gen_balanced(seed, 1 + (seed * 17) % 120));
    CHECK(alpha_equiv(*rebuild_ref(summarise_ref(*e)), *e));
    ExprPtr s = uniquify(gen_unbalanced(seed, 1 + (seed * 13) % 120));
    CHECK(alpha_equiv(*rebuild_ref(summarise_ref(*s)), *s));
  }
}

TEST_CASE("summaries are complete and sound for alpha-equivalence") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    ExprPtr a = uniquify(gen_balanced(seed, 40));
    ExprPtr b = uniquify(gen_balanced(seed + 4096, 40));
    CHECK(equal(summarise_ref(*a), summarise_ref(*uniquify(a))));
    CHECK(equal(summarise_ref(*a), summarise_ref(*b)) == alpha_equiv(*a, *b));
  }
  for (const VectorCase& vc : builtin_vectors()) {
    CAPTURE(vc.name);
    ExprPtr e = uniquify(parse(vc.text));
    ExprPtr a = resolve(e, Path::parse(vc.path_a));
    ExprPtr b = resolve(e, Path::parse(vc.path_b));
    CHECK(equal(summarise_ref(*a), summarise_ref(*b)) == vc.equivalent);
  }
}

TEST_CASE("varmap domain equals the free-variable set") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ExprPtr e = uniquify(gen_balanced(seed ^ 0xfee1, 60));
    RefESummary s = summarise_ref(*e);
    std::vector<Name> domain;
    for (const auto& [k, v] : s.varmap) {
      (void)v;
      domain.push_back(k);
    }
    CHECK(domain == free_vars(*e));
  }
  // closed expressions have empty varmaps
  CHECK(summarise_ref(*U("(lam x (lam y (app x y)))")).varmap.empty());
}

TEST_CASE("rebuild_ref rejects malformed summaries") {
  RefESummary bad;
  bad.structure = RefStructure::svar();
  bad.varmap = {{Name::intern("x"), RefPosTree::here()},
                {Name::intern("y"), RefPosTree::here()}};
  CHECK_THROWS_AS(rebuild_ref(bad), IntegrityError);

  RefESummary bad2;
  bad2.structure = RefStructure::svar();
  bad2.varmap = {{Name::intern("x"), RefPosTree::left_only(RefPosTree::here())}};
  CHECK_THROWS_AS(rebuild_ref(bad2), IntegrityError);
}
