#include <doctest.h>

#include <map>

#include "alphahash/lab.hpp"
#include "alphahash/linear.hpp"
#include "alphahash/util.hpp"

using namespace alphahash;

namespace {

Name nm(std::uint64_t k) { return Name::intern("L" + std::to_string(k)); }

HashCode scratch_stored_agg(const HashContext& ctx, const LazyVarMap& m) {
  HashCode agg = 0;
  m.stored.for_each([&](Name k, const HashCode& v) {
    agg ^= ctx.combine(Role::Entry, 1, {ctx.name_hash(k), v});
  });
  return agg;
}

}  // namespace

TEST_CASE("linear function algebra, exhaustive at width 8") {
  const std::uint64_t mask = 0xff;
  Rng rng(31337);

  CHECK_THROWS_AS(LinearFn::make(4, 1, mask), std::invalid_argument);

  // identity and shift behave pointwise
  LinearFn id = LinearFn::identity(mask);
  LinearFn shift = LinearFn::make(1, 5, mask);
  for (std::uint64_t x = 0; x < 256; ++x) {
    CHECK(lf_apply(id, x) == x);
    CHECK(lf_apply(shift, x) == ((x + 5) & mask));
  }

  for (int i = 0; i < 64; ++i) {
    LinearFn f = LinearFn::make(rng.next() | 1, rng.next(), mask);
    LinearFn g = LinearFn::make(rng.next() | 1, rng.next(), mask);
    LinearFn fg = lf_compose(f, g);
    LinearFn f_inv_f = lf_compose(f, f.inverse());
    for (std::uint64_t x = 0; x < 256; ++x) {
      CHECK(lf_apply_inv(f, lf_apply(f, x)) == x);
      CHECK(lf_apply(f.inverse(), lf_apply(f, x)) == x);
      CHECK(lf_apply(fg, x) == lf_apply(f, lf_apply(g, x)));
      CHECK(lf_apply(fg.inverse(), lf_apply(fg, x)) == x);
      CHECK(lf_apply(f_inv_f, x) == x);
    }
    CHECK(lf_apply(lf_compose(id, g), 123) == lf_apply(g, 123));
  }

  // edge multipliers
  for (std::uint64_t a : {1ull, 255ull}) {
    LinearFn f = LinearFn::make(a, 0xff, mask);
    for (std::uint64_t x = 0; x < 256; ++x) CHECK(lf_apply_inv(f, lf_apply(f, x)) == x);
  }
}

TEST_CASE("lazy maps match an eager oracle") {
  HashContext ctx(101, 16);
  Rng rng(271828);
  LazyVarMap lazy;
  std::map<Name, HashCode> eager;

  for (int step = 0; step < 4000; ++step) {
    switch (rng.below(4)) {
      case 0: {  // insert a logical value
        Name k = nm(rng.below(40));
        HashCode v = rng.next() & ctx.mask();
        lazy = lazy_insert(ctx, std::move(lazy), k, v);
        eager[k] = v;
        break;
      }
      case 1: {  // map-all by a random linear function
        LinearFn f = LinearFn::make(rng.next() | 1, rng.next(), ctx.mask());
        lazy = lazy_map_all(f, std::move(lazy));
        for (auto& [k, v] : eager) v = lf_apply(f, v);
        break;
      }
      case 2: {  // remove
        Name k = nm(rng.below(40));
        auto [next, old] = lazy_remove(ctx, std::move(lazy), k);
        lazy = std::move(next);
        auto it = eager.find(k);
        if (it == eager.end()) {
          CHECK(!old.has_value());
        } else {
          REQUIRE(old.has_value());
          CHECK(*old == it->second);
          eager.erase(it);
        }
        break;
      }
      case 3: {  // lookup
        Name k = nm(rng.below(40));
        auto got = lazy_lookup(lazy, k);
        auto it = eager.find(k);
        if (it == eager.end()) CHECK(!got.has_value());
        else {
          REQUIRE(got.has_value());
          CHECK(*got == it->second);
        }
        break;
      }
    }
    if (step % 128 == 0) {
      CHECK(lazy.count() == eager.size());
      CHECK(lazy.agg == scratch_stored_agg(ctx, lazy));
    }
  }
}

TEST_CASE("two successive map-alls equal one composed map-all") {
  HashContext ctx(103, 16);
  LinearFn f = LinearFn::make(0x1235 | 1, 0x77, ctx.mask());
  LinearFn g = LinearFn::make(0x4443 | 1, 0x21, ctx.mask());
  LazyVarMap a = lazy_singleton(ctx, nm(0), 0x1111 & ctx.mask());
  a = lazy_insert(ctx, std::move(a), nm(1), 0x2222 & ctx.mask());
  LazyVarMap b = a;
  a = lazy_map_all(g, std::move(a));
  a = lazy_map_all(f, std::move(a));
  b = lazy_map_all(lf_compose(f, g), std::move(b));
  for (int k = 0; k < 2; ++k) CHECK(lazy_lookup(a, nm(k)) == lazy_lookup(b, nm(k)));
}

TEST_CASE("insert after map-all reads back unchanged") {
  HashContext ctx(107, 16);
  LazyVarMap m = lazy_singleton(ctx, nm(0), 42);
  m = lazy_map_all(LinearFn::make(0x55, 0x99, ctx.mask()), std::move(m));
  m = lazy_insert(ctx, std::move(m), nm(7), 0xbeef & ctx.mask());
  CHECK(lazy_lookup(m, nm(7)) == (0xbeef & ctx.mask()));
}

TEST_CASE("linear backend partitions agree with the tagged backend") {
  HashContext ctx(109, 64);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    ExprPtr e = uniquify(seed % 2 == 0 ? gen_balanced(seed, 1 + (seed * 31) % 220)
                                       : gen_unbalanced(seed, 1 + (seed * 17) % 220));
    CHECK(group_by_hash(linear_hash_all(ctx, *e)) == group_by_hash(hash_all(ctx, *e)));
  }
}

TEST_CASE("linear backend is alpha-invariant") {
  HashContext ctx(113, 64);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ExprPtr e = uniquify(gen_balanced(seed ^ 0x11, 150));
    ExprPtr renamed = uniquify_fresh(e, all_names(*e));
    std::vector<HashCode> h1 = linear_hash_all(ctx, *e);
    std::vector<HashCode> h2 = linear_hash_all(ctx, *renamed);
    CHECK(h1[0] == h2[0]);
    CHECK(group_by_hash(h1) == group_by_hash(h2));
  }
}

TEST_CASE("linear backend map operations stay log-linear") {
  HashContext ctx(127, 64);
  auto ops_at = [&](std::uint64_t n) {
    MapOpCounts ops;
    ExprPtr e = uniquify(gen_balanced(5, n));
    linear_hash_all(ctx, *e, &ops);
    return ops.total();
  };
  std::uint64_t small = ops_at(1 << 10), big = ops_at(1 << 13);
  // n log n growth for an 8x size bump is ~10.4x; quadratic would be 64x
  CHECK(big <= 16 * small);
}

TEST_CASE("summarise_linear root summary matches linear_hash_all") {
  HashContext ctx(131, 64);
  ExprPtr e = uniquify(gen_balanced(2, 90));
  LinearSummary s = summarise_linear(ctx, *e);
  CHECK(linear_summary_hash(ctx, s) == linear_hash_all(ctx, *e)[0]);
}
