#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "alphahash/lab.hpp"

using namespace alphahash;

namespace {

std::uint64_t depth_of(const Expr& e) {
  struct Frame { const Expr* node; std::uint64_t depth; };
  std::uint64_t best = 0;
  std::vector<Frame> stack{{&e, 1}};
  while (!stack.empty()) {
    auto [n, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    switch (n->kind()) {
      case Expr::Kind::Var: break;
      case Expr::Kind::Lam: stack.push_back({n->body().get(), d + 1}); break;
      case Expr::Kind::App:
        stack.push_back({n->fun().get(), d + 1});
        stack.push_back({n->arg().get(), d + 1});
        break;
    }
  }
  return best;
}

bool binders_unique(const ExprPtr& e) {
  std::set<std::uint32_t> seen;
  for (auto& [p, n] : subexpressions(e))
    if (n->is_lam() && !seen.insert(n->name().id()).second) return false;
  return true;
}

// The printed tree with one occurrence of `piece` spliced out; fails the
// test when the piece is absent or ambiguous.
std::string splice_out(const std::string& whole, const std::string& piece) {
  std::size_t at = whole.find(piece);
  REQUIRE(at != std::string::npos);
  REQUIRE(whole.find(piece, at + 1) == std::string::npos);
  return whole.substr(0, at) + "#" + whole.substr(at + piece.size());
}

}  // namespace

TEST_CASE("generators are deterministic in (seed, n)") {
  CHECK(equal(*gen_balanced(5, 100), *gen_balanced(5, 100)));
  CHECK(!equal(*gen_balanced(5, 100), *gen_balanced(6, 100)));
  CHECK(equal(*gen_unbalanced(5, 100), *gen_unbalanced(5, 100)));
  auto [a1, a2] = gen_adversarial_pair(5, 100);
  auto [b1, b2] = gen_adversarial_pair(5, 100);
  CHECK(equal(*a1, *b1));
  CHECK(equal(*a2, *b2));
}

TEST_CASE("gen_balanced shape") {
  CHECK(gen_balanced(0, 1)->is_var());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ExprPtr e = gen_balanced(seed, 1000);
    CHECK(e->size() == 1000);
    CHECK(binders_unique(e));
    // leaves only mention in-scope binders or the designated free variable
    std::vector<Name> fv = free_vars(*e);
    for (Name f : fv) CHECK(f.str() == "u");
  }

  // depth concentrates around O(log n)
  std::vector<std::uint64_t> depths;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    depths.push_back(depth_of(*gen_balanced(seed, 4096)));
  std::sort(depths.begin(), depths.end());
  double log_n = std::log2(4096.0);
  CHECK(depths[50] <= 8 * log_n);    // median well inside a small multiple
  CHECK(depths.back() <= 24 * log_n);  // even the extremes stay logarithmic
}

TEST_CASE("gen_unbalanced shape") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ExprPtr e = gen_unbalanced(seed, 1024);
    CHECK(e->size() >= 1024);
    CHECK(e->size() <= 1025);  // one App wrap may overshoot by a node
    CHECK(binders_unique(e));
    CHECK(depth_of(*e) >= 512);
  }
}

TEST_CASE("gen_adversarial_pair differs exactly at the bases") {
  CHECK_THROWS_AS(gen_adversarial_pair(1, 8), std::invalid_argument);
  const std::string base1 = "(lam x (app x (app x x)))";
  const std::string base2 = "(lam x (app (app x x) x))";
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto [e1, e2] = gen_adversarial_pair(seed, 64 + seed);
    CHECK(e1->size() == e2->size());
    CHECK(e1->size() >= 64 + seed);
    CHECK(!alpha_equiv(*e1, *e2));
    CHECK(binders_unique(e1));
    // identical wrapping: removing each base leaves the same text
    CHECK(splice_out(to_text(*e1), base1) == splice_out(to_text(*e2), base2));
  }
}

TEST_CASE("collide: deterministic, and exact at width 64 on small runs") {
  HashContext ctx(9001, 64);
  CollideResult r1 = collide(ctx, CollideMode::Random, 64, 500, 7);
  CollideResult r2 = collide(ctx, CollideMode::Random, 64, 500, 7);
  CHECK(r1.collisions == r2.collisions);
  CHECK(r1.pairs == 500);
  CHECK(r1.collisions == 0);  // 64-bit codes: collisions here would be a bug

  CollideResult adv = collide(ctx, CollideMode::Adversarial, 64, 500, 7);
  CHECK(adv.collisions == 0);

  // at width 8 the adversarial construction collides often
  HashContext ctx8(9001, 8);
  CollideResult adv8 = collide(ctx8, CollideMode::Adversarial, 64, 500, 7);
  CHECK(adv8.collisions > 0);
}

TEST_CASE("bench rows have the promised shape") {
  std::vector<BenchRow> rows =
      bench({Algo::Structural, Algo::Alpha}, "balanced", {256, 512}, 3, 42);
  CHECK(rows.size() == 2 * 2 * 3);
  for (const BenchRow& r : rows) {
    CHECK(r.nanos > 0);
    CHECK((r.n == 256 || r.n == 512));
    CHECK(r.family == "balanced");
  }
  CHECK_THROWS_AS(bench({Algo::Alpha}, "diagonal", {64}, 1, 1), std::invalid_argument);
}

TEST_CASE("fit_loglog_slope recovers exact power laws") {
  std::vector<std::pair<std::uint64_t, double>> pts;
  for (std::uint64_t n : {1024ull, 2048ull, 4096ull, 8192ull})
    pts.emplace_back(n, 3.5 * std::pow(static_cast<double>(n), 1.5));
  CHECK(fit_loglog_slope(pts) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK_THROWS_AS(fit_loglog_slope({{4, 1.0}}), std::invalid_argument);
}

TEST_CASE("algo and backend names round-trip") {
  for (Algo a : {Algo::Structural, Algo::DeBruijn, Algo::LocallyNameless, Algo::Alpha})
    CHECK(algo_from_name(algo_name(a)) == a);
  CHECK(!algo_from_name("x").has_value());
  for (Backend b : {Backend::Tagged, Backend::Linear})
    CHECK(backend_from_name(backend_name(b)) == b);
}
