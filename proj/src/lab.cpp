#include "alphahash/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "alphahash/baselines.hpp"
#include "alphahash/linear.hpp"
#include "alphahash/util.hpp"

namespace alphahash {

namespace {

Name designated_free() { return Name::intern("u"); }

Name binder(std::uint64_t k) { return Name::intern("b" + std::to_string(k)); }

std::uint64_t pick(std::uint64_t raw, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(raw) * bound) >> 64);
}

class BalancedGen {
public:
  explicit BalancedGen(std::uint64_t seed) : rng_(mix64(seed ^ 0xba1a9ced)) {}

  ExprPtr run(std::uint64_t budget) {
    if (budget == 1) {
      if (scope_.empty()) return Expr::var(designated_free());
      return Expr::var(scope_[rng_.below(scope_.size())]);
    }
    if (budget >= 3 && rng_.coin()) {
      std::uint64_t rest = budget - 1;
      std::uint64_t left = 1 + rng_.below(rest - 1);
      ExprPtr f = run(left);
      return Expr::app(std::move(f), run(rest - left));
    }
    Name b = binder(next_binder_++);
    scope_.push_back(b);
    ExprPtr body = run(budget - 1);
    scope_.pop_back();
    return Expr::lam(b, std::move(body));
  }

private:
  Rng rng_;
  std::vector<Name> scope_;
  std::uint64_t next_binder_ = 0;
};

struct WrapStep {
  bool is_lam;
  bool leaf_left;         // App only: leaf goes on the fun side
  std::uint64_t leaf_raw; // App only: raw draw for the leaf variable
};

// Plans a spine of wraps until `size` (starting from base_size) reaches n.
std::vector<WrapStep> plan_wraps(Rng& rng, std::uint64_t base_size, std::uint64_t n) {
  std::vector<WrapStep> steps;
  std::uint64_t size = base_size;
  while (size < n) {
    if (rng.coin()) {
      steps.push_back({true, false, 0});
      size += 1;
    } else {
      bool left = rng.coin();
      steps.push_back({false, left, rng.next()});
      size += 2;
    }
  }
  return steps;
}

// Materializes a wrap plan around `base`. Leaves pick uniformly among the
// binders of Lam wraps strictly above them, falling back to the designated
// free variable. Binder numbering starts at binder_base.
ExprPtr apply_wraps(ExprPtr base, const std::vector<WrapStep>& steps,
                    std::uint64_t binder_base) {
  std::vector<std::size_t> lam_steps;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (steps[i].is_lam) lam_steps.push_back(i);

  auto leaf_at = [&](std::size_t step_index, std::uint64_t raw) {
    auto it = std::upper_bound(lam_steps.begin(), lam_steps.end(), step_index);
    std::size_t eligible = static_cast<std::size_t>(lam_steps.end() - it);
    if (eligible == 0) return Expr::var(designated_free());
    std::size_t offset = pick(raw, eligible);
    std::size_t lam_pos = static_cast<std::size_t>(it - lam_steps.begin()) + offset;
    return Expr::var(binder(binder_base + lam_pos));
  };

  ExprPtr cur = std::move(base);
  std::size_t lam_seen = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const WrapStep& s = steps[i];
    if (s.is_lam) {
      cur = Expr::lam(binder(binder_base + lam_seen), std::move(cur));
      ++lam_seen;
    } else {
      ExprPtr leaf = leaf_at(i, s.leaf_raw);
      cur = s.leaf_left ? Expr::app(std::move(leaf), std::move(cur))
                        : Expr::app(std::move(cur), std::move(leaf));
    }
  }
  return cur;
}

}  // namespace

ExprPtr gen_balanced(std::uint64_t seed, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("gen_balanced: n must be >= 1");
  return BalancedGen(seed).run(n);
}

ExprPtr gen_unbalanced(std::uint64_t seed, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("gen_unbalanced: n must be >= 1");
  Rng rng(mix64(seed ^ 0x0b5e55edu));
  std::uint64_t bottom_raw = rng.next();
  std::vector<WrapStep> steps = plan_wraps(rng, 1, n);
  // The bottom leaf sees every Lam wrap; reuse the leaf logic by treating it
  // as sitting below step 0.
  std::vector<std::size_t> lam_steps;
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (steps[i].is_lam) lam_steps.push_back(i);
  ExprPtr bottom;
  if (lam_steps.empty()) {
    bottom = Expr::var(designated_free());
  } else {
    bottom = Expr::var(binder(pick(bottom_raw, lam_steps.size())));
  }
  return apply_wraps(std::move(bottom), steps, 0);
}

std::pair<ExprPtr, ExprPtr> gen_adversarial_pair(std::uint64_t seed, std::uint64_t n) {
  if (n < 9) throw std::invalid_argument("gen_adversarial_pair: n must be >= 9");
  // Two small closed expressions, not alpha-equivalent, same size.
  static const char* kBase1 = "(lam x (app x (app x x)))";
  static const char* kBase2 = "(lam x (app (app x x) x))";
  ExprPtr e1 = parse(kBase1);
  ExprPtr e2 = parse(kBase2);
  Rng rng(mix64(seed ^ 0xadbe5a11u));
  std::vector<WrapStep> steps = plan_wraps(rng, e1->size(), n);
  return {apply_wraps(std::move(e1), steps, 0), apply_wraps(std::move(e2), steps, 0)};
}

CollideResult collide(const HashContext& ctx, CollideMode mode, std::uint64_t n,
                      std::uint64_t pairs, std::uint64_t seed) {
  CollideResult result;
  result.pairs = pairs;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    std::uint64_t pair_seed = mix64(seed ^ mix64(0xc0111dedu + i));
    ExprPtr e1, e2;
    if (mode == CollideMode::Adversarial) {
      std::tie(e1, e2) = gen_adversarial_pair(pair_seed, n);
    } else {
      for (std::uint64_t attempt = 0;; ++attempt) {
        e1 = gen_balanced(mix64(pair_seed + 2 * attempt + 1), n);
        e2 = gen_balanced(mix64(pair_seed + 2 * attempt + 2), n);
        if (!alpha_equiv(*e1, *e2)) break;
      }
    }
    if (root_hash(ctx, *e1) == root_hash(ctx, *e2)) ++result.collisions;
  }
  return result;
}

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::Structural: return "structural";
    case Algo::DeBruijn: return "debruijn";
    case Algo::LocallyNameless: return "locally-nameless";
    case Algo::Alpha: return "alpha";
  }
  return "?";
}

std::optional<Algo> algo_from_name(std::string_view s) {
  if (s == "structural") return Algo::Structural;
  if (s == "debruijn") return Algo::DeBruijn;
  if (s == "locally-nameless") return Algo::LocallyNameless;
  if (s == "alpha") return Algo::Alpha;
  return std::nullopt;
}

const char* backend_name(Backend b) {
  return b == Backend::Tagged ? "tagged" : "linear";
}

std::optional<Backend> backend_from_name(std::string_view s) {
  if (s == "tagged") return Backend::Tagged;
  if (s == "linear") return Backend::Linear;
  return std::nullopt;
}

namespace {

// Keeps results observable so the timed calls cannot be optimized away.
volatile HashCode bench_sink = 0;

std::vector<HashCode> run_algo(const HashContext& ctx, Algo algo, Backend backend,
                               const Expr& e) {
  switch (algo) {
    case Algo::Structural: return structural_hash_all(ctx, e);
    case Algo::DeBruijn: return debruijn_hash_all(ctx, e);
    case Algo::LocallyNameless: return locally_nameless_hash_all(ctx, e);
    case Algo::Alpha:
      return backend == Backend::Tagged ? hash_all(ctx, e) : linear_hash_all(ctx, e);
  }
  return {};
}

}  // namespace

std::vector<BenchRow> bench(const std::vector<Algo>& algos, const std::string& family,
                            const std::vector<std::uint64_t>& sizes, int reps,
                            std::uint64_t seed, Backend backend) {
  if (family != "balanced" && family != "unbalanced")
    throw std::invalid_argument("bench: unknown family '" + family + "'");
  HashContext ctx(seed, 64);
  std::vector<BenchRow> rows;
  for (std::uint64_t n : sizes) {
    std::uint64_t gen_seed = mix64(seed ^ mix64(n));
    ExprPtr e = uniquify(family == "balanced" ? gen_balanced(gen_seed, n)
                                              : gen_unbalanced(gen_seed, n));
    for (Algo algo : algos) {
      bench_sink = bench_sink ^ run_algo(ctx, algo, backend, *e).back();  // warmup
      for (int rep = 0; rep < reps; ++rep) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<HashCode> hashes = run_algo(ctx, algo, backend, *e);
        auto t1 = std::chrono::steady_clock::now();
        bench_sink = bench_sink ^ hashes.front();
        rows.push_back({algo, family, n, rep,
                        static_cast<std::uint64_t>(
                            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                                .count())});
      }
    }
  }
  return rows;
}

double fit_loglog_slope(const std::vector<std::pair<std::uint64_t, double>>& points) {
  if (points.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = static_cast<double>(points.size());
  for (const auto& [n, y] : points) {
    double x = std::log2(static_cast<double>(n));
    double ly = std::log2(y);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace alphahash
