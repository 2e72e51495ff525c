#ifndef ALPHAHASH_LAB_HPP
#define ALPHAHASH_LAB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphahash/expr.hpp"
#include "alphahash/hashing.hpp"

namespace alphahash {

// Random expression families. All generators are deterministic functions of
// (seed, n) and produce pairwise-distinct binders within each expression.

// Roughly balanced tree of exactly n nodes: Lam or App with equal
// probability, App budgets split uniformly, leaves drawn from the in-scope
// binders (or the designated free variable u when none are in scope).
ExprPtr gen_balanced(std::uint64_t seed, std::uint64_t n);

// Spine-heavy expression of ~n nodes (first size >= n) and depth >= n/2:
// a leaf wrapped upward by Lam or App-with-leaf steps, leaves referencing
// binders above them.
ExprPtr gen_unbalanced(std::uint64_t seed, std::uint64_t n);

// Two expressions differing only at the bottom: fixed non-alpha-equivalent
// closed bases grown by an identical wrap sequence. Never alpha-equivalent;
// equal sizes; n >= 9.
std::pair<ExprPtr, ExprPtr> gen_adversarial_pair(std::uint64_t seed, std::uint64_t n);

enum class CollideMode { Random, Adversarial };

struct CollideResult {
  std::uint64_t pairs = 0;
  std::uint64_t collisions = 0;
  double per_65536() const {
    return pairs == 0 ? 0.0 : static_cast<double>(collisions) * 65536.0 /
                                  static_cast<double>(pairs);
  }
};

// Counts root-hash collisions over `pairs` freshly drawn expression pairs of
// size n. Random mode draws balanced pairs and redraws any that happen to be
// alpha-equivalent; adversarial mode uses gen_adversarial_pair.
CollideResult collide(const HashContext& ctx, CollideMode mode, std::uint64_t n,
                      std::uint64_t pairs, std::uint64_t seed);

enum class Algo { Structural, DeBruijn, LocallyNameless, Alpha };
enum class Backend { Tagged, Linear };

const char* algo_name(Algo a);
std::optional<Algo> algo_from_name(std::string_view s);
const char* backend_name(Backend b);
std::optional<Backend> backend_from_name(std::string_view s);

struct BenchRow {
  Algo algo;
  std::string family;  // "balanced" | "unbalanced"
  std::uint64_t n;
  int rep;
  std::uint64_t nanos;
};

// Wall time (monotonic clock) of annotating every node, one warmup run per
// (algo, size), one row per rep. The expression per (family, size) is fixed
// from the seed and shared across algorithms; class extraction is not timed.
std::vector<BenchRow> bench(const std::vector<Algo>& algos, const std::string& family,
                            const std::vector<std::uint64_t>& sizes, int reps,
                            std::uint64_t seed, Backend backend = Backend::Tagged);

// Least-squares slope of log2(y) against log2(n).
double fit_loglog_slope(const std::vector<std::pair<std::uint64_t, double>>& points);

}  // namespace alphahash

#endif
