#ifndef ALPHAHASH_VECTORS_HPP
#define ALPHAHASH_VECTORS_HPP

#include <vector>

namespace alphahash {

// Fixed expression pairs that pin down each hasher's behaviour: which pairs
// every algorithm must equate, and the exact spots where the structural and
// de Bruijn baselines go wrong. Arithmetic is encoded by applying free
// variables (add, mul, ...), so "x+1" reads (app (app add x) one).
struct VectorCase {
  const char* name;
  const char* text;     // whole expression (uniquify before hashing)
  const char* path_a;   // first subterm
  const char* path_b;   // second subterm
  bool equivalent;      // ground truth: alpha_equiv(A, B)
  bool structural_equal;  // structural baseline's verdict
  bool debruijn_equal;    // de Bruijn baseline's verdict
};

inline const std::vector<VectorCase>& builtin_vectors() {
  static const std::vector<VectorCase> cases = {
      // Alpha-renamed siblings: equivalent, but name-sensitive hashing
      // cannot see it.
      {"renamed-siblings",
       "(app (lam x (app (app add x) t)) (lam y (app (app add y) t)))",
       "f", "a", true, false, true},
      // Same shape, different free variables: nothing should equate these.
      {"free-vars-differ",
       "(app (lam x (app (app add x) y)) (lam q (app (app add q) z)))",
       "f", "a", false, false, false},
      // Identical subterms under different binder depths: indices for the
      // shared free variable shift, so the one-pass index form differs.
      {"index-shift",
       "(lam t (app (app foo (lam x (app (app add x) t)))"
       " (lam y (lam x (app (app add x) t)))))",
       "bfa", "bab", true, false, false},
      // Different variables that land on the same index: not equivalent,
      // yet the one-pass index form coincides.
      {"index-confusion",
       "(lam t (app (app foo (lam x (app (app mul t) (app (app add x) one))))"
       " (lam y (lam x (app (app mul y) (app (app add x) one))))))",
       "bfa", "bab", false, false, true},
      // The adversarial generator's base pair: same size, shapes differ at
      // the bottom.
      {"adversarial-bases",
       "(app (lam x (app x (app x x))) (lam x (app (app x x) x)))",
       "f", "a", false, false, false},
  };
  return cases;
}

}  // namespace alphahash

#endif
