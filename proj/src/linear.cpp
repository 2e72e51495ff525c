#include "alphahash/linear.hpp"

#include <stdexcept>

namespace alphahash {

namespace {

// Inverse of an odd multiplier modulo 2^64 by Newton iteration; each step
// doubles the number of correct low bits.
std::uint64_t odd_inverse(std::uint64_t a) {
  std::uint64_t x = a;  // correct mod 2^3
  for (int i = 0; i < 5; ++i) x *= 2 - a * x;
  return x;
}

HashCode lentry(const HashContext& ctx, Name name, HashCode stored) {
  return ctx.combine(Role::Entry, 1, {ctx.name_hash(name), stored});
}

}  // namespace

LinearFn LinearFn::make(std::uint64_t a, std::uint64_t b, std::uint64_t mask) {
  if ((a & 1) == 0) throw std::invalid_argument("linear multiplier must be odd");
  a &= mask;
  b &= mask;
  std::uint64_t ai = odd_inverse(a) & mask;
  std::uint64_t bi = (0 - ai * b) & mask;
  return {a, b, ai, bi, mask};
}

LinearFn lf_compose(const LinearFn& f, const LinearFn& g) {
  LinearFn r;
  r.mask = f.mask;
  r.a = (f.a * g.a) & r.mask;
  r.b = (f.a * g.b + f.b) & r.mask;
  r.a_inv = (g.a_inv * f.a_inv) & r.mask;
  r.b_inv = (g.a_inv * f.b_inv + g.b_inv) & r.mask;
  return r;
}

LazyVarMap lazy_singleton(const HashContext& ctx, Name name, HashCode logical,
                          MapOpCounts* ops) {
  if (ops) ++ops->singletons;
  LazyVarMap m;
  m.pending = LinearFn::identity(ctx.mask());
  m.agg = lentry(ctx, name, logical);
  m.stored = m.stored.insert(name, logical);
  return m;
}

std::optional<HashCode> lazy_lookup(const LazyVarMap& m, Name name) {
  const HashCode* stored = m.stored.find(name);
  if (!stored) return std::nullopt;
  return lf_apply(m.pending, *stored);
}

LazyVarMap lazy_map_all(const LinearFn& f, LazyVarMap m) {
  m.pending = lf_compose(f, m.pending);
  return m;
}

LazyVarMap lazy_insert(const HashContext& ctx, LazyVarMap m, Name name,
                       HashCode logical, MapOpCounts* ops) {
  if (ops) ++ops->alters;
  HashCode stored = lf_apply_inv(m.pending, logical);
  const HashCode* old = m.stored.find(name);
  if (old) m.agg ^= lentry(ctx, name, *old);
  m.agg ^= lentry(ctx, name, stored);
  m.stored = m.stored.insert(name, stored);
  return m;
}

std::pair<LazyVarMap, std::optional<HashCode>> lazy_remove(const HashContext& ctx,
                                                           LazyVarMap m, Name name,
                                                           MapOpCounts* ops) {
  if (ops) ++ops->removes;
  auto [stored, old] = m.stored.remove(name);
  if (!old) return {std::move(m), std::nullopt};
  m.stored = std::move(stored);
  m.agg ^= lentry(ctx, name, *old);
  return {std::move(m), lf_apply(m.pending, *old)};
}

std::pair<LinearFn, LinearFn> linear_fns(const HashContext& ctx) {
  std::uint64_t mask = ctx.mask();
  LinearFn fl = LinearFn::make(ctx.raw_stream(Role::LinearParams, 0) | 1,
                               ctx.raw_stream(Role::LinearParams, 1), mask);
  LinearFn fr = LinearFn::make(ctx.raw_stream(Role::LinearParams, 2) | 1,
                               ctx.raw_stream(Role::LinearParams, 3), mask);
  return {fl, fr};
}

HashCode linear_summary_hash(const HashContext& ctx, const LinearSummary& s) {
  return ctx.combine(Role::TopPair, s.struct_size, {s.struct_hash, s.varmap.agg});
}

namespace {

LinearSummary linear_rec(const HashContext& ctx, const Expr& e, const LinearFn& fl,
                         const LinearFn& fr, std::vector<HashCode>* out,
                         MapOpCounts* ops) {
  std::size_t slot = 0;
  if (out) {
    slot = out->size();
    out->push_back(0);
  }
  LinearSummary result;
  switch (e.kind()) {
    case Expr::Kind::Var: {
      result.struct_hash = ctx.combine(Role::SVar, 1, {});
      result.struct_size = 1;
      result.varmap = lazy_singleton(ctx, e.name(), ctx.combine(Role::PtHere, 1, {}), ops);
      break;
    }
    case Expr::Kind::Lam: {
      LinearSummary body = linear_rec(ctx, *e.body(), fl, fr, out, ops);
      auto [vm, occ] = lazy_remove(ctx, std::move(body.varmap), e.name(), ops);
      result.struct_size = 1 + body.struct_size;
      result.struct_hash = ctx.combine(Role::SLam, result.struct_size,
                                       {occ ? 1ull : 0ull, occ ? *occ : 0, body.struct_hash});
      result.varmap = std::move(vm);
      break;
    }
    case Expr::Kind::App: {
      LinearSummary s1 = linear_rec(ctx, *e.fun(), fl, fr, out, ops);
      LinearSummary s2 = linear_rec(ctx, *e.arg(), fl, fr, out, ops);
      bool left_bigger = s1.varmap.count() >= s2.varmap.count();  // ties: left
      result.struct_size = 1 + s1.struct_size + s2.struct_size;
      result.struct_hash = ctx.combine(Role::SApp, result.struct_size,
                                       {left_bigger ? 1ull : 0ull, s1.struct_hash,
                                        s2.struct_hash});
      LazyVarMap big = left_bigger ? std::move(s1.varmap) : std::move(s2.varmap);
      const LazyVarMap& small = left_bigger ? s2.varmap : s1.varmap;
      const LinearFn& f_big = left_bigger ? fl : fr;
      const LinearFn& f_small = left_bigger ? fr : fl;

      // Entries present on both sides leave the big map before its lazy
      // transform and come back as an order-faithful (left, right) pair;
      // entries only in the small map get their side's transform eagerly.
      std::vector<std::pair<Name, HashCode>> incoming;
      small.stored.for_each([&](Name name, const HashCode& stored_small) {
        HashCode logical_small = lf_apply(small.pending, stored_small);
        if (big.stored.find(name)) {
          auto [vm, logical_big] = lazy_remove(ctx, std::move(big), name, ops);
          big = std::move(vm);
          HashCode both =
              left_bigger
                  ? ctx.combine(Role::PtBoth, 1, {*logical_big, logical_small})
                  : ctx.combine(Role::PtBoth, 1, {logical_small, *logical_big});
          incoming.emplace_back(name, both);
        } else {
          incoming.emplace_back(name, lf_apply(f_small, logical_small));
        }
      });
      big = lazy_map_all(f_big, std::move(big));
      for (auto& [name, logical] : incoming)
        big = lazy_insert(ctx, std::move(big), name, logical, ops);
      result.varmap = std::move(big);
      break;
    }
  }
  if (out) (*out)[slot] = linear_summary_hash(ctx, result);
  return result;
}

}  // namespace

LinearSummary summarise_linear(const HashContext& ctx, const Expr& e, MapOpCounts* ops) {
  auto [fl, fr] = linear_fns(ctx);
  return linear_rec(ctx, e, fl, fr, nullptr, ops);
}

std::vector<HashCode> linear_hash_all(const HashContext& ctx, const Expr& e,
                                      MapOpCounts* ops) {
  auto [fl, fr] = linear_fns(ctx);
  std::vector<HashCode> out;
  out.reserve(e.size());
  linear_rec(ctx, e, fl, fr, &out, ops);
  return out;
}

}  // namespace alphahash
