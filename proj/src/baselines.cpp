#include "alphahash/baselines.hpp"

#include <unordered_map>
#include <vector>

namespace alphahash {

namespace {

struct SizedHash {
  HashCode hash;
  std::uint64_t size;
};

SizedHash structural_rec(const HashContext& ctx, const Expr& e,
                         std::vector<HashCode>& out) {
  std::size_t slot = out.size();
  out.push_back(0);
  SizedHash r;
  switch (e.kind()) {
    case Expr::Kind::Var:
      r = {ctx.combine(Role::BVar, 1, {ctx.name_hash(e.name())}), 1};
      break;
    case Expr::Kind::Lam: {
      SizedHash body = structural_rec(ctx, *e.body(), out);
      r = {ctx.combine(Role::BLam, 1 + body.size,
                       {ctx.name_hash(e.name()), body.hash}),
           1 + body.size};
      break;
    }
    case Expr::Kind::App: {
      SizedHash f = structural_rec(ctx, *e.fun(), out);
      SizedHash a = structural_rec(ctx, *e.arg(), out);
      r = {ctx.combine(Role::BApp, 1 + f.size + a.size, {f.hash, a.hash}),
           1 + f.size + a.size};
      break;
    }
  }
  out[slot] = r.hash;
  return r;
}

// Lambda levels per name, pushed on entry and popped on exit.
using DbEnv = std::unordered_map<std::uint32_t, std::vector<std::uint64_t>>;

SizedHash debruijn_rec(const HashContext& ctx, const Expr& e, DbEnv& env,
                       std::uint64_t depth, std::vector<HashCode>* out) {
  std::size_t slot = 0;
  if (out) {
    slot = out->size();
    out->push_back(0);
  }
  SizedHash r;
  switch (e.kind()) {
    case Expr::Kind::Var: {
      auto it = env.find(e.name().id());
      if (it != env.end() && !it->second.empty()) {
        std::uint64_t index = depth - it->second.back() + 1;
        r = {ctx.combine(Role::DbBoundVar, 1, {index}), 1};
      } else {
        r = {ctx.combine(Role::DbFreeVar, 1, {ctx.name_hash(e.name())}), 1};
      }
      break;
    }
    case Expr::Kind::Lam: {
      env[e.name().id()].push_back(depth + 1);
      SizedHash body = debruijn_rec(ctx, *e.body(), env, depth + 1, out);
      env[e.name().id()].pop_back();
      r = {ctx.combine(Role::DbLam, 1 + body.size, {body.hash}), 1 + body.size};
      break;
    }
    case Expr::Kind::App: {
      SizedHash f = debruijn_rec(ctx, *e.fun(), env, depth, out);
      SizedHash a = debruijn_rec(ctx, *e.arg(), env, depth, out);
      r = {ctx.combine(Role::DbApp, 1 + f.size + a.size, {f.hash, a.hash}),
           1 + f.size + a.size};
      break;
    }
  }
  if (out) (*out)[slot] = r.hash;
  return r;
}

void preorder(const Expr& e, std::vector<const Expr*>& out) {
  std::vector<const Expr*> stack{&e};
  while (!stack.empty()) {
    const Expr* n = stack.back();
    stack.pop_back();
    out.push_back(n);
    switch (n->kind()) {
      case Expr::Kind::Var: break;
      case Expr::Kind::Lam: stack.push_back(n->body().get()); break;
      case Expr::Kind::App:
        stack.push_back(n->arg().get());
        stack.push_back(n->fun().get());
        break;
    }
  }
}

}  // namespace

std::vector<HashCode> structural_hash_all(const HashContext& ctx, const Expr& e) {
  std::vector<HashCode> out;
  out.reserve(e.size());
  structural_rec(ctx, e, out);
  return out;
}

std::vector<HashCode> debruijn_hash_all(const HashContext& ctx, const Expr& e) {
  std::vector<HashCode> out;
  out.reserve(e.size());
  DbEnv env;
  debruijn_rec(ctx, e, env, 0, &out);
  return out;
}

std::vector<HashCode> locally_nameless_hash_all(const HashContext& ctx, const Expr& e) {
  std::vector<const Expr*> nodes;
  nodes.reserve(e.size());
  preorder(e, nodes);
  std::vector<HashCode> out;
  out.reserve(nodes.size());
  for (const Expr* n : nodes) {
    DbEnv env;
    out.push_back(debruijn_rec(ctx, *n, env, 0, nullptr).hash);
  }
  return out;
}

}  // namespace alphahash
