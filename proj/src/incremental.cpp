#include "alphahash/incremental.hpp"

#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace alphahash {

AnnNode::~AnnNode() {
  std::vector<AnnPtr> pending;
  auto grab = [&pending](AnnPtr& p) {
    if (p && p.use_count() == 1)
      pending.push_back(std::move(p));
    else
      p.reset();
  };
  grab(first);
  grab(second);
  while (!pending.empty()) {
    AnnPtr p = std::move(pending.back());
    pending.pop_back();
    grab(p->first);
    grab(p->second);
  }
}

namespace {

AnnPtr make_var_node(const HashContext& ctx, const ExprPtr& e, MapOpCounts* ops) {
  auto node = std::make_shared<AnnNode>();
  node->expr = e;
  node->summary.structure = struct_svar(ctx);
  node->summary.varmap = vm_singleton(ctx, e->name(), pt_here(ctx), ops);
  node->hash = hash_summary(ctx, node->summary);
  return node;
}

AnnPtr make_lam_node(const HashContext& ctx, Name binder, AnnPtr body,
                     MapOpCounts* ops) {
  auto node = std::make_shared<AnnNode>();
  node->expr = Expr::lam(binder, body->expr);
  auto [vm, occ] = vm_remove(ctx, binder, body->summary.varmap, ops);
  node->summary.structure =
      struct_slam(ctx, occ ? &*occ : nullptr, body->summary.structure);
  node->summary.varmap = std::move(vm);
  node->hash = hash_summary(ctx, node->summary);
  node->first = std::move(body);
  return node;
}

AnnPtr make_app_node(const HashContext& ctx, AnnPtr fun, AnnPtr arg,
                     MapOpCounts* ops) {
  auto node = std::make_shared<AnnNode>();
  node->expr = Expr::app(fun->expr, arg->expr);
  const HashedSummary& s1 = fun->summary;
  const HashedSummary& s2 = arg->summary;
  bool left_bigger = s1.varmap.count() >= s2.varmap.count();
  node->summary.structure = struct_sapp(ctx, left_bigger, s1.structure, s2.structure);
  std::uint64_t tag = node->summary.structure.depth;
  // The children keep their maps: the fold path-copies, so `big` here is a
  // new version sharing nodes with the bigger child's map.
  HashedVarMap big = left_bigger ? s1.varmap : s2.varmap;
  const HashedVarMap& small = left_bigger ? s2.varmap : s1.varmap;
  small.entries.for_each([&](Name name, const PosHC& pos) {
    big = vm_alter(
        ctx, [&](const PosHC* prev) { return pt_join(ctx, tag, prev, pos); },
        name, std::move(big), ops);
  });
  node->summary.varmap = std::move(big);
  node->hash = hash_summary(ctx, node->summary);
  node->first = std::move(fun);
  node->second = std::move(arg);
  return node;
}

AnnPtr annotate_rec(const HashContext& ctx, const ExprPtr& e, MapOpCounts* ops) {
  switch (e->kind()) {
    case Expr::Kind::Var:
      return make_var_node(ctx, e, ops);
    case Expr::Kind::Lam:
      return make_lam_node(ctx, e->name(), annotate_rec(ctx, e->body(), ops), ops);
    case Expr::Kind::App: {
      AnnPtr f = annotate_rec(ctx, e->fun(), ops);
      return make_app_node(ctx, std::move(f), annotate_rec(ctx, e->arg(), ops), ops);
    }
  }
  return nullptr;
}

void collect_binders(const Expr& e, std::vector<Name>& out) {
  std::vector<const Expr*> stack{&e};
  while (!stack.empty()) {
    const Expr* n = stack.back();
    stack.pop_back();
    switch (n->kind()) {
      case Expr::Kind::Var: break;
      case Expr::Kind::Lam:
        out.push_back(n->name());
        stack.push_back(n->body().get());
        break;
      case Expr::Kind::App:
        stack.push_back(n->arg().get());
        stack.push_back(n->fun().get());
        break;
    }
  }
}

}  // namespace

AnnotatedExpr annotate(const HashContext& ctx, const ExprPtr& e, MapOpCounts* ops) {
  return {annotate_rec(ctx, e, ops)};
}

AnnotatedExpr rewrite(const HashContext& ctx, const AnnotatedExpr& t, const Path& at,
                      const ExprPtr& replacement, MapOpCounts* ops) {
  if (!t.root) throw std::invalid_argument("rewrite: empty tree");

  // Spine from root to the rewritten node's parent.
  std::vector<AnnPtr> spine;
  AnnPtr cur = t.root;
  for (Step s : at.steps) {
    spine.push_back(cur);
    switch (s) {
      case Step::Body:
        if (!cur->expr->is_lam())
          throw std::invalid_argument("rewrite: path step 'b' at non-lam node");
        cur = cur->first;
        break;
      case Step::Fun:
        if (!cur->expr->is_app())
          throw std::invalid_argument("rewrite: path step 'f' at non-app node");
        cur = cur->first;
        break;
      case Step::Arg:
        if (!cur->expr->is_app())
          throw std::invalid_argument("rewrite: path step 'a' at non-app node");
        cur = cur->second;
        break;
    }
  }

  std::vector<Name> binders;
  collect_binders(*replacement, binders);
  if (!binders.empty()) {
    std::unordered_set<std::uint32_t> present;
    for (Name n : all_names(*t.root->expr)) present.insert(n.id());
    for (Name b : binders)
      if (present.count(b.id()))
        throw std::invalid_argument("rewrite: replacement binder '" + b.str() +
                                    "' already occurs in the tree");
  }

  AnnPtr rebuilt = annotate_rec(ctx, replacement, ops);
  for (std::size_t i = spine.size(); i-- > 0;) {
    const AnnPtr& node = spine[i];
    switch (at.steps[i]) {
      case Step::Body:
        rebuilt = make_lam_node(ctx, node->expr->name(), std::move(rebuilt), ops);
        break;
      case Step::Fun:
        rebuilt = make_app_node(ctx, std::move(rebuilt), node->second, ops);
        break;
      case Step::Arg:
        rebuilt = make_app_node(ctx, node->first, std::move(rebuilt), ops);
        break;
    }
  }
  return {std::move(rebuilt)};
}

std::vector<HashCode> preorder_hashes(const AnnotatedExpr& t) {
  std::vector<HashCode> out;
  std::vector<const AnnNode*> stack{t.root.get()};
  while (!stack.empty()) {
    const AnnNode* n = stack.back();
    stack.pop_back();
    out.push_back(n->hash);
    if (n->second) stack.push_back(n->second.get());
    if (n->first) stack.push_back(n->first.get());
  }
  return out;
}

bool annotations_equal(const AnnotatedExpr& a, const AnnotatedExpr& b) {
  std::vector<std::pair<const AnnNode*, const AnnNode*>> stack{{a.root.get(), b.root.get()}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (!x || !y) return x == y;
    if (x->hash != y->hash) return false;
    const HashedSummary &sx = x->summary, &sy = y->summary;
    if (sx.structure.hash != sy.structure.hash ||
        sx.structure.size != sy.structure.size ||
        sx.structure.depth != sy.structure.depth ||
        sx.varmap.agg != sy.varmap.agg || sx.varmap.count() != sy.varmap.count())
      return false;
    stack.push_back({x->first.get(), y->first.get()});
    stack.push_back({x->second.get(), y->second.get()});
  }
  return true;
}

}  // namespace alphahash
