#include "alphahash/esummary_ref.hpp"

#include <string>
#include <unordered_set>

namespace alphahash {

RefPosPtr RefPosTree::here() {
  static const RefPosPtr h(new RefPosTree(Kind::Here, nullptr, nullptr));
  return h;
}
RefPosPtr RefPosTree::left_only(RefPosPtr child) {
  return RefPosPtr(new RefPosTree(Kind::LeftOnly, std::move(child), nullptr));
}
RefPosPtr RefPosTree::right_only(RefPosPtr child) {
  return RefPosPtr(new RefPosTree(Kind::RightOnly, nullptr, std::move(child)));
}
RefPosPtr RefPosTree::both(RefPosPtr left, RefPosPtr right) {
  return RefPosPtr(new RefPosTree(Kind::Both, std::move(left), std::move(right)));
}

bool equal(const RefPosTree& a, const RefPosTree& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case RefPosTree::Kind::Here:
      return true;
    case RefPosTree::Kind::LeftOnly:
      return equal(*a.left(), *b.left());
    case RefPosTree::Kind::RightOnly:
      return equal(*a.right(), *b.right());
    case RefPosTree::Kind::Both:
      return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
  }
  return false;
}

RefStructPtr RefStructure::svar() {
  static const RefStructPtr v(new RefStructure(Kind::Var, nullptr, nullptr, nullptr));
  return v;
}
RefStructPtr RefStructure::slam(RefPosPtr occ, RefStructPtr body) {
  return RefStructPtr(new RefStructure(Kind::Lam, std::move(occ), std::move(body), nullptr));
}
RefStructPtr RefStructure::sapp(RefStructPtr left, RefStructPtr right) {
  return RefStructPtr(new RefStructure(Kind::App, nullptr, std::move(left), std::move(right)));
}

bool equal(const RefStructure& a, const RefStructure& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case RefStructure::Kind::Var:
      return true;
    case RefStructure::Kind::Lam: {
      bool has_a = a.occ() != nullptr, has_b = b.occ() != nullptr;
      if (has_a != has_b) return false;
      if (has_a && !equal(*a.occ(), *b.occ())) return false;
      return equal(*a.body(), *b.body());
    }
    case RefStructure::Kind::App:
      return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
  }
  return false;
}

bool equal(const RefVarMap& a, const RefVarMap& b) {
  if (a.size() != b.size()) return false;
  auto it2 = b.begin();
  for (const auto& [k, v] : a) {
    if (it2->first != k || !equal(*v, *it2->second)) return false;
    ++it2;
  }
  return true;
}

bool equal(const RefESummary& a, const RefESummary& b) {
  return equal(*a.structure, *b.structure) && equal(a.varmap, b.varmap);
}

namespace {

RefESummary summarise_rec(const Expr& e, std::uint64_t* touches) {
  switch (e.kind()) {
    case Expr::Kind::Var:
      return {RefStructure::svar(), RefVarMap{{e.name(), RefPosTree::here()}}};
    case Expr::Kind::Lam: {
      RefESummary body = summarise_rec(*e.body(), touches);
      RefPosPtr occ;
      auto it = body.varmap.find(e.name());
      if (it != body.varmap.end()) {
        occ = it->second;
        body.varmap.erase(it);
      }
      return {RefStructure::slam(std::move(occ), std::move(body.structure)),
              std::move(body.varmap)};
    }
    case Expr::Kind::App: {
      RefESummary s1 = summarise_rec(*e.fun(), touches);
      RefESummary s2 = summarise_rec(*e.arg(), touches);
      if (touches) *touches += s1.varmap.size() + s2.varmap.size();
      RefVarMap merged =
          merge_vm([](const RefPosPtr& p) { return RefPosTree::left_only(p); },
                   [](const RefPosPtr& p) { return RefPosTree::right_only(p); },
                   [](const RefPosPtr& l, const RefPosPtr& r) {
                     return RefPosTree::both(l, r);
                   },
                   s1.varmap, s2.varmap);
      return {RefStructure::sapp(std::move(s1.structure), std::move(s2.structure)),
              std::move(merged)};
    }
  }
  return {};
}

// Splitters for the App case of rebuild: project the left/right component of
// each position tree, dropping entries that do not reach that side.
std::optional<RefPosPtr> pick_left(const RefPosPtr& p) {
  switch (p->kind()) {
    case RefPosTree::Kind::LeftOnly: return p->left();
    case RefPosTree::Kind::Both: return p->left();
    default: return std::nullopt;
  }
}
std::optional<RefPosPtr> pick_right(const RefPosPtr& p) {
  switch (p->kind()) {
    case RefPosTree::Kind::RightOnly: return p->right();
    case RefPosTree::Kind::Both: return p->right();
    default: return std::nullopt;
  }
}

template <class F>
RefVarMap map_maybe(F&& f, const RefVarMap& m) {
  RefVarMap out;
  for (const auto& [k, v] : m) {
    std::optional<RefPosPtr> r = f(v);
    if (r) out.emplace_hint(out.end(), k, std::move(*r));
  }
  return out;
}

class RefRebuilder {
public:
  explicit RefRebuilder(const RefVarMap& root_vm) {
    for (const auto& [k, v] : root_vm) {
      (void)v;
      avoid_.insert(k.str());
    }
  }

  ExprPtr run(const RefStructure& s, const RefVarMap& vm) {
    switch (s.kind()) {
      case RefStructure::Kind::Var: {
        if (vm.size() != 1)
          throw IntegrityError("rebuild: variable summary map is not a singleton");
        const auto& [name, pos] = *vm.begin();
        if (pos->kind() != RefPosTree::Kind::Here)
          throw IntegrityError("rebuild: variable position is not a leaf");
        return Expr::var(name);
      }
      case RefStructure::Kind::Lam: {
        Name fresh = next_name();
        RefVarMap inner = vm;
        if (s.occ()) inner.emplace(fresh, s.occ());
        return Expr::lam(fresh, run(*s.body(), inner));
      }
      case RefStructure::Kind::App: {
        RefVarMap m1 = map_maybe(pick_left, vm);
        RefVarMap m2 = map_maybe(pick_right, vm);
        ExprPtr f = run(*s.left(), m1);
        return Expr::app(std::move(f), run(*s.right(), m2));
      }
    }
    throw IntegrityError("rebuild: unknown structure kind");
  }

private:
  Name next_name() {
    for (;;) {
      std::string candidate = "r" + std::to_string(counter_++);
      if (!avoid_.count(candidate)) return Name::intern(candidate);
    }
  }

  std::unordered_set<std::string> avoid_;
  std::uint64_t counter_ = 0;
};

}  // namespace

RefESummary summarise_ref(const Expr& e, std::uint64_t* merge_touches) {
  return summarise_rec(e, merge_touches);
}

ExprPtr rebuild_ref(const RefESummary& s) {
  return RefRebuilder(s.varmap).run(*s.structure, s.varmap);
}

}  // namespace alphahash
