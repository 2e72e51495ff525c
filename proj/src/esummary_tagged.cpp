#include "alphahash/esummary_tagged.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

namespace alphahash {

TagPosPtr TagPosTree::here() {
  static const TagPosPtr h(new TagPosTree(Kind::Here, 0, nullptr, nullptr));
  return h;
}

TagPosPtr TagPosTree::join(std::uint64_t tag, TagPosPtr big, TagPosPtr small) {
  return TagPosPtr(new TagPosTree(Kind::Join, tag, std::move(big), std::move(small)));
}

TagPosTree::~TagPosTree() {
  std::vector<TagPosPtr> pending;
  auto grab = [&pending](TagPosPtr& p) {
    if (p && p.use_count() == 1)
      pending.push_back(std::move(p));
    else
      p.reset();
  };
  grab(big_);
  grab(small_);
  while (!pending.empty()) {
    TagPosPtr p = std::move(pending.back());
    pending.pop_back();
    grab(p->big_);
    grab(p->small_);
  }
}

bool equal(const TagPosTree& a, const TagPosTree& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == TagPosTree::Kind::Here) return true;
  if (a.tag() != b.tag()) return false;
  bool big_a = a.big() != nullptr, big_b = b.big() != nullptr;
  if (big_a != big_b) return false;
  if (big_a && !equal(*a.big(), *b.big())) return false;
  return equal(*a.small(), *b.small());
}

TagStructPtr TagStructure::svar() {
  static const TagStructPtr v(new TagStructure(Kind::Var, false, 1, nullptr, nullptr, nullptr));
  return v;
}

TagStructPtr TagStructure::slam(TagPosPtr occ, TagStructPtr body) {
  std::uint64_t depth = 1 + body->depth();
  return TagStructPtr(new TagStructure(Kind::Lam, false, depth, std::move(occ),
                                       std::move(body), nullptr));
}

TagStructPtr TagStructure::sapp(bool left_bigger, TagStructPtr left, TagStructPtr right) {
  std::uint64_t depth = 1 + std::max(left->depth(), right->depth());
  return TagStructPtr(new TagStructure(Kind::App, left_bigger, depth, nullptr,
                                       std::move(left), std::move(right)));
}

TagStructure::~TagStructure() {
  std::vector<TagStructPtr> pending;
  auto grab = [&pending](TagStructPtr& p) {
    if (p && p.use_count() == 1)
      pending.push_back(std::move(p));
    else
      p.reset();
  };
  grab(left_);
  grab(right_);
  while (!pending.empty()) {
    TagStructPtr p = std::move(pending.back());
    pending.pop_back();
    grab(p->left_);
    grab(p->right_);
  }
}

bool equal(const TagStructure& a, const TagStructure& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind() || a.depth() != b.depth()) return false;
  switch (a.kind()) {
    case TagStructure::Kind::Var:
      return true;
    case TagStructure::Kind::Lam: {
      bool occ_a = a.occ() != nullptr, occ_b = b.occ() != nullptr;
      if (occ_a != occ_b) return false;
      if (occ_a && !equal(*a.occ(), *b.occ())) return false;
      return equal(*a.body(), *b.body());
    }
    case TagStructure::Kind::App:
      if (a.left_bigger() != b.left_bigger()) return false;
      return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
  }
  return false;
}

std::uint64_t structure_tag(const TagStructure& s) { return s.depth(); }

bool equal(const TagESummary& a, const TagESummary& b) {
  if (!equal(*a.structure, *b.structure)) return false;
  if (a.varmap.size() != b.varmap.size()) return false;
  auto it2 = b.varmap.begin();
  for (const auto& [k, v] : a.varmap) {
    if (it2->first != k || !equal(*v, *it2->second)) return false;
    ++it2;
  }
  return true;
}

std::pair<TagVarMap, TagPosPtr> remove_vm(Name key, TagVarMap m) {
  TagPosPtr old;
  auto it = m.find(key);
  if (it != m.end()) {
    old = std::move(it->second);
    m.erase(it);
  }
  return {std::move(m), std::move(old)};
}

namespace {

TagESummary summarise_rec(const Expr& e, MapOpCounts* ops) {
  switch (e.kind()) {
    case Expr::Kind::Var:
      if (ops) ++ops->singletons;
      return {TagStructure::svar(), TagVarMap{{e.name(), TagPosTree::here()}}};
    case Expr::Kind::Lam: {
      TagESummary body = summarise_rec(*e.body(), ops);
      if (ops) ++ops->removes;
      auto [vm, occ] = remove_vm(e.name(), std::move(body.varmap));
      return {TagStructure::slam(std::move(occ), std::move(body.structure)),
              std::move(vm)};
    }
    case Expr::Kind::App: {
      TagESummary s1 = summarise_rec(*e.fun(), ops);
      TagESummary s2 = summarise_rec(*e.arg(), ops);
      bool left_bigger = s1.varmap.size() >= s2.varmap.size();  // ties: left
      TagStructPtr str = TagStructure::sapp(left_bigger, std::move(s1.structure),
                                            std::move(s2.structure));
      std::uint64_t tag = structure_tag(*str);
      TagVarMap big = left_bigger ? std::move(s1.varmap) : std::move(s2.varmap);
      const TagVarMap& small = left_bigger ? s2.varmap : s1.varmap;
      for (const auto& [name, pos] : small) {
        if (ops) ++ops->alters;
        big = alter_vm(
            [&](const TagPosPtr* prev) {
              return TagPosTree::join(tag, prev ? *prev : nullptr, pos);
            },
            name, std::move(big));
      }
      return {std::move(str), std::move(big)};
    }
  }
  return {};
}

class TagRebuilder {
public:
  explicit TagRebuilder(const TagVarMap& root_vm) {
    for (const auto& [k, v] : root_vm) {
      (void)v;
      avoid_.insert(k.str());
    }
  }

  ExprPtr run(const TagStructure& s, const TagVarMap& vm) {
    switch (s.kind()) {
      case TagStructure::Kind::Var: {
        if (vm.size() != 1)
          throw IntegrityError("rebuild: variable summary map is not a singleton");
        const auto& [name, pos] = *vm.begin();
        if (pos->kind() != TagPosTree::Kind::Here)
          throw IntegrityError("rebuild: variable position is not a leaf");
        return Expr::var(name);
      }
      case TagStructure::Kind::Lam: {
        Name fresh = next_name();
        TagVarMap inner = vm;
        if (s.occ()) inner.emplace(fresh, s.occ());
        return Expr::lam(fresh, run(*s.body(), inner));
      }
      case TagStructure::Kind::App: {
        // Entries whose Join carries this App's tag were folded in here and
        // split back into (big child, small child); everything else belongs
        // to the bigger map unchanged.
        std::uint64_t tag = structure_tag(s);
        TagVarMap small_m, big_m;
        for (const auto& [name, pos] : vm) {
          if (pos->kind() == TagPosTree::Kind::Join && pos->tag() == tag) {
            small_m.emplace_hint(small_m.end(), name, pos->small());
            if (pos->big()) big_m.emplace_hint(big_m.end(), name, pos->big());
          } else {
            big_m.emplace_hint(big_m.end(), name, pos);
          }
        }
        const TagVarMap& vm1 = s.left_bigger() ? big_m : small_m;
        const TagVarMap& vm2 = s.left_bigger() ? small_m : big_m;
        ExprPtr f = run(*s.left(), vm1);
        return Expr::app(std::move(f), run(*s.right(), vm2));
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

TagESummary summarise_tagged(const Expr& e, MapOpCounts* ops) {
  return summarise_rec(e, ops);
}

ExprPtr rebuild_tagged(const TagESummary& s) {
  return TagRebuilder(s.varmap).run(*s.structure, s.varmap);
}

}  // namespace alphahash
