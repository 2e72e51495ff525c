#include "alphahash/hashing.hpp"

#include <stdexcept>
#include <unordered_map>

namespace alphahash {

HashContext::HashContext(std::uint64_t seed, int width) : seed_(seed), width_(width) {
  if (width != 8 && width != 16 && width != 32 && width != 64)
    throw std::invalid_argument("hash width must be 8, 16, 32 or 64");
  mask_ = width == 64 ? ~0ull : (1ull << width) - 1;
  for (std::size_t i = 0; i < keys_.size(); ++i)
    keys_[i] = mix64(mix64(seed + kGolden * (i + 1)) ^ (0xa11a'0000ull + i));
}

HashCode HashContext::name_hash(Name n) const {
  const std::string& s = n.str();
  std::uint64_t h = keys_[static_cast<std::size_t>(Role::Name)];
  h = mix64(h ^ (s.size() + kGolden));
  std::size_t i = 0;
  for (; i + 8 <= s.size(); i += 8) {
    std::uint64_t chunk = 0;
    for (int j = 0; j < 8; ++j)
      chunk |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[i + j])) << (8 * j);
    h = mix64(h ^ (chunk + kGolden));
  }
  std::uint64_t tail = 0;
  for (int j = 0; i < s.size(); ++i, ++j)
    tail |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[i])) << (8 * j);
  h = mix64(h ^ (tail + kGolden));
  return h & mask_;
}

HashCode entry_hash(const HashContext& ctx, Name name, PosHC pos) {
  return ctx.combine(Role::Entry, 1 + pos.size, {ctx.name_hash(name), pos.hash});
}

HashedVarMap vm_singleton(const HashContext& ctx, Name name, PosHC pos, MapOpCounts* ops) {
  if (ops) ++ops->singletons;
  HashedVarMap m;
  m.agg = entry_hash(ctx, name, pos);
  m.entries = m.entries.insert(name, pos);
  return m;
}

std::pair<HashedVarMap, std::optional<PosHC>> vm_remove(const HashContext& ctx,
                                                        Name name, HashedVarMap m,
                                                        MapOpCounts* ops) {
  if (ops) ++ops->removes;
  auto [entries, old] = m.entries.remove(name);
  if (!old) return {std::move(m), std::nullopt};
  m.entries = std::move(entries);
  m.agg ^= entry_hash(ctx, name, *old);
  return {std::move(m), old};
}

PosHC pt_here(const HashContext& ctx) {
  return {ctx.combine(Role::PtHere, 1, {}), 1};
}

PosHC pt_join(const HashContext& ctx, std::uint64_t tag, const PosHC* big, PosHC small) {
  std::uint64_t size = 1 + (big ? big->size : 0) + small.size;
  HashCode h = ctx.combine(Role::PtJoin, size,
                           {tag, big ? 1ull : 0ull, big ? big->hash : 0, small.hash});
  return {h, size};
}

StructHC struct_svar(const HashContext& ctx) {
  return {ctx.combine(Role::SVar, 1, {}), 1, 1};
}

StructHC struct_slam(const HashContext& ctx, const PosHC* occ, StructHC body) {
  std::uint64_t size = 1 + (occ ? occ->size : 0) + body.size;
  HashCode h = ctx.combine(Role::SLam, size,
                           {occ ? 1ull : 0ull, occ ? occ->hash : 0, body.hash});
  return {h, size, 1 + body.depth};
}

StructHC struct_sapp(const HashContext& ctx, bool left_bigger, StructHC left, StructHC right) {
  std::uint64_t size = 1 + left.size + right.size;
  HashCode h = ctx.combine(Role::SApp, size,
                           {left_bigger ? 1ull : 0ull, left.hash, right.hash});
  return {h, size, 1 + std::max(left.depth, right.depth)};
}

HashCode hash_summary(const HashContext& ctx, const HashedSummary& s) {
  return ctx.combine(Role::TopPair, s.structure.size, {s.structure.hash, s.varmap.agg});
}

namespace {

// The small-to-large merge over hashed representations. `out`, when present,
// receives the per-node hash in preorder.
HashedSummary summarise_hashed_rec(const HashContext& ctx, const Expr& e,
                                   std::vector<HashCode>* out, MapOpCounts* ops) {
  std::size_t slot = 0;
  if (out) {
    slot = out->size();
    out->push_back(0);
  }
  HashedSummary result;
  switch (e.kind()) {
    case Expr::Kind::Var:
      result.structure = struct_svar(ctx);
      result.varmap = vm_singleton(ctx, e.name(), pt_here(ctx), ops);
      break;
    case Expr::Kind::Lam: {
      HashedSummary body = summarise_hashed_rec(ctx, *e.body(), out, ops);
      auto [vm, occ] = vm_remove(ctx, e.name(), std::move(body.varmap), ops);
      result.structure = struct_slam(ctx, occ ? &*occ : nullptr, body.structure);
      result.varmap = std::move(vm);
      break;
    }
    case Expr::Kind::App: {
      HashedSummary s1 = summarise_hashed_rec(ctx, *e.fun(), out, ops);
      HashedSummary s2 = summarise_hashed_rec(ctx, *e.arg(), out, ops);
      bool left_bigger = s1.varmap.count() >= s2.varmap.count();  // ties: left
      result.structure = struct_sapp(ctx, left_bigger, s1.structure, s2.structure);
      std::uint64_t tag = result.structure.depth;
      HashedVarMap big = left_bigger ? std::move(s1.varmap) : std::move(s2.varmap);
      const HashedVarMap& small = left_bigger ? s2.varmap : s1.varmap;
      small.entries.for_each([&](Name name, const PosHC& pos) {
        big = vm_alter(
            ctx,
            [&](const PosHC* prev) { return pt_join(ctx, tag, prev, pos); },
            name, std::move(big), ops);
      });
      result.varmap = std::move(big);
      break;
    }
  }
  if (out) (*out)[slot] = hash_summary(ctx, result);
  return result;
}

// Destructive mirror of the above for throwaway root hashing.
struct NameIdHash {
  std::size_t operator()(Name n) const { return n.id(); }
};

struct FastVarMap {
  std::unordered_map<Name, PosHC, NameIdHash> entries;
  HashCode agg = 0;
};

struct FastSummary {
  StructHC structure;
  FastVarMap varmap;
};

FastSummary root_hash_rec(const HashContext& ctx, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Var: {
      FastSummary s;
      s.structure = struct_svar(ctx);
      PosHC pos = pt_here(ctx);
      s.varmap.agg = entry_hash(ctx, e.name(), pos);
      s.varmap.entries.emplace(e.name(), pos);
      return s;
    }
    case Expr::Kind::Lam: {
      FastSummary s = root_hash_rec(ctx, *e.body());
      auto it = s.varmap.entries.find(e.name());
      if (it != s.varmap.entries.end()) {
        PosHC occ = it->second;
        s.varmap.agg ^= entry_hash(ctx, e.name(), occ);
        s.varmap.entries.erase(it);
        s.structure = struct_slam(ctx, &occ, s.structure);
      } else {
        s.structure = struct_slam(ctx, nullptr, s.structure);
      }
      return s;
    }
    case Expr::Kind::App: {
      FastSummary s1 = root_hash_rec(ctx, *e.fun());
      FastSummary s2 = root_hash_rec(ctx, *e.arg());
      bool left_bigger = s1.varmap.entries.size() >= s2.varmap.entries.size();
      FastSummary out;
      out.structure = struct_sapp(ctx, left_bigger, s1.structure, s2.structure);
      std::uint64_t tag = out.structure.depth;
      FastVarMap& big = left_bigger ? s1.varmap : s2.varmap;
      FastVarMap& small = left_bigger ? s2.varmap : s1.varmap;
      for (auto& [name, pos] : small.entries) {
        auto it = big.entries.find(name);
        if (it != big.entries.end()) {
          PosHC next = pt_join(ctx, tag, &it->second, pos);
          big.agg ^= entry_hash(ctx, name, it->second) ^ entry_hash(ctx, name, next);
          it->second = next;
        } else {
          PosHC next = pt_join(ctx, tag, nullptr, pos);
          big.agg ^= entry_hash(ctx, name, next);
          big.entries.emplace(name, next);
        }
      }
      out.varmap = std::move(big);
      return out;
    }
  }
  return {};
}

}  // namespace

HashedSummary summarise_hashed(const HashContext& ctx, const Expr& e, MapOpCounts* ops) {
  return summarise_hashed_rec(ctx, e, nullptr, ops);
}

std::vector<HashCode> hash_all(const HashContext& ctx, const Expr& e, MapOpCounts* ops) {
  std::vector<HashCode> out;
  out.reserve(e.size());
  summarise_hashed_rec(ctx, e, &out, ops);
  return out;
}

HashCode root_hash(const HashContext& ctx, const Expr& e) {
  FastSummary s = root_hash_rec(ctx, e);
  return ctx.combine(Role::TopPair, s.structure.size, {s.structure.hash, s.varmap.agg});
}

std::vector<std::vector<std::uint32_t>> group_by_hash(const std::vector<HashCode>& hashes) {
  std::unordered_map<HashCode, std::uint32_t> group_of;
  std::vector<std::vector<std::uint32_t>> groups;
  for (std::uint32_t i = 0; i < hashes.size(); ++i) {
    auto it = group_of.find(hashes[i]);
    if (it == group_of.end()) {
      group_of.emplace(hashes[i], static_cast<std::uint32_t>(groups.size()));
      groups.push_back({i});
    } else {
      groups[it->second].push_back(i);
    }
  }
  return groups;
}

}  // namespace alphahash
