#include "alphahash/expr.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <unordered_set>

namespace alphahash {

// ---------------------------------------------------------------------------
// Name interning

namespace {

struct NameTable {
  std::shared_mutex mu;
  std::deque<std::string> texts;  // deque: stable addresses for the view keys
  std::unordered_map<std::string_view, std::uint32_t> index;
};

NameTable& table() {
  static NameTable t;
  return t;
}

}  // namespace

Name Name::intern(std::string_view text) {
  NameTable& t = table();
  {
    std::shared_lock lock(t.mu);
    auto it = t.index.find(text);
    if (it != t.index.end()) return Name(it->second);
  }
  std::unique_lock lock(t.mu);
  auto it = t.index.find(text);
  if (it != t.index.end()) return Name(it->second);
  t.texts.emplace_back(text);
  std::uint32_t id = static_cast<std::uint32_t>(t.texts.size() - 1);
  t.index.emplace(t.texts.back(), id);
  return Name(id);
}

const std::string& Name::str() const {
  NameTable& t = table();
  std::shared_lock lock(t.mu);
  return t.texts[id_];
}

// ---------------------------------------------------------------------------
// Expression nodes

ExprPtr Expr::var(Name name) {
  return ExprPtr(new Expr(Kind::Var, name, nullptr, nullptr, 1));
}

ExprPtr Expr::lam(Name binder, ExprPtr body) {
  std::uint64_t size = 1 + body->size();
  return ExprPtr(new Expr(Kind::Lam, binder, std::move(body), nullptr, size));
}

ExprPtr Expr::app(ExprPtr fun, ExprPtr arg) {
  std::uint64_t size = 1 + fun->size() + arg->size();
  return ExprPtr(new Expr(Kind::App, Name(), std::move(fun), std::move(arg), size));
}

Expr::~Expr() {
  // Detach children onto an explicit stack; a recursive teardown would
  // overflow on spine-shaped trees.
  std::vector<ExprPtr> pending;
  auto grab = [&pending](ExprPtr& p) {
    if (p && p.use_count() == 1)
      pending.push_back(std::move(p));
    else
      p.reset();
  };
  grab(first_);
  grab(second_);
  while (!pending.empty()) {
    ExprPtr p = std::move(pending.back());
    pending.pop_back();
    grab(p->first_);
    grab(p->second_);
  }
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(int line_, int col_, const std::string& what_)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                         std::to_string(col_) + ": " + what_),
      line(line_), col(col_) {}

namespace {

struct Token {
  enum Type { LParen, RParen, Ident, End } type;
  std::string text;
  int line;
  int col;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_part(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Token::End, "", line, col};
    char c = text_[pos_];
    if (c == '(') { advance(); return {Token::LParen, "(", line, col}; }
    if (c == ')') { advance(); return {Token::RParen, ")", line, col}; }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && ident_part(text_[pos_])) advance();
      return {Token::Ident, std::string(text_.substr(start, pos_ - start)), line, col};
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }

private:
  void advance() {
    if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool reserved(const std::string& s) { return s == "lam" || s == "app"; }

class Parser {
public:
  explicit Parser(std::string_view text) : lexer_(text) { bump(); }

  ExprPtr parse_top() {
    ExprPtr e = parse_expr();
    if (tok_.type != Token::End)
      throw ParseError(tok_.line, tok_.col, "trailing input after expression");
    return e;
  }

private:
  void bump() { tok_ = lexer_.next(); }

  Name expect_var_ident(const char* what) {
    if (tok_.type != Token::Ident)
      throw ParseError(tok_.line, tok_.col,
                       std::string("expected ") + what + ", got '" + tok_.text + "'");
    if (reserved(tok_.text))
      throw ParseError(tok_.line, tok_.col,
                       "reserved word '" + tok_.text + "' used as variable");
    Name n = Name::intern(tok_.text);
    bump();
    return n;
  }

  ExprPtr parse_expr() {
    switch (tok_.type) {
      case Token::Ident:
        return Expr::var(expect_var_ident("identifier"));
      case Token::LParen: {
        bump();
        if (tok_.type != Token::Ident || !reserved(tok_.text))
          throw ParseError(tok_.line, tok_.col,
                           "expected 'lam' or 'app' after '('");
        bool is_lam = tok_.text == "lam";
        bump();
        ExprPtr e;
        if (is_lam) {
          Name binder = expect_var_ident("binder");
          e = Expr::lam(binder, parse_expr());
        } else {
          ExprPtr f = parse_expr();
          e = Expr::app(std::move(f), parse_expr());
        }
        if (tok_.type != Token::RParen)
          throw ParseError(tok_.line, tok_.col, "expected ')'");
        bump();
        return e;
      }
      case Token::RParen:
        throw ParseError(tok_.line, tok_.col, "unexpected ')'");
      case Token::End:
        throw ParseError(tok_.line, tok_.col, "unexpected end of input");
    }
    throw ParseError(tok_.line, tok_.col, "unreachable");
  }

  Lexer lexer_;
  Token tok_;
};

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(text).parse_top(); }

// ---------------------------------------------------------------------------
// Printing (explicit stack; safe for spine-deep trees from any caller)

std::string to_text(const Expr& e) {
  std::string out;
  out.reserve(e.size() * 4);
  struct Item {
    const Expr* node;  // nullptr means emit `lit`
    const char* lit;
  };
  std::vector<Item> stack{{&e, nullptr}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (!it.node) {
      out += it.lit;
      continue;
    }
    const Expr& n = *it.node;
    switch (n.kind()) {
      case Expr::Kind::Var:
        out += n.name().str();
        break;
      case Expr::Kind::Lam:
        out += "(lam ";
        out += n.name().str();
        out += ' ';
        stack.push_back({nullptr, ")"});
        stack.push_back({n.body().get(), nullptr});
        break;
      case Expr::Kind::App:
        out += "(app ";
        stack.push_back({nullptr, ")"});
        stack.push_back({n.arg().get(), nullptr});
        stack.push_back({nullptr, " "});
        stack.push_back({n.fun().get(), nullptr});
        break;
    }
  }
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  std::vector<std::pair<const Expr*, const Expr*>> stack{{&a, &b}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (x->kind() != y->kind() || x->size() != y->size()) return false;
    switch (x->kind()) {
      case Expr::Kind::Var:
        if (x->name() != y->name()) return false;
        break;
      case Expr::Kind::Lam:
        if (x->name() != y->name()) return false;
        stack.push_back({x->body().get(), y->body().get()});
        break;
      case Expr::Kind::App:
        stack.push_back({x->fun().get(), y->fun().get()});
        stack.push_back({x->arg().get(), y->arg().get()});
        break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// uniquify

namespace {

void collect_free(const Expr& e, std::vector<Name>& out) {
  // Scoped walk; binder occurrences are not free.
  std::unordered_map<std::uint32_t, int> bound;
  std::unordered_set<std::uint32_t> seen;
  struct Frame { const Expr* node; int stage; };
  std::vector<Frame> stack{{&e, 0}};
  while (!stack.empty()) {
    auto [node, stage] = stack.back();
    stack.pop_back();
    switch (node->kind()) {
      case Expr::Kind::Var:
        if (bound[node->name().id()] == 0 && seen.insert(node->name().id()).second)
          out.push_back(node->name());
        break;
      case Expr::Kind::Lam:
        if (stage == 0) {
          ++bound[node->name().id()];
          stack.push_back({node, 1});
          stack.push_back({node->body().get(), 0});
        } else {
          --bound[node->name().id()];
        }
        break;
      case Expr::Kind::App:
        stack.push_back({node->arg().get(), 0});
        stack.push_back({node->fun().get(), 0});
        break;
    }
  }
}

class Renamer {
public:
  Renamer(std::unordered_set<std::string> avoid_texts, std::uint64_t start)
      : avoid_(std::move(avoid_texts)), counter_(start) {}

  ExprPtr run(const ExprPtr& e) {
    switch (e->kind()) {
      case Expr::Kind::Var: {
        auto it = env_.find(e->name().id());
        if (it == env_.end() || it->second.empty()) return e;  // free: untouched
        return Expr::var(it->second.back());
      }
      case Expr::Kind::Lam: {
        Name fresh = next_name();
        env_[e->name().id()].push_back(fresh);
        ExprPtr body = run(e->body());
        env_[e->name().id()].pop_back();
        return Expr::lam(fresh, std::move(body));
      }
      case Expr::Kind::App: {
        ExprPtr f = run(e->fun());
        return Expr::app(std::move(f), run(e->arg()));
      }
    }
    return nullptr;
  }

private:
  Name next_name() {
    for (;;) {
      std::string candidate = "v" + std::to_string(counter_++);
      if (!avoid_.count(candidate)) return Name::intern(candidate);
    }
  }

  std::unordered_set<std::string> avoid_;
  std::uint64_t counter_;
  std::unordered_map<std::uint32_t, std::vector<Name>> env_;
};

}  // namespace

ExprPtr uniquify(const ExprPtr& e) {
  std::vector<Name> free;
  collect_free(*e, free);
  std::unordered_set<std::string> avoid;
  for (Name n : free) avoid.insert(n.str());
  return Renamer(std::move(avoid), 0).run(e);
}

ExprPtr uniquify_fresh(const ExprPtr& e, const std::vector<Name>& avoid) {
  std::unordered_set<std::string> avoid_texts;
  std::uint64_t start = 0;
  auto note = [&](Name n) {
    const std::string& s = n.str();
    avoid_texts.insert(s);
    if (s.size() > 1 && s[0] == 'v' &&
        std::all_of(s.begin() + 1, s.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      std::uint64_t k = std::stoull(s.substr(1));
      start = std::max(start, k + 1);
    }
  };
  for (Name n : avoid) note(n);
  for (Name n : all_names(*e)) note(n);
  return Renamer(std::move(avoid_texts), start).run(e);
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

// Binders on each side map to a shared lambda level; two variables agree when
// both are bound at the same level or both are the same free name.
class AlphaCmp {
public:
  bool run(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind() || a.size() != b.size()) return false;
    switch (a.kind()) {
      case Expr::Kind::Var: {
        const std::vector<std::uint64_t>* la = levels(enva_, a.name());
        const std::vector<std::uint64_t>* lb = levels(envb_, b.name());
        bool bound_a = la && !la->empty();
        bool bound_b = lb && !lb->empty();
        if (bound_a != bound_b) return false;
        if (bound_a) return la->back() == lb->back();
        return a.name() == b.name();
      }
      case Expr::Kind::Lam: {
        ++level_;
        enva_[a.name().id()].push_back(level_);
        envb_[b.name().id()].push_back(level_);
        bool ok = run(*a.body(), *b.body());
        enva_[a.name().id()].pop_back();
        envb_[b.name().id()].pop_back();
        return ok;
      }
      case Expr::Kind::App:
        return run(*a.fun(), *b.fun()) && run(*a.arg(), *b.arg());
    }
    return false;
  }

private:
  using Env = std::unordered_map<std::uint32_t, std::vector<std::uint64_t>>;

  static const std::vector<std::uint64_t>* levels(const Env& env, Name n) {
    auto it = env.find(n.id());
    return it == env.end() ? nullptr : &it->second;
  }

  Env enva_, envb_;
  std::uint64_t level_ = 0;
};

}  // namespace

bool alpha_equiv(const Expr& a, const Expr& b) { return AlphaCmp().run(a, b); }

std::vector<Name> free_vars(const Expr& e) {
  std::vector<Name> out;
  collect_free(e, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Name> all_names(const Expr& e) {
  std::vector<Name> out;
  std::unordered_set<std::uint32_t> seen;
  std::vector<const Expr*> stack{&e};
  while (!stack.empty()) {
    const Expr* n = stack.back();
    stack.pop_back();
    switch (n->kind()) {
      case Expr::Kind::Var:
        if (seen.insert(n->name().id()).second) out.push_back(n->name());
        break;
      case Expr::Kind::Lam:
        if (seen.insert(n->name().id()).second) out.push_back(n->name());
        stack.push_back(n->body().get());
        break;
      case Expr::Kind::App:
        stack.push_back(n->arg().get());
        stack.push_back(n->fun().get());
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Paths

std::string Path::str() const {
  if (steps.empty()) return "-";
  std::string s;
  s.reserve(steps.size());
  for (Step st : steps)
    s += st == Step::Body ? 'b' : st == Step::Fun ? 'f' : 'a';
  return s;
}

Path Path::parse(std::string_view text) {
  Path p;
  if (text == "-") return p;
  p.steps.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'b': p.steps.push_back(Step::Body); break;
      case 'f': p.steps.push_back(Step::Fun); break;
      case 'a': p.steps.push_back(Step::Arg); break;
      default:
        throw std::invalid_argument(std::string("invalid path character '") + c + "'");
    }
  }
  return p;
}

ExprPtr resolve(const ExprPtr& root, const Path& path) {
  ExprPtr cur = root;
  for (Step s : path.steps) {
    switch (s) {
      case Step::Body:
        if (!cur->is_lam()) throw std::invalid_argument("path step 'b' at non-lam node");
        cur = cur->body();
        break;
      case Step::Fun:
        if (!cur->is_app()) throw std::invalid_argument("path step 'f' at non-app node");
        cur = cur->fun();
        break;
      case Step::Arg:
        if (!cur->is_app()) throw std::invalid_argument("path step 'a' at non-app node");
        cur = cur->arg();
        break;
    }
  }
  return cur;
}

std::vector<std::pair<Path, ExprPtr>> subexpressions(const ExprPtr& e) {
  std::vector<std::pair<Path, ExprPtr>> out;
  out.reserve(e->size());
  struct Frame { ExprPtr node; Path path; };
  std::vector<Frame> stack{{e, {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    switch (f.node->kind()) {
      case Expr::Kind::Var:
        break;
      case Expr::Kind::Lam: {
        Path p = f.path;
        p.steps.push_back(Step::Body);
        stack.push_back({f.node->body(), std::move(p)});
        break;
      }
      case Expr::Kind::App: {
        Path pa = f.path;
        pa.steps.push_back(Step::Arg);
        stack.push_back({f.node->arg(), std::move(pa)});
        Path pf = f.path;
        pf.steps.push_back(Step::Fun);
        stack.push_back({f.node->fun(), std::move(pf)});
        break;
      }
    }
    out.emplace_back(std::move(f.path), std::move(f.node));
  }
  return out;
}

std::vector<Path> preorder_paths(const Expr& e) {
  std::vector<Path> out;
  out.reserve(e.size());
  struct Frame { const Expr* node; Path path; };
  std::vector<Frame> stack{{&e, {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    switch (f.node->kind()) {
      case Expr::Kind::Var:
        break;
      case Expr::Kind::Lam: {
        Path p = f.path;
        p.steps.push_back(Step::Body);
        stack.push_back({f.node->body().get(), std::move(p)});
        break;
      }
      case Expr::Kind::App: {
        Path pa = f.path;
        pa.steps.push_back(Step::Arg);
        stack.push_back({f.node->arg().get(), std::move(pa)});
        Path pf = f.path;
        pf.steps.push_back(Step::Fun);
        stack.push_back({f.node->fun().get(), std::move(pf)});
        break;
      }
    }
    out.push_back(std::move(f.path));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force equivalence classes

namespace {

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
  std::vector<std::uint32_t> parent;
};

void preorder_nodes(const Expr& e, std::vector<const Expr*>& out) {
  std::vector<const Expr*> stack{&e};
  while (!stack.empty()) {
    const Expr* n = stack.back();
    stack.pop_back();
    out.push_back(n);
    switch (n->kind()) {
      case Expr::Kind::Var:
        break;
      case Expr::Kind::Lam:
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

std::vector<std::vector<std::uint32_t>> oracle_classes(const ExprPtr& e) {
  std::vector<const Expr*> nodes;
  nodes.reserve(e->size());
  preorder_nodes(*e, nodes);
  std::uint32_t n = static_cast<std::uint32_t>(nodes.size());

  // Alpha-equivalent terms have equal node counts, so only same-size pairs
  // need the full comparison.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_size;
  for (std::uint32_t i = 0; i < n; ++i) by_size[nodes[i]->size()].push_back(i);

  UnionFind uf(n);
  for (auto& [size, bucket] : by_size) {
    (void)size;
    for (std::size_t i = 0; i < bucket.size(); ++i)
      for (std::size_t j = i + 1; j < bucket.size(); ++j) {
        if (uf.find(bucket[i]) == uf.find(bucket[j])) continue;
        if (alpha_equiv(*nodes[bucket[i]], *nodes[bucket[j]]))
          uf.unite(bucket[j], bucket[i]);
      }
  }

  std::unordered_map<std::uint32_t, std::uint32_t> group_of_root;
  std::vector<std::vector<std::uint32_t>> groups;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t root = uf.find(i);
    auto it = group_of_root.find(root);
    if (it == group_of_root.end()) {
      group_of_root.emplace(root, static_cast<std::uint32_t>(groups.size()));
      groups.push_back({i});
    } else {
      groups[it->second].push_back(i);
    }
  }
  return groups;  // indices ascend within and across groups by construction
}

}  // namespace alphahash
