#ifndef ALPHAHASH_EXPR_HPP
#define ALPHAHASH_EXPR_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace alphahash {

// Interned identifier. Comparison is an O(1) id comparison; the text lives in
// a session-wide table. Interning is guarded by a shared mutex, so names may
// be created and read from multiple threads.
class Name {
public:
  Name() : id_(0) {}
  static Name intern(std::string_view text);

  std::uint32_t id() const { return id_; }
  const std::string& str() const;

  friend bool operator==(Name a, Name b) { return a.id_ == b.id_; }
  friend bool operator!=(Name a, Name b) { return a.id_ != b.id_; }
  friend bool operator<(Name a, Name b) { return a.id_ < b.id_; }

private:
  explicit Name(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

class Expr;
using ExprPtr = std::shared_ptr<Expr>;

// Immutable lambda-calculus node: Var / Lam / App. Construct through the
// factories; trees share subterms freely. Node count is cached.
class Expr {
public:
  enum class Kind : std::uint8_t { Var, Lam, App };

  static ExprPtr var(Name name);
  static ExprPtr lam(Name binder, ExprPtr body);
  static ExprPtr app(ExprPtr fun, ExprPtr arg);

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_lam() const { return kind_ == Kind::Lam; }
  bool is_app() const { return kind_ == Kind::App; }

  // Var name, or Lam binder.
  Name name() const { return name_; }
  const ExprPtr& body() const { return first_; }
  const ExprPtr& fun() const { return first_; }
  const ExprPtr& arg() const { return second_; }

  std::uint64_t size() const { return size_; }

  ~Expr();  // iterative teardown; trees can be as deep as they are large
  Expr(const Expr&) = delete;
  Expr& operator=(const Expr&) = delete;

private:
  Expr(Kind kind, Name name, ExprPtr first, ExprPtr second, std::uint64_t size)
      : kind_(kind), name_(name), first_(std::move(first)),
        second_(std::move(second)), size_(size) {}

  Kind kind_;
  Name name_;
  ExprPtr first_;
  ExprPtr second_;
  std::uint64_t size_;
};

struct ParseError : std::runtime_error {
  ParseError(int line, int col, const std::string& what);
  int line;
  int col;
};

// One step down the tree. Paths print as strings over {b,f,a}; the empty
// path prints as "-".
enum class Step : std::uint8_t { Body, Fun, Arg };

struct Path {
  std::vector<Step> steps;

  std::string str() const;
  static Path parse(std::string_view text);  // throws std::invalid_argument

  friend bool operator==(const Path& a, const Path& b) { return a.steps == b.steps; }
};

ExprPtr parse(std::string_view text);
std::string to_text(const Expr& e);

// Structural equality, names included.
bool equal(const Expr& a, const Expr& b);

// Renames binders to v0, v1, ... in preorder, skipping any name that occurs
// free in e. Free variables are untouched.
ExprPtr uniquify(const ExprPtr& e);

// uniquify with the counter started past every v<k> in `avoid` and candidates
// skipped while they clash with `avoid`; used to prepare rewrite replacements
// whose binders must be disjoint from an existing tree.
ExprPtr uniquify_fresh(const ExprPtr& e, const std::vector<Name>& avoid);

bool alpha_equiv(const Expr& a, const Expr& b);

// Free variables, deduplicated, sorted by id.
std::vector<Name> free_vars(const Expr& e);

// Every name that occurs anywhere (binders and variables), deduplicated.
std::vector<Name> all_names(const Expr& e);

// Resolves a path from root; throws std::invalid_argument if a step does not
// match the node shape.
ExprPtr resolve(const ExprPtr& root, const Path& path);

// All nodes in preorder (node before children; fun before arg), paired with
// their paths. length == size(e).
std::vector<std::pair<Path, ExprPtr>> subexpressions(const ExprPtr& e);

std::vector<Path> preorder_paths(const Expr& e);

// Partition of the preorder node indices of e into alpha-equivalence classes
// by brute-force pairwise comparison. Groups are ordered by smallest member;
// members ascend. Ground truth for everything downstream; quadratic.
std::vector<std::vector<std::uint32_t>> oracle_classes(const ExprPtr& e);

}  // namespace alphahash

#endif
