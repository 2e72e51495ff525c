#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "alphahash/baselines.hpp"
#include "alphahash/esummary_ref.hpp"
#include "alphahash/esummary_tagged.hpp"
#include "alphahash/expr.hpp"
#include "alphahash/hashing.hpp"
#include "alphahash/incremental.hpp"
#include "alphahash/lab.hpp"
#include "alphahash/linear.hpp"
#include "alphahash/util.hpp"
#include "alphahash/vectors.hpp"

namespace ah = alphahash;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint64_t> parse_size_list(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw InputError("empty size list");
  return out;
}

std::vector<ah::HashCode> run_algo(const ah::HashContext& ctx, ah::Algo algo,
                                   ah::Backend backend, const ah::Expr& e) {
  switch (algo) {
    case ah::Algo::Structural: return ah::structural_hash_all(ctx, e);
    case ah::Algo::DeBruijn: return ah::debruijn_hash_all(ctx, e);
    case ah::Algo::LocallyNameless: return ah::locally_nameless_hash_all(ctx, e);
    case ah::Algo::Alpha:
      return backend == ah::Backend::Tagged ? ah::hash_all(ctx, e)
                                            : ah::linear_hash_all(ctx, e);
  }
  return {};
}

int cmd_uniquify(const std::string& file) {
  std::cout << ah::to_text(*ah::uniquify(ah::parse(read_input(file)))) << "\n";
  return 0;
}

int cmd_hash(const std::string& file, const std::string& algo_s,
             const std::string& backend_s, std::uint64_t seed, int width) {
  ah::Algo algo = *ah::algo_from_name(algo_s);
  ah::Backend backend = *ah::backend_from_name(backend_s);
  ah::ExprPtr e = ah::uniquify(ah::parse(read_input(file)));
  ah::HashContext ctx(seed, width);
  std::vector<ah::HashCode> hashes = run_algo(ctx, algo, backend, *e);
  std::vector<ah::Path> paths = ah::preorder_paths(*e);
  for (std::size_t i = 0; i < hashes.size(); ++i)
    std::cout << paths[i].str() << " " << ah::to_hex(hashes[i], width) << "\n";
  return 0;
}

int cmd_classes(const std::string& file, const std::string& backend_s,
                std::uint64_t seed, int width) {
  ah::Backend backend = *ah::backend_from_name(backend_s);
  ah::ExprPtr e = ah::uniquify(ah::parse(read_input(file)));
  ah::HashContext ctx(seed, width);
  std::vector<ah::HashCode> hashes = run_algo(ctx, ah::Algo::Alpha, backend, *e);
  std::vector<ah::Path> paths = ah::preorder_paths(*e);
  auto groups = ah::group_by_hash(hashes);
  std::sort(groups.begin(), groups.end(),
            [&](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return hashes[a[0]] < hashes[b[0]];
            });
  for (const auto& g : groups) {
    std::cout << "class " << ah::to_hex(hashes[g[0]], width) << ": " << g.size()
              << " members:";
    for (std::uint32_t i : g) std::cout << " " << paths[i].str();
    std::cout << "\n";
  }
  return 0;
}

int cmd_rebuild_check(const std::string& file) {
  ah::ExprPtr e = ah::uniquify(ah::parse(read_input(file)));
  ah::ExprPtr ref = ah::rebuild_ref(ah::summarise_ref(*e));
  ah::ExprPtr tag = ah::rebuild_tagged(ah::summarise_tagged(*e));
  bool ok_ref = ah::alpha_equiv(*e, *ref);
  bool ok_tag = ah::alpha_equiv(*e, *tag);
  std::cout << "reference summary roundtrip: " << (ok_ref ? "ok" : "FAILED") << "\n";
  std::cout << "tagged summary roundtrip:    " << (ok_tag ? "ok" : "FAILED") << "\n";
  if (!ok_ref || !ok_tag) {
    std::cerr << "rebuild-check failed on " << e->size() << " nodes\n";
    return 2;
  }
  std::cout << "rebuild-check: ok (" << e->size() << " nodes)\n";
  return 0;
}

int cmd_bench(const std::string& algos_s, const std::string& family,
              const std::string& sizes_s, int reps, std::uint64_t seed,
              const std::string& backend_s) {
  std::vector<ah::Algo> algos;
  std::stringstream ss(algos_s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = ah::algo_from_name(item);
    if (!a) throw InputError("unknown algorithm '" + item + "'");
    algos.push_back(*a);
  }
  if (algos.empty()) throw InputError("no algorithms given");
  std::vector<ah::BenchRow> rows =
      ah::bench(algos, family, parse_size_list(sizes_s), reps, seed,
                *ah::backend_from_name(backend_s));
  std::cout << "algo,family,n,rep,nanos\n";
  for (const ah::BenchRow& r : rows)
    std::cout << ah::algo_name(r.algo) << "," << r.family << "," << r.n << ","
              << r.rep << "," << r.nanos << "\n";
  return 0;
}

int cmd_collide(const std::string& mode_s, const std::string& ns, std::uint64_t pairs,
                std::uint64_t seed, int width) {
  ah::CollideMode mode = mode_s == "random" ? ah::CollideMode::Random
                                            : ah::CollideMode::Adversarial;
  ah::HashContext ctx(seed, width);
  std::cout << "mode,width,n,pairs,collisions,collisions_per_65536\n";
  for (std::uint64_t n : parse_size_list(ns)) {
    ah::CollideResult r = ah::collide(ctx, mode, n, pairs, seed);
    char per[32];
    std::snprintf(per, sizeof(per), "%.6g", r.per_65536());
    std::cout << mode_s << "," << width << "," << n << "," << r.pairs << ","
              << r.collisions << "," << per << "\n";
  }
  return 0;
}

int cmd_rewrite(const std::string& file, const std::string& at_s,
                const std::string& with_file, std::uint64_t seed, int width) {
  ah::ExprPtr e = ah::uniquify(ah::parse(read_input(file)));
  ah::Path at = ah::Path::parse(at_s);
  ah::ExprPtr target = ah::resolve(e, at);  // validates the path up front
  ah::ExprPtr replacement =
      ah::uniquify_fresh(ah::parse(read_input(with_file)), ah::all_names(*e));

  ah::HashContext ctx(seed, width);
  ah::AnnotatedExpr before = ah::annotate(ctx, e);
  ah::AnnotatedExpr after = ah::rewrite(ctx, before, at, replacement);

  std::cout << "rewrote " << at.str() << ": " << target->size()
            << " nodes replaced by " << replacement->size() << " nodes\n";
  // Spine report, root first: these are the only pre-existing nodes whose
  // hashes can change.
  const ah::AnnNode* old_node = before.root.get();
  const ah::AnnNode* new_node = after.root.get();
  for (std::size_t i = 0;; ++i) {
    ah::Path prefix{std::vector<ah::Step>(at.steps.begin(), at.steps.begin() + i)};
    std::cout << prefix.str() << " " << ah::to_hex(old_node->hash, width) << " -> "
              << ah::to_hex(new_node->hash, width)
              << (old_node->hash == new_node->hash ? " (unchanged)" : "") << "\n";
    if (i == at.steps.size()) break;
    bool second = at.steps[i] == ah::Step::Arg;
    old_node = (second ? old_node->second : old_node->first).get();
    new_node = (second ? new_node->second : new_node->first).get();
  }
  std::cout << ah::to_text(*after.root->expr) << "\n";
  return 0;
}

struct Check {
  std::string label;
  bool ok;
};

int cmd_selfcheck(std::uint64_t seed) {
  ah::HashContext ctx(seed, 64);
  std::vector<Check> checks;
  auto add = [&](const std::string& label, bool ok) { checks.push_back({label, ok}); };

  for (const ah::VectorCase& vc : ah::builtin_vectors()) {
    ah::ExprPtr e = ah::uniquify(ah::parse(vc.text));
    ah::ExprPtr a = ah::resolve(e, ah::Path::parse(vc.path_a));
    ah::ExprPtr b = ah::resolve(e, ah::Path::parse(vc.path_b));
    std::string name = vc.name;

    add(name + " oracle", ah::alpha_equiv(*a, *b) == vc.equivalent);

    // Node hashes come from the single pass over the whole expression: the
    // de Bruijn failure modes live in that context-dependent pass and vanish
    // if the subterms are pulled out and hashed in isolation.
    std::vector<ah::Path> paths = ah::preorder_paths(*e);
    std::size_t ia = paths.size(), ib = paths.size();
    ah::Path pa = ah::Path::parse(vc.path_a), pb = ah::Path::parse(vc.path_b);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (paths[i] == pa) ia = i;
      if (paths[i] == pb) ib = i;
    }
    auto verdict = [&](const std::vector<ah::HashCode>& hs) { return hs[ia] == hs[ib]; };
    add(name + " structural",
        verdict(ah::structural_hash_all(ctx, *e)) == vc.structural_equal);
    add(name + " debruijn",
        verdict(ah::debruijn_hash_all(ctx, *e)) == vc.debruijn_equal);
    add(name + " locally-nameless",
        verdict(ah::locally_nameless_hash_all(ctx, *e)) == vc.equivalent);
    add(name + " alpha-tagged", verdict(ah::hash_all(ctx, *e)) == vc.equivalent);
    add(name + " alpha-linear", verdict(ah::linear_hash_all(ctx, *e)) == vc.equivalent);
    add(name + " rebuild-ref",
        ah::alpha_equiv(*ah::rebuild_ref(ah::summarise_ref(*e)), *e));
    add(name + " rebuild-tagged",
        ah::alpha_equiv(*ah::rebuild_tagged(ah::summarise_tagged(*e)), *e));
    add(name + " classes-vs-oracle",
        ah::group_by_hash(ah::hash_all(ctx, *e)) == ah::oracle_classes(e));
  }

  int passed = 0;
  for (const Check& c : checks) {
    std::cout << (c.ok ? "PASS " : "FAIL ") << c.label << "\n";
    passed += c.ok;
  }
  std::cout << "selfcheck: " << passed << "/" << checks.size() << " checks passed\n";
  return passed == static_cast<int>(checks.size()) ? 0 : 2;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"hash every subexpression of a lambda term modulo alpha-equivalence"};
  app.require_subcommand(1);

  std::string file, algo = "alpha", backend = "tagged", family = "unbalanced";
  std::string sizes = "1024", mode = "random", at_path, with_file;
  std::uint64_t seed = kDefaultSeed, pairs = 65536;
  int width = 64, reps = 5;

  auto add_ctx_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "hash context seed")->capture_default_str();
    sub->add_option("--width", width, "hash width in bits")
        ->check(CLI::IsMember({8, 16, 32, 64}))
        ->capture_default_str();
  };

  CLI::App* uniq = app.add_subcommand("uniquify", "rename binders apart");
  uniq->add_option("file", file, "expression file ('-' for stdin)")->required();

  CLI::App* hash = app.add_subcommand("hash", "print '<path> <hex>' per node");
  hash->add_option("file", file)->required();
  hash->add_option("--algo", algo, "structural|debruijn|locally-nameless|alpha")
      ->check(CLI::IsMember({"structural", "debruijn", "locally-nameless", "alpha"}))
      ->capture_default_str();
  hash->add_option("--backend", backend, "tagged|linear")
      ->check(CLI::IsMember({"tagged", "linear"}))
      ->capture_default_str();
  add_ctx_flags(hash);

  CLI::App* classes = app.add_subcommand("classes", "alpha-equivalence classes");
  classes->add_option("file", file)->required();
  classes->add_option("--backend", backend)->check(CLI::IsMember({"tagged", "linear"}));
  add_ctx_flags(classes);

  CLI::App* rb = app.add_subcommand("rebuild-check", "verify summary roundtrips");
  rb->add_option("file", file)->required();

  CLI::App* bench = app.add_subcommand("bench", "timing harness (CSV on stdout)");
  bench->add_option("--algos", algo, "comma list of algorithms")->required();
  bench->add_option("--family", family, "balanced|unbalanced")
      ->check(CLI::IsMember({"balanced", "unbalanced"}))
      ->capture_default_str();
  bench->add_option("--sizes", sizes, "comma list of node counts")->required();
  bench->add_option("--reps", reps)->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();
  bench->add_option("--backend", backend)->check(CLI::IsMember({"tagged", "linear"}));

  CLI::App* collide = app.add_subcommand("collide", "collision counts (CSV on stdout)");
  collide->add_option("--mode", mode, "random|adversarial")
      ->check(CLI::IsMember({"random", "adversarial"}))
      ->capture_default_str();
  collide->add_option("--n", sizes, "comma list of expression sizes")->required();
  collide->add_option("--pairs", pairs)->capture_default_str();
  add_ctx_flags(collide);

  CLI::App* rewrite = app.add_subcommand("rewrite", "replace a subtree incrementally");
  rewrite->add_option("file", file)->required();
  rewrite->add_option("--at", at_path, "path of the subtree to replace")->required();
  rewrite->add_option("--with", with_file, "file with the replacement")->required();
  add_ctx_flags(rewrite);

  CLI::App* self = app.add_subcommand("selfcheck", "run the built-in vector suite");
  self->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (uniq->parsed()) return cmd_uniquify(file);
    if (hash->parsed()) return cmd_hash(file, algo, backend, seed, width);
    if (classes->parsed()) return cmd_classes(file, backend, seed, width);
    if (rb->parsed()) return cmd_rebuild_check(file);
    if (bench->parsed()) return cmd_bench(algo, family, sizes, reps, seed, backend);
    if (collide->parsed()) return cmd_collide(mode, sizes, pairs, seed, width);
    if (rewrite->parsed()) return cmd_rewrite(file, at_path, with_file, seed, width);
    if (self->parsed()) return cmd_selfcheck(seed);
  } catch (const ah::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ah::IntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  int rc = 1;
  ah::call_with_stack(ah::kBigStack, [&] { rc = run_cli(argc, argv); });
  return rc;
}
