#include <doctest.h>

#include <chrono>
#include <random>

#include "cdle/bohm.hpp"
#include "cdle/check.hpp"
#include "support.hpp"

using namespace cdle;

namespace {

constexpr int kCases = 1000;
constexpr double kSuiteSeconds = 2.0;
const Defs kNoDefs;

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  bool chance(int percent) { return below(100) < percent; }
  template <class T>
  const T& pick(const std::vector<T>& xs) { return xs[below(static_cast<int>(xs.size()))]; }
};

// ---------------------------------------------------------------- pure terms

PureP gen_pure(Gen& g, int budget, int scope, bool open) {
  auto leaf = [&]() -> PureP {
    if (scope > 0 && (!open || g.chance(75))) return p_bvar(g.below(scope));
    if (open) return p_fvar(g.chance(50) ? "a" : "b");
    return p_lam("x", p_bvar(0));
  };
  if (budget <= 1 || (budget <= 3 && g.chance(40))) return leaf();
  if (budget < 3 || g.chance(40))
    return p_lam(std::string(1, static_cast<char>('p' + scope % 8)), gen_pure(g, budget - 1, scope + 1, open));
  int left = 1 + g.below(budget - 2);
  return p_app(gen_pure(g, left, scope, open), gen_pure(g, budget - 1 - left, scope, open));
}

// Random term of at most `max_size` nodes.
PureP small_pure(Gen& g, std::size_t max_size, bool open) {
  for (;;) {
    PureP t = gen_pure(g, static_cast<int>(max_size), 0, open);
    if (pure_size(t) <= max_size) return t;
  }
}

// Closed normal form, or null when the candidate did not normalize quickly.
PureP closed_normal(Gen& g, std::size_t max_size) {
  Reduced r = normalize_beta_eta(small_pure(g, max_size, false), kNoDefs, 2000);
  return r.exhausted ? nullptr : r.term;
}

bool mentions(const PureP& t, int k) {
  switch (t->tag) {
    case PTag::BVar: return t->index == k;
    case PTag::FVar: return false;
    case PTag::Lam: return mentions(t->f, k + 1);
    case PTag::App: return mentions(t->f, k) || mentions(t->a, k);
  }
  return false;
}

bool redex_free(const PureP& t) {
  switch (t->tag) {
    case PTag::BVar:
    case PTag::FVar:
      return true;
    case PTag::Lam: {
      const PureP& b = t->f;
      if (b->tag == PTag::App && b->a->tag == PTag::BVar && b->a->index == 0 && !mentions(b->f, 0)) return false;
      return redex_free(b);
    }
    case PTag::App:
      return t->f->tag != PTag::Lam && redex_free(t->f) && redex_free(t->a);
  }
  return false;
}

// Independent applicative-order normalizer with its own de Bruijn
// substitution, used as the confluence oracle.
struct Innermost {
  static constexpr std::size_t kMaxSize = 20000;
  std::uint64_t fuel;
  bool out = false;

  static PureP lift(const PureP& t, int d, int cutoff) {
    switch (t->tag) {
      case PTag::BVar: return t->index >= cutoff ? p_bvar(t->index + d) : t;
      case PTag::FVar: return t;
      case PTag::Lam: return p_lam(t->name, lift(t->f, d, cutoff + 1));
      case PTag::App: return p_app(lift(t->f, d, cutoff), lift(t->a, d, cutoff));
    }
    return t;
  }

  static PureP put(const PureP& t, int j, const PureP& v) {
    switch (t->tag) {
      case PTag::BVar:
        if (t->index == j) return lift(v, j, 0);
        return t->index > j ? p_bvar(t->index - 1) : t;
      case PTag::FVar: return t;
      case PTag::Lam: return p_lam(t->name, put(t->f, j + 1, v));
      case PTag::App: return p_app(put(t->f, j, v), put(t->a, j, v));
    }
    return t;
  }

  PureP run(const PureP& t) {
    if (out) return t;
    switch (t->tag) {
      case PTag::BVar:
      case PTag::FVar:
        return t;
      case PTag::Lam:
        return p_lam(t->name, run(t->f));
      case PTag::App: {
        PureP f = run(t->f);
        PureP a = run(t->a);
        if (f->tag != PTag::Lam || out) return p_app(f, a);
        if (fuel == 0 || f->size + a->size > kMaxSize) {
          out = true;
          return p_app(f, a);
        }
        --fuel;
        PureP r = run(put(f->f, 0, a));
        if (r->size > kMaxSize) out = true;
        return r;
      }
    }
    return t;
  }
};

// A term βη-equal to `t` by construction.
PureP equal_variant(Gen& g, const PureP& t) {
  switch (g.below(4)) {
    case 0: return p_lam("z", p_app(shift(t, 1), p_bvar(0)));
    case 1: return p_app(p_lam("v", shift(t, 1)), small_pure(g, 5, false));
    case 2: return p_app(p_lam("v", p_bvar(0)), t);
    default: {
      Reduced r = normalize_beta_eta(t, kNoDefs, 2000);
      return r.exhausted ? t : r.term;
    }
  }
}

// ----------------------------------------------------------- annotated terms

const std::vector<std::string> kNames = {"x", "y", "z", "w"};

struct AnnGen {
  Gen& g;

  NodeP type(int budget) {
    if (budget <= 1) return g.chance(50) ? mk_var("T") : mk_var("x");
    switch (g.below(5)) {
      case 0: return mk_var("T");
      case 1: return mk_binder(Tag::All, "X", mk_star(), mk_var("X"));
      case 2: return mk_binder(Tag::Pi, g.pick(kNames), type(budget / 2), type(budget / 2));
      case 3: return mk_eq(term(budget / 2, kNames), term(budget / 2, kNames));
      default: return mk_binder(Tag::Iota, g.pick(kNames), type(budget / 2), type(budget / 2));
    }
  }

  static std::vector<std::string> without(std::vector<std::string> xs, const std::string& n) {
    std::erase(xs, n);
    return xs;
  }

  // `relevant` lists the names that may occur in computational positions;
  // names bound by Λ or by a ρ guide are withheld from it.
  NodeP term(int budget, const std::vector<std::string>& relevant) {
    auto leaf = [&] {
      if (!relevant.empty() && g.chance(80)) return mk_var(g.pick(relevant));
      return mk_var(g.chance(50) ? "a" : "b");
    };
    if (budget <= 1) return leaf();
    int half = std::max(1, (budget - 1) / 2);
    std::string n = g.pick(kNames);
    std::vector<std::string> with_n = relevant;
    with_n.push_back(n);
    switch (g.below(17)) {
      case 0:
      case 1: return mk_lam(n, g.chance(50) ? type(3) : nullptr, term(budget - 1, with_n));
      case 2: return mk_lame(n, g.chance(50) ? mk_star() : type(3), term(budget - 1, without(relevant, n)));
      case 3:
      case 4: return mk_app(term(half, relevant), term(half, relevant));
      case 5: return mk_appe(term(half, relevant), term(half, kNames));
      case 6: return mk_appt(term(budget - 1, relevant), type(3));
      case 7: return mk(Tag::Pair, "", term(half, relevant), term(half, relevant), nullptr);
      case 8: return mk(g.chance(50) ? Tag::Proj1 : Tag::Proj2, "", term(budget - 1, relevant), nullptr, nullptr);
      case 9: return mk_beta(term(budget - 1, relevant));
      case 10: return mk(Tag::Rho, n, term(half, kNames), mk_eq(mk_var(n), term(2, kNames)), term(half, relevant));
      case 11: return mk(Tag::Phi, "", term(half, kNames), term(half, kNames), term(half, relevant));
      case 12: return mk(Tag::Delta, "", term(budget - 1, kNames), nullptr, nullptr);
      case 13: return mk(Tag::Sym, "", term(budget - 1, relevant), nullptr, nullptr);
      case 14: return mk(Tag::Chi, "", type(3), term(budget - 1, relevant), nullptr);
      case 15: return mk(Tag::Let, n, type(3), term(half, relevant), term(half, with_n));
      default: return leaf();
    }
  }
};

std::vector<NodeP> corpus_classifiers(ModuleEnv& env) {
  for (const auto& e : read_manifest(test::corpus_dir() + "/manifest.tsv")) env.load(e.path);
  std::vector<NodeP> out;
  for (const auto& path : env.order())
    for (const auto& [name, global] : env.find(path)->exports) out.push_back(env.globals().find(global)->classifier);
  return out;
}

}  // namespace

TEST_CASE("property: erasure commutes with substitution") {
  Stopwatch clock;
  Gen g(0xC0FFEE);
  AnnGen ann{g};
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    NodeP t = ann.term(12, {"x", "y", "a"});
    NodeP v = ann.term(6, {"x", "y", "z", "a"});
    PureP lhs = erase(substitute1(t, "x", v));
    PureP rhs = subst_free(erase(t), "x", erase(v));
    INFO(print(t), "  [", print(v), "/x]");
    REQUIRE(pure_equal(lhs, rhs));
  }
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: βη-equal terms are never Böhm-separated") {
  Stopwatch clock;
  Gen g(1234);
  int equal = 0;
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    PureP t = small_pure(g, 10, false);
    PureP u = equal_variant(g, t);
    Verdict v = beta_eta_equal(t, u, kNoDefs, 20000);
    INFO(print_pure(t), "  vs  ", print_pure(u));
    REQUIRE(v != Verdict::NotEqual);
    if (v == Verdict::Equal) {
      ++equal;
      CHECK_FALSE(bohm_separable(t, u, kNoDefs).separable);
    }
  }
  CHECK(equal >= kCases / 2);
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: normal forms contain no β- or η-redex") {
  Stopwatch clock;
  Gen g(42);
  int normalized = 0;
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    PureP t = small_pure(g, 14, true);
    Reduced r = normalize_beta_eta(t, kNoDefs, 10000);
    if (r.exhausted) continue;
    ++normalized;
    INFO(print_pure(t), "  ->  ", print_pure(r.term));
    REQUIRE(redex_free(r.term));
  }
  CHECK(normalized >= kCases * 9 / 10);
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: conversion is reflexive on corpus classifiers") {
  ModuleEnv env = test::corpus_env();
  std::vector<NodeP> classifiers = corpus_classifiers(env);
  REQUIRE(classifiers.size() >= 200);
  Context ctx(env.globals());
  Checker ck(ctx);
  Stopwatch clock;
  Gen g(7);
  for (int i = 0; i < kCases; ++i) {
    const NodeP& c = g.pick(classifiers);
    // A reparsed copy shares no nodes with the original.
    NodeP copy = parse_classifier(print(c));
    INFO(print(c));
    if (is_kind(c)) {
      CHECK(ck.convert_kinds(c, c));
      CHECK(ck.convert_kinds(c, copy));
    } else {
      CHECK(ck.convert(c, c));
      CHECK(ck.convert(c, copy));
      CHECK(ck.convert(ck.type_whnf(c), c));
    }
  }
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: normal-order and innermost normal forms agree") {
  Stopwatch clock;
  Gen g(99);
  int compared = 0;
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    PureP t = small_pure(g, 12, true);
    Innermost oracle{2000};
    PureP inner = oracle.run(t);
    EvalTrace normal = eval_count_steps(t, kNoDefs, Strategy::CbnFull, 100000);
    INFO(print_pure(t));
    if (oracle.out) continue;
    // Innermost termination implies normal-order termination.
    REQUIRE_FALSE(normal.exhausted);
    ++compared;
    CHECK(pure_equal(inner, normal.result));
  }
  CHECK(compared >= kCases * 8 / 10);
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: printing and re-parsing annotated terms") {
  Stopwatch clock;
  Gen g(2024);
  AnnGen ann{g};
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    NodeP t = ann.term(14, {"x", "y", "a"});
    std::string text = print(t);
    INFO(text);
    REQUIRE(alpha_equal(parse_term(text), t));
    REQUIRE(alpha_equal(parse_term(to_ascii(text)), t));
  }
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: WHNF is βη-equal to its input") {
  Stopwatch clock;
  Gen g(5);
  int reduced = 0;
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    PureP t = small_pure(g, 12, true);
    Reduced w = whnf_cbn(t, kNoDefs, 2000);
    if (w.exhausted) continue;
    ++reduced;
    INFO(print_pure(t), "  ->  ", print_pure(w.term));
    PureP head = w.term;
    while (head->tag == PTag::App) head = head->f;
    CHECK((w.term->tag == PTag::Lam || head->tag != PTag::Lam));
    CHECK(beta_eta_equal(t, w.term, kNoDefs, 20000) != Verdict::NotEqual);
  }
  CHECK(reduced >= kCases * 9 / 10);
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: step counts are deterministic") {
  Stopwatch clock;
  Gen g(11);
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    PureP t = small_pure(g, 12, true);
    Strategy s = static_cast<Strategy>(g.below(3));
    EvalTrace a = eval_count_steps(t, kNoDefs, s, 3000);
    EvalTrace b = eval_count_steps(t, kNoDefs, s, 3000);
    CHECK(a.steps == b.steps);
    CHECK(a.exhausted == b.exhausted);
    REQUIRE((a.result && b.result));
    CHECK(a.result->size == b.result->size);
    // Shared subterms can make a tree walk exponential in the DAG size.
    if (a.result->size <= 100000) CHECK(pure_equal(a.result, b.result));
  }
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: Böhm separation is sound on closed normal forms") {
  Stopwatch clock;
  Gen g(3);
  int separated = 0;
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    PureP t = closed_normal(g, 10), u = closed_normal(g, 10);
    if (!t || !u) continue;
    BohmResult r = bohm_separable(t, u, kNoDefs);
    if (!r.separable) continue;
    ++separated;
    INFO(print_pure(t), "  vs  ", print_pure(u));
    CHECK(beta_eta_equal(t, u, kNoDefs, 50000) != Verdict::Equal);
    CHECK(r.depth <= kDefaultBohmDepth);
  }
  CHECK(separated >= kCases / 4);
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: η-expansion is never separated") {
  Stopwatch clock;
  Gen g(8);
  int tested = 0;
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    PureP t = closed_normal(g, 10);
    if (!t) continue;
    ++tested;
    PureP eta = p_lam("z", p_app(shift(t, 1), p_bvar(0)));
    INFO(print_pure(t));
    CHECK_FALSE(bohm_separable(t, eta, kNoDefs).separable);
  }
  CHECK(tested >= kCases / 2);
  CHECK(clock.seconds() <= kSuiteSeconds);
}

TEST_CASE("property: equation conversion is symmetric and coheres with erasure") {
  ModuleEnv env = test::corpus_env();
  Context ctx(env.globals());
  Checker ck(ctx);
  Stopwatch clock;
  Gen g(17);
  int converted = 0;
  auto side = [&](const PureP& other) -> PureP {
    if (other && g.chance(60)) return equal_variant(g, other);
    for (;;)
      if (PureP t = closed_normal(g, 8)) return t;
  };
  for (int i = 0; i < kCases; ++i) {
    CAPTURE(i);
    PureP t1 = side(nullptr), t2 = side(nullptr);
    PureP s1 = side(t1), s2 = side(t2);
    NodeP lhs = mk_eq(embed(t1), embed(t2));
    NodeP rhs = mk_eq(embed(s1), embed(s2));
    INFO(print(lhs), "  vs  ", print(rhs));
    bool forward = ck.convert(lhs, rhs);
    CHECK(forward == ck.convert(rhs, lhs));
    if (!forward) continue;
    ++converted;
    CHECK(beta_eta_equal(t1, s1, kNoDefs) == Verdict::Equal);
    CHECK(beta_eta_equal(t2, s2, kNoDefs) == Verdict::Equal);
  }
  CHECK(converted >= kCases / 5);
  CHECK(clock.seconds() <= kSuiteSeconds);
}
