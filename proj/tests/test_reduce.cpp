#include <doctest.h>

#include <thread>

#include "support.hpp"

using namespace cdle;

namespace {

const Defs kNoDefs;

PureP P(const std::string& s) { return parse_pure(s); }

PureP scott(const std::string& name) { return p_fvar("scott/concrete/nat::" + name); }

}  // namespace

TEST_CASE("a single redex reaches WHNF in one step") {
  Reduced r = whnf_cbn(P("(λ x. x) (λ x. x)"), kNoDefs);
  CHECK_FALSE(r.exhausted);
  CHECK(r.steps == 1);
  CHECK(pure_equal(r.term, P("λ x. x")));
}

TEST_CASE("Ω exhausts its fuel and reports the partial term") {
  Reduced r = whnf_cbn(P("(λ x. x x) (λ x. x x)"), kNoDefs, 100);
  CHECK(r.exhausted);
  CHECK(r.steps == 100);
  REQUIRE(r.term);
  CHECK(pure_equal(r.term, P("(λ x. x x) (λ x. x x)")));
  CHECK(beta_eta_equal(P("(λ x. x x) (λ x. x x)"), P("λ x. x"), kNoDefs, 100) == Verdict::FuelExhausted);
}

TEST_CASE("WHNF stops at a λ and leaves the body alone") {
  Reduced r = whnf_cbn(P("λ y. (λ x. x) y"), kNoDefs);
  CHECK(r.steps == 0);
  CHECK(pure_equal(r.term, P("λ y. (λ x. x) y")));
}

TEST_CASE("normalization with η-contraction") {
  CHECK(pure_equal(normalize_beta_eta(P("λ x. (λ y. y) x"), kNoDefs).term, P("λ x. x")));
  CHECK(pure_equal(normalize_beta_eta(P("λ x. f x"), kNoDefs).term, P("f")));
  CHECK(pure_equal(normalize_beta_eta(P("λ x. x x"), kNoDefs).term, P("λ x. x x")));
  CHECK(pure_equal(normalize_beta_eta(P("λ x. λ y. f x y"), kNoDefs).term, P("f")));
}

TEST_CASE("βη-equality") {
  CHECK(beta_eta_equal(P("λ x. λ y. x"), P("λ x. λ y. y"), kNoDefs) == Verdict::NotEqual);
  CHECK(beta_eta_equal(P("(λ x. x) (λ x. x)"), P("λ x. x"), kNoDefs) == Verdict::Equal);
  CHECK(beta_eta_equal(P("λ x. f x"), P("f"), kNoDefs) == Verdict::Equal);
  std::uint64_t steps = 99;
  CHECK(beta_eta_equal(P("λ a. a"), P("λ b. b"), kNoDefs, kDefaultFuel, &steps) == Verdict::Equal);
  CHECK(steps == 0);
}

TEST_CASE("definitions unfold lazily in head position") {
  Defs defs;
  defs.define("m::id", P("λ x. x"));
  defs.define("m::loop", P("(λ x. x x) (λ x. x x)"));
  Reduced r = whnf_cbn(p_apps(p_fvar("m::id"), {p_fvar("y")}), defs);
  CHECK(pure_equal(r.term, P("y")));
  // The divergent definition is discarded before it reaches head position.
  Reduced k = whnf_cbn(p_apps(P("λ a. λ b. b"), {p_fvar("m::loop")}), defs, 1000);
  CHECK_FALSE(k.exhausted);
  CHECK(k.steps == 1);
}

TEST_CASE("step counts per strategy") {
  EvalTrace id = eval_count_steps(P("λ x. x"), kNoDefs, Strategy::CbnWhnf);
  CHECK(id.steps == 0);
  EvalTrace roll = eval_count_steps(P("(λ x. x) (λ x. x) x"), kNoDefs, Strategy::CbnWhnf);
  CHECK(roll.steps == 2);
  CHECK(pure_equal(roll.result, P("x")));

  PureP lazy = P("(λ a. λ b. b) ((λ x. x x) (λ x. x x))");
  EvalTrace cbn = eval_count_steps(lazy, kNoDefs, Strategy::CbnWhnf, 1000);
  CHECK_FALSE(cbn.exhausted);
  CHECK(cbn.steps == 1);
  EvalTrace cbv = eval_count_steps(lazy, kNoDefs, Strategy::Cbv, 1000);
  CHECK(cbv.exhausted);

  EvalTrace full = eval_count_steps(P("λ y. (λ x. x) y"), kNoDefs, Strategy::CbnFull);
  CHECK(full.steps == 1);
  CHECK(pure_equal(full.result, P("λ y. y")));
}

TEST_CASE("corpus roll reduces to its argument") {
  ModuleEnv env = test::corpus_env();
  env.load("recType");
  PureP t = p_app(p_fvar("recType::roll"), p_fvar("x"));
  EvalTrace tr = eval_count_steps(t, env.globals().pure(), Strategy::CbnWhnf);
  CHECK(pure_equal(tr.result, P("x")));
  EvalTrace again = eval_count_steps(t, env.globals().pure(), Strategy::CbnWhnf);
  CHECK(tr.steps == again.steps);
}

TEST_CASE("Scott predecessor of one is zero") {
  ModuleEnv env = test::corpus_env();
  env.load("scott/concrete/nat");
  const Defs& defs = env.globals().pure();
  PureP t = p_app(scott("pred"), p_app(scott("suc"), scott("zero")));
  Reduced w = whnf_cbn(t, defs);
  REQUIRE_FALSE(w.exhausted);
  CHECK(beta_eta_equal(w.term, scott("zero"), defs) == Verdict::Equal);
  CHECK(pure_equal(normalize_beta_eta(w.term, defs).term, normalize_beta_eta(scott("zero"), defs).term));
  CHECK(beta_eta_equal(w.term, p_app(scott("suc"), scott("zero")), defs) == Verdict::NotEqual);
}

TEST_CASE("caseNat on an unknown numeral is headed by the numeral") {
  ModuleEnv env = test::corpus_env();
  env.load("scott/concrete/nat");
  const Defs& defs = env.globals().pure();
  PureP t = p_apps(scott("caseNat"), {scott("zero"), scott("suc"), p_fvar("n")});
  Reduced nf = normalize_beta_eta(t, defs);
  REQUIRE_FALSE(nf.exhausted);
  // Oracle by hand: unrolling is the identity, so caseNat z s n ≡ n z s.
  PureP expected = p_apps(p_fvar("n"), {normalize_beta_eta(scott("zero"), defs).term,
                                         normalize_beta_eta(scott("suc"), defs).term});
  CHECK(pure_equal(nf.term, expected));
  CHECK(nf.term->tag == PTag::App);
}

TEST_CASE("WHNF is βη-equal to its input") {
  for (const char* s : {"(λ x. λ y. x y) (λ z. z)", "(λ f. f f) (λ g. λ h. h)", "(λ x. x) ((λ y. y) k)"}) {
    CAPTURE(s);
    Reduced w = whnf_cbn(P(s), kNoDefs);
    CHECK(beta_eta_equal(P(s), w.term, kNoDefs) == Verdict::Equal);
  }
}

TEST_CASE("concurrent conversion queries share the normal-form cache") {
  ModuleEnv env = test::corpus_env();
  env.load("parigot/concrete/nat");
  const Defs& defs = env.globals().pure();
  auto num = [](int n) {
    PureP t = p_fvar("parigot/concrete/nat::zero");
    for (int i = 0; i < n; ++i) t = p_app(p_fvar("parigot/concrete/nat::suc"), t);
    return t;
  };
  std::vector<Verdict> results(8);
  std::vector<std::thread> pool;
  for (int i = 0; i < 8; ++i)
    pool.emplace_back([&, i] {
      PureP pred = p_app(p_fvar("parigot/concrete/nat::pred"), num(i % 4 + 1));
      results[i] = beta_eta_equal(pred, num(i % 4), defs);
    });
  for (auto& t : pool) t.join();
  for (Verdict v : results) CHECK(v == Verdict::Equal);
}
