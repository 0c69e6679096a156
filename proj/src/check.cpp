#include "cdle/check.hpp"

#include <functional>

namespace cdle {

const GlobalDef* GlobalEnv::find(const std::string& name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

void GlobalEnv::add(GlobalDef d) {
  if (!d.type_level && d.erased) pure_.define(d.name, d.erased);
  std::string key = d.name;
  defs_[key] = std::move(d);
}

Context::Context(const GlobalEnv& env) : env_(&env), locals_(&env.pure()) {}

void Context::push(const std::string& name, NodeP classifier, bool type_var) {
  index_[name].push_back(entries_.size());
  entries_.push_back({name, std::move(classifier), type_var});
  is_let_.push_back(false);
}

void Context::push_let(const std::string& name, NodeP type, PureP value) {
  push(name, std::move(type), false);
  is_let_.back() = true;
  locals_.define(name, std::move(value));
}

void Context::pop() {
  const std::string name = entries_.back().name;
  if (is_let_.back()) locals_.undefine(name);
  auto& v = index_[name];
  v.pop_back();
  if (v.empty()) index_.erase(name);
  entries_.pop_back();
  is_let_.pop_back();
}

const CtxEntry* Context::lookup(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return nullptr;
  return &entries_[it->second.back()];
}

bool Context::declared(const std::string& name) const {
  return lookup(name) != nullptr || env_->find(name) != nullptr;
}

namespace {

struct Scope {
  Context& ctx;
  int n = 0;
  explicit Scope(Context& c) : ctx(c) {}
  ~Scope() {
    while (n-- > 0) ctx.pop();
  }
};

bool is_spine(const NodeP& t) { return t->tag == Tag::TApp || t->tag == Tag::TAppT; }

NodeP spine_head(NodeP t, std::vector<NodeP>* args) {
  while (is_spine(t)) {
    if (args) args->push_back(t);
    t = t->a;
  }
  return t;
}

NodeP rebuild_spine(NodeP head, const std::vector<NodeP>& rev) {
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) head = mk((*it)->tag, "", head, (*it)->b, nullptr, (*it)->span);
  return head;
}

bool is_binder_type(Tag t) { return t == Tag::All || t == Tag::Pi || t == Tag::Iota || t == Tag::TLam; }

NodeP canonical_false_eq() {
  static const NodeP e = mk_eq(mk_lam("x", nullptr, mk_lam("y", nullptr, mk_var("x"))),
                               mk_lam("x", nullptr, mk_lam("y", nullptr, mk_var("y"))));
  return e;
}

}  // namespace

[[noreturn]] void Checker::fail(const char* rule, const char* judgment, const std::string& msg, const NodeP& at,
                                const NodeP& expected, const NodeP& found, const std::string& detail) {
  TypeError e(rule, judgment, msg, at ? at->span : Span{});
  if (expected) e.expected = print(expected);
  if (found) e.found = print(found);
  e.detail = detail;
  throw e;
}

// ---------------------------------------------------------------- conversion

NodeP Checker::type_whnf(const NodeP& t) {
  std::uint64_t steps = 0;
  NodeP cur = t;
  for (;;) {
    std::vector<NodeP> rev;
    NodeP head = spine_head(cur, &rev);
    if (head->tag == Tag::Var && !ctx_.lookup(head->name)) {
      const GlobalDef* d = ctx_.env().find(head->name);
      if (d && d->type_level) {
        if (++steps > opts_.fuel) throw ConversionFuel();
        cur = rebuild_spine(d->body, rev);
        continue;
      }
    }
    if (head->tag == Tag::TLam && !rev.empty()) {
      if (++steps > opts_.fuel) throw ConversionFuel();
      const NodeP& app = rev.back();
      NodeP r = substitute1(head->b, head->name, app->b);
      rev.pop_back();
      cur = rebuild_spine(r, rev);
      continue;
    }
    return cur;
  }
}

bool Checker::terms_equal(const NodeP& a, const NodeP& b) {
  std::uint64_t steps = 0;
  Verdict v = beta_eta_equal(erase(a), erase(b), ctx_.defs(), opts_.fuel, &steps);
  conv_steps_ += steps;
  if (v == Verdict::FuelExhausted) throw ConversionFuel();
  return v == Verdict::Equal;
}

bool Checker::convert_kinds(const NodeP& a, const NodeP& b) {
  if (alpha_equal(a, b)) return true;
  if (a->tag == Tag::Star || b->tag == Tag::Star) return a->tag == b->tag;
  if (a->tag != Tag::Pi || b->tag != Tag::Pi) return false;
  return conv_binder(a, b);
}

bool Checker::convert(const NodeP& a, const NodeP& b) {
  if (alpha_equal(a, b)) return true;
  bool ka = is_kind(a), kb = is_kind(b);
  if (ka || kb) return ka && kb && convert_kinds(a, b);
  bool decided = false;
  if (spine_shortcut(a, b, decided)) return true;
  return conv_t(type_whnf(a), type_whnf(b));
}

// Two applications of the same head are convertible when their arguments are;
// checking this before unfolding avoids exposing large definitions.
bool Checker::spine_shortcut(const NodeP& a, const NodeP& b, bool& decided) {
  decided = false;
  if (!is_spine(a) || !is_spine(b)) return false;
  std::vector<NodeP> ra, rb;
  NodeP ha = spine_head(a, &ra), hb = spine_head(b, &rb);
  if (ha->tag != Tag::Var || hb->tag != Tag::Var || ha->name != hb->name || ra.size() != rb.size()) return false;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i]->tag != rb[i]->tag) return false;
    bool ok = ra[i]->tag == Tag::TApp ? terms_equal(ra[i]->b, rb[i]->b) : convert(ra[i]->b, rb[i]->b);
    if (!ok) return false;
  }
  decided = true;
  return true;
}

bool Checker::conv_binder(const NodeP& a, const NodeP& b) {
  bool ka = is_kind(a->a), kb = is_kind(b->a);
  if (ka != kb) return false;
  if (!(ka ? convert_kinds(a->a, b->a) : convert(a->a, b->a))) return false;
  const NodeP* ba = &a->b;
  const NodeP* bb = &b->b;
  NodeP sa, sb;
  if (a->name != b->name || ctx_.defs().contains(a->name)) {
    NodeP v = mk_var(fresh_name(is_anonymous(a->name) ? b->name : a->name));
    sa = substitute1(a->b, a->name, v);
    sb = substitute1(b->b, b->name, v);
    ba = &sa;
    bb = &sb;
  }
  bool kba = is_kind(*ba), kbb = is_kind(*bb);
  if (kba != kbb) return false;
  return kba ? convert_kinds(*ba, *bb) : convert(*ba, *bb);
}

bool Checker::conv_t(const NodeP& a, const NodeP& b) {
  if (alpha_equal(a, b)) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::Var:
      return a->name == b->name;
    case Tag::TApp:
      return conv_t(a->a, b->a) && terms_equal(a->b, b->b);
    case Tag::TAppT:
      return conv_t(a->a, b->a) && convert(a->b, b->b);
    case Tag::Eq:
      return terms_equal(a->a, b->a) && terms_equal(a->b, b->b);
    default:
      if (is_binder_type(a->tag)) return conv_binder(a, b);
      return false;
  }
}

void Checker::require_conv(const NodeP& expected, const NodeP& found, const char* rule, const NodeP& at,
                           const char* judgment) {
  bool ok = false;
  try {
    ok = convert(expected, found);
  } catch (ConversionFuel&) {
    fail(rule, judgment, "conversion fuel exhausted", at, expected, found, "conversion fuel exhausted");
  }
  if (!ok) fail(rule, judgment, "classifier mismatch", at, expected, found);
}

void Checker::require_scoped(const NodeP& t, const char* rule, const char* what) {
  for (const auto& n : free_names(t))
    if (!ctx_.declared(n)) fail(rule, "check", std::string(what) + " mentions undeclared variable " + n, t);
}

// Pushes a binder for `x`, renaming it when the name is already declared so
// that Γ never shadows. `scope` is rewritten to use the chosen name.
std::string Checker::bind(const std::string& x, const NodeP& classifier, bool type_var, NodeP& scope) {
  std::string name = x;
  if (is_anonymous(x) || ctx_.lookup(x)) {
    name = fresh_name(is_anonymous(x) ? "_" : x);
    if (!is_anonymous(x) && scope) scope = substitute1(scope, x, mk_var(name));
  }
  ctx_.push(name, classifier, type_var);
  return name;
}

NodeP Checker::synth_whnf(const NodeP& t) {
  NodeP ty = synth(t);
  try {
    return type_whnf(ty);
  } catch (ConversionFuel&) {
    fail("conv", "synth", "conversion fuel exhausted", t, nullptr, ty, "conversion fuel exhausted");
  }
}

// ------------------------------------------------------------------- kinding

void Checker::check_kind_wf(const NodeP& k) {
  if (k->tag == Tag::Star) return;
  if (k->tag != Tag::Pi) fail("kind-wf", "kind", "not a kind", k);
  Scope sc(ctx_);
  NodeP body = k->b;
  if (is_kind(k->a)) {
    check_kind_wf(k->a);
    bind(k->name, k->a, true, body);
  } else {
    check_type_star(k->a, "kind-wf");
    bind(k->name, k->a, false, body);
  }
  ++sc.n;
  if (!is_kind(body)) fail("kind-wf", "kind", "kind codomain is not a kind", k);
  check_kind_wf(body);
}

void Checker::check_type_star(const NodeP& t, const char* rule) {
  NodeP k = synth_kind(t);
  if (k->tag != Tag::Star) fail(rule, "kinding", "expected a type of kind ★", t, mk_star(), k);
}

void Checker::check_kind_of(const NodeP& t, const NodeP& k) {
  NodeP found = synth_kind(t);
  if (!convert_kinds(k, found)) fail("kind-conv", "kinding", "kind mismatch", t, k, found);
}

NodeP Checker::synth_kind(const NodeP& t) {
  switch (t->tag) {
    case Tag::Var: {
      if (const CtxEntry* e = ctx_.lookup(t->name)) {
        if (!e->type_var) fail("kind-var", "kinding", "term variable used as a type: " + t->name, t);
        return e->classifier;
      }
      const GlobalDef* d = ctx_.env().find(t->name);
      if (!d) fail("unbound", "kinding", "unbound type variable " + t->name, t);
      if (!d->type_level) fail("kind-var", "kinding", "term definition used as a type: " + t->name, t);
      return d->classifier;
    }
    case Tag::All:
    case Tag::Pi:
    case Tag::Iota: {
      const char* rule = t->tag == Tag::All ? "kind-all" : t->tag == Tag::Pi ? "kind-pi" : "kind-iota";
      Scope sc(ctx_);
      NodeP body = t->b;
      if (is_kind(t->a)) {
        if (t->tag != Tag::All) fail(rule, "kinding", "domain must be a type", t);
        check_kind_wf(t->a);
        bind(t->name, t->a, true, body);
      } else {
        check_type_star(t->a, rule);
        bind(t->name, t->a, false, body);
      }
      ++sc.n;
      if (is_kind(body)) fail(rule, "kinding", "codomain must be a type", t);
      check_type_star(body, rule);
      return mk_star();
    }
    case Tag::TLam: {
      Scope sc(ctx_);
      NodeP body = t->b;
      if (!t->a) fail("kind-lam", "kinding", "type-level λ needs a domain", t);
      std::string x;
      if (is_kind(t->a)) {
        check_kind_wf(t->a);
        x = bind(t->name, t->a, true, body);
      } else {
        check_type_star(t->a, "kind-lam");
        x = bind(t->name, t->a, false, body);
      }
      ++sc.n;
      NodeP k = synth_kind(body);
      return mk_binder(Tag::Pi, x, t->a, k);
    }
    case Tag::TApp: {
      NodeP k = synth_kind(t->a);
      if (k->tag != Tag::Pi || is_kind(k->a)) fail("kind-app", "kinding", "type applied to a term is not a term family", t, nullptr, k);
      check(t->b, k->a);
      return substitute1(k->b, k->name, t->b);
    }
    case Tag::TAppT: {
      NodeP k = synth_kind(t->a);
      if (k->tag != Tag::Pi || !is_kind(k->a)) fail("kind-app-type", "kinding", "type applied to a type is not a type family", t, nullptr, k);
      NodeP ka = synth_kind(t->b);
      bool ok = false;
      try {
        ok = convert_kinds(k->a, ka);
      } catch (ConversionFuel&) {
        fail("kind-app-type", "kinding", "conversion fuel exhausted", t, k->a, ka, "conversion fuel exhausted");
      }
      if (!ok) fail("kind-app-type", "kinding", "argument kind mismatch", t->b, k->a, ka);
      return substitute1(k->b, k->name, t->b);
    }
    case Tag::Eq:
      for (const NodeP& side : {t->a, t->b})
        for (const auto& n : free_names(side))
          if (!ctx_.declared(n)) fail("kind-eq", "kinding", "equation mentions undeclared variable " + n, t);
      return mk_star();
    default:
      fail("kind-synth", "kinding", "not a type", t);
  }
}

// --------------------------------------------------------------------- terms

namespace {

bool synthesizable(Tag tag) {
  switch (tag) {
    case Tag::Var: case Tag::App: case Tag::AppE: case Tag::AppT: case Tag::Proj1:
    case Tag::Proj2: case Tag::Sym: case Tag::Chi: case Tag::Let:
      return true;
    default:
      return false;
  }
}

}  // namespace

NodeP Checker::synth(const NodeP& t) {
  switch (t->tag) {
    case Tag::Var: {
      if (const CtxEntry* e = ctx_.lookup(t->name)) {
        if (e->type_var) fail("var", "synth", "type variable used as a term: " + t->name, t);
        return e->classifier;
      }
      const GlobalDef* d = ctx_.env().find(t->name);
      if (!d) fail("unbound", "synth", "unbound variable " + t->name, t);
      if (d->type_level) fail("var", "synth", "type definition used as a term: " + t->name, t);
      return d->classifier;
    }
    case Tag::App: {
      NodeP f = synth_whnf(t->a);
      if (f->tag != Tag::Pi || is_kind(f->a)) fail("app", "synth", "applied term is not a function", t->a, nullptr, f);
      check(t->b, f->a);
      return substitute1(f->b, f->name, t->b);
    }
    case Tag::AppE: {
      NodeP f = synth_whnf(t->a);
      if (f->tag != Tag::All || is_kind(f->a))
        fail("implicit-elim", "synth", "erased application of a term without an implicit product type", t->a, nullptr, f);
      check(t->b, f->a);
      return substitute1(f->b, f->name, t->b);
    }
    case Tag::AppT: {
      NodeP f = synth_whnf(t->a);
      if (f->tag != Tag::All || !is_kind(f->a))
        fail("type-app", "synth", "type application of a term without a polymorphic type", t->a, nullptr, f);
      NodeP k = synth_kind(t->b);
      bool ok = false;
      try {
        ok = convert_kinds(f->a, k);
      } catch (ConversionFuel&) {
        fail("type-app", "synth", "conversion fuel exhausted", t, f->a, k, "conversion fuel exhausted");
      }
      if (!ok) fail("type-app", "synth", "type argument kind mismatch", t->b, f->a, k);
      return substitute1(f->b, f->name, t->b);
    }
    case Tag::Proj1:
    case Tag::Proj2: {
      NodeP i = synth_whnf(t->a);
      if (i->tag != Tag::Iota) fail("proj", "synth", "projection from a term without an intersection type", t->a, nullptr, i);
      if (t->tag == Tag::Proj1) return i->a;
      return substitute1(i->b, i->name, mk(Tag::Proj1, "", t->a, nullptr, nullptr, t->span));
    }
    case Tag::Sym: {
      NodeP e = synth_whnf(t->a);
      if (e->tag != Tag::Eq) fail("sym", "synth", "ς applied to a non-equation", t->a, nullptr, e);
      return mk_eq(e->b, e->a, t->span);
    }
    case Tag::Chi: {
      check_type_star(t->a, "chi");
      check(t->b, t->a);
      return t->a;
    }
    case Tag::Let: {
      check_type_star(t->a, "let");
      check(t->b, t->a);
      Scope sc(ctx_);
      NodeP body = t->c;
      std::string x = t->name;
      if (ctx_.lookup(x)) {
        x = fresh_name(x);
        body = substitute1(body, t->name, mk_var(x));
      }
      ctx_.push_let(x, t->a, erase(t->b));
      ++sc.n;
      NodeP ty = synth(body);
      return substitute1(ty, x, t->b);
    }
    default:
      fail("annotation-required", "synth", "annotation required (use χ)", t);
  }
}

void Checker::check(const NodeP& t, const NodeP& ty) {
  auto whnf_or_fail = [&](const char* rule) {
    try {
      return type_whnf(ty);
    } catch (ConversionFuel&) {
      fail(rule, "check", "conversion fuel exhausted", t, ty, nullptr, "conversion fuel exhausted");
    }
  };
  auto equal_or_fail = [&](const NodeP& a, const NodeP& b, const char* rule, const NodeP& at) {
    bool ok = false;
    try {
      ok = terms_equal(a, b);
    } catch (ConversionFuel&) {
      fail(rule, "check", "conversion fuel exhausted", at, a, b, "conversion fuel exhausted");
    }
    if (!ok) fail(rule, "check", "terms are not βη-equal modulo erasure", at, a, b);
  };

  switch (t->tag) {
    case Tag::Lam: {
      NodeP p = whnf_or_fail("lam-intro");
      if (p->tag != Tag::Pi || is_kind(p->a)) fail("lam-intro", "check", "λ checked against a non-function type", t, ty, p);
      if (t->a) {
        check_type_star(t->a, "lam-intro");
        require_conv(p->a, t->a, "lam-intro", t, "check");
      }
      Scope sc(ctx_);
      NodeP body = t->b;
      std::string x = bind(t->name, p->a, false, body);
      ++sc.n;
      NodeP cod = p->name == x ? p->b : substitute1(p->b, p->name, mk_var(x));
      check(body, cod);
      return;
    }
    case Tag::LamE: {
      NodeP p = whnf_or_fail("type-abs");
      if (p->tag != Tag::All) fail("type-abs", "check", "Λ checked against a type that is not a ∀", t, ty, p);
      bool type_var = is_kind(p->a);
      const char* rule = type_var ? "type-abs" : "implicit-intro";
      if (t->a) {
        if (type_var) {
          if (!is_kind(t->a)) fail(rule, "check", "Λ annotation sort mismatch", t, p->a, t->a);
          check_kind_wf(t->a);
          if (!convert_kinds(p->a, t->a)) fail(rule, "check", "Λ annotation mismatch", t, p->a, t->a);
        } else {
          if (is_kind(t->a)) fail(rule, "check", "Λ annotation sort mismatch", t, p->a, t->a);
          check_type_star(t->a, rule);
          require_conv(p->a, t->a, rule, t, "check");
        }
      }
      Scope sc(ctx_);
      NodeP body = t->b;
      std::string x = bind(t->name, p->a, type_var, body);
      ++sc.n;
      NodeP cod = p->name == x ? p->b : substitute1(p->b, p->name, mk_var(x));
      check(body, cod);
      if (!type_var && free_vars(erase(body)).count(x))
        fail("implicit-intro", "check", "erased variable " + t->name + " occurs in the erasure of the body", t);
      return;
    }
    case Tag::Pair: {
      NodeP i = whnf_or_fail("pair-intro");
      if (i->tag != Tag::Iota) fail("pair-intro", "check", "[ , ] checked against a non-intersection type", t, ty, i);
      check(t->a, i->a);
      check(t->b, substitute1(i->b, i->name, t->a));
      equal_or_fail(t->a, t->b, "pair-intro", t);
      return;
    }
    case Tag::Beta: {
      NodeP e = whnf_or_fail("beta");
      if (e->tag != Tag::Eq) fail("beta", "check", "β checked against a non-equation", t, ty, e);
      for (const auto& n : free_names(t->a))
        if (!ctx_.declared(n)) fail("beta", "check", "β payload mentions undeclared variable " + n, t);
      equal_or_fail(e->a, e->b, "beta", t);
      return;
    }
    case Tag::Rho: {
      NodeP e = synth_whnf(t->a);
      if (e->tag != Tag::Eq) fail("rho", "check", "ρ rewrites with a non-equation", t->a, nullptr, e);
      Scope sc(ctx_);
      // The guide may mention x and the variables of Γ only.
      ctx_.push(t->name, nullptr, false);
      ++sc.n;
      for (const auto& n : free_names(t->b))
        if (!ctx_.declared(n)) fail("rho", "check", "ρ guide mentions undeclared variable " + n, t);
      ctx_.pop();
      --sc.n;
      NodeP to = substitute1(t->b, t->name, e->b);
      NodeP from = substitute1(t->b, t->name, e->a);
      check_type_star(to, "rho");
      require_conv(ty, from, "rho", t, "check");
      check(t->c, to);
      return;
    }
    case Tag::Phi: {
      check(t->b, ty);
      for (const auto& n : free_names(t->c))
        if (!ctx_.declared(n)) fail("phi", "check", "φ payload mentions undeclared variable " + n, t);
      NodeP eq = mk_eq(t->b, t->c, t->span);
      if (synthesizable(t->a->tag))
        require_conv(eq, synth(t->a), "phi", t->a, "check");
      else
        check(t->a, eq);
      return;
    }
    case Tag::Delta: {
      NodeP found = synth(t->a);
      bool canonical = false;
      try {
        canonical = convert(found, canonical_false_eq());
      } catch (ConversionFuel&) {
      }
      if (canonical) return;
      NodeP e;
      try {
        e = type_whnf(found);
      } catch (ConversionFuel&) {
        fail("delta", "check", "conversion fuel exhausted", t, nullptr, found, "conversion fuel exhausted");
      }
      if (e->tag != Tag::Eq) fail("delta", "check", "δ needs a proof of an equation", t->a, nullptr, found);
      BohmResult r = bohm_separable(erase(e->a), erase(e->b), ctx_.defs(), opts_.bohm_depth, opts_.bohm_node_fuel);
      if (!r.separable)
        fail("delta", "check", "equation sides not separable within the Böhm depth bound", t, canonical_false_eq(), found);
      return;
    }
    case Tag::Let: {
      check_type_star(t->a, "let");
      check(t->b, t->a);
      Scope sc(ctx_);
      NodeP body = t->c;
      std::string x = t->name;
      if (ctx_.lookup(x)) {
        x = fresh_name(x);
        body = substitute1(body, t->name, mk_var(x));
      }
      ctx_.push_let(x, t->a, erase(t->b));
      ++sc.n;
      check(body, ty);
      return;
    }
    default: {
      NodeP found = synth(t);
      require_conv(ty, found, "conv", t, "check");
    }
  }
}

}  // namespace cdle
