#include "cdle/ast.hpp"

#include <atomic>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace cdle {

std::uint64_t name_bloom(const std::string& n) {
  std::size_t h = std::hash<std::string>{}(n);
  return (std::uint64_t{1} << (h & 63)) | (std::uint64_t{1} << ((h >> 6) & 63));
}

bool binds(Tag t) {
  switch (t) {
    case Tag::Lam: case Tag::LamE: case Tag::All: case Tag::Pi:
    case Tag::TLam: case Tag::Iota: case Tag::Rho:
      return true;
    default:
      return false;
  }
}

bool is_anonymous(const std::string& n) { return n.empty() || n == "_"; }

NodeP mk(Tag tag, std::string name, NodeP a, NodeP b, NodeP c, Span span) {
  auto n = std::make_shared<Node>();
  n->tag = tag;
  n->name = std::move(name);
  n->a = std::move(a);
  n->b = std::move(b);
  n->c = std::move(c);
  n->span = span;
  std::uint64_t bl = 0;
  if (tag == Tag::Var) bl = name_bloom(n->name);
  if (n->a) bl |= n->a->bloom;
  // A binder may still leave its name free elsewhere, so the bloom stays an
  // over-approximation without subtracting the bound name.
  if (n->b) bl |= n->b->bloom;
  if (n->c) bl |= n->c->bloom;
  n->bloom = bl;
  return n;
}

NodeP mk_var(const std::string& n, Span span) { return mk(Tag::Var, n, nullptr, nullptr, nullptr, span); }
NodeP mk_star(Span span) { return mk(Tag::Star, "", nullptr, nullptr, nullptr, span); }
NodeP mk_lam(const std::string& x, NodeP ann, NodeP body, Span span) {
  return mk(Tag::Lam, x, std::move(ann), std::move(body), nullptr, span);
}
NodeP mk_lame(const std::string& x, NodeP ann, NodeP body, Span span) {
  return mk(Tag::LamE, x, std::move(ann), std::move(body), nullptr, span);
}
NodeP mk_app(NodeP f, NodeP x, Span span) { return mk(Tag::App, "", std::move(f), std::move(x), nullptr, span); }
NodeP mk_appe(NodeP f, NodeP x, Span span) { return mk(Tag::AppE, "", std::move(f), std::move(x), nullptr, span); }
NodeP mk_appt(NodeP f, NodeP t, Span span) { return mk(Tag::AppT, "", std::move(f), std::move(t), nullptr, span); }
NodeP mk_binder(Tag tag, const std::string& x, NodeP dom, NodeP body, Span span) {
  return mk(tag, x, std::move(dom), std::move(body), nullptr, span);
}
NodeP mk_tapp(NodeP f, NodeP t, Span span) { return mk(Tag::TApp, "", std::move(f), std::move(t), nullptr, span); }
NodeP mk_tappt(NodeP f, NodeP t, Span span) { return mk(Tag::TAppT, "", std::move(f), std::move(t), nullptr, span); }
NodeP mk_eq(NodeP l, NodeP r, Span span) { return mk(Tag::Eq, "", std::move(l), std::move(r), nullptr, span); }
NodeP mk_beta(NodeP payload, Span span) { return mk(Tag::Beta, "", std::move(payload), nullptr, nullptr, span); }

NodeP identity_term() {
  static const NodeP id = mk_lam("x", nullptr, mk_var("x"));
  return id;
}

bool is_kind(const NodeP& n) {
  const Node* p = n.get();
  while (p && p->tag == Tag::Pi) p = p->b.get();
  return p && p->tag == Tag::Star;
}

namespace {

void collect_free(const NodeP& n, std::vector<std::string>& bound, std::set<std::string>& out) {
  if (!n) return;
  switch (n->tag) {
    case Tag::Var: {
      for (auto it = bound.rbegin(); it != bound.rend(); ++it)
        if (*it == n->name) return;
      out.insert(n->name);
      return;
    }
    case Tag::Let:
      collect_free(n->a, bound, out);
      collect_free(n->b, bound, out);
      bound.push_back(n->name);
      collect_free(n->c, bound, out);
      bound.pop_back();
      return;
    case Tag::Rho:
      collect_free(n->a, bound, out);
      bound.push_back(n->name);
      collect_free(n->b, bound, out);
      bound.pop_back();
      collect_free(n->c, bound, out);
      return;
    default:
      break;
  }
  if (binds(n->tag)) {
    collect_free(n->a, bound, out);
    bound.push_back(n->name);
    collect_free(n->b, bound, out);
    bound.pop_back();
    collect_free(n->c, bound, out);
    return;
  }
  collect_free(n->a, bound, out);
  collect_free(n->b, bound, out);
  collect_free(n->c, bound, out);
}

}  // namespace

std::set<std::string> free_names(const NodeP& n) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(n, bound, out);
  return out;
}

bool occurs_free(const std::string& x, const NodeP& n) {
  if (!n || !(n->bloom & name_bloom(x))) return false;
  switch (n->tag) {
    case Tag::Var:
      return n->name == x;
    case Tag::Let:
      return occurs_free(x, n->a) || occurs_free(x, n->b) || (n->name != x && occurs_free(x, n->c));
    case Tag::Rho:
      return occurs_free(x, n->a) || (n->name != x && occurs_free(x, n->b)) || occurs_free(x, n->c);
    default:
      break;
  }
  if (binds(n->tag))
    return occurs_free(x, n->a) || (n->name != x && occurs_free(x, n->b)) || occurs_free(x, n->c);
  return occurs_free(x, n->a) || occurs_free(x, n->b) || occurs_free(x, n->c);
}

std::string fresh_name(const std::string& base) {
  static std::atomic<std::uint64_t> counter{0};
  std::string stem = base;
  auto h = stem.find('#');
  if (h != std::string::npos) stem = stem.substr(0, h);
  if (is_anonymous(stem)) stem = "x";
  return stem + "#" + std::to_string(++counter);
}

namespace {

struct Substituter {
  Subst map;
  std::uint64_t keys_bloom = 0;
  std::set<std::string> range_fv;

  explicit Substituter(const Subst& s) : map(s) {
    for (auto& [k, v] : map) {
      keys_bloom |= name_bloom(k);
      for (auto& f : free_names(v)) range_fv.insert(f);
    }
  }

  bool relevant(const NodeP& n, const Subst& m) const {
    if (!n || !(n->bloom & keys_bloom)) return false;
    for (auto& [k, v] : m)
      if (occurs_free(k, n)) return true;
    return false;
  }

  // Substitutes under a binder named `x` scoping over `body`. Returns the
  // possibly renamed binder and the new body.
  std::pair<std::string, NodeP> under(const std::string& x, const NodeP& body, const Subst& m) {
    if (!body) return {x, body};
    Subst inner = m;
    inner.erase(x);
    if (inner.empty() || !relevant(body, inner)) return {x, body};
    if (!is_anonymous(x) && range_fv.count(x)) {
      std::string y = fresh_name(x);
      inner[x] = mk_var(y);
      keys_bloom |= name_bloom(x);
      return {y, go(body, inner)};
    }
    return {x, go(body, inner)};
  }

  NodeP go(const NodeP& n, const Subst& m) {
    if (!n) return n;
    if (!(n->bloom & keys_bloom)) return n;
    if (n->tag == Tag::Var) {
      auto it = m.find(n->name);
      return it == m.end() ? n : it->second;
    }
    if (n->tag == Tag::Let) {
      auto a = go(n->a, m), b = go(n->b, m);
      auto [x, c] = under(n->name, n->c, m);
      if (a == n->a && b == n->b && c == n->c && x == n->name) return n;
      return mk(n->tag, x, a, b, c, n->span);
    }
    if (binds(n->tag)) {
      auto a = go(n->a, m);
      auto [x, b] = under(n->name, n->b, m);
      auto c = go(n->c, m);
      if (a == n->a && b == n->b && c == n->c && x == n->name) return n;
      return mk(n->tag, x, a, b, c, n->span);
    }
    auto a = go(n->a, m), b = go(n->b, m), c = go(n->c, m);
    if (a == n->a && b == n->b && c == n->c) return n;
    return mk(n->tag, n->name, a, b, c, n->span);
  }
};

}  // namespace

NodeP substitute(const NodeP& n, const Subst& s) {
  if (s.empty()) return n;
  Substituter sub(s);
  return sub.go(n, sub.map);
}

NodeP substitute1(const NodeP& n, const std::string& x, const NodeP& v) {
  if (is_anonymous(x)) return n;
  return substitute(n, Subst{{x, v}});
}

namespace {

struct AlphaEnv {
  std::vector<std::pair<std::string, std::string>> pairs;
};

bool alpha_go(const NodeP& x, const NodeP& y, AlphaEnv& env) {
  if (x.get() == y.get() && env.pairs.empty()) return true;
  if (!x || !y) return !x && !y;
  if (x->tag != y->tag) return false;
  if (x->tag == Tag::Var) {
    for (auto it = env.pairs.rbegin(); it != env.pairs.rend(); ++it) {
      bool l = it->first == x->name, r = it->second == y->name;
      if (l || r) return l && r;
    }
    return x->name == y->name;
  }
  auto scoped = [&](const NodeP& p, const NodeP& q) {
    env.pairs.emplace_back(x->name, y->name);
    bool ok = alpha_go(p, q, env);
    env.pairs.pop_back();
    return ok;
  };
  if (x->tag == Tag::Let)
    return alpha_go(x->a, y->a, env) && alpha_go(x->b, y->b, env) && scoped(x->c, y->c);
  if (binds(x->tag))
    return alpha_go(x->a, y->a, env) && scoped(x->b, y->b) && alpha_go(x->c, y->c, env);
  return alpha_go(x->a, y->a, env) && alpha_go(x->b, y->b, env) && alpha_go(x->c, y->c, env);
}

bool atomic(const NodeP& n) {
  switch (n->tag) {
    case Tag::Var: case Tag::Star: case Tag::Beta: case Tag::Pair:
    case Tag::Proj1: case Tag::Proj2: case Tag::Eq:
      return true;
    default:
      return false;
  }
}

bool applicative(const NodeP& n) {
  switch (n->tag) {
    case Tag::App: case Tag::AppE: case Tag::AppT: case Tag::TApp: case Tag::TAppT:
      return true;
    default:
      return atomic(n);
  }
}

void pr(std::ostream& o, const NodeP& n);

void pr_atom(std::ostream& o, const NodeP& n) {
  if (atomic(n)) {
    pr(o, n);
  } else {
    o << "(";
    pr(o, n);
    o << ")";
  }
}

void pr_head(std::ostream& o, const NodeP& n) {
  if (applicative(n)) pr(o, n); else pr_atom(o, n);
}

void pr_binder(std::ostream& o, const char* sym, const NodeP& n) {
  o << sym << " " << (n->name.empty() ? "_" : n->name);
  if (n->a) {
    o << ": ";
    pr(o, n->a);
  }
  o << ". ";
  pr(o, n->b);
}

void pr(std::ostream& o, const NodeP& n) {
  switch (n->tag) {
    case Tag::Var: o << n->name; return;
    case Tag::Star: o << "★"; return;
    case Tag::Lam: pr_binder(o, "λ", n); return;
    case Tag::LamE: pr_binder(o, "Λ", n); return;
    case Tag::App: pr_head(o, n->a); o << " "; pr_atom(o, n->b); return;
    case Tag::AppE: pr_head(o, n->a); o << " -"; pr_atom(o, n->b); return;
    case Tag::AppT: pr_head(o, n->a); o << " ·"; pr_atom(o, n->b); return;
    case Tag::TApp: pr_head(o, n->a); o << " "; pr_atom(o, n->b); return;
    case Tag::TAppT: pr_head(o, n->a); o << " ·"; pr_atom(o, n->b); return;
    case Tag::Pair: o << "[ "; pr(o, n->a); o << " , "; pr(o, n->b); o << " ]"; return;
    case Tag::Proj1: pr_atom(o, n->a); o << ".1"; return;
    case Tag::Proj2: pr_atom(o, n->a); o << ".2"; return;
    case Tag::Beta: o << "β{ "; pr(o, n->a); o << " }"; return;
    case Tag::Rho:
      o << "ρ "; pr_head(o, n->a); o << " @" << n->name << ". "; pr(o, n->b);
      o << " - "; pr(o, n->c); return;
    case Tag::Phi:
      o << "φ "; pr_head(o, n->a); o << " - "; pr_head(o, n->b); o << " { "; pr(o, n->c); o << " }";
      return;
    case Tag::Delta: o << "δ - "; pr(o, n->a); return;
    case Tag::Sym: o << "ς "; pr_atom(o, n->a); return;
    case Tag::Chi: o << "χ "; pr_head(o, n->a); o << " - "; pr(o, n->b); return;
    case Tag::Let:
      o << "[ " << n->name << " ◂ "; pr(o, n->a); o << " = "; pr(o, n->b); o << " ] - ";
      pr(o, n->c); return;
    case Tag::All:
    case Tag::Pi: {
      bool arrow = is_anonymous(n->name) && !(n->tag == Tag::All && is_kind(n->a));
      if (arrow) {
        pr_head(o, n->a);
        o << (n->tag == Tag::All ? " ➾ " : " ➔ ");
        pr(o, n->b);
        return;
      }
      pr_binder(o, n->tag == Tag::All ? "∀" : "Π", n);
      return;
    }
    case Tag::TLam: pr_binder(o, "λ", n); return;
    case Tag::Iota: pr_binder(o, "ι", n); return;
    case Tag::Eq: o << "{ "; pr(o, n->a); o << " ≃ "; pr(o, n->b); o << " }"; return;
  }
}

}  // namespace

bool alpha_equal(const NodeP& x, const NodeP& y) {
  AlphaEnv env;
  return alpha_go(x, y, env);
}

std::string print(const NodeP& n) {
  std::ostringstream o;
  if (n) pr(o, n);
  return o.str();
}

std::size_t node_count(const NodeP& n) {
  if (!n) return 0;
  return 1 + node_count(n->a) + node_count(n->b) + node_count(n->c);
}

}  // namespace cdle
