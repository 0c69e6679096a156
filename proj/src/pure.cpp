#include "cdle/pure.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cdle/syntax.hpp"

namespace cdle {

PureP p_bvar(int i) {
  auto p = std::make_shared<Pure>();
  p->tag = PTag::BVar;
  p->index = i;
  p->loose = i + 1;
  return p;
}

PureP p_fvar(const std::string& n) {
  auto p = std::make_shared<Pure>();
  p->tag = PTag::FVar;
  p->name = n;
  return p;
}

namespace {

// Tree sizes of shared terms can exceed the word size.
std::size_t saturating_add(std::size_t x, std::size_t y) {
  return x > std::numeric_limits<std::size_t>::max() - y ? std::numeric_limits<std::size_t>::max() : x + y;
}

}  // namespace

PureP p_lam(const std::string& hint, PureP body) {
  auto p = std::make_shared<Pure>();
  p->tag = PTag::Lam;
  p->name = hint;
  p->loose = body->loose > 0 ? body->loose - 1 : 0;
  p->size = saturating_add(1, body->size);
  p->f = std::move(body);
  return p;
}

PureP p_app(PureP f, PureP a) {
  auto p = std::make_shared<Pure>();
  p->tag = PTag::App;
  p->loose = std::max(f->loose, a->loose);
  p->size = saturating_add(1, saturating_add(f->size, a->size));
  p->f = std::move(f);
  p->a = std::move(a);
  return p;
}

PureP p_apps(PureP f, std::initializer_list<PureP> args) {
  for (auto& a : args) f = p_app(f, a);
  return f;
}

namespace {

PureP abstract_at(const PureP& t, const std::string& x, int depth) {
  switch (t->tag) {
    case PTag::FVar: return t->name == x ? p_bvar(depth) : t;
    case PTag::BVar: return t;
    case PTag::Lam: {
      auto b = abstract_at(t->f, x, depth + 1);
      return b == t->f ? t : p_lam(t->name, b);
    }
    case PTag::App: {
      auto f = abstract_at(t->f, x, depth), a = abstract_at(t->a, x, depth);
      return f == t->f && a == t->a ? t : p_app(f, a);
    }
  }
  return t;
}

PureP subst_at(const PureP& t, int j, const PureP& v) {
  // Substitutes index j by v (v is valid at depth 0 and shifted by j here),
  // decrementing indices above j.
  if (t->loose <= j) return t;
  switch (t->tag) {
    case PTag::BVar:
      if (t->index == j) return shift(v, j);
      return t->index > j ? p_bvar(t->index - 1) : t;
    case PTag::FVar: return t;
    case PTag::Lam: return p_lam(t->name, subst_at(t->f, j + 1, v));
    case PTag::App: return p_app(subst_at(t->f, j, v), subst_at(t->a, j, v));
  }
  return t;
}

PureP subst_free_at(const PureP& t, const std::string& x, const PureP& v, int depth) {
  switch (t->tag) {
    case PTag::FVar: return t->name == x ? shift(v, depth) : t;
    case PTag::BVar: return t;
    case PTag::Lam: {
      auto b = subst_free_at(t->f, x, v, depth + 1);
      return b == t->f ? t : p_lam(t->name, b);
    }
    case PTag::App: {
      auto f = subst_free_at(t->f, x, v, depth), a = subst_free_at(t->a, x, v, depth);
      return f == t->f && a == t->a ? t : p_app(f, a);
    }
  }
  return t;
}

void fv_go(const PureP& t, std::set<std::string>& out) {
  switch (t->tag) {
    case PTag::FVar: out.insert(t->name); return;
    case PTag::BVar: return;
    case PTag::Lam: fv_go(t->f, out); return;
    case PTag::App: fv_go(t->f, out); fv_go(t->a, out); return;
  }
}

}  // namespace

PureP p_abstract(const std::string& x, const PureP& body) {
  return p_lam(x, abstract_at(body, x, 0));
}

PureP shift(const PureP& t, int d, int cutoff) {
  if (d == 0 || t->loose <= cutoff) return t;
  switch (t->tag) {
    case PTag::BVar: return t->index >= cutoff ? p_bvar(t->index + d) : t;
    case PTag::FVar: return t;
    case PTag::Lam: return p_lam(t->name, shift(t->f, d, cutoff + 1));
    case PTag::App: return p_app(shift(t->f, d, cutoff), shift(t->a, d, cutoff));
  }
  return t;
}

PureP instantiate(const PureP& body, const PureP& v) { return subst_at(body, 0, v); }

PureP subst_free(const PureP& t, const std::string& x, const PureP& v) {
  return subst_free_at(t, x, v, 0);
}

bool pure_equal(const PureP& x, const PureP& y) {
  if (x == y) return true;
  if (x->tag != y->tag || x->size != y->size) return false;
  switch (x->tag) {
    case PTag::BVar: return x->index == y->index;
    case PTag::FVar: return x->name == y->name;
    case PTag::Lam: return pure_equal(x->f, y->f);
    case PTag::App: return pure_equal(x->f, y->f) && pure_equal(x->a, y->a);
  }
  return false;
}

std::set<std::string> free_vars(const PureP& t) {
  std::set<std::string> out;
  fv_go(t, out);
  return out;
}

bool is_closed(const PureP& t) { return t->loose == 0 && free_vars(t).empty(); }

std::size_t pure_size(const PureP& t) { return t->size; }

namespace {

void print_go(std::ostream& o, const PureP& t, std::vector<std::string>& names, int ctx) {
  // ctx: 0 top, 1 function position, 2 argument position
  switch (t->tag) {
    case PTag::BVar: {
      int i = t->index;
      if (i < static_cast<int>(names.size())) o << names[names.size() - 1 - i];
      else o << "#" << i;
      return;
    }
    case PTag::FVar: o << t->name; return;
    case PTag::Lam: {
      if (ctx > 0) o << "(";
      std::string base = t->name.empty() || t->name == "_" ? "x" : t->name;
      auto h = base.find('#');
      if (h != std::string::npos) base = base.substr(0, h);
      std::set<std::string> fv = free_vars(t);
      std::string n = base;
      int k = 0;
      auto taken = [&](const std::string& c) {
        if (fv.count(c)) return true;
        for (auto& m : names)
          if (m == c) return true;
        return false;
      };
      while (taken(n)) n = base + std::to_string(++k);
      names.push_back(n);
      o << "λ " << n << ". ";
      print_go(o, t->f, names, 0);
      names.pop_back();
      if (ctx > 0) o << ")";
      return;
    }
    case PTag::App:
      if (ctx == 2) o << "(";
      print_go(o, t->f, names, 1);
      o << " ";
      print_go(o, t->a, names, 2);
      if (ctx == 2) o << ")";
      return;
  }
}

PureP from_node(const NodeP& n, std::vector<std::string>& bound) {
  switch (n->tag) {
    case Tag::Var: {
      for (int i = static_cast<int>(bound.size()) - 1; i >= 0; --i)
        if (bound[i] == n->name) return p_bvar(static_cast<int>(bound.size()) - 1 - i);
      return p_fvar(n->name);
    }
    case Tag::Lam: {
      bound.push_back(n->name);
      auto b = from_node(n->b, bound);
      bound.pop_back();
      return p_lam(n->name, b);
    }
    case Tag::App: return p_app(from_node(n->a, bound), from_node(n->b, bound));
    default:
      throw std::invalid_argument("not a pure term: " + print(n));
  }
}

PureP erase_go(const NodeP& n, std::vector<std::string>& bound) {
  switch (n->tag) {
    case Tag::Var: {
      for (int i = static_cast<int>(bound.size()) - 1; i >= 0; --i)
        if (bound[i] == n->name) return p_bvar(static_cast<int>(bound.size()) - 1 - i);
      return p_fvar(n->name);
    }
    case Tag::Lam: {
      bound.push_back(n->name);
      auto b = erase_go(n->b, bound);
      bound.pop_back();
      return p_lam(n->name, b);
    }
    case Tag::App: return p_app(erase_go(n->a, bound), erase_go(n->b, bound));
    case Tag::LamE: {
      // The bound variable cannot occur in a well-typed erasure; shadowing it
      // keeps any stray occurrence from resolving to an outer binder.
      bound.push_back(n->name);
      auto b = erase_go(n->b, bound);
      bound.pop_back();
      if (b->loose > 0) {
        // An occurrence of the erased variable remains; keep it visible as a
        // free name so the side condition can report it.
        return subst_at(b, 0, p_fvar(n->name));
      }
      return b;
    }
    case Tag::AppE:
    case Tag::AppT:
    case Tag::Proj1:
    case Tag::Proj2:
    case Tag::Pair:
    case Tag::Beta:
    case Tag::Sym:
    case Tag::Delta:
      break;
    default:
      break;
  }
  switch (n->tag) {
    case Tag::AppE: case Tag::AppT: case Tag::Proj1: case Tag::Proj2: case Tag::Pair:
    case Tag::Beta: case Tag::Sym:
      return erase_go(n->a, bound);
    case Tag::Delta: return p_lam("x", p_bvar(0));
    case Tag::Rho: return erase_go(n->c, bound);
    case Tag::Phi: return erase_go(n->c, bound);
    case Tag::Chi: return erase_go(n->b, bound);
    case Tag::Let: {
      auto v = erase_go(n->b, bound);
      bound.push_back(n->name);
      auto b = erase_go(n->c, bound);
      bound.pop_back();
      return p_app(p_lam(n->name, b), v);
    }
    default:
      throw std::invalid_argument("erasure applied to a non-term: " + print(n));
  }
}

NodeP embed_go(const PureP& t, std::vector<std::string>& names) {
  switch (t->tag) {
    case PTag::BVar: return mk_var(names[names.size() - 1 - t->index]);
    case PTag::FVar: return mk_var(t->name);
    case PTag::Lam: {
      std::string x = fresh_name(t->name.empty() ? "x" : t->name);
      names.push_back(x);
      auto b = embed_go(t->f, names);
      names.pop_back();
      return mk_lam(x, nullptr, b);
    }
    case PTag::App: return mk_app(embed_go(t->f, names), embed_go(t->a, names));
  }
  return nullptr;
}

}  // namespace

std::string print_pure(const PureP& t) {
  std::ostringstream o;
  std::vector<std::string> names;
  print_go(o, t, names, 0);
  return o.str();
}

PureP pure_of_node(const NodeP& n) {
  std::vector<std::string> bound;
  return from_node(n, bound);
}

PureP parse_pure(const std::string& src) { return pure_of_node(parse_term(src)); }

PureP erase(const NodeP& t) {
  std::vector<std::string> bound;
  return erase_go(t, bound);
}

NodeP embed(const PureP& t) {
  std::vector<std::string> names;
  return embed_go(t, names);
}

}  // namespace cdle
