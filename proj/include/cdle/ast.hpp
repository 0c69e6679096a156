#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace cdle {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int col = 0;
};

// One node type carries terms, types and kinds. Which sort a node belongs to
// is fixed by the position it was parsed in.
enum class Tag : std::uint8_t {
  Var,
  Star,
  // terms
  Lam,    // name, a = annotation (nullable), b = body
  LamE,   // Λ: binds a type variable or an erased term variable
  App,    // a b
  AppE,   // a -b
  AppT,   // a ·b
  Pair,   // [a, b]
  Proj1,  // a.1
  Proj2,  // a.2
  Beta,   // β{a}
  Rho,    // ρ a @name.b - c
  Phi,    // φ a - b {c}
  Delta,  // δ - a
  Sym,    // ς a
  Chi,    // χ a - b
  Let,    // [name ◂ a = b] - c
  // types and kinds
  All,   // ∀ name: a. b   (a kind: type quantifier; a type: implicit product)
  Pi,    // Π name: a. b   (b kind: kind arrow; otherwise dependent function)
  TLam,  // λ name: a. b   (type-level abstraction)
  Iota,  // ι name: a. b
  TApp,  // a b   (type applied to term)
  TAppT, // a ·b  (type applied to type)
  Eq,    // { a ≃ b }
};

struct Node;
using NodeP = std::shared_ptr<const Node>;

struct Node {
  Tag tag;
  std::string name;
  NodeP a, b, c;
  Span span;
  std::uint64_t bloom = 0;  // over-approximation of the free names
};

std::uint64_t name_bloom(const std::string& n);

NodeP mk(Tag tag, std::string name, NodeP a, NodeP b, NodeP c, Span span = {});
NodeP mk_var(const std::string& n, Span span = {});
NodeP mk_star(Span span = {});
NodeP mk_lam(const std::string& x, NodeP ann, NodeP body, Span span = {});
NodeP mk_lame(const std::string& x, NodeP ann, NodeP body, Span span = {});
NodeP mk_app(NodeP f, NodeP x, Span span = {});
NodeP mk_appe(NodeP f, NodeP x, Span span = {});
NodeP mk_appt(NodeP f, NodeP t, Span span = {});
NodeP mk_binder(Tag tag, const std::string& x, NodeP dom, NodeP body, Span span = {});
NodeP mk_tapp(NodeP f, NodeP t, Span span = {});
NodeP mk_tappt(NodeP f, NodeP t, Span span = {});
NodeP mk_eq(NodeP l, NodeP r, Span span = {});
NodeP mk_beta(NodeP payload, Span span = {});
NodeP identity_term();

bool binds(Tag t);             // does the tag bind `name` in child b
bool is_kind(const NodeP& n);  // ★, or Π with a kind codomain
bool is_anonymous(const std::string& n);

std::set<std::string> free_names(const NodeP& n);
bool occurs_free(const std::string& x, const NodeP& n);

std::string fresh_name(const std::string& base);

using Subst = std::map<std::string, NodeP>;
NodeP substitute(const NodeP& n, const Subst& s);
NodeP substitute1(const NodeP& n, const std::string& x, const NodeP& v);

bool alpha_equal(const NodeP& x, const NodeP& y);

std::string print(const NodeP& n);
std::size_t node_count(const NodeP& n);

}  // namespace cdle
