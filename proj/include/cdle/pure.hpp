#pragma once

#include <memory>
#include <set>
#include <string>

#include "cdle/ast.hpp"

namespace cdle {

// Untyped lambda terms in locally nameless form: bound variables are de
// Bruijn indices, free variables are names. Structural equality is therefore
// alpha-equivalence.
enum class PTag : std::uint8_t { BVar, FVar, Lam, App };

struct Pure;
using PureP = std::shared_ptr<const Pure>;

struct Pure {
  PTag tag;
  int index = 0;     // BVar
  std::string name;  // FVar name, Lam binder hint
  PureP f, a;        // Lam body in f; App function f, argument a
  int loose = 0;     // smallest k such that no index >= k (relative to this node) is free
  std::size_t size = 1;
};

PureP p_bvar(int i);
PureP p_fvar(const std::string& n);
PureP p_lam(const std::string& hint, PureP body);
PureP p_app(PureP f, PureP a);
PureP p_apps(PureP f, std::initializer_list<PureP> args);

// Closes `body` over the free name `x`, producing a λ.
PureP p_abstract(const std::string& x, const PureP& body);

PureP shift(const PureP& t, int d, int cutoff = 0);
// Replaces index 0 of a λ body by `v` (which lives outside the λ).
PureP instantiate(const PureP& body, const PureP& v);
// Capture-avoiding substitution of a free name.
PureP subst_free(const PureP& t, const std::string& x, const PureP& v);

bool pure_equal(const PureP& x, const PureP& y);  // alpha-equivalence
std::set<std::string> free_vars(const PureP& t);
bool is_closed(const PureP& t);
std::size_t pure_size(const PureP& t);
std::string print_pure(const PureP& t);

// Parses the pure fragment (variables, λ, application) of the term syntax.
PureP parse_pure(const std::string& src);
PureP pure_of_node(const NodeP& n);  // requires the node to be pure syntax

PureP erase(const NodeP& t);
// Embeds a pure term as annotated syntax with fresh binder names.
NodeP embed(const PureP& t);

}  // namespace cdle
