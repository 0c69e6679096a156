#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cdle/ast.hpp"

namespace cdle {

enum class Tok : std::uint8_t {
  Ident, QualIdent, Proj1, Proj2,
  Star, Pi, All, Lam, LamE, Iota, Arrow, EArrow, Tri, Simeq,
  Beta, Rho, Phi, Delta, Sym, Chi,
  Dot, Colon, Comma, LParen, RParen, LBrack, RBrack, LBrace, RBrace,
  Equals, Sep, EMark, TMark, At, Slash,
  Module, Import, As,
  End,
};

struct Token {
  Tok kind;
  std::string text;   // identifier text; for QualIdent the alias
  std::string text2;  // for QualIdent the member name
  Span span;
};

struct ParseError : std::runtime_error {
  Span span;
  std::string category;  // "lexical", "syntax", "duplicate", "path"
  ParseError(const std::string& cat, const std::string& msg, Span s)
      : std::runtime_error(msg), span(s), category(cat) {}
};

std::vector<Token> lex(const std::string& src);

struct Param {
  std::string name;
  NodeP classifier;
  bool erased = false;
  Span span;
};

enum class ArgKind : std::uint8_t { Type, Term, Erased };

struct ImportArg {
  ArgKind kind;
  NodeP value;
};

struct Import {
  std::string path;
  std::optional<std::string> alias;
  std::vector<ImportArg> args;
  Span span;
};

struct Decl {
  std::string name;  // "_" for anonymous
  NodeP classifier;
  NodeP body;
  bool type_level = false;
  Span span;
};

using Item = std::variant<Import, Decl>;

struct SurfaceModule {
  std::string path;
  std::vector<Param> params;
  std::vector<Item> items;  // imports and declarations in source order
  std::size_t header_index = 0;  // items before this index precede the module header
};

SurfaceModule parse_module(const std::string& source, const std::string& path);
NodeP parse_term(const std::string& source);
NodeP parse_classifier(const std::string& source);

std::string print_module(const SurfaceModule& m);
bool alpha_equal_modules(const SurfaceModule& x, const SurfaceModule& y);

// Rewrites Unicode symbols to their ASCII aliases (used by tests and tooling).
std::string to_ascii(const std::string& source);

}  // namespace cdle
