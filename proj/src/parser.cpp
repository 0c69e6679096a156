#include <set>
#include <sstream>

#include "cdle/syntax.hpp"

namespace cdle {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  SurfaceModule module(const std::string& expected_path) {
    SurfaceModule m;
    while (peek().kind == Tok::Import) m.items.emplace_back(import());
    m.header_index = m.items.size();
    expect(Tok::Module, "'module'");
    Span ps = peek().span;
    m.path = path();
    if (!expected_path.empty() && m.path != expected_path)
      throw ParseError("path", "module '" + m.path + "' declared in file for '" + expected_path + "'", ps);
    while (peek().kind == Tok::LParen || peek().kind == Tok::LBrace) m.params.push_back(param());
    expect(Tok::Dot, "'.' after module header");
    std::set<std::string> seen;
    for (auto& p : m.params) seen.insert(p.name);
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Import) {
        m.items.emplace_back(import());
        continue;
      }
      Decl d = decl();
      if (!is_anonymous(d.name) && !seen.insert(d.name).second)
        throw ParseError("duplicate", "duplicate definition '" + d.name + "'", d.span);
      m.items.emplace_back(std::move(d));
    }
    return m;
  }

  NodeP standalone_term() {
    NodeP t = term();
    expect(Tok::End, "end of input");
    return t;
  }

  NodeP standalone_classifier() {
    NodeP t = type();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + describe(t) + "'";
    throw ParseError("syntax", "expected " + what + ", found " + found, t.span);
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::QualIdent) return t.text + "." + t.text2;
    if (!t.text.empty()) return t.text;
    switch (t.kind) {
      case Tok::Proj1: return ".1";
      case Tok::Proj2: return ".2";
      case Tok::Arrow: return "➔";
      case Tok::EArrow: return "➾";
      case Tok::Tri: return "◂";
      case Tok::Simeq: return "≃";
      case Tok::Dot: return ".";
      case Tok::Colon: return ":";
      case Tok::Comma: return ",";
      case Tok::LParen: return "(";
      case Tok::RParen: return ")";
      case Tok::LBrack: return "[";
      case Tok::RBrack: return "]";
      case Tok::LBrace: return "{";
      case Tok::RBrace: return "}";
      case Tok::Equals: return "=";
      case Tok::Sep: case Tok::EMark: return "-";
      case Tok::TMark: return "·";
      case Tok::At: return "@";
      case Tok::Slash: return "/";
      case Tok::Star: return "★";
      default: return "token";
    }
  }

  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail(what);
    return take();
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    take();
    return true;
  }

  Span from(const Span& b) const {
    Span s = b;
    s.end = pos_ > 0 ? toks_[pos_ - 1].span.end : b.end;
    return s;
  }

  // Binder names may arrive fused with the body as a qualified token
  // (`λ x.x`); split those back apart.
  std::string binder_name(bool dot_follows_fused) {
    Token& t = toks_[pos_];
    if (t.kind == Tok::Ident) {
      take();
      return t.text;
    }
    if (t.kind == Tok::QualIdent && dot_follows_fused) {
      std::string name = t.text;
      t.kind = Tok::Ident;
      t.text = t.text2;
      t.text2.clear();
      fused_dot_ = true;
      return name;
    }
    fail("a binder name");
  }

  bool fused_dot_ = false;

  void binder_dot() {
    if (fused_dot_) {
      fused_dot_ = false;
      return;
    }
    expect(Tok::Dot, "'.'");
  }

  std::string path() {
    std::string p = expect(Tok::Ident, "a module path").text;
    while (accept(Tok::Slash)) p += "/" + expect(Tok::Ident, "a path segment").text;
    return p;
  }

  Param param() {
    Span s = peek().span;
    bool erased = peek().kind == Tok::LBrace;
    take();
    Param p;
    p.name = expect(Tok::Ident, "a parameter name").text;
    expect(Tok::Colon, "':'");
    p.classifier = type();
    expect(erased ? Tok::RBrace : Tok::RParen, erased ? "'}'" : "')'");
    p.erased = erased;
    p.span = from(s);
    return p;
  }

  Import import() {
    Span s = expect(Tok::Import, "'import'").span;
    Import im;
    im.path = path();
    if (accept(Tok::As)) im.alias = expect(Tok::Ident, "an alias").text;
    while (peek().kind != Tok::Dot) {
      if (accept(Tok::TMark)) {
        im.args.push_back({ArgKind::Type, type_atom()});
      } else if (accept(Tok::EMark)) {
        im.args.push_back({ArgKind::Erased, postfix_atom()});
      } else if (starts_atom(peek().kind)) {
        im.args.push_back({ArgKind::Term, postfix_atom()});
      } else {
        fail("an import argument or '.'");
      }
    }
    take();
    im.span = from(s);
    return im;
  }

  Decl decl() {
    Span s = peek().span;
    Decl d;
    d.name = expect(Tok::Ident, "a definition name").text;
    expect(Tok::Tri, "'◂'");
    d.classifier = type();
    expect(Tok::Equals, "'='");
    d.type_level = is_kind(d.classifier);
    d.body = d.type_level ? type() : term();
    expect(Tok::Dot, "'.' ending the definition");
    d.span = from(s);
    return d;
  }

  static bool starts_atom(Tok k) {
    return k == Tok::Ident || k == Tok::QualIdent || k == Tok::LParen || k == Tok::Beta ||
           k == Tok::LBrack;
  }

  // ---- classifiers ----

  NodeP type() {
    Span s = peek().span;
    switch (peek().kind) {
      case Tok::All: case Tok::Pi: case Tok::Lam: case Tok::Iota: {
        Tok k = take().kind;
        std::string x = binder_name(true);
        NodeP dom;
        if (!fused_dot_ && accept(Tok::Colon)) dom = type();
        if (!dom) {
          if (k != Tok::All) fail("':' and a classifier for the type-level binder");
          dom = mk_star();
        }
        binder_dot();
        NodeP body = type();
        Tag tag = k == Tok::All ? Tag::All : k == Tok::Pi ? Tag::Pi : k == Tok::Lam ? Tag::TLam : Tag::Iota;
        return mk_binder(tag, x, dom, body, from(s));
      }
      default:
        break;
    }
    NodeP lhs = type_app();
    if (accept(Tok::Arrow)) return mk_binder(Tag::Pi, "_", lhs, type(), from(s));
    if (accept(Tok::EArrow)) return mk_binder(Tag::All, "_", lhs, type(), from(s));
    return lhs;
  }

  NodeP type_app() {
    Span s = peek().span;
    NodeP head = type_atom();
    for (;;) {
      if (accept(Tok::TMark)) {
        head = mk_tappt(head, type_atom(), from(s));
      } else if (starts_atom(peek().kind) && peek().kind != Tok::LBrack) {
        head = mk_tapp(head, postfix_atom(), from(s));
      } else {
        return head;
      }
    }
  }

  NodeP type_atom() {
    Span s = peek().span;
    switch (peek().kind) {
      case Tok::Ident: return mk_var(take().text, s);
      case Tok::QualIdent: {
        Token t = take();
        return mk_var(t.text + "." + t.text2, s);
      }
      case Tok::Star: take(); return mk_star(s);
      case Tok::LParen: {
        take();
        NodeP t = type();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::LBrace: {
        take();
        NodeP l = term();
        expect(Tok::Simeq, "'≃'");
        NodeP r = term();
        expect(Tok::RBrace, "'}'");
        return mk_eq(l, r, from(s));
      }
      default:
        fail("a type");
    }
  }

  // ---- terms ----

  NodeP term() {
    Span s = peek().span;
    switch (peek().kind) {
      case Tok::Lam: case Tok::LamE: {
        bool erased = take().kind == Tok::LamE;
        std::string x = binder_name(true);
        NodeP ann;
        if (!fused_dot_ && accept(Tok::Colon)) ann = type();
        binder_dot();
        NodeP body = term();
        return erased ? mk_lame(x, ann, body, from(s)) : mk_lam(x, ann, body, from(s));
      }
      case Tok::Rho: {
        take();
        NodeP eq = app();
        expect(Tok::At, "'@' introducing the rewrite guide");
        std::string x = binder_name(true);
        binder_dot();
        NodeP guide = type();
        expect(Tok::Sep, "' - ' after the rewrite guide");
        NodeP body = term();
        return mk(Tag::Rho, x, eq, guide, body, from(s));
      }
      case Tok::Phi: {
        take();
        NodeP eq = app();
        expect(Tok::Sep, "' - '");
        NodeP t1 = app();
        expect(Tok::LBrace, "'{'");
        NodeP t2 = term();
        expect(Tok::RBrace, "'}'");
        return mk(Tag::Phi, "", eq, t1, t2, from(s));
      }
      case Tok::Delta: {
        take();
        expect(Tok::Sep, "' - '");
        NodeP t = term();
        return mk(Tag::Delta, "", t, nullptr, nullptr, from(s));
      }
      case Tok::Chi: {
        take();
        NodeP ty = type();
        expect(Tok::Sep, "' - '");
        NodeP t = term();
        return mk(Tag::Chi, "", ty, t, nullptr, from(s));
      }
      case Tok::LBrack:
        if (peek(1).kind == Tok::Ident && peek(2).kind == Tok::Tri) {
          take();
          std::string x = take().text;
          take();
          NodeP ty = type();
          expect(Tok::Equals, "'='");
          NodeP val = term();
          expect(Tok::RBrack, "']'");
          expect(Tok::Sep, "' - '");
          NodeP body = term();
          return mk(Tag::Let, x, ty, val, body, from(s));
        }
        break;
      default:
        break;
    }
    return app();
  }

  NodeP app() {
    Span s = peek().span;
    NodeP head;
    if (accept(Tok::Sym)) {
      head = mk(Tag::Sym, "", postfix_atom(), nullptr, nullptr, from(s));
    } else {
      head = postfix_atom();
    }
    for (;;) {
      Tok k = peek().kind;
      if (k == Tok::TMark) {
        take();
        head = mk_appt(head, type_atom(), from(s));
      } else if (k == Tok::EMark) {
        take();
        head = mk_appe(head, postfix_atom(), from(s));
      } else if (starts_atom(k)) {
        head = mk_app(head, postfix_atom(), from(s));
      } else if (k == Tok::Lam || k == Tok::LamE) {
        return mk_app(head, term(), from(s));
      } else {
        return head;
      }
    }
  }

  NodeP postfix_atom() {
    Span s = peek().span;
    NodeP t = atom();
    for (;;) {
      if (accept(Tok::Proj1)) {
        t = mk(Tag::Proj1, "", t, nullptr, nullptr, from(s));
      } else if (accept(Tok::Proj2)) {
        t = mk(Tag::Proj2, "", t, nullptr, nullptr, from(s));
      } else {
        return t;
      }
    }
  }

  NodeP atom() {
    Span s = peek().span;
    switch (peek().kind) {
      case Tok::Ident: return mk_var(take().text, s);
      case Tok::QualIdent: {
        Token t = take();
        return mk_var(t.text + "." + t.text2, s);
      }
      case Tok::LParen: {
        take();
        NodeP t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::Beta: {
        Token b = take();
        if (peek().kind == Tok::LBrace && peek().span.begin == b.span.end) {
          take();
          NodeP payload = term();
          expect(Tok::RBrace, "'}'");
          return mk_beta(payload, from(s));
        }
        return mk_beta(identity_term(), s);
      }
      case Tok::LBrack: {
        take();
        NodeP l = term();
        expect(Tok::Comma, "','");
        NodeP r = term();
        expect(Tok::RBrack, "']'");
        return mk(Tag::Pair, "", l, r, nullptr, from(s));
      }
      case Tok::Sym: {
        take();
        return mk(Tag::Sym, "", postfix_atom(), nullptr, nullptr, from(s));
      }
      default:
        fail("a term");
    }
  }
};

}  // namespace

SurfaceModule parse_module(const std::string& source, const std::string& path) {
  return Parser(source).module(path);
}

NodeP parse_term(const std::string& source) { return Parser(source).standalone_term(); }

NodeP parse_classifier(const std::string& source) { return Parser(source).standalone_classifier(); }

namespace {

std::string print_import(const Import& im) {
  std::ostringstream o;
  o << "import " << im.path;
  if (im.alias) o << " as " << *im.alias;
  for (auto& a : im.args) {
    o << " ";
    std::string v = print(a.value);
    bool simple = a.value->tag == Tag::Var || a.value->tag == Tag::Star;
    if (!simple) v = "(" + v + ")";
    if (a.kind == ArgKind::Type) o << "·";
    if (a.kind == ArgKind::Erased) o << "-";
    o << v;
  }
  o << " .\n";
  return o.str();
}

}  // namespace

std::string print_module(const SurfaceModule& m) {
  std::ostringstream o;
  for (std::size_t i = 0; i < m.header_index && i < m.items.size(); ++i)
    o << print_import(std::get<Import>(m.items[i]));
  o << "module " << m.path;
  for (auto& p : m.params)
    o << (p.erased ? " {" : " (") << p.name << ": " << print(p.classifier) << (p.erased ? "}" : ")");
  o << " .\n";
  for (std::size_t i = m.header_index; i < m.items.size(); ++i) {
    if (auto* im = std::get_if<Import>(&m.items[i])) {
      o << print_import(*im);
    } else {
      auto& d = std::get<Decl>(m.items[i]);
      o << d.name << " ◂ " << print(d.classifier) << "\n  = " << print(d.body) << " .\n";
    }
  }
  return o.str();
}

bool alpha_equal_modules(const SurfaceModule& x, const SurfaceModule& y) {
  if (x.path != y.path || x.params.size() != y.params.size() || x.items.size() != y.items.size() ||
      x.header_index != y.header_index)
    return false;
  for (std::size_t i = 0; i < x.params.size(); ++i) {
    auto& p = x.params[i];
    auto& q = y.params[i];
    if (p.name != q.name || p.erased != q.erased || !alpha_equal(p.classifier, q.classifier)) return false;
  }
  for (std::size_t i = 0; i < x.items.size(); ++i) {
    if (x.items[i].index() != y.items[i].index()) return false;
    if (auto* a = std::get_if<Import>(&x.items[i])) {
      auto& b = std::get<Import>(y.items[i]);
      if (a->path != b.path || a->alias != b.alias || a->args.size() != b.args.size()) return false;
      for (std::size_t j = 0; j < a->args.size(); ++j)
        if (a->args[j].kind != b.args[j].kind || !alpha_equal(a->args[j].value, b.args[j].value))
          return false;
    } else {
      auto& a2 = std::get<Decl>(x.items[i]);
      auto& b2 = std::get<Decl>(y.items[i]);
      if (a2.name != b2.name || !alpha_equal(a2.classifier, b2.classifier) || !alpha_equal(a2.body, b2.body))
        return false;
    }
  }
  return true;
}

}  // namespace cdle
