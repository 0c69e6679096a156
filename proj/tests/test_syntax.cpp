#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "support.hpp"

using namespace cdle;

namespace {

std::vector<std::string> decl_names(const SurfaceModule& m) {
  std::vector<std::string> out;
  for (const auto& it : m.items)
    if (auto* d = std::get_if<Decl>(&it)) out.push_back(d->name);
  return out;
}

std::vector<std::string> corpus_modules() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(test::corpus_dir()))
    if (e.path().extension() == ".ced") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

const char* kCastListing = R"(module cast.

import view .

Cast ◂ ★ ➔ ★ ➔ ★ = λ S: ★. λ T: ★. View ·(S ➔ T) β{ λ x. x } .

intrCast ◂ ∀ S: ★. ∀ T: ★. ∀ t: S ➔ T. (Π x: S. { t x ≃ x }) ➾ Cast ·S ·T
= Λ S. Λ T. Λ t. Λ t'.
  extView ·S ·T β{ λ x. x } -(λ x. intrView β{ x } -(t x) -(t' x)) .

elimCast ◂ ∀ S: ★. ∀ T: ★. Cast ·S ·T ➾ S ➔ T
= Λ S. Λ T. Λ c. elimView β{ λ x. x } -c .

eqCast ◂ ∀ S: ★. ∀ T: ★. ∀ c: Cast ·S ·T. { λ x. x ≃ c }
= Λ S. Λ T. Λ c. eqView -β{ λ x. x } -c .
)";

}  // namespace

TEST_CASE("a one-declaration module") {
  SurfaceModule m = parse_module("module m . idU ◂ Top = β{ λ x. x } .", "");
  CHECK(m.path == "m");
  CHECK(m.params.empty());
  REQUIRE(decl_names(m) == std::vector<std::string>{"idU"});
  const Decl& d = std::get<Decl>(m.items[0]);
  CHECK(d.classifier->tag == Tag::Var);
  CHECK(d.classifier->name == "Top");
  CHECK(d.body->tag == Tag::Beta);
}

TEST_CASE("the cast listing parses to its four declarations") {
  SurfaceModule m = parse_module(kCastListing, "cast");
  CHECK(decl_names(m) == std::vector<std::string>{"Cast", "intrCast", "elimCast", "eqCast"});
  CHECK(std::get<Decl>(m.items[1]).type_level);
  CHECK_FALSE(std::get<Decl>(m.items[2]).type_level);
}

TEST_CASE("duplicate names are rejected, repeated anonymous ones are not") {
  try {
    parse_module("module m . x ◂ T = t . x ◂ T = t .", "");
    FAIL("expected a duplicate-name error");
  } catch (const ParseError& e) {
    CHECK(e.category == "duplicate");
    CHECK(e.span.line == 1);
  }
  SurfaceModule m = parse_module("module m . _ ◂ T = t . _ ◂ T = t .", "");
  CHECK(decl_names(m).size() == 2);
}

TEST_CASE("module path must match the file") {
  CHECK_THROWS_AS(parse_module("module a/b .", "a/c"), ParseError);
  CHECK(parse_module("module a/b .", "a/b").path == "a/b");
}

TEST_CASE("Scott zero parses as an erased chain over a term chain") {
  NodeP t = parse_term("Λ N. Λ X. λ z. λ s. z");
  REQUIRE(t->tag == Tag::LamE);
  CHECK(t->name == "N");
  REQUIRE(t->b->tag == Tag::LamE);
  REQUIRE(t->b->b->tag == Tag::Lam);
  REQUIRE(t->b->b->b->tag == Tag::Lam);
  CHECK(t->b->b->b->b->tag == Tag::Var);
  CHECK(t->b->b->b->b->name == "z");
}

TEST_CASE("intersection introduction of two type applications") {
  NodeP t = parse_term("[ zeroF ·Nat , zeroWkIndNatF ·Nat ]");
  REQUIRE(t->tag == Tag::Pair);
  CHECK(t->a->tag == Tag::AppT);
  CHECK(t->a->a->name == "zeroF");
  CHECK(t->b->tag == Tag::AppT);
  CHECK(t->b->b->name == "Nat");
}

TEST_CASE("truncated input is a syntax error") {
  try {
    parse_term("λ x.");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.category == "syntax");
  }
}

TEST_CASE("unknown codepoints are lexical errors") {
  try {
    lex("λ x. x ☃");
    FAIL("expected a lexical error");
  } catch (const ParseError& e) {
    CHECK(e.category == "lexical");
  }
}

TEST_CASE("application is left-associative with suffix markers") {
  NodeP t = parse_term("f a -b ·T c");
  REQUIRE(t->tag == Tag::App);
  CHECK(t->b->name == "c");
  REQUIRE(t->a->tag == Tag::AppT);
  REQUIRE(t->a->a->tag == Tag::AppE);
  REQUIRE(t->a->a->a->tag == Tag::App);
  CHECK(t->a->a->a->a->name == "f");
}

TEST_CASE("arrow sugar") {
  NodeP pi = parse_classifier("A ➔ B");
  CHECK(pi->tag == Tag::Pi);
  CHECK(is_anonymous(pi->name));
  NodeP all = parse_classifier("A ➾ B");
  CHECK(all->tag == Tag::All);
  CHECK(is_anonymous(all->name));
}

TEST_CASE("β without payload defaults to the identity") {
  NodeP b = parse_term("β");
  REQUIRE(b->tag == Tag::Beta);
  CHECK(alpha_equal(b->a, parse_term("λ x. x")));
}

TEST_CASE("chained ρ continues to the right") {
  NodeP t = parse_term("ρ e1 @x.{ x ≃ a } - ρ e2 @y.{ y ≃ b } - t");
  REQUIRE(t->tag == Tag::Rho);
  CHECK(t->name == "x");
  REQUIRE(t->c->tag == Tag::Rho);
  CHECK(t->c->name == "y");
  CHECK(t->c->c->name == "t");
}

TEST_CASE("ASCII aliases lex to the same tokens") {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"★", "*"},   {"Π", "Pi"},    {"∀", "All"},   {"λ", "lam"},      {"Λ", "Lam"}, {"ι", "iota"},
      {"·", "^"},   {"➔", "->"},    {"➾", "=>"},    {"◂", "<|"},       {"≃", "~="},  {"β", "beta"},
      {"ρ", "rho"}, {"φ", "phi"},   {"δ", "delta"}, {"ς", "sigma-sym"}, {"χ", "chi"}};
  for (const auto& [u, a] : pairs) {
    auto tu = lex(u), ta = lex(a);
    REQUIRE(tu.size() == 2);
    REQUIRE(ta.size() == 2);
    CHECK_MESSAGE(tu[0].kind == ta[0].kind, u << " vs " << a);
  }
}

TEST_CASE("comments are skipped") {
  SurfaceModule m = parse_module("-- header\nmodule m . -- trailing\nx ◂ T = t . -- more\n", "");
  CHECK(decl_names(m) == std::vector<std::string>{"x"});
}

TEST_CASE("corpus files survive print and re-parse") {
  for (const auto& file : corpus_modules()) {
    CAPTURE(file);
    SurfaceModule m = parse_module(test::read_text(file), "");
    SurfaceModule again = parse_module(print_module(m), "");
    CHECK(alpha_equal_modules(m, again));
  }
}

TEST_CASE("corpus files parse identically in their ASCII spelling") {
  for (const auto& file : corpus_modules()) {
    CAPTURE(file);
    std::string src = test::read_text(file);
    CHECK(alpha_equal_modules(parse_module(src, ""), parse_module(to_ascii(src), "")));
  }
}

TEST_CASE("the ASCII spelling of a comment-free module is pure ASCII") {
  std::string ascii = to_ascii(kCastListing);
  CHECK(std::all_of(ascii.begin(), ascii.end(), [](unsigned char c) { return c < 0x80; }));
  CHECK(alpha_equal_modules(parse_module(kCastListing, ""), parse_module(ascii, "")));
}
