#include <cctype>
#include <unordered_map>

#include "cdle/syntax.hpp"

namespace cdle {

namespace {

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }
bool space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

const std::unordered_map<std::string, Tok>& keywords() {
  static const std::unordered_map<std::string, Tok> k = {
      {"module", Tok::Module}, {"import", Tok::Import}, {"as", Tok::As},
      {"Pi", Tok::Pi},         {"All", Tok::All},       {"lam", Tok::Lam},
      {"Lam", Tok::LamE},      {"iota", Tok::Iota},     {"beta", Tok::Beta},
      {"rho", Tok::Rho},       {"phi", Tok::Phi},       {"delta", Tok::Delta},
      {"sigma-sym", Tok::Sym}, {"chi", Tok::Chi},
  };
  return k;
}

const std::vector<std::pair<std::string, Tok>>& unicode_symbols() {
  static const std::vector<std::pair<std::string, Tok>> u = {
      {"★", Tok::Star}, {"Π", Tok::Pi},    {"∀", Tok::All},    {"λ", Tok::Lam},
      {"Λ", Tok::LamE}, {"ι", Tok::Iota},  {"➔", Tok::Arrow},  {"➾", Tok::EArrow},
      {"◂", Tok::Tri},  {"≃", Tok::Simeq}, {"β", Tok::Beta},   {"ρ", Tok::Rho},
      {"φ", Tok::Phi},  {"δ", Tok::Delta}, {"ς", Tok::Sym},    {"χ", Tok::Chi},
      {"·", Tok::TMark},
  };
  return u;
}

class Lexer {
 public:
  explicit Lexer(const std::string& s) : src_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      if (pos_ >= src_.size()) {
        out.push_back(Token{Tok::End, "", "", here(pos_)});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::size_t line_start_ = 0;

  Span here(std::size_t b) const {
    return Span{b, b, line_, static_cast<int>(b - line_start_) + 1};
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        line_start_ = pos_ + 1;
      }
      ++pos_;
    }
  }

  char at(std::size_t off) const { return pos_ + off < src_.size() ? src_[pos_ + off] : '\0'; }

  void skip_blank() {
    for (;;) {
      while (pos_ < src_.size() && space(src_[pos_])) advance(1);
      if (at(0) == '-' && at(1) == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
        continue;
      }
      return;
    }
  }

  Token make(Tok k, std::size_t begin, Span s, std::string text = "") {
    s.end = pos_;
    (void)begin;
    return Token{k, std::move(text), "", s};
  }

  std::string read_ident() {
    std::size_t b = pos_;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (ident_char(c)) {
        advance(1);
      } else if (c == '-' && ident_start_or_digit(at(1))) {
        advance(1);
      } else {
        break;
      }
    }
    return src_.substr(b, pos_ - b);
  }

  // Length of a `/seg/...::name` tail completing a global name such as
  // `scott/concrete/nat::zero`, or 0. Module paths without `::` stay split.
  std::size_t global_suffix() const {
    std::size_t i = pos_;
    auto ident_at = [&](std::size_t j) {
      if (j >= src_.size() || !ident_start(src_[j])) return j;
      while (j < src_.size() && (ident_char(src_[j]) || (src_[j] == '-' && j + 1 < src_.size() &&
                                                         ident_start_or_digit(src_[j + 1]))))
        ++j;
      return j;
    };
    while (i < src_.size() && src_[i] == '/') {
      std::size_t e = ident_at(i + 1);
      if (e == i + 1) return 0;
      i = e;
    }
    if (src_.compare(i, 2, "::") != 0) return 0;
    std::size_t e = ident_at(i + 2);
    return e == i + 2 ? 0 : e - pos_;
  }

  static bool ident_start_or_digit(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

  Token next() {
    std::size_t b = pos_;
    Span s = here(b);
    char c = src_[pos_];
    if (ident_start(c)) {
      std::string id = read_ident();
      auto& kw = keywords();
      if (auto it = kw.find(id); it != kw.end()) return make(it->second, b, s, id);
      if (std::size_t n = global_suffix(); n) {
        advance(n);
        return make(Tok::Ident, b, s, src_.substr(b, pos_ - b));
      }
      if (at(0) == '.' && ident_start(at(1))) {
        advance(1);
        std::string member = read_ident();
        Token t = make(Tok::QualIdent, b, s, id);
        t.text2 = member;
        return t;
      }
      return make(Tok::Ident, b, s, id);
    }
    for (auto& [sym, tok] : unicode_symbols()) {
      if (src_.compare(pos_, sym.size(), sym) == 0) {
        advance(sym.size());
        return make(tok, b, s, sym);
      }
    }
    auto two = [&](char x, char y) { return c == x && at(1) == y; };
    if (two('-', '>')) { advance(2); return make(Tok::Arrow, b, s); }
    if (two('=', '>')) { advance(2); return make(Tok::EArrow, b, s); }
    if (two('<', '|')) { advance(2); return make(Tok::Tri, b, s); }
    if (two('~', '=')) { advance(2); return make(Tok::Simeq, b, s); }
    switch (c) {
      case '-':
        advance(1);
        if (pos_ >= src_.size() || space(at(0))) return make(Tok::Sep, b, s);
        return make(Tok::EMark, b, s);
      case '.':
        if (at(1) == '1' || at(1) == '2') {
          Tok k = at(1) == '1' ? Tok::Proj1 : Tok::Proj2;
          if (ident_char(at(2))) break;
          advance(2);
          return make(k, b, s);
        }
        advance(1);
        return make(Tok::Dot, b, s);
      case ':': advance(1); return make(Tok::Colon, b, s);
      case ',': advance(1); return make(Tok::Comma, b, s);
      case '(': advance(1); return make(Tok::LParen, b, s);
      case ')': advance(1); return make(Tok::RParen, b, s);
      case '[': advance(1); return make(Tok::LBrack, b, s);
      case ']': advance(1); return make(Tok::RBrack, b, s);
      case '{': advance(1); return make(Tok::LBrace, b, s);
      case '}': advance(1); return make(Tok::RBrace, b, s);
      case '=': advance(1); return make(Tok::Equals, b, s);
      case '^': advance(1); return make(Tok::TMark, b, s);
      case '@': advance(1); return make(Tok::At, b, s);
      case '/': advance(1); return make(Tok::Slash, b, s);
      case '*': advance(1); return make(Tok::Star, b, s);
      default: break;
    }
    // Report the offending codepoint as a whole.
    std::size_t len = 1;
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0xF0) len = 4; else if (u >= 0xE0) len = 3; else if (u >= 0xC0) len = 2;
    std::string bad = src_.substr(pos_, len);
    s.end = pos_ + len;
    throw ParseError("lexical", "unexpected character '" + bad + "'", s);
  }
};

}  // namespace

std::vector<Token> lex(const std::string& src) { return Lexer(src).run(); }

std::string to_ascii(const std::string& source) {
  // Word aliases are padded only where they would fuse with a neighbouring
  // identifier; a leading space would turn an erased-argument mark `-` into
  // a separator.
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"★", "*"},     {"Π", "Pi"},   {"∀", "All"},   {"λ", "lam"},     {"Λ", "Lam"},
      {"ι", "iota"},  {"➔", " -> "}, {"➾", " => "},  {"◂", " <| "},    {"≃", " ~= "},
      {"β", "beta"},  {"ρ", "rho"},  {"φ", "phi"},   {"δ", "delta"},   {"ς", "sigma-sym"},
      {"χ", "chi"},   {"·", "^"},
  };
  auto word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-' || c == '*';
  };
  std::string out;
  out.reserve(source.size() * 2);
  std::size_t i = 0;
  while (i < source.size()) {
    if (source.compare(i, 2, "--") == 0) {
      std::size_t e = source.find('\n', i);
      if (e == std::string::npos) e = source.size();
      out.append(source, i, e - i);
      i = e;
      continue;
    }
    bool hit = false;
    for (auto& [u, a] : table) {
      if (source.compare(i, u.size(), u) == 0) {
        if (!out.empty() && word(out.back()) && out.back() != '-' && word(a.front())) out += ' ';
        out += a;
        i += u.size();
        if (i < source.size() && word(a.back()) && (word(source[i]) || static_cast<unsigned char>(source[i]) >= 0x80))
          out += ' ';
        hit = true;
        break;
      }
    }
    if (!hit) out += source[i++];
  }
  return out;
}

}  // namespace cdle
