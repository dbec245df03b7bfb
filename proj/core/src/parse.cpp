#include "tame/parse.hpp"

#include <cctype>
#include <vector>

namespace tame {

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  size_t i = 0;
  bool neg = false;
  if (text[i] == '-') {
    neg = true;
    ++i;
  }
  auto digits = [&](Integer& out) -> bool {
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      return false;
    std::string d;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
      d += text[i++];
    out = Integer(d);
    return true;
  };
  Integer num, den = 1;
  if (!digits(num)) return std::nullopt;
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!digits(den) || den == 0) return std::nullopt;
  }
  if (i != text.size()) return std::nullopt;
  Rational q(num, den);
  return neg ? Rational(-q) : q;
}

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  LParen,
  RParen,
  Dot,
  Plus,
  Minus,
  Star,
  Lt,
  Le,
  Eq,
  Ne,
  Ge,
  Gt,
  Arrow,
  KwExists,
  KwForall,
  KwAnd,
  KwOr,
  KwNot,
  KwImplies,
  KwTrue,
  KwFalse,
};

struct Token {
  Tok kind;
  std::string text;
  Rational number;
  int line, column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    cur_.line = line_;
    cur_.column = col_;
    if (pos_ >= src_.size()) {
      cur_.kind = Tok::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        id += src_[pos_];
        bump();
      }
      cur_.text = id;
      if (id == "exists")
        cur_.kind = Tok::KwExists;
      else if (id == "forall")
        cur_.kind = Tok::KwForall;
      else if (id == "and")
        cur_.kind = Tok::KwAnd;
      else if (id == "or")
        cur_.kind = Tok::KwOr;
      else if (id == "not")
        cur_.kind = Tok::KwNot;
      else if (id == "implies")
        cur_.kind = Tok::KwImplies;
      else if (id == "true")
        cur_.kind = Tok::KwTrue;
      else if (id == "false")
        cur_.kind = Tok::KwFalse;
      else
        cur_.kind = Tok::Ident;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        num += src_[pos_];
        bump();
      }
      // "p/q" is one rational literal when q follows immediately.
      if (pos_ < src_.size() && src_[pos_] == '/' && pos_ + 1 < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
        num += '/';
        bump();
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          num += src_[pos_];
          bump();
        }
      }
      auto q = parse_rational(num);
      if (!q) throw ParseError("malformed number '" + num + "'", line_, col_);
      cur_.kind = Tok::Number;
      cur_.number = *q;
      cur_.text = num;
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two('<', '=')) {
      cur_.kind = Tok::Le;
      bump();
      bump();
      return;
    }
    if (two('>', '=')) {
      cur_.kind = Tok::Ge;
      bump();
      bump();
      return;
    }
    if (two('!', '=')) {
      cur_.kind = Tok::Ne;
      bump();
      bump();
      return;
    }
    if (two('-', '>')) {
      cur_.kind = Tok::Arrow;
      bump();
      bump();
      return;
    }
    switch (c) {
      case '(': cur_.kind = Tok::LParen; bump(); return;
      case ')': cur_.kind = Tok::RParen; bump(); return;
      case '.': cur_.kind = Tok::Dot; bump(); return;
      case '+': cur_.kind = Tok::Plus; bump(); return;
      case '-': cur_.kind = Tok::Minus; bump(); return;
      case '*': cur_.kind = Tok::Star; bump(); return;
      case '<': cur_.kind = Tok::Lt; bump(); return;
      case '>': cur_.kind = Tok::Gt; bump(); return;
      case '=': cur_.kind = Tok::Eq; bump(); return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         line_, col_);
    }
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  FormulaPtr formula() {
    FormulaPtr f = parse_formula_level();
    expect(Tok::End, "end of input");
    return f;
  }

  AffineTerm term_only() {
    AffineTerm t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    const Token& t = lex_.peek();
    throw ParseError("syntax error: expected " + what, t.line, t.column);
  }

  void expect(Tok k, const std::string& what) {
    if (lex_.peek().kind != k) fail(what);
    lex_.take();
  }

  FormulaPtr parse_formula_level() {
    if (lex_.peek().kind == Tok::KwExists || lex_.peek().kind == Tok::KwForall) {
      bool ex = lex_.take().kind == Tok::KwExists;
      if (lex_.peek().kind != Tok::Ident) fail("variable name");
      std::string v = lex_.take().text;
      expect(Tok::Dot, "'.'");
      FormulaPtr body = parse_formula_level();
      return ex ? Formula::exists(v, body) : Formula::forall(v, body);
    }
    FormulaPtr lhs = or_expr();
    if (lex_.peek().kind == Tok::Arrow || lex_.peek().kind == Tok::KwImplies) {
      lex_.take();
      return Formula::implication(lhs, parse_formula_level());
    }
    return lhs;
  }

  FormulaPtr or_expr() {
    FormulaPtr f = and_expr();
    while (lex_.peek().kind == Tok::KwOr) {
      lex_.take();
      f = Formula::disjunction(f, and_expr());
    }
    return f;
  }

  FormulaPtr and_expr() {
    FormulaPtr f = not_expr();
    while (lex_.peek().kind == Tok::KwAnd) {
      lex_.take();
      f = Formula::conjunction(f, not_expr());
    }
    return f;
  }

  FormulaPtr not_expr() {
    if (lex_.peek().kind == Tok::KwNot) {
      lex_.take();
      return Formula::negation(not_expr());
    }
    return primary();
  }

  static bool is_relop(Tok k) {
    return k == Tok::Lt || k == Tok::Le || k == Tok::Eq || k == Tok::Ne ||
           k == Tok::Ge || k == Tok::Gt;
  }

  FormulaPtr primary() {
    switch (lex_.peek().kind) {
      case Tok::KwTrue:
        lex_.take();
        return Formula::truth(true);
      case Tok::KwFalse:
        lex_.take();
        return Formula::truth(false);
      case Tok::LParen: {
        lex_.take();
        FormulaPtr f = parse_formula_level();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        break;
    }
    // Comparison chain: term (relop term)+.
    AffineTerm first = term();
    if (!is_relop(lex_.peek().kind)) fail("comparison operator");
    std::vector<FormulaPtr> parts;
    AffineTerm prev = first;
    while (is_relop(lex_.peek().kind)) {
      Tok op = lex_.take().kind;
      AffineTerm next = term();
      switch (op) {
        case Tok::Lt: parts.push_back(Formula::cmp_lt(prev, next)); break;
        case Tok::Le: parts.push_back(Formula::cmp_le(prev, next)); break;
        case Tok::Eq: parts.push_back(Formula::cmp_eq(prev, next)); break;
        case Tok::Ne: parts.push_back(Formula::cmp_ne(prev, next)); break;
        case Tok::Ge: parts.push_back(Formula::cmp_le(next, prev)); break;
        case Tok::Gt: parts.push_back(Formula::cmp_lt(next, prev)); break;
        default: fail("comparison operator");
      }
      prev = next;
    }
    return Formula::conjoin(parts);
  }

  AffineTerm term() {
    AffineTerm acc;
    bool neg = false;
    if (lex_.peek().kind == Tok::Minus) {
      lex_.take();
      neg = true;
    }
    acc = product();
    if (neg) acc = -acc;
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      bool minus = lex_.take().kind == Tok::Minus;
      AffineTerm p = product();
      acc = minus ? acc - p : acc + p;
    }
    return acc;
  }

  AffineTerm product() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Number) {
      Rational q = lex_.take().number;
      if (lex_.peek().kind == Tok::Star) {
        lex_.take();
        if (lex_.peek().kind != Tok::Ident) fail("variable after '*'");
        return AffineTerm::variable(lex_.take().text).scaled(q);
      }
      return AffineTerm::constant(q);
    }
    if (t.kind == Tok::Ident) return AffineTerm::variable(lex_.take().text);
    fail("term");
  }

  Lexer lex_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  return Parser(text).formula();
}

AffineTerm parse_term(const std::string& text) {
  return Parser(text).term_only();
}

}  // namespace tame
