// parser.hpp -- recursive-descent parser for the formula grammar.
//
// Grammar sketch (see README for the full table):
//   expr     := iff
//   iff      := impl ('<->' impl)*
//   impl     := or ('->' impl)?
//   or       := and ('|' and)*
//   and      := untl ('&' untl)*
//   untl     := unary (('U'|'W'|'R') untl)?
//   unary    := ('!'|'X'|'F'|'G') unary | 'K{..}[v]' unary | quant | primary
//   quant    := ('forall'|'exists'|'forall1'|'exists1'|'Aprop'|'Eprop'
//               |'forall2'|'exists2') IDENT '.' expr
//   primary  := 'true' | 'false' | 'E' '(' v ',' v ')' | 'P' '{' ap '}' '(' v ')'
//             | IDENT postfix | '(' expr ')'
//   postfix  := '[' IDENT ']' | ('<'|'='|'in') IDENT | epsilon
#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "formula.hpp"

namespace hypermc {

namespace detail {

struct Token {
  enum Type { Word, LParen, RParen, LBrace, RBrace, LBrack, RBrack,
              Dot, Comma, Bang, Amp, Pipe, Arrow, DArrow, Less, Equal, End };
  Type type;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') { ++line_; col_ = 1; ++pos_; continue; }
      if (std::isspace(static_cast<unsigned char>(c))) { ++col_; ++pos_; continue; }
      if (c == '#') {  // comment to end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    int l = line_, c0 = col_;
    auto mk = [&](Token::Type t, std::string s) {
      tok_ = Token{t, std::move(s), l, c0};
    };
    if (pos_ >= src_.size()) { mk(Token::End, ""); return; }
    char c = src_[pos_];
    auto one = [&](Token::Type t) { mk(t, std::string(1, c)); ++pos_; ++col_; };
    switch (c) {
      case '(': one(Token::LParen); return;
      case ')': one(Token::RParen); return;
      case '{': one(Token::LBrace); return;
      case '}': one(Token::RBrace); return;
      case '[': one(Token::LBrack); return;
      case ']': one(Token::RBrack); return;
      case '.': one(Token::Dot); return;
      case ',': one(Token::Comma); return;
      case '!': one(Token::Bang); return;
      case '&': one(Token::Amp); return;
      case '|': one(Token::Pipe); return;
      case '=': one(Token::Equal); return;
      case '<':
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == '-' && src_[pos_ + 2] == '>') {
          mk(Token::DArrow, "<->");
          pos_ += 3; col_ += 3;
        } else {
          one(Token::Less);
        }
        return;
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          mk(Token::Arrow, "->");
          pos_ += 2; col_ += 2;
          return;
        }
        throw ParseError("stray '-'", l, c0);
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string w;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        w.push_back(src_[pos_]);
        ++pos_; ++col_;
      }
      mk(Token::Word, std::move(w));
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, c0);
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& src, LogicId logic) : lex_(src), logic_(logic) {}

  Formula parse() {
    Formula f = expr();
    expect(Token::End, "end of input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, lex_.peek().line, lex_.peek().col);
  }
  void expect(Token::Type t, const char* what) {
    if (lex_.peek().type != t)
      fail(std::string("expected ") + what);
    lex_.take();
  }
  std::string ident(const char* what) {
    if (lex_.peek().type != Token::Word)
      fail(std::string("expected ") + what);
    return lex_.take().text;
  }

  /// Does the current token begin a formula? Used to tell the prefix
  /// operators X/F/G from identifiers with those names.
  bool starts_formula() const {
    const Token& t = lex_.peek();
    switch (t.type) {
      case Token::LParen:
      case Token::Bang:
      case Token::Word:
        return true;
      default:
        return false;
    }
  }

  std::optional<std::pair<FKind, VarSort>> binder(const std::string& w) const {
    const bool linear = logic_ == LogicId::HyperLTL || logic_ == LogicId::HyperQPTL ||
                        logic_ == LogicId::HyperQPTL_K;
    if (w == "forall" || w == "exists") {
      FKind k = w == "exists" ? FKind::Exists : FKind::Forall;
      if (linear) return {{k, VarSort::Trace}};
      if (logic_ == LogicId::HyperCTLStar) return {{k, VarSort::Path}};
      if (logic_ == LogicId::MPLE) return {{k, VarSort::FirstOrder}};
      return std::nullopt;  // plain LTL has no quantifiers
    }
    if (w == "forall1" || w == "exists1") {
      if (logic_ != LogicId::MPLE) return std::nullopt;
      return {{w == "exists1" ? FKind::Exists : FKind::Forall, VarSort::FirstOrder}};
    }
    if (w == "forall2" || w == "exists2") {
      if (logic_ != LogicId::MPLE) return std::nullopt;
      return {{w == "exists2" ? FKind::Exists : FKind::Forall, VarSort::SecondOrder}};
    }
    if (w == "Aprop" || w == "Eprop") {
      if (logic_ != LogicId::HyperQPTL && logic_ != LogicId::HyperQPTL_K) return std::nullopt;
      return {{w == "Eprop" ? FKind::Exists : FKind::Forall, VarSort::Prop}};
    }
    return std::nullopt;
  }

  Formula expr() { return iff(); }

  Formula iff() {
    Formula l = impl();
    while (lex_.peek().type == Token::DArrow) {
      lex_.take();
      l = Formula::iff(std::move(l), impl());
    }
    return l;
  }

  Formula impl() {
    Formula l = or_();
    if (lex_.peek().type == Token::Arrow) {
      lex_.take();
      return Formula::implies(std::move(l), impl());
    }
    return l;
  }

  Formula or_() {
    Formula l = and_();
    while (lex_.peek().type == Token::Pipe) {
      lex_.take();
      l = Formula::or_(std::move(l), and_());
    }
    return l;
  }

  Formula and_() {
    Formula l = untl();
    while (lex_.peek().type == Token::Amp) {
      lex_.take();
      l = Formula::and_(std::move(l), untl());
    }
    return l;
  }

  Formula untl() {
    Formula l = unary();
    const Token& t = lex_.peek();
    if (t.type == Token::Word && (t.text == "U" || t.text == "W" || t.text == "R")) {
      std::string op = lex_.take().text;
      Formula r = untl();
      FKind k = op == "U" ? FKind::Until : op == "W" ? FKind::WeakUntil : FKind::Release;
      return Formula::binary(k, std::move(l), std::move(r));
    }
    return l;
  }

  Formula unary() {
    const Token& t = lex_.peek();
    if (t.type == Token::Bang) {
      lex_.take();
      return Formula::not_(unary());
    }
    if (t.type == Token::Word) {
      if (auto b = binder(t.text)) {
        lex_.take();
        std::string v = ident("binder variable");
        expect(Token::Dot, "'.' after binder variable");
        return Formula::quant(b->first, std::move(v), b->second, expr());
      }
      if (t.text == "K" && logic_ == LogicId::HyperQPTL_K) {
        lex_.take();
        expect(Token::LBrace, "'{'");
        std::vector<std::string> obs;
        obs.push_back(ident("observed proposition"));
        while (lex_.peek().type == Token::Comma) {
          lex_.take();
          obs.push_back(ident("observed proposition"));
        }
        expect(Token::RBrace, "'}'");
        expect(Token::LBrack, "'['");
        std::string v = ident("trace variable");
        expect(Token::RBrack, "']'");
        return Formula::knowledge(std::move(obs), std::move(v), unary());
      }
      if (t.text == "X" || t.text == "F" || t.text == "G") {
        // Prefix operator only when something parseable follows; otherwise
        // fall through and read the word as an identifier.
        std::string op = t.text;
        Token saved = lex_.take();
        if (starts_formula()) {
          FKind k = op == "X" ? FKind::Next : op == "F" ? FKind::Eventually : FKind::Globally;
          return Formula::unary(k, unary());
        }
        return postfix(saved);
      }
      if (t.text == "E" && logic_ == LogicId::MPLE) {
        Token saved = lex_.take();
        if (lex_.peek().type == Token::LParen) {
          lex_.take();
          std::string x = ident("first-order variable");
          expect(Token::Comma, "','");
          std::string y = ident("first-order variable");
          expect(Token::RParen, "')'");
          return Formula::mple_rel(FKind::EqLevel, std::move(x), std::move(y));
        }
        return postfix(saved);
      }
      if (t.text == "P" && logic_ == LogicId::MPLE) {
        Token saved = lex_.take();
        if (lex_.peek().type == Token::LBrace) {
          lex_.take();
          std::string ap = ident("atomic proposition");
          expect(Token::RBrace, "'}'");
          expect(Token::LParen, "'('");
          std::string x = ident("first-order variable");
          expect(Token::RParen, "')'");
          return Formula::pred_at(std::move(ap), std::move(x));
        }
        return postfix(saved);
      }
    }
    return primary();
  }

  Formula primary() {
    const Token& t = lex_.peek();
    if (t.type == Token::LParen) {
      lex_.take();
      Formula f = expr();
      expect(Token::RParen, "')'");
      return f;
    }
    if (t.type == Token::Word) {
      if (t.text == "true") { lex_.take(); return Formula::tt(); }
      if (t.text == "false") { lex_.take(); return Formula::ff(); }
      Token w = lex_.take();
      return postfix(w);
    }
    fail("expected a formula");
  }

  /// An identifier has been consumed; handle indexing and MPL[E] relations.
  Formula postfix(const Token& w) {
    const Token& t = lex_.peek();
    if (t.type == Token::LBrack) {
      lex_.take();
      std::string v = ident("trace variable");
      expect(Token::RBrack, "']'");
      return Formula::atom(w.text, std::move(v));
    }
    if (logic_ == LogicId::MPLE) {
      if (t.type == Token::Less) {
        lex_.take();
        return Formula::mple_rel(FKind::PrefixLe, w.text, ident("variable"));
      }
      if (t.type == Token::Equal) {
        lex_.take();
        return Formula::mple_rel(FKind::VarEq, w.text, ident("variable"));
      }
      if (t.type == Token::Word && t.text == "in") {
        lex_.take();
        return Formula::mple_rel(FKind::ElemOf, w.text, ident("second-order variable"));
      }
      throw ParseError("expected '<', '=' or 'in' after variable", w.line, w.col);
    }
    return Formula::atom(w.text);
  }

  Lexer lex_;
  LogicId logic_;
};

}  // namespace detail

/// Parses `text` under the grammar of `logic`. Selectors whose model
/// checking problem is undecidable are rejected up front.
inline Formula parse_formula(const std::string& text, LogicId logic) {
  switch (logic) {
    case LogicId::HyperQPTLPlus:
    case LogicId::S1SE:
    case LogicId::HyperQCTLStar:
      throw UndecidableLogicError(std::string("logic '") + logic_name(logic) +
                                  "' has an undecidable model checking problem and is not supported");
    default:
      break;
  }
  detail::Parser p(text, logic);
  return p.parse();
}

/// Maps a CLI selector to a LogicId; total over the documented vocabulary.
inline std::optional<LogicId> logic_from_string(const std::string& s) {
  if (s == "ltl") return LogicId::LTL;
  if (s == "hyperltl") return LogicId::HyperLTL;
  if (s == "hyperqptl") return LogicId::HyperQPTL;
  if (s == "hyperqptl-k") return LogicId::HyperQPTL_K;
  if (s == "hyperctls") return LogicId::HyperCTLStar;
  if (s == "mple") return LogicId::MPLE;
  if (s == "hyperqptl+") return LogicId::HyperQPTLPlus;
  if (s == "s1se") return LogicId::S1SE;
  if (s == "hyperqctls") return LogicId::HyperQCTLStar;
  return std::nullopt;
}

}  // namespace hypermc
