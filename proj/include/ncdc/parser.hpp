#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "ncdc/ast.hpp"
#include "ncdc/error.hpp"

namespace ncdc {

/// LL(1) recursive-descent parser for the expression grammar:
///   expr    := ('-')? term (('+'|'-') term)*
///   term    := factor (('*')? factor)*           (juxtaposition allowed)
///   factor  := primary ('^' ('-')? number)?
///   primary := number | ident indices? | 'D' '[' idxs ']' '(' expr ')'
///            | 'dt' | 'dx' '[' idx ']' | 'xi' '[' idx ',' idx ']'
///            | 'd' '(' expr ')' | 'bullet' '(' expr ',' expr ')'
///            | 'wedge' '(' expr ',' expr ')' | 'tensor' '(' expr ',' expr ')'
///            | '(' expr ')'
///   idx     := number | 't'
class Parser {
 public:
  explicit Parser(std::string text) : src_(std::move(text)) {}

  AstPtr parse() {
    skip_ws();
    AstPtr e = expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  bool eat(char c) {
    skip_ws();
    if (peek() != c) return false;
    advance();
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  bool ident_start(char c) const { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  bool ident_char(char c) const { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string ident() {
    skip_ws();
    if (!ident_start(peek())) fail("expected identifier");
    std::string s;
    while (pos_ < src_.size() && ident_char(src_[pos_])) {
      s += src_[pos_];
      advance();
    }
    return s;
  }

  long long integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected number");
    long long v = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      v = v * 10 + (src_[pos_] - '0');
      advance();
    }
    return v;
  }

  Rational number() {
    long long num = integer();
    if (eat('/')) return Rational(num, integer());
    return Rational(num);
  }

  Idx index_token() {
    skip_ws();
    if (peek() == 't' && !(pos_ + 1 < src_.size() && ident_char(src_[pos_ + 1]))) {
      advance();
      return kTime;
    }
    long long v = integer();
    return static_cast<Idx>(v);
  }

  std::vector<Idx> index_list() {
    expect('[');
    std::vector<Idx> out{index_token()};
    while (eat(',')) out.push_back(index_token());
    expect(']');
    return out;
  }

  bool at_factor_start() {
    skip_ws();
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || ident_start(c) || c == '(';
  }

  AstPtr expr() {
    std::vector<AstPtr> args;
    std::vector<int> signs;
    signs.push_back(eat('-') ? -1 : 1);
    args.push_back(term());
    for (;;) {
      skip_ws();
      if (eat('+'))
        signs.push_back(1);
      else if (eat('-'))
        signs.push_back(-1);
      else
        break;
      args.push_back(term());
    }
    if (args.size() == 1 && signs[0] == 1) return args[0];
    auto n = ExprAst::make(ExprAst::Kind::Sum, std::move(args));
    const_cast<ExprAst*>(n.get())->signs = std::move(signs);
    return n;
  }

  AstPtr term() {
    std::vector<AstPtr> args{factor()};
    for (;;) {
      skip_ws();
      if (eat('*')) {
        args.push_back(factor());
      } else if (at_factor_start()) {
        args.push_back(factor());
      } else {
        break;
      }
    }
    if (args.size() == 1) return args[0];
    return ExprAst::make(ExprAst::Kind::Product, std::move(args));
  }

  AstPtr factor() {
    AstPtr base = primary();
    skip_ws();
    if (eat('^')) {
      int sign = eat('-') ? -1 : 1;
      long long e = integer();
      auto n = ExprAst::make(ExprAst::Kind::Power, {base});
      const_cast<ExprAst*>(n.get())->exponent = static_cast<int>(sign * e);
      return n;
    }
    return base;
  }

  AstPtr binary(ExprAst::Kind k) {
    expect('(');
    AstPtr a = expr();
    expect(',');
    AstPtr b = expr();
    expect(')');
    return ExprAst::make(k, {a, b});
  }

  AstPtr primary() {
    skip_ws();
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return ExprAst::number(number());
    if (c == '(') {
      advance();
      AstPtr e = expr();
      expect(')');
      return e;
    }
    if (!ident_start(c)) fail("expected a factor");
    int sline = line_, scol = col_;
    std::string name = ident();

    if (name == "dt") return ExprAst::make(ExprAst::Kind::Dt);
    if (name == "dx") {
      auto idx = index_list();
      if (idx.size() != 1) throw ParseError("dx expects one index", sline, scol);
      auto n = ExprAst::make(ExprAst::Kind::Dx);
      const_cast<ExprAst*>(n.get())->indices = idx;
      return n;
    }
    if (name == "xi") {
      auto idx = index_list();
      if (idx.size() != 2) throw ParseError("xi expects two indices", sline, scol);
      auto n = ExprAst::make(ExprAst::Kind::Xi);
      const_cast<ExprAst*>(n.get())->indices = idx;
      return n;
    }
    if (name == "D") {
      auto idx = index_list();
      expect('(');
      AstPtr a = expr();
      expect(')');
      auto n = ExprAst::make(ExprAst::Kind::Deriv, {a});
      const_cast<ExprAst*>(n.get())->indices = idx;
      return n;
    }
    if (name == "d") {
      expect('(');
      AstPtr a = expr();
      expect(')');
      return ExprAst::make(ExprAst::Kind::D, {a});
    }
    if (name == "bullet") return binary(ExprAst::Kind::Bullet);
    if (name == "wedge") return binary(ExprAst::Kind::Wedge);
    if (name == "tensor") return binary(ExprAst::Kind::Tensor);

    auto n = ExprAst::make(ExprAst::Kind::Ident);
    const_cast<ExprAst*>(n.get())->name = name;
    skip_ws();
    if (peek() == '[') const_cast<ExprAst*>(n.get())->indices = index_list();
    return n;
  }

  std::string src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

inline AstPtr parse_text(const std::string& text) { return Parser(text).parse(); }

}  // namespace ncdc
