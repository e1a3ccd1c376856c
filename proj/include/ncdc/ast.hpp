#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ncdc/chart.hpp"
#include "ncdc/numeric.hpp"

namespace ncdc {

struct ExprAst;
using AstPtr = std::shared_ptr<const ExprAst>;

/// Parse tree for the expression grammar. Indices use 0 for the reserved
/// token 't' and 1..N otherwise.
struct ExprAst {
  enum class Kind {
    Number,   // value
    Ident,    // name + indices (symbol application or coordinate)
    Deriv,    // D[i,...](arg)
    Sum,      // args with parallel signs
    Product,  // args
    Power,    // arg ^ exponent
    Dt,       // dt
    Dx,       // dx[i]
    Xi,       // xi[i,j]
    D,        // d(arg)
    Bullet,   // bullet(a, b)
    Wedge,    // wedge(a, b)
    Tensor,   // tensor(a, b)
  };

  Kind kind = Kind::Number;
  Rational value;
  std::string name;
  std::vector<Idx> indices;
  std::vector<AstPtr> args;
  std::vector<int> signs;  // Sum: +1 / -1 per argument
  int exponent = 1;        // Power

  static AstPtr number(Rational v) {
    auto n = std::make_shared<ExprAst>();
    n->kind = Kind::Number;
    n->value = std::move(v);
    return n;
  }
  static AstPtr make(Kind k, std::vector<AstPtr> args = {}) {
    auto n = std::make_shared<ExprAst>();
    n->kind = k;
    n->args = std::move(args);
    return n;
  }
};

}  // namespace ncdc
