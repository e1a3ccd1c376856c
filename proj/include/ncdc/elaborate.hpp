#pragma once

#include <string>

#include "ncdc/ast.hpp"
#include "ncdc/form.hpp"
#include "ncdc/parser.hpp"
#include "ncdc/tensor.hpp"

namespace ncdc {

/// Result of elaborating an AST: a scalar, a form, or a rank-1,1 tensor.
struct Value {
  enum class Kind { Scalar, Form, Tensor } kind = Kind::Scalar;
  ScalarExpr scalar;
  Form form;
  TensorForm tensor;

  static Value of(ScalarExpr s) {
    Value v;
    v.kind = Kind::Scalar;
    v.scalar = std::move(s);
    return v;
  }
  static Value of(Form f) {
    Value v;
    v.kind = Kind::Form;
    v.form = std::move(f);
    return v;
  }
  static Value of(TensorForm t) {
    Value v;
    v.kind = Kind::Tensor;
    v.tensor = std::move(t);
    return v;
  }

  int degree() const { return kind == Kind::Form ? form.degree() : 0; }
};

/// Elaborates a parse tree against a form space (its context supplies the
/// chart and symbol declarations). Wedge nodes need connection data and are
/// rejected here; the connection layer installs its own evaluator.
class Elaborator {
 public:
  explicit Elaborator(const FormSpace& s) : space_(&s) {}

  Value eval(const AstPtr& n) const {
    const FormSpace& s = *space_;
    const Context& c = s.ctx();
    switch (n->kind) {
      case ExprAst::Kind::Number:
        return Value::of(ScalarExpr::constant(c, n->value));
      case ExprAst::Kind::Ident: {
        if (n->name == c.chart().time && n->indices.empty()) return Value::of(ScalarExpr::time(c));
        if (n->name == c.chart().coord && n->indices.size() == 1)
          return Value::of(ScalarExpr::coord(c, n->indices[0]));
        auto id = c.symbols().find(n->name);
        if (!id) throw Error("undeclared symbol '" + n->name + "'");
        return Value::of(ScalarExpr::symbol(c, *id, n->indices));
      }
      case ExprAst::Kind::Deriv: {
        Value a = eval(n->args[0]);
        if (a.kind != Value::Kind::Scalar) throw Error("D[...] applies to scalars");
        ScalarExpr r = a.scalar;
        for (Idx i : n->indices) r = r.partial(i);
        return Value::of(r);
      }
      case ExprAst::Kind::Sum: {
        Value acc = eval(n->args[0]);
        if (n->signs[0] < 0) acc = negate(acc);
        for (size_t i = 1; i < n->args.size(); ++i) {
          Value b = eval(n->args[i]);
          if (n->signs[i] < 0) b = negate(b);
          acc = add(acc, b);
        }
        return acc;
      }
      case ExprAst::Kind::Product: {
        Value acc = eval(n->args[0]);
        for (size_t i = 1; i < n->args.size(); ++i) acc = mul(acc, eval(n->args[i]));
        return acc;
      }
      case ExprAst::Kind::Power: {
        Value a = eval(n->args[0]);
        if (a.kind != Value::Kind::Scalar) throw Error("powers apply to scalars");
        return Value::of(a.scalar.pow(n->exponent));
      }
      case ExprAst::Kind::Dt:
        return Value::of(Form::dt(s));
      case ExprAst::Kind::Dx:
        c.chart().check_spatial(n->indices[0]);
        return Value::of(Form::dx(s, n->indices[0]));
      case ExprAst::Kind::Xi:
        c.chart().check_spatial(n->indices[0]);
        c.chart().check_spatial(n->indices[1]);
        return Value::of(Form::xi(s, n->indices[0], n->indices[1]));
      case ExprAst::Kind::D: {
        Value a = eval(n->args[0]);
        if (a.kind == Value::Kind::Scalar) return Value::of(Form::d_scalar(s, a.scalar));
        if (a.kind == Value::Kind::Form) return Value::of(a.form.d());
        throw Error("d does not apply to tensors");
      }
      case ExprAst::Kind::Bullet: {
        Value a = eval(n->args[0]), b = eval(n->args[1]);
        if (a.kind == Value::Kind::Form && b.kind == Value::Kind::Form)
          return Value::of(bullet(as_form1(a), as_form1(b)));
        throw Error("bullet expects 1-forms");
      }
      case ExprAst::Kind::Tensor: {
        Value a = eval(n->args[0]), b = eval(n->args[1]);
        return Value::of(TensorForm::tensor(as_form1(a), as_form1(b)));
      }
      case ExprAst::Kind::Wedge:
        throw Error("wedge needs connection data (use the connection evaluator)");
    }
    throw Error("unreachable");
  }

  ScalarExpr eval_scalar(const AstPtr& n) const {
    Value v = eval(n);
    if (v.kind != Value::Kind::Scalar) throw Error("expected a scalar expression");
    return v.scalar;
  }

 private:
  Form as_form1(const Value& v) const {
    if (v.kind == Value::Kind::Form && v.form.degree() == 1) return v.form;
    throw Error("expected a 1-form");
  }

  Value negate(const Value& v) const {
    switch (v.kind) {
      case Value::Kind::Scalar:
        return Value::of(-v.scalar);
      case Value::Kind::Form:
        return Value::of(-v.form);
      case Value::Kind::Tensor:
        return Value::of(-v.tensor);
    }
    throw Error("unreachable");
  }

  Value add(const Value& a, const Value& b) const {
    if (a.kind != b.kind) throw Error("cannot add values of different kinds");
    switch (a.kind) {
      case Value::Kind::Scalar:
        return Value::of(a.scalar + b.scalar);
      case Value::Kind::Form:
        return Value::of(a.form + b.form);
      case Value::Kind::Tensor:
        return Value::of(a.tensor + b.tensor);
    }
    throw Error("unreachable");
  }

  Value mul(const Value& a, const Value& b) const {
    if (a.kind == Value::Kind::Scalar && b.kind == Value::Kind::Scalar)
      return Value::of(a.scalar * b.scalar);
    if (a.kind == Value::Kind::Scalar && b.kind == Value::Kind::Form) return Value::of(a.scalar * b.form);
    if (a.kind == Value::Kind::Form && b.kind == Value::Kind::Scalar)
      return Value::of(a.form.right_mul(b.scalar));
    if (a.kind == Value::Kind::Form && b.kind == Value::Kind::Form) {
      int d = a.form.degree() + b.form.degree();
      if (d > 3) throw Error("form degree overflow (>3)");
      return Value::of(a.form * b.form);
    }
    throw Error("unsupported product");
  }

  const FormSpace* space_;
};

/// Parses and elaborates in one step.
inline Value parse_value(const FormSpace& s, const std::string& text) {
  return Elaborator(s).eval(parse_text(text));
}
inline ScalarExpr parse_scalar(const FormSpace& s, const std::string& text) {
  return Elaborator(s).eval_scalar(parse_text(text));
}

}  // namespace ncdc
