#include <gtest/gtest.h>

#include <random>

#include "ncdc/elaborate.hpp"
#include "ncdc/printer.hpp"
#include "support.hpp"

using namespace ncdc;
using ncdc::testing::random_scalar;
using ncdc::testing::standard_context;

namespace {

struct Rig {
  Rig() : ctx(standard_context(2)), space(FormSpace::general(*ctx)) {}
  std::shared_ptr<Context> ctx;
  std::shared_ptr<FormSpace> space;
  ScalarExpr scalar(const std::string& s) { return parse_scalar(*space, s); }
  Value value(const std::string& s) { return parse_value(*space, s); }
};

TEST(ExprLang, DirectConstructors) {
  Rig r;
  EXPECT_EQ(r.scalar("D[1](H)*b[1,1]"),
            ScalarExpr::symbol(*r.ctx, "H").partial(1) * ScalarExpr::symbol(*r.ctx, "b", {1, 1}));
  EXPECT_EQ(r.scalar("3/2*x[1] + t - 1"),
            Rational(3, 2) * ScalarExpr::coord(*r.ctx, 1) + ScalarExpr::time(*r.ctx) -
                ScalarExpr::one(*r.ctx));
}

TEST(ExprLang, FormNodes) {
  Rig r;
  Value dfg = r.value("d(f*g)");
  ASSERT_EQ(dfg.kind, Value::Kind::Form);
  ScalarExpr f = ScalarExpr::symbol(*r.ctx, "f"), g = ScalarExpr::symbol(*r.ctx, "g");
  EXPECT_EQ(dfg.form, Form::d_scalar(*r.space, f * g));

  // xi[2,1] elaborates equal to xi[1,2]
  EXPECT_EQ(r.value("xi[2,1]").form, r.value("xi[1,2]").form);
  EXPECT_EQ(r.value("bullet(dx[1],dx[2])").form, r.value("xi[1,2]").form);
}

TEST(ExprLang, JuxtapositionProduct) {
  Rig r;
  EXPECT_EQ(r.value("dx[1]dx[2]").form, r.value("dx[1]*dx[2]").form);
  EXPECT_EQ(r.scalar("2 x[1]"), r.scalar("2*x[1]"));
}

TEST(ExprLang, CanonicalPrintExamples) {
  Rig r;
  EXPECT_EQ(print_canonical(ScalarExpr::zero(*r.ctx)), "0");
  EXPECT_EQ(print_canonical(r.value("dt*dt").form), "0");
  Form dxi = r.value("xi[1,2]").form.d();
  EXPECT_EQ(print_canonical(dxi), "dx[1]*dx[2] + dx[2]*dx[1]");
}

TEST(ExprLang, LatexExamples) {
  Rig r;
  EXPECT_EQ(print_latex(r.value("xi[1,2]").form), "\\xi^{12}");
  EXPECT_EQ(print_latex(r.scalar("D[1](H)")), "\\partial_{1} H");
}

TEST(ExprLang, ScalarRoundTrip) {
  Rig r;
  std::mt19937_64 rng(60622);
  for (int i = 0; i < 400; ++i) {
    ScalarExpr e = random_scalar(*r.ctx, rng, 5);
    ScalarExpr back = r.scalar(print_canonical(e));
    EXPECT_EQ(e, back) << print_canonical(e);
  }
}

TEST(ExprLang, FormRoundTrip) {
  Rig r;
  std::mt19937_64 rng(80111);
  for (int deg = 1; deg <= 2; ++deg) {
    auto basis = r.space->basis(deg);
    std::uniform_int_distribution<size_t> pick(0, basis.size() - 1);
    for (int i = 0; i < 60; ++i) {
      Form e = Form::zero(*r.space, deg);
      for (int k = 0; k < 3; ++k) {
        std::vector<std::pair<ScalarExpr, Word>> t;
        t.emplace_back(random_scalar(*r.ctx, rng, 2), basis[pick(rng)]);
        e += Form::normalized(*r.space, deg, std::move(t));
      }
      Value back = r.value(print_canonical(e));
      if (e.is_zero()) {
        EXPECT_TRUE(back.kind == Value::Kind::Scalar && back.scalar.is_zero());
      } else {
        ASSERT_EQ(back.kind, Value::Kind::Form);
        EXPECT_EQ(e, back.form) << print_canonical(e);
      }
    }
  }
}

TEST(ExprLang, LaurentPowerRoundTrip) {
  SymbolTable st;
  FunctionSymbol w = scalar_symbol("w");
  w.invertible = true;
  st.declare(w);
  Context c(ChartSpec(2), std::move(st));
  auto sp = FormSpace::general(c);
  ScalarExpr e = ScalarExpr::symbol(c, "w").pow(-2) * ScalarExpr::coord(c, 1);
  EXPECT_EQ(parse_scalar(*sp, print_canonical(e)), e);
}

TEST(ExprLang, RejectsInvalidInputsWithPosition) {
  Rig r;
  const char* bad[] = {
      "",            // empty
      "x[",          // unterminated
      "b[1,2",       // missing bracket
      "1 + ",        // dangling operator
      "q[1]",        // undeclared symbol
      "dx[1,2]",     // wrong arity
      "xi[1]",       // wrong arity
      "D[1] H",      // missing parens
      "b[1,2]]",     // stray bracket
      "3//2",        // malformed number
      "wedge(dx[1])" // wrong arity for wedge
  };
  for (const char* s : bad) {
    EXPECT_THROW(
        {
          try {
            r.value(s);
          } catch (const ParseError& pe) {
            EXPECT_GE(pe.line(), 1);
            EXPECT_GE(pe.column(), 1);
            throw;
          }
        },
        Error)
        << s;
  }
}

TEST(ExprLang, DegreeOverflowAndMismatchRejected) {
  Rig r;
  EXPECT_THROW(r.value("dt*dx[1]*dx[2]*dx[1]"), Error);
  EXPECT_THROW(r.value("dt + x[1]"), Error);
  EXPECT_THROW(r.value("dt + dx[1]*dx[2]"), Error);
}

}  // namespace
