#include "ncdc/scalar.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace ncdc;
using ncdc::testing::random_poly;
using ncdc::testing::random_rational;
using ncdc::testing::random_scalar;
using ncdc::testing::standard_context;

namespace {

class ScalarTest : public ::testing::Test {
 protected:
  void SetUp() override { ctx = standard_context(2); }
  std::shared_ptr<Context> ctx;

  ScalarExpr sym(const std::string& n, std::vector<Idx> i = {}) { return ScalarExpr::symbol(*ctx, n, std::move(i)); }
  ScalarExpr x(Idx i) { return ScalarExpr::coord(*ctx, i); }
};

TEST_F(ScalarTest, ScalarsCommute) {
  ScalarExpr f = sym("f"), g = sym("g");
  EXPECT_TRUE((f * g - g * f).is_zero());
}

TEST_F(ScalarTest, DeclaredSymmetryCanonicalizes) {
  ScalarExpr b21 = sym("b", {2, 1}), b12 = sym("b", {1, 2});
  EXPECT_EQ(b21 + b12, Rational(2) * b12);
  ScalarExpr w12 = sym("omega", {1, 2}), w21 = sym("omega", {2, 1});
  EXPECT_TRUE((w12 + w21).is_zero());
  EXPECT_TRUE(sym("omega", {1, 1}).is_zero());
}

TEST_F(ScalarTest, InverseContractionGivesDelta) {
  // sum_rho omegainv^{mu rho} omega_{nu rho} = delta^mu_nu at N=2
  auto contraction = [&](Idx mu, Idx nu) {
    ScalarExpr s = ScalarExpr::zero(*ctx);
    for (Idx rho = 1; rho <= 2; ++rho) s += sym("omegainv", {mu, rho}) * sym("omega", {nu, rho});
    return s;
  };
  EXPECT_EQ(contraction(1, 1), ScalarExpr::one(*ctx));
  EXPECT_EQ(contraction(2, 2), ScalarExpr::one(*ctx));
  EXPECT_TRUE(contraction(1, 2).is_zero());
  EXPECT_TRUE(contraction(2, 1).is_zero());
}

TEST_F(ScalarTest, DeltaEvaluation) {
  EXPECT_EQ(ScalarExpr::delta(*ctx, 1, 1), ScalarExpr::one(*ctx));
  EXPECT_TRUE(ScalarExpr::delta(*ctx, 1, 2).is_zero());
  ScalarExpr trace = ScalarExpr::delta(*ctx, 1, 1) + ScalarExpr::delta(*ctx, 2, 2);
  EXPECT_EQ(trace, ScalarExpr::constant(*ctx, 2));
}

TEST_F(ScalarTest, PartialBasics) {
  // partial(x1*x1, 1) = 2 x1
  EXPECT_EQ((x(1) * x(1)).partial(1), Rational(2) * x(1));
  // mixed partials commute on opaque symbols
  ScalarExpr H = sym("H");
  EXPECT_EQ(H.partial(1).partial(2), H.partial(2).partial(1));
  // Leibniz
  ScalarExpr f = sym("f"), g = sym("g");
  EXPECT_EQ((f * g).partial(1), f.partial(1) * g + f * g.partial(1));
  // constants die
  EXPECT_TRUE(ScalarExpr::symbol(*ctx, "beta").partial(1).is_zero());
  EXPECT_TRUE(ScalarExpr::constant(*ctx, Rational(5, 3)).partial(kTime).is_zero());
}

TEST_F(ScalarTest, RingAxiomsRandomized) {
  std::mt19937_64 rng(20240817);
  for (int it = 0; it < 120; ++it) {
    ScalarExpr a = random_scalar(*ctx, rng), b = random_scalar(*ctx, rng), c = random_scalar(*ctx, rng);
    EXPECT_EQ(a * (b * c), (a * b) * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST_F(ScalarTest, PartialIsDerivationRandomized) {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 60; ++it) {
    ScalarExpr a = random_scalar(*ctx, rng), b = random_scalar(*ctx, rng);
    for (Idx i = 0; i <= 2; ++i) {
      EXPECT_EQ((a * b).partial(i), a.partial(i) * b + a * b.partial(i));
      EXPECT_EQ((a + b).partial(i), a.partial(i) + b.partial(i));
    }
    EXPECT_EQ(a.partial(1).partial(2), a.partial(2).partial(1));
  }
}

TEST_F(ScalarTest, EvaluationHomomorphism) {
  // substituting polynomials for symbols and rational points for coordinates
  // turns symbolic identities into exact rational identities
  std::mt19937_64 rng(4242);
  for (int it = 0; it < 40; ++it) {
    ScalarExpr a = random_scalar(*ctx, rng), b = random_scalar(*ctx, rng);
    ScalarExpr lhs = (a + b) * (a - b);
    ScalarExpr rhs = a * a - b * b;

    ScalarExpr::Binding bind;
    for (const char* n : {"f", "g", "h"}) bind[{ctx->symbols().require(n), {}}] = random_poly(*ctx, rng);
    ScalarExpr ls = lhs.subst(bind), rs = rhs.subst(bind);
    EXPECT_EQ(ls, rs);

    std::vector<Rational> pt;
    for (int i = 0; i <= ctx->dim(); ++i) pt.push_back(random_rational(rng));
    EXPECT_EQ(ls.eval_coords(pt), rs.eval_coords(pt));
  }
}

TEST_F(ScalarTest, SubstitutionIsDerivativeAware) {
  // replace f by x1^2: (d1 f) must become 2 x1
  ScalarExpr df = sym("f").partial(1);
  ScalarExpr out = df.subst_symbol(ctx->symbols().require("f"), x(1) * x(1));
  EXPECT_EQ(out, Rational(2) * x(1));
}

TEST_F(ScalarTest, InvertibleLaurentPowers) {
  SymbolTable st;
  FunctionSymbol w = scalar_symbol("w");
  w.invertible = true;
  st.declare(w);
  Context c(ChartSpec(2), std::move(st));
  ScalarExpr ws = ScalarExpr::symbol(c, "w");
  ScalarExpr winv = ws.pow(-1);
  EXPECT_EQ(ws * winv, ScalarExpr::one(c));
  // d(w^-1) = -w^-2 dw
  ScalarExpr d = winv.partial(1);
  ScalarExpr expect = Rational(-1) * ws.pow(-2) * ws.partial(1);
  EXPECT_EQ(d, expect);
}

TEST_F(ScalarTest, ErrorsOnBadInput) {
  EXPECT_THROW(ScalarExpr::symbol(*ctx, "nope"), Error);
  EXPECT_THROW(ScalarExpr::symbol(*ctx, "b", {1}), Error);
  EXPECT_THROW(ScalarExpr::symbol(*ctx, "b", {1, 7}), Error);
  EXPECT_THROW(ScalarExpr::coord(*ctx, 5), Error);
  EXPECT_THROW(sym("f").pow(-1), Error);
}

TEST_F(ScalarTest, NormalizeIsIdempotentAndOrdered) {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 40; ++it) {
    ScalarExpr a = random_scalar(*ctx, rng);
    ScalarExpr renorm = ScalarExpr::from_terms(*ctx, std::vector<Term>(a.terms()));
    EXPECT_EQ(a, renorm);
    for (size_t i = 1; i < a.terms().size(); ++i)
      EXPECT_GT(cmp_term_key(a.terms()[i - 1], a.terms()[i]), 0);
  }
}

}  // namespace
