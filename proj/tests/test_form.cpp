#include "ncdc/form.hpp"

#include <gtest/gtest.h>

#include <random>

#include "ncdc/tensor.hpp"
#include "support.hpp"

using namespace ncdc;
using ncdc::testing::random_scalar;
using ncdc::testing::standard_context;

namespace {

struct Rig {
  explicit Rig(int n) : ctx(standard_context(n)), space(FormSpace::general(*ctx)) {}
  std::shared_ptr<Context> ctx;
  std::shared_ptr<FormSpace> space;

  ScalarExpr sym(const std::string& s, std::vector<Idx> i = {}) { return ScalarExpr::symbol(*ctx, s, std::move(i)); }
  Form dxf(int m) { return Form::dx(*space, m); }
  Form dtf() { return Form::dt(*space); }
  Form xif(int m, int n) { return Form::xi(*space, m, n); }
  Form d(const ScalarExpr& f) { return Form::d_scalar(*space, f); }

  Form random_form(std::mt19937_64& rng, int degree, int terms = 3) {
    auto b = space->basis(degree);
    std::uniform_int_distribution<size_t> pick(0, b.size() - 1);
    Form out = Form::zero(*space, degree);
    for (int i = 0; i < terms; ++i) {
      std::vector<std::pair<ScalarExpr, Word>> t;
      t.emplace_back(random_scalar(*ctx, rng, 2), b[pick(rng)]);
      out += Form::normalized(*space, degree, std::move(t));
    }
    return out;
  }
};

TEST(FormBasis, CountsDegreeOne) {
  Rig r(2);
  EXPECT_EQ(r.space->basis(1).size(), 6u);  // 1 + N + N(N+1)/2 at N=2
  Rig r3(3);
  EXPECT_EQ(r3.space->basis(1).size(), 10u);
}

TEST(FormBasis, DegreeTwoBruteForceOracleN1) {
  // independent oracle: dense row reduction over all 9 degree-2 words at N=1
  Rig r(1);
  auto rels = r.space->relation_set();
  auto words = [] {
    std::vector<Word> ws;
    std::vector<Gen> gs{Gen::dt(), Gen::dx(1), Gen::xi(1, 1)};
    for (Gen a : gs)
      for (Gen b : gs) ws.emplace_back(a, b);
    std::sort(ws.begin(), ws.end());
    return ws;
  }();
  auto wid = [&](const Word& w) {
    for (size_t i = 0; i < words.size(); ++i)
      if (words[i] == w) return static_cast<int>(i);
    throw Error("word not found");
  };
  std::vector<std::vector<Rational>> m;
  for (auto& rel : rels) {
    std::vector<Rational> row(words.size(), Rational(0));
    for (auto& [w, c] : rel) row[static_cast<size_t>(wid(w))] += c;
    m.push_back(std::move(row));
  }
  // dense Gaussian elimination
  size_t rank = 0;
  for (size_t col = 0; col < words.size() && rank < m.size(); ++col) {
    size_t piv = rank;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][col] == 0) continue;
      Rational f = m[i][col] / m[rank][col];
      for (size_t j = 0; j < words.size(); ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  EXPECT_EQ(r.space->basis(2).size(), words.size() - rank);

  // the basis contains dx1 dx1, dt dx1, dt xi11, and one dx1/xi11 mixed word
  auto basis = r.space->basis(2);
  auto has = [&](const Word& w) { return std::find(basis.begin(), basis.end(), w) != basis.end(); };
  EXPECT_TRUE(has(Word(Gen::dx(1), Gen::dx(1))));
  EXPECT_TRUE(has(Word(Gen::dt(), Gen::dx(1))));
  EXPECT_TRUE(has(Word(Gen::dt(), Gen::xi(1, 1))));
  int mixed = 0;
  for (auto& w : basis)
    if ((w[0] == Gen::dx(1) && w[1] == Gen::xi(1, 1)) || (w[0] == Gen::xi(1, 1) && w[1] == Gen::dx(1))) ++mixed;
  EXPECT_EQ(mixed, 1);
}

TEST(FormBasis, DtDtAbsent) {
  for (int n : {1, 2, 3}) {
    Rig r(n);
    for (auto& w : r.space->basis(2)) EXPECT_FALSE(w[0] == Gen::dt() && w[1] == Gen::dt());
  }
}

TEST(FormMul, CoefficientCommutation) {
  Rig r(2);
  ScalarExpr f = r.sym("f");
  // dx^m f - f dx^m = - xi^{rm} d_r f
  for (int m = 1; m <= 2; ++m) {
    Form lhs = r.dxf(m).right_mul(f) - f * r.dxf(m);
    Form rhs = Form::zero(*r.space, 1);
    for (int rho = 1; rho <= 2; ++rho) rhs -= f.partial(rho) * r.xif(rho, m);
    EXPECT_EQ(lhs, rhs);
  }
  // dt f - f dt = 0 and xi f - f xi = 0
  EXPECT_TRUE((r.dtf().right_mul(f) - f * r.dtf()).is_zero());
  EXPECT_TRUE((r.xif(1, 2).right_mul(f) - f * r.xif(1, 2)).is_zero());
}

TEST(FormMul, DtDtVanishes) {
  Rig r(2);
  EXPECT_TRUE((r.dtf() * r.dtf()).is_zero());
}

TEST(FormMul, RelationsAbsorbCoefficients) {
  // normal_form(f * rel) = normal_form(rel * f) = 0 for every relation element
  Rig r(2);
  std::mt19937_64 rng(5150);
  ScalarExpr f = random_scalar(*r.ctx, rng);
  for (auto& rel : r.space->relation_set()) {
    Form lhs = Form::zero(*r.space, 2), rhs = lhs;
    for (auto& [w, c] : rel) {
      Form piece = Form::normalized(*r.space, 2, {{ScalarExpr::constant(*r.ctx, c), w}});
      lhs += f * piece;
      rhs += piece.right_mul(f);
    }
    EXPECT_TRUE(lhs.is_zero());
    EXPECT_TRUE(rhs.is_zero());
  }
}

TEST(FormBullet, GeneratorTable) {
  Rig r(2);
  EXPECT_EQ(bullet(r.dxf(1), r.dxf(2)), r.xif(1, 2));
  EXPECT_EQ(bullet(r.dxf(2), r.dxf(1)), r.xif(1, 2));
  std::mt19937_64 rng(7);
  ScalarExpr f = random_scalar(*r.ctx, rng);
  EXPECT_TRUE(bullet(r.dtf(), r.d(f)).is_zero());                    // dt . df = 0
  EXPECT_TRUE(bullet(r.xif(1, 2), r.d(f)).is_zero());                // xi . exact = 0
}

TEST(FormBullet, TripleExactVanishes) {
  Rig r(2);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    ScalarExpr f = random_scalar(*r.ctx, rng), g = random_scalar(*r.ctx, rng), h = random_scalar(*r.ctx, rng);
    EXPECT_TRUE(bullet(bullet(r.d(f), r.d(g)), r.d(h)).is_zero());
  }
}

TEST(FormBullet, CommutatorRule) {
  // bullet(df, a) = f*a - a*f for 1-forms a (Eq. (2.3) shape)
  Rig r(2);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 12; ++i) {
    ScalarExpr f = random_scalar(*r.ctx, rng);
    Form a = r.random_form(rng, 1);
    Form lhs = bullet(r.d(f), a);
    Form rhs = f * a - a.right_mul(f);
    // f*a - a*f where both products are the module actions
    std::vector<std::pair<ScalarExpr, Word>> t;
    Form fa = f * a;
    Form af = a.right_mul(f);
    EXPECT_EQ(lhs, fa - af);
    (void)rhs;
    (void)t;
  }
}

TEST(FormBullet, CommutativeAndAssociativeOnOneForms) {
  Rig r(2);
  std::mt19937_64 rng(37);
  for (int i = 0; i < 8; ++i) {
    Form a = r.random_form(rng, 1), b = r.random_form(rng, 1), c = r.random_form(rng, 1);
    EXPECT_EQ(bullet(a, b), bullet(b, a));
    EXPECT_EQ(bullet(bullet(a, b), c), bullet(a, bullet(b, c)));
  }
}

TEST(FormD, ScalarExpansion) {
  // d(x1 x2) = x2 dx1 + x1 dx2 - xi^{12} in left-normal form
  Rig r(2);
  ScalarExpr x1 = ScalarExpr::coord(*r.ctx, 1), x2 = ScalarExpr::coord(*r.ctx, 2);
  Form lhs = r.d(x1 * x2);
  Form rhs = x2 * r.dxf(1) + x1 * r.dxf(2) - r.xif(1, 2);
  EXPECT_EQ(lhs, rhs);
}

TEST(FormD, GeneralizedLeibniz) {
  Rig r(2);
  std::mt19937_64 rng(41);
  for (int i = 0; i < 25; ++i) {
    ScalarExpr f = random_scalar(*r.ctx, rng), g = random_scalar(*r.ctx, rng);
    Form lhs = r.d(f * g);
    Form rhs = r.d(f).right_mul(g) + r.d(g).right_mul(f) + bullet(r.d(f), r.d(g));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(FormD, XiDerivative) {
  Rig r(2);
  Form lhs = r.xif(1, 2).d();
  Form rhs = r.dxf(1) * r.dxf(2) + r.dxf(2) * r.dxf(1);
  EXPECT_EQ(lhs, rhs);
}

TEST(FormD, DSquaredZero) {
  for (int n : {1, 2, 3}) {
    Rig r(n);
    std::mt19937_64 rng(1000 + n);
    for (int i = 0; i < 18; ++i) {
      ScalarExpr f = random_scalar(*r.ctx, rng);
      EXPECT_TRUE(r.d(f).d().is_zero());
      Form a = r.random_form(rng, 1, 2);
      EXPECT_TRUE(a.d().d().is_zero());
    }
  }
}

TEST(FormD, DegreeOverflowRejected) {
  Rig r(1);
  std::mt19937_64 rng(3);
  Form three = r.random_form(rng, 3, 1);
  EXPECT_THROW(three.d(), Error);
  Form two = r.random_form(rng, 2, 1);
  EXPECT_THROW(two * two, Error);
}

TEST(FormNormal, ProjectionIdempotent) {
  Rig r(2);
  std::mt19937_64 rng(93);
  for (int deg = 0; deg <= 3; ++deg) {
    Form a = r.random_form(rng, deg);
    Form b = Form::normalized(*r.space, deg, std::vector<std::pair<ScalarExpr, Word>>(a.terms().begin(), a.terms().end()));
    EXPECT_EQ(a, b);
  }
}

TEST(FormMul, Associativity) {
  Rig r(2);
  std::mt19937_64 rng(55);
  for (int i = 0; i < 10; ++i) {
    Form a = r.random_form(rng, 1, 2), b = r.random_form(rng, 1, 2), c = r.random_form(rng, 1, 2);
    EXPECT_EQ((a * b) * c, a * (b * c));
    Form s = r.random_form(rng, 0, 2);
    EXPECT_EQ((s * a) * b, s * (a * b));
  }
}

TEST(Ito, SpecializationKillsRelations) {
  // the substitution xi -> -dt b maps every relation element to zero
  auto ctx = standard_context(2);
  auto gen = FormSpace::general(*ctx);
  std::vector<std::vector<ScalarExpr>> b(2, std::vector<ScalarExpr>(2, ScalarExpr::zero(*ctx)));
  for (int m = 1; m <= 2; ++m)
    for (int n = 1; n <= 2; ++n) b[m - 1][n - 1] = ScalarExpr::symbol(*ctx, "b", {m, n});
  auto ito = FormSpace::ito(*ctx, b);

  auto img = [&](Gen g) { return g.kind == GenKind::Xi ? Form::xi(*ito, g.a, g.b) : Form::generator(*ito, g); };
  for (auto& rel : gen->relation_set()) {
    Form sum = Form::zero(*ito, 2);
    for (auto& [w, c] : rel) {
      Form piece = ScalarExpr::constant(*ctx, c) * (img(w[0]) * img(w[1]));
      sum += piece;
    }
    EXPECT_TRUE(sum.is_zero());
  }
}

TEST(Ito, BasisAndItoFormulaShape) {
  // N=1 desk test: df = dt (d_t f - 1/2 b d_x^2 f) + dx d_x f
  auto ctx = standard_context(1);
  std::vector<std::vector<ScalarExpr>> b(1, std::vector<ScalarExpr>(1, ScalarExpr::symbol(*ctx, "b", {1, 1})));
  auto ito = FormSpace::ito(*ctx, b);
  ScalarExpr f = ScalarExpr::symbol(*ctx, "f");
  Form df = Form::d_scalar(*ito, f);
  // right-coefficient shape: df = dt (d_t f - 1/2 b d_x^2 f) + dx d_x f,
  // which is the Ito formula under the identification gamma = -b
  auto rc = df.right_components();
  ScalarExpr dtcoef = f.partial(kTime) - Rational(1, 2) * ScalarExpr::symbol(*ctx, "b", {1, 1}) * f.partial(1).partial(1);
  EXPECT_EQ(rc.f0, dtcoef);
  EXPECT_EQ(rc.fm[0], f.partial(1));

  auto ctx2 = standard_context(2);
  std::vector<std::vector<ScalarExpr>> b2(2, std::vector<ScalarExpr>(2, ScalarExpr::zero(*ctx2)));
  for (int m = 1; m <= 2; ++m)
    for (int n = 1; n <= 2; ++n) b2[m - 1][n - 1] = ScalarExpr::symbol(*ctx2, "b", {m, n});
  auto ito2 = FormSpace::ito(*ctx2, b2);
  EXPECT_EQ(ito2->basis(2).size(), 3u);  // dt dx1, dt dx2, dx1 dx2
  EXPECT_EQ(ito2->basis(3).size(), 1u);  // dt dx1 dx2
}

TEST(Ito, DSquaredZeroDownstairs) {
  auto ctx = standard_context(2);
  std::vector<std::vector<ScalarExpr>> b(2, std::vector<ScalarExpr>(2, ScalarExpr::zero(*ctx)));
  for (int m = 1; m <= 2; ++m)
    for (int n = 1; n <= 2; ++n) b[m - 1][n - 1] = ScalarExpr::symbol(*ctx, "b", {m, n});
  auto ito = FormSpace::ito(*ctx, b);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 15; ++i) {
    ScalarExpr f = random_scalar(*ctx, rng);
    Form df = Form::d_scalar(*ito, f);
    EXPECT_TRUE(df.d().is_zero());
    // 1-forms with random coefficients
    Form a = f * Form::dx(*ito, 1) + random_scalar(*ctx, rng) * Form::dt(*ito) +
             random_scalar(*ctx, rng) * Form::dx(*ito, 2);
    EXPECT_TRUE(a.d().d().is_zero());
  }
}

TEST(Ito, SpecializeCommutesWithD) {
  auto ctx = standard_context(2);
  auto gen = FormSpace::general(*ctx);
  std::vector<std::vector<ScalarExpr>> b(2, std::vector<ScalarExpr>(2, ScalarExpr::zero(*ctx)));
  for (int m = 1; m <= 2; ++m)
    for (int n = 1; n <= 2; ++n) b[m - 1][n - 1] = ScalarExpr::symbol(*ctx, "b", {m, n});
  auto ito = FormSpace::ito(*ctx, b);
  std::mt19937_64 rng(29);
  for (int i = 0; i < 10; ++i) {
    ScalarExpr f = random_scalar(*ctx, rng);
    Form upstairs = Form::d_scalar(*gen, f);
    EXPECT_EQ(specialize(upstairs, *ito), Form::d_scalar(*ito, f));
    EXPECT_EQ(specialize(upstairs.d(), *ito), specialize(upstairs, *ito).d());
  }
}

}  // namespace
