#pragma once

#include <memory>
#include <vector>

#include "ncdc/tensor.hpp"
#include "ncdc/vector_field.hpp"

namespace ncdc {

/// Components of an ordinary symmetric connection Gamma^m_{nr} = Gamma^m_{rn}.
struct GammaSpec {
  const Context* ctx = nullptr;
  std::vector<ScalarExpr> comp;  // [mu][nu][rho] flattened

  static GammaSpec zero(const Context& c) {
    GammaSpec g;
    g.ctx = &c;
    g.comp.assign(static_cast<size_t>(c.dim() * c.dim() * c.dim()), ScalarExpr::zero(c));
    return g;
  }
  /// All components as instances of the declared symbol (default "Gamma").
  static GammaSpec symbolic(const Context& c, const std::string& name = "Gamma") {
    GammaSpec g = zero(c);
    for (int m = 1; m <= c.dim(); ++m)
      for (int n = 1; n <= c.dim(); ++n)
        for (int r = 1; r <= c.dim(); ++r) g.set(m, n, r, ScalarExpr::symbol(c, name, {m, n, r}));
    return g;
  }

  const ScalarExpr& at(int mu, int nu, int rho) const {
    return comp[static_cast<size_t>(((mu - 1) * ctx->dim() + (nu - 1)) * ctx->dim() + (rho - 1))];
  }
  void set(int mu, int nu, int rho, const ScalarExpr& v) {
    comp[static_cast<size_t>(((mu - 1) * ctx->dim() + (nu - 1)) * ctx->dim() + (rho - 1))] = v;
    comp[static_cast<size_t>(((mu - 1) * ctx->dim() + (rho - 1)) * ctx->dim() + (nu - 1))] = v;
  }
};

/// Second-order connection data: the covariant basis, the nabla tables on it
/// derived from the minimal choice K = L = A = B = S = 0, torsion caches, and
/// the circle/wedge products built from them.
///
/// Conventions in force (recorded in reports):
///  - nabla is the right connection: nabla(alpha f) = (nabla alpha) f + alpha (x) df.
///  - projections are right-A-linear, taken along the covariant right basis.
///  - in B(alpha,beta), "nabla(alpha) . beta" pairs beta with the FIRST tensor
///    factor (the Omega^1_2-valued slot), which is what makes B a right tensor
///    and the constraint system triangular; "alpha . nabla(beta)" likewise.
///  - the circle product pairs with the SECOND factor: alpha o beta =
///    alpha beta - pi(nabla alpha .2 beta), which is what makes it right-linear.
///  - round-bracket symmetrization is the bare permutation sum (no 1/k!).
class Connection {
 public:
  Connection(std::shared_ptr<const FormSpace> space, GammaSpec gamma)
      : space_(std::move(space)), gamma_(std::move(gamma)) {
    if (space_->mode() != FormSpace::Mode::General)
      throw Error("connections are derived in the general calculus");
    derive();
  }

  const FormSpace& space() const { return *space_; }
  const Context& ctx() const { return space_->ctx(); }
  const GammaSpec& gamma() const { return gamma_; }
  int dim() const { return space_->dim(); }

  // --- covariant basis -----------------------------------------------------
  const Form& dxt(int mu) const { return dxt_[static_cast<size_t>(mu - 1)]; }
  /// tilde-d_{mn} = d_m d_n - Gamma^r_{mn} d_r.
  VectorField tilde_partial(int mu, int nu) const {
    VectorField v = VectorField::d_mu_nu(ctx(), mu, nu);
    for (int r = 1; r <= dim(); ++r) v.xm(r) -= gamma_.at(r, mu, nu);
    return v;
  }

  // --- projections (right-A-linear, covariant right components) ------------
  struct CovComponents {
    ScalarExpr f0;
    std::vector<ScalarExpr> fm;
    std::vector<std::vector<ScalarExpr>> fmn;  // symmetric covariant xi-block
  };
  CovComponents covariant_components(const Form& alpha) const {
    auto rc = alpha.right_components();
    CovComponents cc;
    cc.f0 = rc.f0;
    cc.fm = rc.fm;
    cc.fmn = rc.fmn;
    for (int r = 1; r <= dim(); ++r)
      for (int s = 1; s <= dim(); ++s) {
        ScalarExpr corr = ScalarExpr::zero(ctx());
        for (int m = 1; m <= dim(); ++m) corr += gamma_.at(m, r, s) * rc.fm[static_cast<size_t>(m - 1)];
        cc.fmn[static_cast<size_t>(r - 1)][static_cast<size_t>(s - 1)] -= corr;
      }
    return cc;
  }
  Form p1(const Form& alpha) const {
    auto cc = covariant_components(alpha);
    Form out = Form::dt(*space_).right_mul(cc.f0);
    for (int m = 1; m <= dim(); ++m) out += dxt(m).right_mul(cc.fm[static_cast<size_t>(m - 1)]);
    return out;
  }
  Form p2(const Form& alpha) const {
    auto cc = covariant_components(alpha);
    Form out = Form::zero(*space_, 1);
    for (int r = 1; r <= dim(); ++r)
      for (int s = r; s <= dim(); ++s) {
        ScalarExpr c = cc.fmn[static_cast<size_t>(r - 1)][static_cast<size_t>(s - 1)];
        if (r == s) c = Rational(1, 2) * c;
        out += c * Form::xi(*space_, r, s);
      }
    return out;
  }
  TensorForm p1_first(const TensorForm& T) const { return project_first(T, /*first=*/true); }
  TensorForm p2_first(const TensorForm& T) const { return project_first(T, /*first=*/false); }

  // --- nabla ----------------------------------------------------------------
  const TensorForm& nab_dxt(int mu) const { return nab_dxt_[static_cast<size_t>(mu - 1)]; }
  const TensorForm& nab_xi(int mu, int nu) const {
    if (mu > nu) std::swap(mu, nu);
    return nab_xi_[xi_index(mu, nu)];
  }
  const TensorForm& nab_gen(Gen g) const {
    switch (g.kind) {
      case GenKind::Dt:
        return nab_dt_;
      case GenKind::Dx:
        return nab_dx_[static_cast<size_t>(g.a - 1)];
      case GenKind::Xi:
        return nab_xi_[xi_index(g.a, g.b)];
    }
    throw Error("unreachable");
  }

  /// Right-Leibniz application: nabla(sum_g g f_g) = sum (nabla g) f_g + g (x) d f_g.
  TensorForm nabla(const Form& alpha) const {
    if (alpha.degree() != 1) throw Error("nabla acts on 1-forms");
    TensorForm out = TensorForm::zero(*space_);
    for (auto& [g, f] : right_terms(alpha)) {
      out += nab_gen(g).right_mul(f);
      out += TensorForm::tensor(Form::generator(*space_, g), Form::d_scalar(*space_, f));
    }
    return out;
  }

  /// nabla-bullet on tensors: (3.17)-style nabla.(a (x) b) = (nabla a).2 b + a (x) d.b.
  TensorForm nabla_bullet(const TensorForm& T) const {
    TensorForm out = TensorForm::zero(*space_);
    for (auto& [c, g1, g2] : T.terms()) {
      Form first = c * Form::generator(*space_, g1);
      out += nabla(first).bullet_second(Form::generator(*space_, g2));
      if (g2.kind == GenKind::Xi)
        out += TensorForm::tensor(first, Rational(2) * Form::generator(*space_, g2));
    }
    return out;
  }

  // --- the five tensor blocks ----------------------------------------------
  TensorForm K(const Form& alpha) const { return -p2_first(nabla(p1(alpha))); }
  TensorForm L(const Form& alpha) const { return -p1_first(nabla(p2(alpha))); }
  TensorForm A(const Form& alpha) const {
    return Rational(-1, 2) * p1_first(nabla_bullet(nabla(p1(alpha))));
  }
  /// B(a,b) = nabla(a.b) - a.nabla(b) - nabla(a).b + nabla(a).nabla(b), with
  /// the mixed products paired on the first factor.
  TensorForm B(const Form& alpha, const Form& beta) const {
    TensorForm out = nabla(bullet(alpha, beta));
    out -= nabla(beta).bullet_first(alpha);
    out -= nabla(alpha).bullet_first(beta);
    out += bullet(nabla(alpha), nabla(beta));
    return out;
  }
  /// S(a) = (d. + nabla.) p1(a);   nabla. on a 1-form is pi_bullet of nabla.
  Form S(const Form& alpha) const {
    Form pa = p1(alpha);
    return d_bullet(pa) + nabla(pa).pi_bullet();
  }

  // --- torsion ---------------------------------------------------------------
  Form theta(const Form& alpha) const { return alpha.d() + nabla(alpha).pi(); }
  const Form& theta_dxt(int mu) const { return theta_dxt_[static_cast<size_t>(mu - 1)]; }
  const Form& theta_xi(int mu, int nu) const {
    if (mu > nu) std::swap(mu, nu);
    return theta_xi_[xi_index(mu, nu)];
  }

  // --- products ---------------------------------------------------------------
  /// alpha o beta = alpha beta - pi(nabla(alpha) .2 beta)  (right-A-linear).
  Form circ(const Form& alpha, const Form& beta) const {
    return alpha * beta - nabla(alpha).bullet_second(beta).pi();
  }

  /// Omega^2 . Omega^1 via omega.(g df h) = g [f, omega] h on the canonical
  /// left decomposition dt = d(t), dx^m = d(x^m),
  /// xi^{mn} = x^n dx^m + x^m dx^n - d(x^m x^n).
  Form bullet21(const Form& omega, const Form& alpha) const {
    if (omega.degree() != 2 || alpha.degree() != 1) throw Error("bullet21 expects a 2-form and a 1-form");
    const Context& c = ctx();
    Form out = Form::zero(*space_, 2);
    auto comm = [&](const ScalarExpr& f) { return f * omega - omega.right_mul(f); };
    for (auto& [cf, w] : alpha.terms()) {
      Gen g = w[0];
      switch (g.kind) {
        case GenKind::Dt:
          break;  // [t, omega] = 0: t is central
        case GenKind::Dx:
          out += cf * comm(ScalarExpr::coord(c, g.a));
          break;
        case GenKind::Xi: {
          ScalarExpr xa = ScalarExpr::coord(c, g.a), xb = ScalarExpr::coord(c, g.b);
          out += cf * (xb * comm(xa) + xa * comm(xb) - comm(xa * xb));
          break;
        }
      }
    }
    return out;
  }

  /// Omega^2 . Omega^2: (w1 w2).(v1 v2) = (w1.v1)(w2.v2), left-bilinear.
  Form bullet22(const Form& a, const Form& b) const {
    if (a.degree() != 2 || b.degree() != 2) throw Error("bullet22 expects 2-forms");
    Form out = Form::zero(*space_, 2);
    for (auto& [ca, wa] : a.terms())
      for (auto& [cb, wb] : b.terms()) {
        Form f1 = bullet(Form::generator(*space_, wa[0]), Form::generator(*space_, wb[0]));
        if (f1.is_zero()) continue;
        Form f2 = bullet(Form::generator(*space_, wa[1]), Form::generator(*space_, wb[1]));
        if (f2.is_zero()) continue;
        out += (ca * cb) * (f1 * f2);
      }
    return out;
  }

  /// The antisymmetric right-A-linear wedge: alpha ^ beta = alpha o beta +
  /// 1/2 [ -Theta(alpha.beta) + Theta(alpha).beta + alpha.Theta(beta)
  ///       - Theta(alpha).Theta(beta) + pi B(alpha,beta) ].
  Form wedge(const Form& alpha, const Form& beta) const {
    Form out = circ(alpha, beta);
    Form corr = -theta(bullet(alpha, beta));
    corr += bullet21(theta(alpha), beta);
    corr += bullet21(theta(beta), alpha);
    corr -= bullet22(theta(alpha), theta(beta));
    corr += B(alpha, beta).pi();
    return out + Rational(1, 2) * corr;
  }

  /// Riemann tensor of Gamma; sign and slot convention fixed so that the
  /// second-order torsion identities reproduce R via Theta after the Ito
  /// specialization: R^m_{abr} = d_a Gamma^m_{br} - d_b Gamma^m_{ar}
  ///                            + Gamma^m_{as} Gamma^s_{br} - Gamma^m_{bs} Gamma^s_{ar}.
  ScalarExpr riemann(int m, int a, int b, int r) const {
    ScalarExpr out = gamma_.at(m, b, r).partial(a) - gamma_.at(m, a, r).partial(b);
    for (int s = 1; s <= dim(); ++s)
      out += gamma_.at(m, a, s) * gamma_.at(s, b, r) - gamma_.at(m, b, s) * gamma_.at(s, a, r);
    return out;
  }

  /// Ordinary covariant derivative of the (2,0)-symmetric tensor b.
  ScalarExpr cov_deriv_upup(const std::vector<std::vector<ScalarExpr>>& T, int kappa, int mu,
                            int nu) const {
    ScalarExpr out = T[static_cast<size_t>(mu - 1)][static_cast<size_t>(nu - 1)].partial(kappa);
    for (int r = 1; r <= dim(); ++r) {
      out += gamma_.at(mu, kappa, r) * T[static_cast<size_t>(r - 1)][static_cast<size_t>(nu - 1)];
      out += gamma_.at(nu, kappa, r) * T[static_cast<size_t>(mu - 1)][static_cast<size_t>(r - 1)];
    }
    return out;
  }

  /// Right-coefficient generator decomposition of a 1-form.
  std::vector<std::pair<Gen, ScalarExpr>> right_terms(const Form& alpha) const {
    auto rc = alpha.right_components();
    std::vector<std::pair<Gen, ScalarExpr>> out;
    if (!rc.f0.is_zero()) out.emplace_back(Gen::dt(), rc.f0);
    for (int m = 1; m <= dim(); ++m)
      if (!rc.fm[static_cast<size_t>(m - 1)].is_zero()) out.emplace_back(Gen::dx(m), rc.fm[static_cast<size_t>(m - 1)]);
    if (!rc.fmn.empty())
      for (int m = 1; m <= dim(); ++m)
        for (int n = m; n <= dim(); ++n) {
          ScalarExpr c = rc.fmn[static_cast<size_t>(m - 1)][static_cast<size_t>(n - 1)];
          if (m == n) c = Rational(1, 2) * c;
          if (!c.is_zero()) out.emplace_back(Gen::xi(m, n), c);
        }
    return out;
  }

 private:
  size_t xi_index(int mu, int nu) const {
    // rank of the pair (mu <= nu) in lexicographic order
    int idx = 0;
    for (int m = 1; m < mu; ++m) idx += dim() - m + 1;
    return static_cast<size_t>(idx + (nu - mu));
  }

  TensorForm project_first(const TensorForm& T, bool first) const {
    TensorForm out = TensorForm::zero(*space_);
    for (auto& [c, g1, g2] : T.terms()) {
      Form f = c * Form::generator(*space_, g1);
      Form pf = first ? p1(f) : p2(f);
      for (auto& [cc, w] : pf.terms()) out += TensorForm::normalized(*space_, {{cc, w[0], g2}});
    }
    return out;
  }

  void derive();

  /// Rebuilds the generator table nabla dx^m = nabla dxt^m
  /// - 1/2 (nabla xi^{rs}) Gamma^m_{rs} - 1/2 xi^{rs} (x) d Gamma^m_{rs}.
  void refresh_nab_dx() {
    const FormSpace& s = *space_;
    const int n = dim();
    nab_dx_.assign(static_cast<size_t>(n), TensorForm::zero(s));
    for (int m = 1; m <= n; ++m) {
      TensorForm t = nab_dxt(m);
      for (int r = 1; r <= n; ++r)
        for (int q = 1; q <= n; ++q) {
          ScalarExpr g = gamma_.at(m, r, q);
          if (g.is_zero()) continue;
          t -= Rational(1, 2) * nab_xi(r, q).right_mul(g);
          t -= Rational(1, 2) * TensorForm::tensor(Form::xi(s, r, q), Form::d_scalar(s, g));
        }
      nab_dx_[static_cast<size_t>(m - 1)] = t;
    }
  }

  std::shared_ptr<const FormSpace> space_;
  GammaSpec gamma_;
  std::vector<Form> dxt_;
  TensorForm nab_dt_;
  std::vector<TensorForm> nab_dx_;
  std::vector<TensorForm> nab_dxt_;
  std::vector<TensorForm> nab_xi_;
  std::vector<Form> theta_dxt_;
  std::vector<Form> theta_xi_;
};

inline void Connection::derive() {
  const FormSpace& s = *space_;
  const Context& c = ctx();
  const int n = dim();

  // covariant basis: dxt^m = dx^m + 1/2 xi^{rs} Gamma^m_{rs}  (P = Gamma from S = 0)
  dxt_.clear();
  for (int m = 1; m <= n; ++m) {
    Form f = Form::dx(s, m);
    for (int r = 1; r <= n; ++r)
      for (int q = r; q <= n; ++q) {
        ScalarExpr coeff = gamma_.at(m, r, q);
        if (r == q) coeff = Rational(1, 2) * coeff;
        f += Form::xi(s, r, q).right_mul(coeff);
      }
    dxt_.push_back(f);
  }

  nab_dt_ = TensorForm::zero(s);

  // pure first-order block: nabla dxt^m = - dxt^n (x) dxt^r Gamma^m_{rn}
  nab_dxt_.assign(static_cast<size_t>(n), TensorForm::zero(s));
  for (int m = 1; m <= n; ++m) {
    TensorForm t = TensorForm::zero(s);
    for (int nu = 1; nu <= n; ++nu)
      for (int r = 1; r <= n; ++r)
        t -= TensorForm::tensor(dxt(nu), dxt(r).right_mul(gamma_.at(m, r, nu)));
    nab_dxt_[static_cast<size_t>(m - 1)] = t;
  }
  nab_xi_.assign(static_cast<size_t>(n * (n + 1) / 2), TensorForm::zero(s));
  refresh_nab_dx();

  // A = 0 fixes the (p1 (x) Omega^1_2) block of nabla dxt^m:
  // with the block U present, (p1 (x) id) nabla.(nabla dxt^m) = Qp + 2U.
  for (int m = 1; m <= n; ++m) {
    TensorForm qp = p1_first(nabla_bullet(nab_dxt(m)));
    nab_dxt_[static_cast<size_t>(m - 1)] += Rational(-1, 2) * qp;
  }
  refresh_nab_dx();

  // B = 0 determines nabla xi^{mn} = dx^m . nabla dx^n + nabla dx^m . dx^n
  //                                  - nabla dx^m . nabla dx^n
  // (first-factor pairing in the middle term keeps L = 0).
  for (int m = 1; m <= n; ++m)
    for (int p = m; p <= n; ++p) {
      const TensorForm& ndm = nab_gen(Gen::dx(m));
      const TensorForm& ndp = nab_gen(Gen::dx(p));
      TensorForm t = ndp.bullet_first(Form::dx(s, m));
      t += ndm.bullet_first(Form::dx(s, p));
      t -= bullet(ndm, ndp);
      nab_xi_[xi_index(m, p)] = t;
    }
  refresh_nab_dx();

  // torsion caches
  theta_dxt_.clear();
  theta_xi_.clear();
  for (int m = 1; m <= n; ++m) theta_dxt_.push_back(theta(dxt(m)));
  for (int m = 1; m <= n; ++m)
    for (int p = m; p <= n; ++p) theta_xi_.push_back(theta(Form::xi(s, m, p)));
}

 public:
  /// Rebuilds the generator table nabla dx^m = nabla dxt^m
  /// - 1/2 (nabla xi^{rs}) Gamma^m_{rs} - 1/2 xi^{rs} (x) d Gamma^m_{rs}.
  void refresh_nab_dx();

}  // namespace ncdc
