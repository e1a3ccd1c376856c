#pragma once

#include <functional>
#include <vector>

#include "ncdc/form.hpp"

namespace ncdc {

/// Second-order vector field X = X^t d_t + X^m d_m + (1/2) X^{mn} d_m d_n.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Context& c)
      : ctx_(&c),
        xt_(ScalarExpr::zero(c)),
        xm_(static_cast<size_t>(c.dim()), ScalarExpr::zero(c)),
        xmn_(static_cast<size_t>(c.dim()),
             std::vector<ScalarExpr>(static_cast<size_t>(c.dim()), ScalarExpr::zero(c))) {}

  static VectorField d_t(const Context& c) {
    VectorField v(c);
    v.xt_ = ScalarExpr::one(c);
    return v;
  }
  static VectorField d_mu(const Context& c, int mu) {
    VectorField v(c);
    v.xm(mu) = ScalarExpr::one(c);
    return v;
  }
  /// The pure second-order field d_m d_n (components X^{mn} = X^{nm} set so
  /// that (1/2) X^{ab} d_a d_b = d_m d_n).
  static VectorField d_mu_nu(const Context& c, int mu, int nu) {
    VectorField v(c);
    v.xmn(mu, nu) += ScalarExpr::one(c);
    v.xmn(nu, mu) += ScalarExpr::one(c);
    return v;
  }

  const Context& ctx() const { return *ctx_; }
  ScalarExpr& xt() { return xt_; }
  const ScalarExpr& xt() const { return xt_; }
  ScalarExpr& xm(int mu) { return xm_[static_cast<size_t>(mu - 1)]; }
  const ScalarExpr& xm(int mu) const { return xm_[static_cast<size_t>(mu - 1)]; }
  ScalarExpr& xmn(int mu, int nu) { return xmn_[static_cast<size_t>(mu - 1)][static_cast<size_t>(nu - 1)]; }
  const ScalarExpr& xmn(int mu, int nu) const {
    return xmn_[static_cast<size_t>(mu - 1)][static_cast<size_t>(nu - 1)];
  }

  void symmetrize() {
    const int n = ctx_->dim();
    for (int m = 1; m <= n; ++m)
      for (int p = m + 1; p <= n; ++p) {
        ScalarExpr s = Rational(1, 2) * (xmn(m, p) + xmn(p, m));
        xmn(m, p) = s;
        xmn(p, m) = s;
      }
  }

  /// X(f) = X^t d_t f + X^m d_m f + (1/2) X^{mn} d_m d_n f.
  ScalarExpr apply(const ScalarExpr& f) const {
    const int n = ctx_->dim();
    ScalarExpr out = xt_ * f.partial(kTime);
    for (int m = 1; m <= n; ++m) out += xm(m) * f.partial(m);
    for (int m = 1; m <= n; ++m)
      for (int p = 1; p <= n; ++p) out += Rational(1, 2) * xmn(m, p) * f.partial(m).partial(p);
    return out;
  }

  /// Duality pairing with a 1-form via its right-coefficient components:
  /// <X, dt f0 + dx^m fm + 1/2 xi^{mn} fmn> = X^t f0 + X^m fm + 1/2 X^{mn} fmn.
  ScalarExpr pair(const Form& alpha) const {
    if (alpha.degree() != 1) throw Error("pair expects a 1-form");
    auto rc = alpha.right_components();
    const int n = ctx_->dim();
    ScalarExpr out = xt_ * rc.f0;
    for (int m = 1; m <= n; ++m) out += xm(m) * rc.fm[static_cast<size_t>(m - 1)];
    if (!rc.fmn.empty())
      for (int m = 1; m <= n; ++m)
        for (int p = 1; p <= n; ++p)
          out += Rational(1, 2) * xmn(m, p) * rc.fmn[static_cast<size_t>(m - 1)][static_cast<size_t>(p - 1)];
    return out;
  }

  /// Pairing against a bare generator.
  ScalarExpr pair_gen(const FormSpace& s, Gen g) const {
    switch (g.kind) {
      case GenKind::Dt:
        return xt_;
      case GenKind::Dx:
        return xm(g.a);
      case GenKind::Xi:
        return xmn(g.a, g.b);
    }
    throw Error("unreachable");
  }

  /// Insertion into a 2-form: the left-linear extension of
  /// iota_X(w1 w2) = <X,w1> w2 - <X,w2> w1 over normal forms.
  Form insert(const Form& omega) const {
    if (omega.degree() != 2) throw Error("insert expects a 2-form");
    const FormSpace& s = omega.space();
    Form out = Form::zero(s, 1);
    for (auto& [c, w] : omega.terms()) {
      ScalarExpr p1 = pair_gen(s, w[0]);
      ScalarExpr p2 = pair_gen(s, w[1]);
      std::vector<std::pair<ScalarExpr, Word>> raw;
      if (!p1.is_zero()) raw.emplace_back(c * p1, Word(w[1]));
      if (!p2.is_zero()) raw.emplace_back(-(c * p2), Word(w[0]));
      out += Form::normalized(s, 1, std::move(raw));
    }
    return out;
  }

  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    r.xt_ += b.xt_;
    const int n = a.ctx_->dim();
    for (int m = 1; m <= n; ++m) r.xm(m) += b.xm(m);
    for (int m = 1; m <= n; ++m)
      for (int p = 1; p <= n; ++p) r.xmn(m, p) += b.xmn(m, p);
    return r;
  }
  friend VectorField operator*(const ScalarExpr& f, const VectorField& a) {
    VectorField r = a;
    r.xt_ = f * r.xt_;
    const int n = a.ctx_->dim();
    for (int m = 1; m <= n; ++m) r.xm(m) = f * r.xm(m);
    for (int m = 1; m <= n; ++m)
      for (int p = 1; p <= n; ++p) r.xmn(m, p) = f * r.xmn(m, p);
    return r;
  }

  /// Right module action (X h)(g) = X(h g) - X(h) g, realized on components:
  /// (Xh)^t = h X^t, (Xh)^m = h X^m + X^{mn} d_n h, (Xh)^{mn} = h X^{mn}.
  VectorField right_scalar(const ScalarExpr& h) const {
    VectorField r = h * *this;
    const int n = ctx_->dim();
    for (int m = 1; m <= n; ++m)
      for (int p = 1; p <= n; ++p) r.xm(m) += xmn(m, p) * h.partial(p);
    return r;
  }

 private:
  const Context* ctx_ = nullptr;
  ScalarExpr xt_;
  std::vector<ScalarExpr> xm_;
  std::vector<std::vector<ScalarExpr>> xmn_;
};

/// Second-order test (2.11)-style: X(f^3) = 3 f X(f^2) - 3 f^2 X(f) over a
/// generating family of scalars.
inline bool is_second_order(const Context& c,
                            const std::function<ScalarExpr(const ScalarExpr&)>& op,
                            const std::vector<ScalarExpr>& probes) {
  for (const ScalarExpr& f : probes) {
    ScalarExpr lhs = op(f * f * f);
    ScalarExpr rhs = Rational(3) * f * op(f * f) - Rational(3) * f * f * op(f);
    if (!((lhs - rhs).is_zero())) return false;
  }
  return true;
}

}  // namespace ncdc
