#pragma once

#include <tuple>
#include <utility>
#include <vector>

#include "ncdc/form.hpp"

namespace ncdc {

/// Element of Omega^1 (x) Omega^1 over the middle A-linear tensor product,
/// stored with all scalar coefficients on the far left of generator pairs.
class TensorForm {
 public:
  TensorForm() = default;
  static TensorForm zero(const FormSpace& s) { return TensorForm(&s, {}); }

  static TensorForm normalized(const FormSpace& s,
                               std::vector<std::tuple<ScalarExpr, Gen, Gen>> raw) {
    std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) {
      int cx = (std::get<1>(x).code() << 20) | std::get<2>(x).code();
      int cy = (std::get<1>(y).code() << 20) | std::get<2>(y).code();
      return cx < cy;
    });
    std::vector<std::tuple<ScalarExpr, Gen, Gen>> out;
    for (auto& [c, g1, g2] : raw) {
      if (c.is_zero()) continue;
      if (!out.empty() && std::get<1>(out.back()) == g1 && std::get<2>(out.back()) == g2)
        std::get<0>(out.back()) += c;
      else
        out.emplace_back(std::move(c), g1, g2);
    }
    std::erase_if(out, [](const auto& t) { return std::get<0>(t).is_zero(); });
    return TensorForm(&s, std::move(out));
  }

  /// alpha (x) beta for 1-forms: middle coefficients of beta migrate left
  /// through alpha's generator.
  static TensorForm tensor(const Form& a, const Form& b) {
    if (a.degree() != 1 || b.degree() != 1) throw Error("tensor expects 1-forms");
    const FormSpace& s = a.space();
    std::vector<std::tuple<ScalarExpr, Gen, Gen>> raw;
    for (auto& [ca, wa] : a.terms())
      for (auto& [cb, wb] : b.terms())
        for (auto& [cm, gm] : s.commute(wa[0], cb)) raw.emplace_back(ca * cm, gm, wb[0]);
    return normalized(s, std::move(raw));
  }

  const FormSpace& space() const { return *space_; }
  const std::vector<std::tuple<ScalarExpr, Gen, Gen>>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  friend TensorForm operator+(const TensorForm& a, const TensorForm& b) {
    check_pair(a, b);
    auto t = a.t_;
    t.insert(t.end(), b.t_.begin(), b.t_.end());
    return normalized(*a.space_, std::move(t));
  }
  friend TensorForm operator-(const TensorForm& a) {
    TensorForm r = a;
    for (auto& t : r.t_) std::get<0>(t) = -std::get<0>(t);
    return r;
  }
  friend TensorForm operator-(const TensorForm& a, const TensorForm& b) { return a + (-b); }
  friend TensorForm operator*(const ScalarExpr& f, const TensorForm& a) {
    auto t = a.t_;
    for (auto& q : t) std::get<0>(q) = f * std::get<0>(q);
    return normalized(*a.space_, std::move(t));
  }
  friend TensorForm operator*(const Rational& r, const TensorForm& a) {
    return ScalarExpr::constant(a.space_->ctx(), r) * a;
  }
  friend bool operator==(const TensorForm& a, const TensorForm& b) { return (a - b).is_zero(); }
  TensorForm& operator+=(const TensorForm& b) { return *this = *this + b; }
  TensorForm& operator-=(const TensorForm& b) { return *this = *this - b; }

  /// (a (x) b) f = a (x) (b f).
  TensorForm right_mul(const ScalarExpr& f) const {
    const FormSpace& s = *space_;
    std::vector<std::tuple<ScalarExpr, Gen, Gen>> raw;
    for (auto& [c, g1, g2] : t_)
      for (auto& [c2, ng2] : s.commute(g2, f))
        for (auto& [c1, ng1] : s.commute(g1, c2)) raw.emplace_back(c * c1, ng1, ng2);
    return normalized(s, std::move(raw));
  }

  /// Multiplication map into Omega^2 (the projection pi on tensors).
  Form pi() const {
    const FormSpace& s = *space_;
    std::vector<std::pair<ScalarExpr, Word>> raw;
    for (auto& [c, g1, g2] : t_) raw.emplace_back(c, Word(g1, g2));
    return Form::normalized(s, 2, std::move(raw));
  }

  /// Bullet of the two tensor factors (a 1-form).
  Form pi_bullet() const {
    const FormSpace& s = *space_;
    std::vector<std::pair<ScalarExpr, Word>> raw;
    for (auto& [c, g1, g2] : t_)
      for (auto& [q, g] : s.bullet_gen(g1, g2)) raw.emplace_back(c * q, Word(g));
    return Form::normalized(s, 1, std::move(raw));
  }

  /// (a (x) b) . beta = a (x) (b . beta)   — bullet on the second factor.
  TensorForm bullet_second(const Form& beta) const {
    if (beta.degree() != 1) throw Error("bullet expects a 1-form");
    const FormSpace& s = *space_;
    std::vector<std::tuple<ScalarExpr, Gen, Gen>> raw;
    for (auto& [c, g1, g2] : t_)
      for (auto& [cb, wb] : beta.terms())
        for (auto& [q, g] : s.bullet_gen(g2, wb[0]))
          for (auto& [cm, ng1] : s.commute(g1, cb * q)) raw.emplace_back(c * cm, ng1, g);
    return normalized(s, std::move(raw));
  }

  /// (a (x) b) . beta = (a . beta) (x) b   — bullet on the first factor
  /// (equivalently beta . (a (x) b) by commutativity of the 1-form bullet).
  TensorForm bullet_first(const Form& beta) const {
    if (beta.degree() != 1) throw Error("bullet expects a 1-form");
    const FormSpace& s = *space_;
    std::vector<std::tuple<ScalarExpr, Gen, Gen>> raw;
    for (auto& [c, g1, g2] : t_)
      for (auto& [cb, wb] : beta.terms())
        for (auto& [q, g] : s.bullet_gen(g1, wb[0])) raw.emplace_back(c * cb * q, g, g2);
    return normalized(s, std::move(raw));
  }

  /// (a (x) b) . (u (x) v) = (a . u) (x) (b . v).
  friend TensorForm bullet(const TensorForm& A, const TensorForm& B) {
    check_pair(A, B);
    const FormSpace& s = *A.space_;
    std::vector<std::tuple<ScalarExpr, Gen, Gen>> raw;
    for (auto& [c, a, b] : A.t_)
      for (auto& [c2, u, v] : B.t_)
        for (auto& [q1, g1] : s.bullet_gen(a, u))
          for (auto& [q2, g2] : s.bullet_gen(b, v))
            // only the second-slot scalar q2 sits in the middle position
            for (auto& [cm, ng1] : s.commute(g1, q2)) raw.emplace_back(c * c2 * q1 * cm, ng1, g2);
    return normalized(s, std::move(raw));
  }

 private:
  TensorForm(const FormSpace* s, std::vector<std::tuple<ScalarExpr, Gen, Gen>> t)
      : space_(s), t_(std::move(t)) {}
  static void check_pair(const TensorForm& a, const TensorForm& b) {
    if (a.space_ != b.space_) throw Error("mixing tensors from different spaces");
  }

  const FormSpace* space_ = nullptr;
  std::vector<std::tuple<ScalarExpr, Gen, Gen>> t_;
};

/// alpha . (u (x) v) = (alpha . u) (x) v.
inline TensorForm bullet(const Form& alpha, const TensorForm& T) {
  if (alpha.degree() != 1) throw Error("bullet expects a 1-form");
  return T.bullet_first(alpha);
}

/// d-bullet on 1-forms: d.(sum c g) = sum [ dc . g + c d.(g) ] with
/// d.(dt) = d.(dx) = 0 and d.(xi^{mn}) = 2 xi^{mn}.
inline Form d_bullet(const Form& a) {
  if (a.degree() != 1) throw Error("d_bullet expects a 1-form");
  const FormSpace& s = a.space();
  Form out = Form::zero(s, 1);
  for (auto& [c, w] : a.terms()) {
    Gen g = w[0];
    out += bullet(Form::d_scalar(s, c), Form::generator(s, g));
    if (g.kind == GenKind::Xi) out += Rational(2) * (c * Form::generator(s, g));
  }
  return out;
}

}  // namespace ncdc
