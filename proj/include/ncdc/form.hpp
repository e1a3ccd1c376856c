#pragma once

#include <utility>
#include <vector>

#include "ncdc/formspace.hpp"

namespace ncdc {

/// Graded form in canonical normal form: a sum of (left coefficient, word)
/// pairs over the degree-r word basis of the ambient FormSpace quotient.
class Form {
 public:
  Form() = default;

  static Form zero(const FormSpace& s, int degree) { return Form(&s, degree, {}); }
  static Form scalar(const FormSpace& s, ScalarExpr f) {
    std::vector<std::pair<ScalarExpr, Word>> t;
    t.emplace_back(std::move(f), Word{});
    return normalized(s, 0, std::move(t));
  }
  static Form generator(const FormSpace& s, Gen g) {
    std::vector<std::pair<ScalarExpr, Word>> t;
    t.emplace_back(ScalarExpr::one(s.ctx()), Word(g));
    return normalized(s, 1, std::move(t));
  }
  static Form dt(const FormSpace& s) { return generator(s, Gen::dt()); }
  static Form dx(const FormSpace& s, int mu) { return generator(s, Gen::dx(mu)); }
  static Form xi(const FormSpace& s, int mu, int nu) {
    if (s.mode() == FormSpace::Mode::Ito) {
      std::vector<std::pair<ScalarExpr, Word>> t;
      t.emplace_back(-s.b(mu, nu), Word(Gen::dt()));
      return normalized(s, 1, std::move(t));
    }
    return generator(s, Gen::xi(mu, nu));
  }

  /// Builds from raw (left coefficient, word) terms and reduces to normal form.
  static Form normalized(const FormSpace& s, int degree, std::vector<std::pair<ScalarExpr, Word>> raw) {
    std::vector<std::pair<ScalarExpr, Word>> flat;
    for (auto& [c, w] : raw) {
      if (w.degree() != degree) throw Error("word degree mismatch in form construction");
      if (c.is_zero()) continue;
      for (auto& [q, wb] : s.reduce_word(w)) flat.emplace_back(c * q, wb);
    }
    std::sort(flat.begin(), flat.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::pair<ScalarExpr, Word>> out;
    for (auto& [c, w] : flat) {
      if (!out.empty() && out.back().second == w)
        out.back().first += c;
      else
        out.emplace_back(std::move(c), w);
    }
    std::erase_if(out, [](const auto& t) { return t.first.is_zero(); });
    return Form(&s, degree, std::move(out));
  }

  /// Builds from (generator word, right coefficient) pairs: w * f.
  static Form from_right(const FormSpace& s, int degree, const std::vector<std::pair<Word, ScalarExpr>>& raw) {
    std::vector<std::pair<ScalarExpr, Word>> terms;
    for (auto& [w, f] : raw) {
      if (w.degree() != degree) throw Error("word degree mismatch in form construction");
      for (auto& [c, nw] : move_left(s, w, f)) terms.emplace_back(c, nw);
    }
    return normalized(s, degree, std::move(terms));
  }

  const FormSpace& space() const { return *space_; }
  int degree() const { return degree_; }
  const std::vector<std::pair<ScalarExpr, Word>>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  /// Coefficient of a basis word (zero if absent).
  ScalarExpr coeff(const Word& w) const {
    for (auto& [c, ww] : t_)
      if (ww == w) return c;
    return ScalarExpr::zero(space_->ctx());
  }

  friend Form operator+(const Form& a, const Form& b) {
    check_pair(a, b);
    if (a.degree_ != b.degree_) throw Error("cannot add forms of different degree");
    std::vector<std::pair<ScalarExpr, Word>> t = a.t_;
    t.insert(t.end(), b.t_.begin(), b.t_.end());
    return normalized(*a.space_, a.degree_, std::move(t));
  }
  friend Form operator-(const Form& a) {
    Form r = a;
    for (auto& [c, w] : r.t_) c = -c;
    return r;
  }
  friend Form operator-(const Form& a, const Form& b) { return a + (-b); }
  friend Form operator*(const ScalarExpr& f, const Form& a) {
    std::vector<std::pair<ScalarExpr, Word>> t = a.t_;
    for (auto& [c, w] : t) c = f * c;
    return normalized(*a.space_, a.degree_, std::move(t));
  }
  friend Form operator*(const Rational& r, const Form& a) {
    return ScalarExpr::constant(a.space_->ctx(), r) * a;
  }
  friend bool operator==(const Form& a, const Form& b) {
    if (a.degree_ != b.degree_ || a.t_.size() != b.t_.size()) return false;
    for (size_t i = 0; i < a.t_.size(); ++i)
      if (!(a.t_[i].second == b.t_[i].second) || !(a.t_[i].first == b.t_[i].first)) return false;
    return true;
  }
  Form& operator+=(const Form& b) { return *this = *this + b; }
  Form& operator-=(const Form& b) { return *this = *this - b; }

  /// Right multiplication by a scalar: alpha * f.
  Form right_mul(const ScalarExpr& f) const {
    std::vector<std::pair<ScalarExpr, Word>> t;
    for (auto& [c, w] : t_)
      for (auto& [s, nw] : move_left(*space_, w, f)) t.emplace_back(c * s, nw);
    return normalized(*space_, degree_, std::move(t));
  }

  /// Graded product.
  friend Form operator*(const Form& a, const Form& b) {
    check_pair(a, b);
    const int d = a.degree_ + b.degree_;
    if (d > 3) throw Error("form degree overflow (>3)");
    std::vector<std::pair<ScalarExpr, Word>> t;
    for (auto& [ca, wa] : a.t_)
      for (auto& [cb, wb] : b.t_)
        for (auto& [s, wam] : move_left(*a.space_, wa, cb)) t.emplace_back(ca * s, Word::concat(wam, wb));
    return normalized(*a.space_, d, std::move(t));
  }

  /// Exterior derivative with the graded Leibniz rule; on scalars Eq.-(2.13)
  /// style, on generators d(dt) = d(dx) = 0 and d(xi^{mn}) = [dx^m, dx^n]_+.
  Form d() const {
    const FormSpace& s = *space_;
    if (degree_ >= 3) throw Error("form degree overflow (>3)");
    Form out = zero(s, degree_ + 1);
    for (auto& [c, w] : t_) {
      // (dc) * w
      Form dc = d_scalar(s, c);
      std::vector<std::pair<ScalarExpr, Word>> t1;
      for (auto& [cc, wc] : dc.terms()) t1.emplace_back(cc, Word::concat(wc, w));
      out += normalized(s, degree_ + 1, std::move(t1));
      // c * d(w), sign (-1)^{i} for the prefix of degree i
      for (int i = 0; i < w.degree(); ++i) {
        auto dg = s.d_gen(w[i]);
        if (dg.empty()) continue;
        std::vector<std::pair<ScalarExpr, Word>> t2;
        for (auto& [q, wd] : dg) {
          Word nw = w.prefix(i);
          for (int k = 0; k < wd.degree(); ++k) nw = nw.appended(wd[k]);
          for (int k = i + 1; k < w.degree(); ++k) nw = nw.appended(w[k]);
          Rational sign = (i % 2 == 0) ? q : -q;
          t2.emplace_back(ScalarExpr::constant(s.ctx(), sign) * c, nw);
        }
        out += normalized(s, degree_ + 1, std::move(t2));
      }
    }
    return out;
  }

  static Form d_scalar(const FormSpace& s, const ScalarExpr& f) {
    std::vector<std::pair<Word, ScalarExpr>> raw;
    for (auto& [g, c] : s.d_scalar_right(f)) raw.emplace_back(Word(g), c);
    return from_right(s, 1, raw);
  }

  /// Commutative bullet product on 1-forms (left-bilinear over coefficients).
  friend Form bullet(const Form& a, const Form& b) {
    check_pair(a, b);
    if (a.degree_ != 1 || b.degree_ != 1) throw Error("bullet expects 1-forms");
    const FormSpace& s = *a.space_;
    std::vector<std::pair<ScalarExpr, Word>> t;
    for (auto& [ca, wa] : a.t_)
      for (auto& [cb, wb] : b.t_)
        for (auto& [q, g] : s.bullet_gen(wa[0], wb[0])) t.emplace_back(ca * cb * q, Word(g));
    return normalized(s, 1, std::move(t));
  }

  /// Right-coefficient components of a 1-form: alpha = dt f0 + dx^m fm +
  /// (1/2) xi^{mn} fmn (general mode; fmn symmetric). In Ito mode only f0, fm.
  struct RightComponents {
    ScalarExpr f0;
    std::vector<ScalarExpr> fm;               // 1..N stored from 0
    std::vector<std::vector<ScalarExpr>> fmn; // symmetric, general mode only
  };
  RightComponents right_components() const {
    if (degree_ != 1) throw Error("right_components expects a 1-form");
    const FormSpace& s = *space_;
    const Context& c = s.ctx();
    const int n = s.dim();
    RightComponents rc;
    rc.f0 = ScalarExpr::zero(c);
    rc.fm.assign(static_cast<size_t>(n), ScalarExpr::zero(c));
    if (s.mode() == FormSpace::Mode::General)
      rc.fmn.assign(static_cast<size_t>(n), std::vector<ScalarExpr>(static_cast<size_t>(n), ScalarExpr::zero(c)));
    for (auto& [cf, w] : t_) {
      Gen g = w[0];
      switch (g.kind) {
        case GenKind::Dt:
          rc.f0 += cf;
          break;
        case GenKind::Dx: {
          // cf * dx^m = dx^m * cf + xi^{rm} d_r cf   (general)
          //           = dx^m * cf - dt b^{rm} d_r cf (Ito)
          rc.fm[static_cast<size_t>(g.a - 1)] += cf;
          for (int r = 1; r <= n; ++r) {
            ScalarExpr dcf = cf.partial(r);
            if (dcf.is_zero()) continue;
            if (s.mode() == FormSpace::Mode::General) {
              rc.fmn[static_cast<size_t>(r - 1)][static_cast<size_t>(g.a - 1)] += dcf;
              rc.fmn[static_cast<size_t>(g.a - 1)][static_cast<size_t>(r - 1)] += dcf;
            } else {
              rc.f0 -= s.b(r, g.a) * dcf;
            }
          }
          break;
        }
        case GenKind::Xi: {
          // cf * xi^{mn} = xi^{mn} * cf; contributes to the symmetric block
          // with the 1/2 convention: 1/2 xi^{mn} fmn with fmn symmetric.
          if (g.a == g.b) {
            rc.fmn[static_cast<size_t>(g.a - 1)][static_cast<size_t>(g.a - 1)] += Rational(2) * cf;
          } else {
            rc.fmn[static_cast<size_t>(g.a - 1)][static_cast<size_t>(g.b - 1)] += cf;
            rc.fmn[static_cast<size_t>(g.b - 1)][static_cast<size_t>(g.a - 1)] += cf;
          }
          break;
        }
      }
    }
    return rc;
  }

  /// Moves a scalar from the right of a word to the left: w * f = sum s_i w_i.
  static std::vector<std::pair<ScalarExpr, Word>> move_left(const FormSpace& s, const Word& w,
                                                            const ScalarExpr& f) {
    std::vector<std::pair<ScalarExpr, Word>> cur{{f, Word{}}};
    for (int i = w.degree() - 1; i >= 0; --i) {
      std::vector<std::pair<ScalarExpr, Word>> nxt;
      for (auto& [c, tail] : cur)
        for (auto& [c2, g2] : s.commute(w[i], c)) nxt.emplace_back(c2, Word::concat(Word(g2), tail));
      cur = std::move(nxt);
    }
    return cur;
  }

 private:
  Form(const FormSpace* s, int degree, std::vector<std::pair<ScalarExpr, Word>> t)
      : space_(s), degree_(degree), t_(std::move(t)) {}

  static void check_pair(const Form& a, const Form& b) {
    if (a.space_ != b.space_) throw Error("mixing forms from different spaces");
  }

  const FormSpace* space_ = nullptr;
  int degree_ = 0;
  std::vector<std::pair<ScalarExpr, Word>> t_;
};

/// The Ito specialization xi^{mn} -> -dt b^{mn} as a map between calculi.
inline Form specialize(const Form& a, const FormSpace& ito) {
  if (ito.mode() != FormSpace::Mode::Ito) throw Error("target space must be an Ito specialization");
  Form out = Form::zero(ito, a.degree());
  for (auto& [c, w] : a.terms()) {
    Form acc = Form::scalar(ito, c);
    for (int i = 0; i < w.degree(); ++i) {
      Gen g = w[i];
      Form gi = (g.kind == GenKind::Xi) ? Form::xi(ito, g.a, g.b) : Form::generator(ito, g);
      acc = acc * gi;
    }
    out += acc;
  }
  return out;
}

}  // namespace ncdc
