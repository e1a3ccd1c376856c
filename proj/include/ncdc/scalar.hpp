#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "ncdc/chart.hpp"
#include "ncdc/error.hpp"
#include "ncdc/numeric.hpp"
#include "ncdc/symbols.hpp"

namespace ncdc {

/// One derivative-tagged occurrence of an opaque symbol: sym(indices) with a
/// multiset of partial derivatives applied, raised to an integer power.
/// Negative powers are only admitted for symbols declared invertible.
struct SymFactor {
  int sym = 0;
  std::vector<Idx> indices;  // concrete spatial indices, 1..N
  std::vector<Idx> derivs;   // sorted; 0 = t, 1..N spatial
  int power = 1;

  friend bool operator==(const SymFactor& a, const SymFactor& b) {
    return a.sym == b.sym && a.indices == b.indices && a.derivs == b.derivs && a.power == b.power;
  }
};

inline int cmp_vec(const std::vector<Idx>& a, const std::vector<Idx>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

/// Orders factors irrespective of power (power compared last so that merged
/// factors stay adjacent).
inline int cmp_factor_base(const SymFactor& a, const SymFactor& b) {
  if (a.sym != b.sym) return a.sym < b.sym ? -1 : 1;
  if (int c = cmp_vec(a.indices, b.indices)) return c;
  if (int c = cmp_vec(a.derivs, b.derivs)) return c;
  return 0;
}

/// coeff * x^mono * prod(factors). mono[0] is the t exponent, mono[i] the x^i one.
struct Term {
  Rational coeff;
  std::vector<uint32_t> mono;
  std::vector<SymFactor> facs;

  int total_coord_degree() const {
    int d = 0;
    for (auto e : mono) d += static_cast<int>(e);
    return d;
  }
};

/// Degree-lexicographic key order: coordinate degree, then coordinate
/// exponents, then the factor list (symbol id, indices, derivatives, power).
inline int cmp_term_key(const Term& a, const Term& b) {
  int da = a.total_coord_degree(), db = b.total_coord_degree();
  if (da != db) return da < db ? -1 : 1;
  if (a.mono.size() != b.mono.size()) return a.mono.size() < b.mono.size() ? -1 : 1;
  for (size_t i = 0; i < a.mono.size(); ++i)
    if (a.mono[i] != b.mono[i]) return a.mono[i] < b.mono[i] ? -1 : 1;
  int fa = 0, fb = 0;
  for (const auto& f : a.facs) fa += std::abs(f.power);
  for (const auto& f : b.facs) fb += std::abs(f.power);
  if (fa != fb) return fa < fb ? -1 : 1;
  size_t n = std::min(a.facs.size(), b.facs.size());
  for (size_t i = 0; i < n; ++i) {
    if (int c = cmp_factor_base(a.facs[i], b.facs[i])) return c;
    if (a.facs[i].power != b.facs[i].power) return a.facs[i].power < b.facs[i].power ? -1 : 1;
  }
  if (a.facs.size() != b.facs.size()) return a.facs.size() < b.facs.size() ? -1 : 1;
  return 0;
}

class ScalarExpr;

/// Chart + symbol table + the derived contraction rewrite rules. Everything is
/// immutable after construction, so contexts can be shared across threads.
class Context {
 public:
  Context(ChartSpec chart, SymbolTable symbols) : chart_(chart), symbols_(std::move(symbols)) {
    build_inverse_rules();
  }

  const ChartSpec& chart() const { return chart_; }
  const SymbolTable& symbols() const { return symbols_; }
  int dim() const { return chart_.dim; }

  /// A rewrite a*b -> repl with repl strictly below a*b in the term order.
  struct PairRule {
    SymFactor a, b;
    std::vector<Term> repl;
  };
  const std::vector<PairRule>& pair_rules() const { return rules_; }

 private:
  void build_inverse_rules();

  ChartSpec chart_;
  SymbolTable symbols_;
  std::vector<PairRule> rules_;
};

/// Exact scalar: a normalized rational-coefficient polynomial in coordinates
/// and derivative-tagged opaque symbols. Normal forms are canonical, so
/// equality of expressions is plain equality of term lists.
class ScalarExpr {
 public:
  ScalarExpr() = default;

  static ScalarExpr zero(const Context& c) { return ScalarExpr(&c, {}); }
  static ScalarExpr constant(const Context& c, Rational r) {
    Term t;
    t.coeff = std::move(r);
    t.mono.assign(static_cast<size_t>(c.dim()) + 1, 0);
    return from_terms(c, {std::move(t)});
  }
  static ScalarExpr one(const Context& c) { return constant(c, 1); }

  static ScalarExpr coord(const Context& c, Idx i) {
    c.chart().check_index(i);
    Term t;
    t.coeff = 1;
    t.mono.assign(static_cast<size_t>(c.dim()) + 1, 0);
    t.mono[static_cast<size_t>(i)] = 1;
    return from_terms(c, {std::move(t)});
  }
  static ScalarExpr time(const Context& c) { return coord(c, kTime); }

  static ScalarExpr symbol(const Context& c, int sym, std::vector<Idx> indices = {},
                           std::vector<Idx> derivs = {}, int power = 1) {
    Term t;
    t.coeff = 1;
    t.mono.assign(static_cast<size_t>(c.dim()) + 1, 0);
    t.facs.push_back(SymFactor{sym, std::move(indices), std::move(derivs), power});
    return from_terms(c, {std::move(t)});
  }
  static ScalarExpr symbol(const Context& c, const std::string& name, std::vector<Idx> indices = {}) {
    return symbol(c, c.symbols().require(name), std::move(indices));
  }
  static ScalarExpr delta(const Context& c, Idx mu, Idx nu) {
    return symbol(c, SymbolTable::kDelta, {mu, nu});
  }

  static ScalarExpr from_terms(const Context& c, std::vector<Term> raw, bool use_rules = true);

  const Context* context() const { return ctx_; }
  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const {
    return t_.empty() || (t_.size() == 1 && t_[0].facs.empty() && t_[0].total_coord_degree() == 0);
  }
  Rational constant_value() const {
    if (t_.empty()) return Rational(0);
    if (!is_constant()) throw Error("expression is not constant");
    return t_[0].coeff;
  }

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
    const Context* c = merge_ctx(a, b);
    if (!c) return ScalarExpr();
    std::vector<Term> raw = a.t_;
    raw.insert(raw.end(), b.t_.begin(), b.t_.end());
    return from_terms(*c, std::move(raw));
  }
  friend ScalarExpr operator-(const ScalarExpr& a) {
    ScalarExpr r = a;
    for (auto& t : r.t_) t.coeff = -t.coeff;
    return r;
  }
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
    const Context* c = merge_ctx(a, b);
    if (!c) return ScalarExpr();
    std::vector<Term> raw;
    raw.reserve(a.t_.size() * b.t_.size());
    for (const auto& ta : a.t_)
      for (const auto& tb : b.t_) raw.push_back(mul_terms(ta, tb));
    return from_terms(*c, std::move(raw));
  }
  friend ScalarExpr operator*(const Rational& r, const ScalarExpr& a) {
    ScalarExpr out = a;
    if (r == 0) return ScalarExpr::zero(*a.require_ctx());
    for (auto& t : out.t_) t.coeff *= r;
    return out;
  }
  friend ScalarExpr operator*(const ScalarExpr& a, const Rational& r) { return r * a; }
  ScalarExpr& operator+=(const ScalarExpr& b) { return *this = *this + b; }
  ScalarExpr& operator-=(const ScalarExpr& b) { return *this = *this - b; }
  ScalarExpr& operator*=(const ScalarExpr& b) { return *this = *this * b; }

  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.t_.size() != b.t_.size()) return false;
    for (size_t i = 0; i < a.t_.size(); ++i) {
      if (a.t_[i].coeff != b.t_[i].coeff || cmp_term_key(a.t_[i], b.t_[i]) != 0) return false;
    }
    return true;
  }

  ScalarExpr pow(int k) const {
    const Context& c = *require_ctx();
    if (k == 0) return one(c);
    if (k < 0) {
      // only a single invertible symbol factor can be inverted exactly
      if (t_.size() == 1 && t_[0].facs.size() == 1 && t_[0].coeff == 1 &&
          t_[0].total_coord_degree() == 0 && c.symbols().at(t_[0].facs[0].sym).invertible) {
        SymFactor f = t_[0].facs[0];
        f.power *= k;
        Term t;
        t.coeff = 1;
        t.mono.assign(static_cast<size_t>(c.dim()) + 1, 0);
        t.facs = {f};
        return from_terms(c, {t});
      }
      throw Error("negative power of a non-invertible expression");
    }
    ScalarExpr r = one(c);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  /// Partial derivative (a derivation; Leibniz over products; appends the
  /// index to the derivative multiset of opaque factors).
  ScalarExpr partial(Idx i) const;

  /// Substitute expressions for symbol instances, derivative- and power-aware:
  /// an occurrence sym(idx) tagged with derivatives D and power k becomes
  /// (partial_D value)^k.
  using Binding = std::map<std::pair<int, std::vector<Idx>>, ScalarExpr>;
  ScalarExpr subst(const Binding& bind) const;
  ScalarExpr subst_symbol(int sym, const ScalarExpr& value) const;

  /// Exact evaluation at a rational coordinate point (no symbols may remain).
  Rational eval_coords(const std::vector<Rational>& point) const;
  double eval_double(double t, const std::vector<double>& x) const;

  const Context* require_ctx() const {
    if (!ctx_) throw Error("use of an empty ScalarExpr");
    return ctx_;
  }

 private:
  ScalarExpr(const Context* c, std::vector<Term> t) : ctx_(c), t_(std::move(t)) {}

  static const Context* merge_ctx(const ScalarExpr& a, const ScalarExpr& b) {
    if (a.ctx_ && b.ctx_ && a.ctx_ != b.ctx_) throw Error("mixing expressions from different contexts");
    return a.ctx_ ? a.ctx_ : b.ctx_;
  }

  static Term mul_terms(const Term& a, const Term& b) {
    Term r;
    r.coeff = a.coeff * b.coeff;
    r.mono.resize(a.mono.size());
    for (size_t i = 0; i < a.mono.size(); ++i) r.mono[i] = a.mono[i] + b.mono[i];
    r.facs = a.facs;
    r.facs.insert(r.facs.end(), b.facs.begin(), b.facs.end());
    return r;
  }

  const Context* ctx_ = nullptr;
  std::vector<Term> t_;
};

namespace detail {

/// Canonicalizes a single factor in place. Returns the sign picked up from
/// antisymmetric index sorting, or 0 if the whole term vanishes.
inline int canonicalize_factor(const Context& c, SymFactor& f) {
  const FunctionSymbol& s = c.symbols().at(f.sym);
  if (static_cast<int>(f.indices.size()) != s.arity())
    throw Error("symbol '" + s.name + "' expects " + std::to_string(s.arity()) + " indices");
  for (Idx i : f.indices) c.chart().check_spatial(i);
  for (Idx d : f.derivs) c.chart().check_index(d);
  if (f.power == 0) return 1;
  if (f.power < 0 && !s.invertible) throw Error("negative power of non-invertible symbol '" + s.name + "'");

  if (s.constant && !f.derivs.empty()) return 0;
  if (s.time_independent && std::find(f.derivs.begin(), f.derivs.end(), kTime) != f.derivs.end()) return 0;

  int sign = 1;
  for (const auto& g : s.symmetries) {
    std::vector<Idx> vals;
    vals.reserve(g.slots.size());
    for (int p : g.slots) vals.push_back(f.indices[static_cast<size_t>(p)]);
    if (g.antisymmetric) {
      int inversions = 0;
      for (size_t i = 0; i < vals.size(); ++i)
        for (size_t j = i + 1; j < vals.size(); ++j) {
          if (vals[i] == vals[j]) return 0;
          if (vals[i] > vals[j]) ++inversions;
        }
      if (inversions % 2) sign = -sign;
    }
    std::sort(vals.begin(), vals.end());
    for (size_t k = 0; k < g.slots.size(); ++k) f.indices[static_cast<size_t>(g.slots[k])] = vals[k];
  }
  std::sort(f.derivs.begin(), f.derivs.end());
  return (f.power % 2 == 0) ? 1 : sign;  // sign^k for k odd is sign, even is +1
}

}  // namespace detail

inline ScalarExpr ScalarExpr::from_terms(const Context& c, std::vector<Term> raw, bool use_rules) {
  std::vector<Term> work = std::move(raw);
  std::vector<Term> done;

  while (!work.empty()) {
    Term t = std::move(work.back());
    work.pop_back();
    if (t.coeff == 0) continue;
    if (t.mono.size() != static_cast<size_t>(c.dim()) + 1) throw Error("monomial size mismatch");

    bool dead = false;
    std::vector<SymFactor> facs;
    facs.reserve(t.facs.size());
    for (SymFactor f : t.facs) {
      int sign = detail::canonicalize_factor(c, f);
      if (sign == 0) {
        dead = true;
        break;
      }
      if (f.power == 0) continue;
      if (sign < 0) t.coeff = -t.coeff;
      if (f.sym == SymbolTable::kDelta) {
        if (f.indices[0] != f.indices[1]) {
          dead = true;
          break;
        }
        continue;  // delta^m_m (no sum) = 1
      }
      facs.push_back(std::move(f));
    }
    if (dead || t.coeff == 0) continue;

    std::sort(facs.begin(), facs.end(), [](const SymFactor& a, const SymFactor& b) {
      int cb = cmp_factor_base(a, b);
      if (cb) return cb < 0;
      return a.power < b.power;
    });
    t.facs.clear();
    for (auto& f : facs) {
      if (!t.facs.empty() && cmp_factor_base(t.facs.back(), f) == 0) {
        t.facs.back().power += f.power;
        if (t.facs.back().power == 0) t.facs.pop_back();
      } else {
        t.facs.push_back(std::move(f));
      }
    }

    if (use_rules) {
      bool fired = false;
      for (const auto& rule : c.pair_rules()) {
        int ia = -1, ib = -1;
        for (size_t i = 0; i < t.facs.size(); ++i) {
          const SymFactor& f = t.facs[i];
          if (f.power < 1) continue;
          if (ia < 0 && f.sym == rule.a.sym && f.indices == rule.a.indices && f.derivs.empty())
            ia = static_cast<int>(i);
          else if (ib < 0 && f.sym == rule.b.sym && f.indices == rule.b.indices && f.derivs.empty())
            ib = static_cast<int>(i);
        }
        if (ia < 0 || ib < 0) continue;
        Term base = t;
        auto consume = [&](int pos) {
          auto& f = base.facs[static_cast<size_t>(pos)];
          f.power -= 1;
        };
        consume(ia);
        consume(ib);
        for (const Term& r : rule.repl) {
          Term nt = mul_terms(base, r);
          work.push_back(std::move(nt));
        }
        fired = true;
        break;
      }
      if (fired) continue;
    }

    done.push_back(std::move(t));
  }

  std::sort(done.begin(), done.end(), [](const Term& a, const Term& b) { return cmp_term_key(a, b) > 0; });
  std::vector<Term> out;
  for (auto& t : done) {
    if (!out.empty() && cmp_term_key(out.back(), t) == 0) {
      out.back().coeff += t.coeff;
      if (out.back().coeff == 0) out.pop_back();
    } else {
      out.push_back(std::move(t));
    }
  }
  return ScalarExpr(&c, std::move(out));
}

inline ScalarExpr ScalarExpr::partial(Idx i) const {
  const Context& c = *require_ctx();
  c.chart().check_index(i);
  std::vector<Term> raw;
  for (const Term& t : t_) {
    // coordinate part
    if (t.mono[static_cast<size_t>(i)] > 0) {
      Term nt = t;
      nt.coeff *= static_cast<int>(t.mono[static_cast<size_t>(i)]);
      nt.mono[static_cast<size_t>(i)] -= 1;
      raw.push_back(std::move(nt));
    }
    // symbol jets
    for (size_t k = 0; k < t.facs.size(); ++k) {
      const SymFactor& f = t.facs[k];
      const FunctionSymbol& s = c.symbols().at(f.sym);
      if (s.constant) continue;
      if (s.time_independent && i == kTime) continue;
      Term nt = t;
      nt.coeff *= f.power;
      nt.facs[k].power -= 1;
      SymFactor df = f;
      df.power = 1;
      df.derivs.push_back(i);
      nt.facs.push_back(std::move(df));
      raw.push_back(std::move(nt));
    }
  }
  return from_terms(c, std::move(raw));
}

inline ScalarExpr ScalarExpr::subst(const Binding& bind) const {
  const Context& c = *require_ctx();
  ScalarExpr out = zero(c);
  for (const Term& t : t_) {
    Term base;
    base.coeff = t.coeff;
    base.mono = t.mono;
    ScalarExpr acc = from_terms(c, {base});
    for (const SymFactor& f : t.facs) {
      auto it = bind.find({f.sym, f.indices});
      if (it == bind.end()) {
        Term ft;
        ft.coeff = 1;
        ft.mono.assign(static_cast<size_t>(c.dim()) + 1, 0);
        ft.facs = {f};
        acc = acc * from_terms(c, {ft});
      } else {
        ScalarExpr v = it->second;
        for (Idx d : f.derivs) v = v.partial(d);
        acc = acc * v.pow(f.power);
      }
    }
    out += acc;
  }
  return out;
}

inline ScalarExpr ScalarExpr::subst_symbol(int sym, const ScalarExpr& value) const {
  Binding b;
  // gather every index tuple the symbol occurs with
  for (const Term& t : t_)
    for (const SymFactor& f : t.facs)
      if (f.sym == sym) b[{sym, f.indices}] = value;
  return subst(b);
}

inline Rational ScalarExpr::eval_coords(const std::vector<Rational>& point) const {
  const Context& c = *require_ctx();
  if (point.size() != static_cast<size_t>(c.dim()) + 1) throw Error("evaluation point has wrong dimension");
  Rational acc = 0;
  for (const Term& t : t_) {
    if (!t.facs.empty()) throw Error("cannot evaluate: opaque symbols remain");
    Rational v = t.coeff;
    for (size_t i = 0; i < t.mono.size(); ++i)
      for (uint32_t e = 0; e < t.mono[i]; ++e) v *= point[i];
    acc += v;
  }
  return acc;
}

inline double ScalarExpr::eval_double(double tval, const std::vector<double>& x) const {
  const Context& c = *require_ctx();
  if (x.size() != static_cast<size_t>(c.dim())) throw Error("evaluation point has wrong dimension");
  double acc = 0;
  for (const Term& t : t_) {
    if (!t.facs.empty()) throw Error("cannot evaluate: opaque symbols remain");
    double v = static_cast<double>(t.coeff);
    for (uint32_t e = 0; e < t.mono[0]; ++e) v *= tval;
    for (size_t i = 1; i < t.mono.size(); ++i)
      for (uint32_t e = 0; e < t.mono[i]; ++e) v *= x[i - 1];
    acc += v;
  }
  return acc;
}

inline void Context::build_inverse_rules() {
  const int n = chart_.dim;
  for (int up = 0; up < symbols_.size(); ++up) {
    const FunctionSymbol& u = symbols_.at(up);
    if (!u.inverse_of || u.arity() != 2) continue;
    if (u.slots[0] != Variance::Upper) continue;  // orient rules from the upper partner
    int lo = *u.inverse_of;
    const FunctionSymbol& l = symbols_.at(lo);
    if (l.slots[0] != Variance::Lower || l.slots[1] != Variance::Lower)
      throw Error("inverse partner of '" + u.name + "' must carry two lower indices");

    for (int mu = 1; mu <= n; ++mu) {
      for (int nu = 1; nu <= n; ++nu) {
        // sum_rho u^{mu rho} l_{nu rho} - delta^mu_nu, canonicalized without rules
        std::vector<Term> raw;
        for (int rho = 1; rho <= n; ++rho) {
          Term t;
          t.coeff = 1;
          t.mono.assign(static_cast<size_t>(n) + 1, 0);
          t.facs.push_back(SymFactor{up, {mu, rho}, {}, 1});
          t.facs.push_back(SymFactor{lo, {nu, rho}, {}, 1});
          raw.push_back(std::move(t));
        }
        if (mu == nu) {
          Term t;
          t.coeff = -1;
          t.mono.assign(static_cast<size_t>(n) + 1, 0);
          raw.push_back(std::move(t));
        }
        ScalarExpr rel = ScalarExpr::from_terms(*this, std::move(raw), /*use_rules=*/false);
        if (rel.is_zero()) continue;
        const Term& lead = rel.terms().front();
        if (lead.facs.size() != 2 || lead.facs[0].power != 1 || lead.facs[1].power != 1 ||
            !lead.facs[0].derivs.empty() || !lead.facs[1].derivs.empty() ||
            lead.total_coord_degree() != 0)
          continue;
        PairRule rule;
        const bool a_first = lead.facs[0].sym == up;
        rule.a = a_first ? lead.facs[0] : lead.facs[1];
        rule.b = a_first ? lead.facs[1] : lead.facs[0];
        Rational lc = lead.coeff;
        bool dup = false;
        for (const auto& r : rules_)
          if (r.a.sym == rule.a.sym && r.a.indices == rule.a.indices && r.b.sym == rule.b.sym &&
              r.b.indices == rule.b.indices)
            dup = true;
        if (dup) continue;
        for (size_t i = 1; i < rel.terms().size(); ++i) {
          Term t = rel.terms()[i];
          t.coeff = -t.coeff / lc;
          rule.repl.push_back(std::move(t));
        }
        rules_.push_back(std::move(rule));
      }
    }
  }
}

}  // namespace ncdc
