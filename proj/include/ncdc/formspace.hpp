#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "ncdc/scalar.hpp"
#include "ncdc/word.hpp"

namespace ncdc {

/// Backend for the quotient form calculus. Two flavours share one interface:
///  - General: generators {dt, dx^m, xi^{mn}}, constant-coefficient two-form
///    relations reduced by exact Gaussian elimination per degree.
///  - Ito: the specialization xi^{mn} = -dt b^{mn}; generators {dt, dx^m} with
///    the induced b-dependent rewrite [dx^m,dx^n]_+ = dt dx^k d_k b^{mn}.
class FormSpace {
 public:
  enum class Mode { General, Ito };

  static std::shared_ptr<FormSpace> general(const Context& c) {
    return std::shared_ptr<FormSpace>(new FormSpace(c, Mode::General, {}));
  }
  /// b: N x N symmetric diffusion components (entries may be symbolic).
  static std::shared_ptr<FormSpace> ito(const Context& c, std::vector<std::vector<ScalarExpr>> b) {
    const int n = c.dim();
    if (static_cast<int>(b.size()) != n) throw Error("b matrix has wrong dimension");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(b[static_cast<size_t>(i)].size()) != n) throw Error("b matrix has wrong dimension");
      for (int j = 0; j < n; ++j)
        if (!(b[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
              b[static_cast<size_t>(j)][static_cast<size_t>(i)]))
          throw Error("b matrix must be symmetric");
    }
    return std::shared_ptr<FormSpace>(new FormSpace(c, Mode::Ito, std::move(b)));
  }

  const Context& ctx() const { return *ctx_; }
  Mode mode() const { return mode_; }
  int dim() const { return ctx_->dim(); }

  const ScalarExpr& b(int mu, int nu) const {
    if (mode_ != Mode::Ito) throw Error("b is only available in the Ito specialization");
    return b_[static_cast<size_t>(mu - 1)][static_cast<size_t>(nu - 1)];
  }

  /// All degree-1 generators in canonical order.
  std::vector<Gen> generators() const {
    std::vector<Gen> gs{Gen::dt()};
    for (int m = 1; m <= dim(); ++m) gs.push_back(Gen::dx(m));
    if (mode_ == Mode::General)
      for (int m = 1; m <= dim(); ++m)
        for (int n = m; n <= dim(); ++n) gs.push_back(Gen::xi(m, n));
    return gs;
  }

  /// g * f = sum_i s_i * g_i  (coefficient moved to the left of a generator).
  std::vector<std::pair<ScalarExpr, Gen>> commute(Gen g, const ScalarExpr& f) const {
    std::vector<std::pair<ScalarExpr, Gen>> out;
    out.emplace_back(f, g);
    if (g.kind != GenKind::Dx) return out;
    const int mu = g.a;
    for (int rho = 1; rho <= dim(); ++rho) {
      ScalarExpr df = f.partial(rho);
      if (df.is_zero()) continue;
      if (mode_ == Mode::General) {
        out.emplace_back(-df, Gen::xi(rho, mu));
      } else {
        out.emplace_back(b(rho, mu) * df, Gen::dt());
      }
    }
    return out;
  }

  /// Generator-level commutative bullet product (values are 1-forms given as
  /// coefficient/generator pairs; empty means zero).
  std::vector<std::pair<ScalarExpr, Gen>> bullet_gen(Gen x, Gen y) const {
    std::vector<std::pair<ScalarExpr, Gen>> out;
    if (x.kind == GenKind::Dx && y.kind == GenKind::Dx) {
      if (mode_ == Mode::General) {
        out.emplace_back(ScalarExpr::one(*ctx_), Gen::xi(x.a, y.a));
      } else {
        out.emplace_back(-b(x.a, y.a), Gen::dt());
      }
    }
    return out;
  }

  /// d on a generator, as constant-coefficient words (general mode: d xi^{mn}
  /// = [dx^m, dx^n]_+; everything else closed).
  std::vector<std::pair<Rational, Word>> d_gen(Gen g) const {
    std::vector<std::pair<Rational, Word>> out;
    if (mode_ == Mode::General && g.kind == GenKind::Xi) {
      out.emplace_back(1, Word(Gen::dx(g.a), Gen::dx(g.b)));
      out.emplace_back(1, Word(Gen::dx(g.b), Gen::dx(g.a)));
    }
    return out;
  }

  /// df as (generator, right coefficient) pairs per Eq.-style expansion
  /// df = dt d_t f + dx^m d_m f + 1/2 xi^{mn} d_m d_n f (specialized in Ito mode).
  std::vector<std::pair<Gen, ScalarExpr>> d_scalar_right(const ScalarExpr& f) const {
    std::vector<std::pair<Gen, ScalarExpr>> out;
    const Context& c = *ctx_;
    ScalarExpr ft = f.partial(kTime);
    if (mode_ == Mode::Ito) {
      for (int m = 1; m <= dim(); ++m)
        for (int n = 1; n <= dim(); ++n) ft -= Rational(1, 2) * b(m, n) * f.partial(m).partial(n);
    }
    if (!ft.is_zero()) out.emplace_back(Gen::dt(), ft);
    for (int m = 1; m <= dim(); ++m) {
      ScalarExpr fm = f.partial(m);
      if (!fm.is_zero()) out.emplace_back(Gen::dx(m), fm);
    }
    if (mode_ == Mode::General) {
      for (int m = 1; m <= dim(); ++m)
        for (int n = m; n <= dim(); ++n) {
          ScalarExpr fmn = f.partial(m).partial(n);
          if (m == n) fmn = Rational(1, 2) * fmn;
          if (!fmn.is_zero()) out.emplace_back(Gen::xi(m, n), fmn);
        }
    }
    return out;
  }

  /// Reduces a word to the canonical degree-r basis. Returns scalar/word pairs
  /// (general mode produces rational multiples only; Ito mode may introduce
  /// derivative-of-b coefficients).
  std::vector<std::pair<ScalarExpr, Word>> reduce_word(const Word& w) const;

  /// Canonical independent spanning words of the given degree.
  std::vector<Word> basis(int degree) const;

  /// The degree-2 defining relations (general mode): dt dt, [dt,dx^m]_+,
  /// [dt,xi^{mn}]_+, [dx^(m,xi^{np)}]_+, [xi^{(mn},xi^{pq)}]_+ as
  /// word/coefficient combinations that the quotient sends to zero.
  std::vector<std::vector<std::pair<Word, Rational>>> relation_set() const;

 private:
  FormSpace(const Context& c, Mode m, std::vector<std::vector<ScalarExpr>> b)
      : ctx_(&c), mode_(m), b_(std::move(b)) {}

  // ---- general-mode relation tables ----
  struct DegreeTable {
    std::vector<Word> words;                       // id -> word
    std::map<Word, int> ids;                       // word -> id
    std::map<int, std::vector<std::pair<int, Rational>>> expansion;  // pivot id -> basis combo
    std::vector<Word> basis;
  };
  const DegreeTable& table(int degree) const;
  DegreeTable build_table(int degree) const;
  std::vector<std::vector<std::pair<int, Rational>>> relation_rows(int degree, const DegreeTable& t) const;

  const Context* ctx_;
  Mode mode_;
  std::vector<std::vector<ScalarExpr>> b_;

  mutable std::mutex mu_;
  mutable std::map<int, DegreeTable> tables_;
};

// ---------------------------------------------------------------------------

inline const FormSpace::DegreeTable& FormSpace::table(int degree) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = tables_.find(degree);
  if (it == tables_.end()) it = tables_.emplace(degree, build_table(degree)).first;
  return it->second;
}

inline FormSpace::DegreeTable FormSpace::build_table(int degree) const {
  if (degree < 0 || degree > 3) throw Error("form degree out of range 0..3");
  DegreeTable t;
  std::vector<Gen> gs = generators();
  // enumerate all words of the requested degree
  std::vector<Word> stack{Word{}};
  for (int d = 0; d < degree; ++d) {
    std::vector<Word> next;
    for (const Word& w : stack)
      for (Gen g : gs) next.push_back(w.appended(g));
    stack = std::move(next);
  }
  t.words = std::move(stack);
  std::sort(t.words.begin(), t.words.end());
  for (size_t i = 0; i < t.words.size(); ++i) t.ids[t.words[i]] = static_cast<int>(i);

  std::vector<std::vector<std::pair<int, Rational>>> rows = relation_rows(degree, t);

  // sparse reduced row echelon, pivoting on the largest word in each row
  std::map<int, std::vector<std::pair<int, Rational>>> pivots;  // col -> row (sorted desc by col)
  auto reduce_row = [&](std::vector<std::pair<int, Rational>> row) {
    while (!row.empty()) {
      int lead = row.front().first;
      auto p = pivots.find(lead);
      if (p == pivots.end()) break;
      Rational factor = row.front().second;
      std::map<int, Rational> acc;
      for (auto& [c, v] : row) acc[c] += v;
      for (auto& [c, v] : p->second) acc[c] -= factor * v;
      row.clear();
      for (auto it = acc.rbegin(); it != acc.rend(); ++it)
        if (it->second != 0) row.emplace_back(it->first, it->second);
    }
    return row;
  };
  for (auto& raw : rows) {
    std::map<int, Rational> acc;
    for (auto& [c, v] : raw) acc[c] += v;
    std::vector<std::pair<int, Rational>> row;
    for (auto it = acc.rbegin(); it != acc.rend(); ++it)
      if (it->second != 0) row.emplace_back(it->first, it->second);
    row = reduce_row(std::move(row));
    if (row.empty()) continue;
    Rational lc = row.front().second;
    for (auto& [c, v] : row) v /= lc;
    pivots[row.front().first] = std::move(row);
  }
  // back-substitute so every expansion is over non-pivot words only
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [col, row] : pivots) {
      for (size_t i = 1; i < row.size(); ++i) {
        auto p = pivots.find(row[i].first);
        if (p == pivots.end()) continue;
        Rational factor = row[i].second;
        std::map<int, Rational> acc;
        for (auto& [c, v] : row) acc[c] += v;
        for (auto& [c, v] : p->second) acc[c] -= factor * v;
        row.clear();
        for (auto it = acc.rbegin(); it != acc.rend(); ++it)
          if (it->second != 0) row.emplace_back(it->first, it->second);
        changed = true;
        break;
      }
    }
  }
  for (auto& [col, row] : pivots) {
    std::vector<std::pair<int, Rational>> exp;
    for (size_t i = 1; i < row.size(); ++i) exp.emplace_back(row[i].first, -row[i].second);
    t.expansion[col] = std::move(exp);
  }
  for (size_t i = 0; i < t.words.size(); ++i)
    if (!t.expansion.count(static_cast<int>(i))) t.basis.push_back(t.words[i]);
  return t;
}

inline std::vector<std::vector<std::pair<Word, Rational>>> FormSpace::relation_set() const {
  std::vector<std::vector<std::pair<Word, Rational>>> rel2;
  if (mode_ != Mode::General) return rel2;
  const int n = dim();
  auto anti = [](Gen x, Gen y) {
    return std::vector<std::pair<Word, Rational>>{{Word(x, y), 1}, {Word(y, x), 1}};
  };
  rel2.push_back({{Word(Gen::dt(), Gen::dt()), 1}});                      // dt dt = 0
  for (int m = 1; m <= n; ++m) rel2.push_back(anti(Gen::dt(), Gen::dx(m)));
  for (int m = 1; m <= n; ++m)
    for (int p = m; p <= n; ++p) rel2.push_back(anti(Gen::dt(), Gen::xi(m, p)));
  // [dx^(m, xi^{n p)}]_+ = 0 summed over all permutations of (m,n,p)
  for (int m = 1; m <= n; ++m)
    for (int p = m; p <= n; ++p)
      for (int q = p; q <= n; ++q) {
        std::vector<int> id{m, p, q};
        std::sort(id.begin(), id.end());
        std::vector<std::pair<Word, Rational>> rel;
        do {
          auto part = anti(Gen::dx(id[0]), Gen::xi(id[1], id[2]));
          rel.insert(rel.end(), part.begin(), part.end());
        } while (std::next_permutation(id.begin(), id.end()));
        rel2.push_back(std::move(rel));
      }
  // [xi^{(mn}, xi^{pq)}]_+ = 0 summed over all permutations of (m,n,p,q)
  for (int m = 1; m <= n; ++m)
    for (int p = m; p <= n; ++p)
      for (int q = p; q <= n; ++q)
        for (int r = q; r <= n; ++r) {
          std::vector<int> id{m, p, q, r};
          std::sort(id.begin(), id.end());
          std::vector<std::pair<Word, Rational>> rel;
          do {
            auto part = anti(Gen::xi(id[0], id[1]), Gen::xi(id[2], id[3]));
            rel.insert(rel.end(), part.begin(), part.end());
          } while (std::next_permutation(id.begin(), id.end()));
          rel2.push_back(std::move(rel));
        }
  return rel2;
}

inline std::vector<std::vector<std::pair<int, Rational>>> FormSpace::relation_rows(
    int degree, const DegreeTable& t) const {
  std::vector<std::vector<std::pair<int, Rational>>> rows;
  if (mode_ != Mode::General || degree < 2) return rows;

  std::vector<std::vector<std::pair<Word, Rational>>> rel2 = relation_set();

  auto to_row = [&](const std::vector<std::pair<Word, Rational>>& rel) {
    std::vector<std::pair<int, Rational>> row;
    for (auto& [w, c] : rel) row.emplace_back(t.ids.at(w), c);
    return row;
  };

  if (degree == 2) {
    for (auto& r : rel2) rows.push_back(to_row(r));
    return rows;
  }

  // degree 3: relation * generator, generator * relation, and d(relation)
  std::vector<Gen> gs = generators();
  for (auto& rel : rel2) {
    for (Gen g : gs) {
      std::vector<std::pair<Word, Rational>> left, right;
      for (auto& [w, c] : rel) {
        left.emplace_back(Word::concat(Word(g), w), c);
        right.emplace_back(Word::concat(w, Word(g)), c);
      }
      rows.push_back(to_row(left));
      rows.push_back(to_row(right));
    }
    // d of the relation: d(w1 w2) = (d w1) w2 - w1 (d w2), constant coefficients
    std::vector<std::pair<Word, Rational>> drel;
    for (auto& [w, c] : rel) {
      for (auto& [cd, wd] : d_gen(w[0]))
        drel.emplace_back(Word::concat(wd, Word(w[1])), c * cd);
      for (auto& [cd, wd] : d_gen(w[1]))
        drel.emplace_back(Word::concat(Word(w[0]), wd), -c * cd);
    }
    if (!drel.empty()) rows.push_back(to_row(drel));
  }
  return rows;
}

inline std::vector<std::pair<ScalarExpr, Word>> FormSpace::reduce_word(const Word& w) const {
  const Context& c = *ctx_;
  std::vector<std::pair<ScalarExpr, Word>> out;
  if (mode_ == Mode::General) {
    if (w.degree() < 2) {
      out.emplace_back(ScalarExpr::one(c), w);
      return out;
    }
    const DegreeTable& t = table(w.degree());
    int id = t.ids.at(w);
    auto it = t.expansion.find(id);
    if (it == t.expansion.end()) {
      out.emplace_back(ScalarExpr::one(c), w);
      return out;
    }
    for (auto& [col, coeff] : it->second)
      out.emplace_back(ScalarExpr::constant(c, coeff), t.words[static_cast<size_t>(col)]);
    return out;
  }

  // Ito mode: rewrite to words with one leading dt at most and strictly
  // increasing dx factors; [dx^m,dx^n]_+ = dt dx^k d_k b^{mn} with the
  // coefficient moved left (corrections die against dt dt).
  std::vector<std::pair<ScalarExpr, Word>> work{{ScalarExpr::one(c), w}};
  while (!work.empty()) {
    auto [coeff, word] = work.back();
    work.pop_back();
    if (coeff.is_zero()) continue;
    bool rewritten = false;
    for (int i = 0; i + 1 < word.degree() && !rewritten; ++i) {
      Gen x = word[i], y = word[i + 1];
      auto splice = [&](const std::vector<std::pair<ScalarExpr, Word>>& repl) {
        for (auto& [s, mid] : repl) {
          // scalar s must travel left through the prefix
          std::vector<std::pair<ScalarExpr, Word>> moved{{s, Word{}}};
          for (int k = i - 1; k >= 0; --k) {
            std::vector<std::pair<ScalarExpr, Word>> nxt;
            for (auto& [ms, mw] : moved)
              for (auto& [cs, cg] : commute(word[k], ms)) nxt.emplace_back(cs, Word::concat(Word(cg), mw));
            moved = std::move(nxt);
          }
          for (auto& [ms, mw] : moved) {
            Word nw = mw;
            for (int k = 0; k < mid.degree(); ++k) nw = nw.appended(mid[k]);
            for (int k = i + 2; k < word.degree(); ++k) nw = nw.appended(word[k]);
            work.emplace_back(coeff * ms, nw);
          }
        }
        rewritten = true;
      };
      if (x.kind == GenKind::Dt && y.kind == GenKind::Dt) {
        rewritten = true;  // dt dt = 0
        coeff = ScalarExpr::zero(c);
        break;
      }
      if (x.kind == GenKind::Dx && y.kind == GenKind::Dt) {
        splice({{ScalarExpr::constant(c, -1), Word(Gen::dt(), Gen::dx(x.a))}});
      } else if (x.kind == GenKind::Dx && y.kind == GenKind::Dx && x.a >= y.a) {
        std::vector<std::pair<ScalarExpr, Word>> repl;
        if (x.a > y.a) repl.emplace_back(ScalarExpr::constant(c, -1), Word(Gen::dx(y.a), Gen::dx(x.a)));
        const Rational half(1, 2);
        for (int k = 1; k <= dim(); ++k) {
          ScalarExpr db = b(x.a, y.a).partial(k);
          if (db.is_zero()) continue;
          repl.emplace_back(x.a == y.a ? half * db : db, Word(Gen::dt(), Gen::dx(k)));
        }
        splice(repl);
      }
    }
    if (!rewritten && !coeff.is_zero()) out.emplace_back(coeff, word);
  }
  return out;
}

inline std::vector<Word> FormSpace::basis(int degree) const {
  if (degree < 0 || degree > 3) throw Error("form degree out of range 0..3");
  if (degree == 0) return {Word{}};
  if (mode_ == Mode::General) {
    if (degree == 1) {
      std::vector<Word> out;
      for (Gen g : generators()) out.emplace_back(g);
      return out;
    }
    return table(degree).basis;
  }
  // Ito: at most one dt in front, strictly increasing dx tail
  std::vector<Word> out;
  const int n = dim();
  std::function<void(Word, int, int)> rec = [&](Word w, int minidx, int left) {
    if (left == 0) {
      out.push_back(w);
      return;
    }
    for (int m = minidx; m <= n; ++m) rec(w.appended(Gen::dx(m)), m + 1, left - 1);
  };
  rec(Word{}, 1, degree);
  if (degree >= 1) rec(Word(Gen::dt()), 1, degree - 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ncdc
