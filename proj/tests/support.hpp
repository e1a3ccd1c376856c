#pragma once

#include <memory>
#include <random>
#include <vector>

#include "ncdc/scalar.hpp"

namespace ncdc::testing {

/// Builds the symbol set used throughout the checks: H, F, H0, A, beta,
/// b^{mn} (symmetric), omega_{mn} / omegainv^{mn} (antisymmetric inverse
/// pair), Gamma^m_{nr} (symmetric lower pair), plus generic f, g, h.
inline std::shared_ptr<Context> standard_context(int dim) {
  SymbolTable st;
  st.declare(scalar_symbol("H"));
  st.declare(scalar_symbol("F"));
  st.declare(scalar_symbol("H0"));
  st.declare(scalar_symbol("A"));
  {
    FunctionSymbol beta = scalar_symbol("beta");
    beta.constant = true;
    st.declare(beta);
  }
  st.declare(indexed_symbol("b", {Variance::Upper, Variance::Upper}, {{{0, 1}, false}}));
  int lo = st.declare(indexed_symbol("omega", {Variance::Lower, Variance::Lower}, {{{0, 1}, true}}));
  int up = st.declare(indexed_symbol("omegainv", {Variance::Upper, Variance::Upper}, {{{0, 1}, true}}));
  st.link_inverse(up, lo);
  st.declare(indexed_symbol("Gamma", {Variance::Upper, Variance::Lower, Variance::Lower}, {{{1, 2}, false}}));
  st.declare(scalar_symbol("f"));
  st.declare(scalar_symbol("g"));
  st.declare(scalar_symbol("h"));
  return std::make_shared<Context>(ChartSpec(dim), std::move(st));
}

/// Random polynomial in coordinates and derivative-tagged scalar symbols.
inline ScalarExpr random_scalar(const Context& c, std::mt19937_64& rng, int max_terms = 4,
                                bool with_symbols = true) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<int> exp(0, 2);
  std::uniform_int_distribution<int> idx(0, c.dim());
  std::uniform_int_distribution<int> pick(0, 2);
  const char* names[3] = {"f", "g", "h"};

  ScalarExpr out = ScalarExpr::zero(c);
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    int cv = coeff(rng);
    if (cv == 0) cv = 1;
    ScalarExpr term = ScalarExpr::constant(c, Rational(cv, den(rng)));
    for (Idx j = 0; j <= c.dim(); ++j) {
      int e = exp(rng);
      for (int k = 0; k < e && k < 2; ++k) term = term * ScalarExpr::coord(c, j);
    }
    if (with_symbols && pick(rng) > 0) {
      ScalarExpr s = ScalarExpr::symbol(c, names[pick(rng)]);
      int nd = pick(rng);
      for (int k = 0; k < nd; ++k) s = s.partial(idx(rng));
      term = term * s;
    }
    out += term;
  }
  return out;
}

/// Random polynomial purely in coordinates (usable as an evaluation target).
inline ScalarExpr random_poly(const Context& c, std::mt19937_64& rng, int max_terms = 4) {
  return random_scalar(c, rng, max_terms, /*with_symbols=*/false);
}

inline Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  return Rational(num(rng), den(rng));
}

}  // namespace ncdc::testing
