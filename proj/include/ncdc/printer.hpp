#pragma once

#include <map>
#include <sstream>
#include <string>

#include "ncdc/form.hpp"
#include "ncdc/tensor.hpp"

namespace ncdc {

namespace detail {

inline std::string rational_text(const Rational& r) { return r.str(); }

inline void print_factor(std::ostringstream& os, const Context& c, const SymFactor& f) {
  const FunctionSymbol& s = c.symbols().at(f.sym);
  std::ostringstream base;
  if (!f.derivs.empty()) {
    base << "D[";
    for (size_t i = 0; i < f.derivs.size(); ++i) {
      if (i) base << ",";
      if (f.derivs[i] == kTime)
        base << "t";
      else
        base << f.derivs[i];
    }
    base << "](";
  }
  base << s.name;
  if (!f.indices.empty()) {
    base << "[";
    for (size_t i = 0; i < f.indices.size(); ++i) {
      if (i) base << ",";
      base << f.indices[i];
    }
    base << "]";
  }
  if (!f.derivs.empty()) base << ")";
  os << base.str();
  if (f.power != 1) os << "^" << f.power;
}

inline void print_term(std::ostringstream& os, const Context& c, const Term& t, bool leading) {
  Rational coeff = t.coeff;
  bool neg = coeff < 0;
  if (neg) coeff = -coeff;
  if (leading) {
    if (neg) os << "-";
  } else {
    os << (neg ? " - " : " + ");
  }
  bool any = false;
  std::ostringstream body;
  for (size_t i = 0; i < t.mono.size(); ++i) {
    for (uint32_t e = 0; e < t.mono[i]; ++e) {
      if (any) body << "*";
      if (i == 0)
        body << c.chart().time;
      else
        body << c.chart().coord << "[" << i << "]";
      any = true;
    }
  }
  for (const auto& f : t.facs) {
    if (any) body << "*";
    print_factor(body, c, f);
    any = true;
  }
  if (!any) {
    os << rational_text(coeff);
    return;
  }
  if (coeff != 1) os << rational_text(coeff) << "*";
  os << body.str();
}

}  // namespace detail

/// Canonical text of a normalized scalar: reparses to an equal expression.
inline std::string print_canonical(const ScalarExpr& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  const Context& c = *e.context();
  bool leading = true;
  for (const Term& t : e.terms()) {
    detail::print_term(os, c, t, leading);
    leading = false;
  }
  return os.str();
}

inline std::string print_canonical_gen(const Gen& g) {
  std::ostringstream os;
  switch (g.kind) {
    case GenKind::Dt:
      os << "dt";
      break;
    case GenKind::Dx:
      os << "dx[" << int(g.a) << "]";
      break;
    case GenKind::Xi:
      os << "xi[" << int(g.a) << "," << int(g.b) << "]";
      break;
  }
  return os.str();
}

/// Canonical text of a normalized form (coefficients on the left of words).
inline std::string print_canonical(const Form& a) {
  if (a.is_zero()) return "0";
  const Context& c = a.space().ctx();
  std::ostringstream os;
  bool leading = true;
  for (const auto& [coeff, w] : a.terms()) {
    std::string cs = print_canonical(coeff);
    bool neg = false;
    if (cs.size() > 1 && cs[0] == '-' && cs.find(" + ") == std::string::npos && cs.find(" - ") == std::string::npos) {
      neg = true;
      cs = cs.substr(1);
    }
    if (leading) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    leading = false;
    bool needs_parens = cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
    std::ostringstream ws;
    for (int i = 0; i < w.degree(); ++i) {
      if (i) ws << "*";
      ws << print_canonical_gen(w[i]);
    }
    if (w.degree() == 0) {
      os << (needs_parens ? "(" + cs + ")" : cs);
      continue;
    }
    if (cs == "1") {
      os << ws.str();
    } else if (needs_parens) {
      os << "(" << cs << ")*" << ws.str();
    } else {
      os << cs << "*" << ws.str();
    }
  }
  return os.str();
}

// --------------------------------------------------------------------------
// LaTeX rendering

namespace detail {

inline std::string latex_name(const std::string& name) {
  static const std::map<std::string, std::string> greek = {
      {"alpha", "\\alpha"}, {"beta", "\\beta"},   {"gamma", "\\gamma"},   {"Gamma", "\\Gamma"},
      {"delta", "\\delta"}, {"omega", "\\omega"}, {"omegainv", "\\omega"}, {"xi", "\\xi"},
      {"rho", "\\rho"},     {"sigma", "\\sigma"}, {"theta", "\\theta"},   {"Theta", "\\Theta"},
      {"H0", "H_0"},        {"psi", "\\psi"},     {"phi", "\\phi"},       {"lambda", "\\lambda"}};
  auto it = greek.find(name);
  return it == greek.end() ? name : it->second;
}

inline std::string latex_indices(const Context& c, const SymFactor& f) {
  const FunctionSymbol& s = c.symbols().at(f.sym);
  if (f.indices.empty()) return "";
  std::string up, lo;
  for (size_t i = 0; i < f.indices.size(); ++i) {
    std::string d = std::to_string(f.indices[i]);
    if (s.slots[i] == Variance::Upper)
      up += d;
    else
      lo += d;
  }
  std::string out;
  if (!up.empty()) out += "^{" + up + "}";
  if (!lo.empty()) out += "_{" + lo + "}";
  return out;
}

}  // namespace detail

inline std::string print_latex(const ScalarExpr& e) {
  if (e.is_zero()) return "0";
  const Context& c = *e.context();
  std::ostringstream os;
  bool leading = true;
  for (const Term& t : e.terms()) {
    Rational coeff = t.coeff;
    bool neg = coeff < 0;
    if (neg) coeff = -coeff;
    if (!leading)
      os << (neg ? " - " : " + ");
    else if (neg)
      os << "-";
    leading = false;
    std::ostringstream body;
    bool any = false;
    for (size_t i = 0; i < t.mono.size(); ++i) {
      if (!t.mono[i]) continue;
      if (any) body << " ";
      if (i == 0)
        body << "t";
      else
        body << "x^{" << i << "}";
      if (t.mono[i] > 1) body << "{}^{" << t.mono[i] << "}";
      any = true;
    }
    for (const auto& f : t.facs) {
      if (any) body << " \\, ";
      for (Idx d : f.derivs) body << "\\partial_{" << (d == kTime ? std::string("t") : std::to_string(d)) << "} ";
      body << detail::latex_name(c.symbols().at(f.sym).name) << detail::latex_indices(c, f);
      if (f.power != 1) body << "^{" << f.power << "}";
      any = true;
    }
    if (!any) {
      os << detail::rational_text(coeff);
      continue;
    }
    if (coeff != 1) {
      if (boost::multiprecision::denominator(coeff) == 1)
        os << detail::rational_text(coeff) << " ";
      else
        os << "\\tfrac{" << boost::multiprecision::numerator(coeff).str() << "}{"
           << boost::multiprecision::denominator(coeff).str() << "} ";
    }
    os << body.str();
  }
  return os.str();
}

inline std::string print_latex_gen(const Gen& g) {
  switch (g.kind) {
    case GenKind::Dt:
      return "dt";
    case GenKind::Dx:
      return "dx^{" + std::to_string(int(g.a)) + "}";
    case GenKind::Xi:
      return "\\xi^{" + std::to_string(int(g.a)) + std::to_string(int(g.b)) + "}";
  }
  return "";
}

inline std::string print_latex(const Form& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool leading = true;
  for (const auto& [coeff, w] : a.terms()) {
    std::string cs = print_latex(coeff);
    bool neg = false;
    if (!cs.empty() && cs[0] == '-' && cs.find(' ') == std::string::npos) {
      neg = true;
      cs = cs.substr(1);
    }
    if (!leading)
      os << (neg ? " - " : " + ");
    else if (neg)
      os << "-";
    leading = false;
    bool parens = cs.find(" + ") != std::string::npos || cs.find(" - ") != std::string::npos;
    if (w.degree() == 0) {
      os << (parens ? "\\left(" + cs + "\\right)" : cs);
      continue;
    }
    if (cs != "1") os << (parens ? "\\left(" + cs + "\\right)" : cs) << " \\, ";
    for (int i = 0; i < w.degree(); ++i) {
      if (i) os << " ";
      os << print_latex_gen(w[i]);
    }
  }
  return os.str();
}

}  // namespace ncdc
