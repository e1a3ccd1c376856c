#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ncdc/chart.hpp"
#include "ncdc/error.hpp"

namespace ncdc {

enum class GenKind : uint8_t { Dt = 0, Dx = 1, Xi = 2 };

/// Degree-1 generator: dt, dx^m, or xi^{mn} (= dx^m . dx^n, stored with m<=n).
struct Gen {
  GenKind kind = GenKind::Dt;
  uint8_t a = 0, b = 0;

  static Gen dt() { return Gen{}; }
  static Gen dx(int mu) { return Gen{GenKind::Dx, static_cast<uint8_t>(mu), 0}; }
  static Gen xi(int mu, int nu) {
    if (mu > nu) std::swap(mu, nu);
    return Gen{GenKind::Xi, static_cast<uint8_t>(mu), static_cast<uint8_t>(nu)};
  }

  int code() const { return (static_cast<int>(kind) << 16) | (a << 8) | b; }
  friend bool operator==(const Gen& x, const Gen& y) { return x.code() == y.code(); }
  friend bool operator<(const Gen& x, const Gen& y) { return x.code() < y.code(); }
};

/// Ordered product of up to three generators (degree <= 3 suffices here).
struct Word {
  std::array<Gen, 3> g{};
  uint8_t len = 0;

  Word() = default;
  explicit Word(Gen a) : len(1) { g[0] = a; }
  Word(Gen a, Gen b) : len(2) {
    g[0] = a;
    g[1] = b;
  }
  Word(Gen a, Gen b, Gen c) : len(3) {
    g[0] = a;
    g[1] = b;
    g[2] = c;
  }

  int degree() const { return len; }
  const Gen& operator[](int i) const { return g[static_cast<size_t>(i)]; }

  Word appended(Gen x) const {
    if (len >= 3) throw Error("form degree overflow (>3)");
    Word w = *this;
    w.g[w.len++] = x;
    return w;
  }
  Word prefix(int n) const {
    Word w;
    for (int i = 0; i < n; ++i) w = w.appended(g[static_cast<size_t>(i)]);
    return w;
  }
  static Word concat(const Word& x, const Word& y) {
    Word w = x;
    for (int i = 0; i < y.len; ++i) w = w.appended(y[i]);
    return w;
  }

  friend bool operator==(const Word& x, const Word& y) {
    if (x.len != y.len) return false;
    for (int i = 0; i < x.len; ++i)
      if (!(x[i] == y[i])) return false;
    return true;
  }
  friend bool operator<(const Word& x, const Word& y) {
    if (x.len != y.len) return x.len < y.len;
    for (int i = 0; i < x.len; ++i) {
      if (x[i].code() != y[i].code()) return x[i].code() < y[i].code();
    }
    return false;
  }
};

}  // namespace ncdc
