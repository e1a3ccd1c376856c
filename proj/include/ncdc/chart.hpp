#pragma once

#include <string>

#include "ncdc/error.hpp"

namespace ncdc {

/// Coordinate index. 0 denotes t, 1..N the spatial coordinates x^1..x^N.
using Idx = int;
constexpr Idx kTime = 0;

/// Coordinate chart on M x R: N spatial coordinates plus the time coordinate.
struct ChartSpec {
  int dim = 1;                 // N >= 1
  std::string coord = "x";     // stem used by the text grammar: x[1], x[2], ...
  std::string time = "t";

  ChartSpec() = default;
  explicit ChartSpec(int n, std::string coord_name = "x") : dim(n), coord(std::move(coord_name)) {
    if (dim < 1) throw Error("chart dimension must be >= 1");
  }

  bool valid_spatial(Idx i) const { return i >= 1 && i <= dim; }
  bool valid_index(Idx i) const { return i == kTime || valid_spatial(i); }

  void check_spatial(Idx i) const {
    if (!valid_spatial(i)) throw Error("spatial index " + std::to_string(i) + " out of range 1.." + std::to_string(dim));
  }
  void check_index(Idx i) const {
    if (!valid_index(i)) throw Error("index " + std::to_string(i) + " out of range (t or 1.." + std::to_string(dim) + ")");
  }
};

}  // namespace ncdc
