#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncdc/chart.hpp"
#include "ncdc/error.hpp"

namespace ncdc {

enum class Variance : uint8_t { Upper, Lower };

/// A (anti)symmetry of a subset of index slots, e.g. b^{mn} symmetric in {0,1},
/// omega_{mn} antisymmetric in {0,1}, Gamma^m_{nr} symmetric in {1,2}.
struct SlotSymmetry {
  std::vector<int> slots;   // slot positions, all of equal variance
  bool antisymmetric = false;
};

/// Declaration of an opaque indexed function symbol on the chart.
struct FunctionSymbol {
  std::string name;
  std::vector<Variance> slots;          // arity and variance per slot
  std::vector<SlotSymmetry> symmetries;
  bool constant = false;                // all partial derivatives vanish
  bool time_independent = false;        // d/dt vanishes
  bool invertible = false;              // negative powers permitted (scalar symbols only)
  std::optional<int> inverse_of;        // id of the lower-index partner: sum_r this^{mr} partner_{nr} = delta^m_n

  int arity() const { return static_cast<int>(slots.size()); }
};

/// Immutable (after setup) registry of declared symbols. Id 0 is the built-in
/// Kronecker delta, which normalization evaluates away on concrete indices.
class SymbolTable {
 public:
  SymbolTable() {
    FunctionSymbol delta;
    delta.name = "delta";
    delta.slots = {Variance::Upper, Variance::Lower};
    delta.constant = true;
    syms_.push_back(delta);
    by_name_["delta"] = 0;
  }

  int declare(FunctionSymbol s) {
    if (by_name_.count(s.name)) throw Error("symbol '" + s.name + "' already declared");
    for (const auto& g : s.symmetries) {
      for (int p : g.slots)
        if (p < 0 || p >= s.arity()) throw Error("symmetry slot out of range for '" + s.name + "'");
      for (size_t i = 1; i < g.slots.size(); ++i)
        if (s.slots[g.slots[i]] != s.slots[g.slots[0]])
          throw Error("symmetry group mixes variances in '" + s.name + "'");
    }
    if (s.invertible && s.arity() != 0) throw Error("only scalar symbols may be invertible: '" + s.name + "'");
    int id = static_cast<int>(syms_.size());
    syms_.push_back(std::move(s));
    by_name_[syms_.back().name] = id;
    return id;
  }

  /// Declare `upper` and `lower` as mutual inverses: upper^{mr} lower_{nr} = delta^m_n.
  void link_inverse(int upper, int lower) {
    at(upper);
    at(lower);
    if (syms_[upper].arity() != 2 || syms_[lower].arity() != 2)
      throw Error("inverse partners must have two index slots");
    syms_[upper].inverse_of = lower;
    syms_[lower].inverse_of = upper;
  }

  const FunctionSymbol& at(int id) const {
    if (id < 0 || id >= static_cast<int>(syms_.size())) throw Error("unknown symbol id");
    return syms_[static_cast<size_t>(id)];
  }

  std::optional<int> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  int require(const std::string& name) const {
    auto id = find(name);
    if (!id) throw Error("undeclared symbol '" + name + "'");
    return *id;
  }

  int size() const { return static_cast<int>(syms_.size()); }
  static constexpr int kDelta = 0;

 private:
  std::vector<FunctionSymbol> syms_;
  std::unordered_map<std::string, int> by_name_;
};

inline FunctionSymbol scalar_symbol(std::string name) {
  FunctionSymbol s;
  s.name = std::move(name);
  return s;
}

inline FunctionSymbol indexed_symbol(std::string name, std::vector<Variance> slots,
                                     std::vector<SlotSymmetry> sym = {}) {
  FunctionSymbol s;
  s.name = std::move(name);
  s.slots = std::move(slots);
  s.symmetries = std::move(sym);
  return s;
}

}  // namespace ncdc
