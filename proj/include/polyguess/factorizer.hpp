#pragma once

#include <vector>

#include "polyguess/triangles.hpp"

namespace polyguess {

// One factor drawn from one triangle slot: the signed entry at (n, k).
struct FactorSlot {
  int n = 0;
  int k = 0;
  Int entry;  // signed stored value, never zero

  bool operator==(const FactorSlot& rhs) const {
    return n == rhs.n && k == rhs.k && entry == rhs.entry;
  }
};

// value = product over slots of entry * remainder, remainder a nonzero integer.
struct FactorDecomposition {
  std::vector<FactorSlot> factors;  // one per triangle slot, in slot order
  Int remainder;

  bool operator==(const FactorDecomposition& rhs) const {
    return factors == rhs.factors && remainder == rhs.remainder;
  }
};

// All ways to write a nonzero value as (one entry per slot) * remainder.
// Entries are matched through each table's value index: a divisor class is
// the position list of one |entry| value; each class contributes at most
// per_class_cap positions, in (n, k) order, so output is a deterministic
// prefix of the full enumeration when a class is truncated.  Decompositions
// are emitted in slot-major (value, n, k) order.
std::vector<FactorDecomposition> factor_over_triangles(
    const Int& value, const std::vector<std::shared_ptr<const TriangleTable>>& tables,
    int per_class_cap = 64);

// Single-slot fast path.  A zero coefficient matches any position (wildcard).
struct CoefficientPositions {
  bool wildcard = false;
  struct Item {
    int n = 0;
    int k = 0;
    int sign = 1;
    Int remainder;
  };
  std::vector<Item> items;  // empty when wildcard or when nothing divides
};

CoefficientPositions positions_for_coefficient(const Int& value, const TriangleTable& table,
                                               int per_class_cap = 64);

}  // namespace polyguess
