#include "polyguess/factorizer.hpp"

namespace polyguess {

namespace {

void enumerate(const Int& residual, std::size_t slot,
               const std::vector<std::shared_ptr<const TriangleTable>>& tables,
               int per_class_cap, std::vector<FactorSlot>& chosen,
               std::vector<FactorDecomposition>& out) {
  if (slot == tables.size()) {
    out.push_back({chosen, residual});
    return;
  }
  Int abs_residual = abs(residual);
  // Walk the distinct |entry| values of this slot's table (ascending) and keep
  // the divisor classes.  This touches O(table size) candidates instead of
  // enumerating divisors of the residual, which may be astronomically large.
  for (const auto& [abs_value, positions] : tables[slot]->value_index()) {
    if (!divides(abs_value, abs_residual)) continue;
    int taken = 0;
    for (const auto& pos : positions) {
      if (taken++ >= per_class_cap) break;
      Int entry = pos.sign < 0 ? Int(-abs_value) : abs_value;
      chosen.push_back({pos.n, pos.k, entry});
      enumerate(div_exact(residual, entry), slot + 1, tables, per_class_cap, chosen, out);
      chosen.pop_back();
    }
  }
}

}  // namespace

std::vector<FactorDecomposition> factor_over_triangles(
    const Int& value, const std::vector<std::shared_ptr<const TriangleTable>>& tables,
    int per_class_cap) {
  if (value == 0) throw InputError("factor_over_triangles is defined for nonzero values only");
  if (tables.empty()) throw InputError("factor_over_triangles needs at least one table");
  std::vector<FactorDecomposition> out;
  std::vector<FactorSlot> chosen;
  chosen.reserve(tables.size());
  enumerate(value, 0, tables, per_class_cap, chosen, out);
  return out;
}

CoefficientPositions positions_for_coefficient(const Int& value, const TriangleTable& table,
                                               int per_class_cap) {
  CoefficientPositions out;
  if (value == 0) {
    out.wildcard = true;
    return out;
  }
  Int abs_value = abs(value);
  for (const auto& [entry_abs, positions] : table.value_index()) {
    if (!divides(entry_abs, abs_value)) continue;
    int taken = 0;
    for (const auto& pos : positions) {
      if (taken++ >= per_class_cap) break;
      Int entry = pos.sign < 0 ? Int(-entry_abs) : entry_abs;
      out.items.push_back({pos.n, pos.k, pos.sign, div_exact(value, entry)});
    }
  }
  return out;
}

}  // namespace polyguess
