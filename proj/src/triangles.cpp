#include "polyguess/triangles.hpp"

#include <sstream>

namespace polyguess {

std::string TriangleSpec::key() const {
  std::ostringstream os;
  os << name;
  for (long p : params) os << ',' << p;
  os << (sign_mode == SignMode::Unsigned ? ":u" : ":s");
  os << ':' << static_cast<int>(derived);
  return os.str();
}

TriangleSpec builtin_spec(BuiltinTriangle which) {
  switch (which) {
    case BuiltinTriangle::S1:
      // Unsigned Stirling numbers of the first kind:
      //   T(n,k) = (n-1)*T(n-1,k) + T(n-1,k-1)
      return {"S1", {1, 0, -1, 0, 0, 1}, SignMode::AsIs, DerivedKind::None};
    case BuiltinTriangle::S1Signed:
      //   s(n,k) = -(n-1)*s(n-1,k) + s(n-1,k-1)
      return {"S1signed", {-1, 0, 1, 0, 0, 1}, SignMode::AsIs, DerivedKind::None};
    case BuiltinTriangle::S2:
      // Stirling numbers of the second kind:
      //   T(n,k) = k*T(n-1,k) + T(n-1,k-1)
      return {"S2", {0, 1, 0, 0, 0, 1}, SignMode::AsIs, DerivedKind::None};
    case BuiltinTriangle::E1:
      // First-order Eulerian numbers:
      //   T(n,k) = (k+1)*T(n-1,k) + (n-k)*T(n-1,k-1)
      return {"E1", {0, 1, 1, 1, -1, 0}, SignMode::AsIs, DerivedKind::None};
    case BuiltinTriangle::E2:
      // Second-order Eulerian numbers:
      //   T(n,k) = (k+1)*T(n-1,k) + (2n-1-k)*T(n-1,k-1)
      return {"E2", {0, 1, 1, 2, -1, -1}, SignMode::AsIs, DerivedKind::None};
    case BuiltinTriangle::Binom:
      //   T(n,k) = T(n-1,k) + T(n-1,k-1)
      return {"Binom", {0, 0, 1, 0, 0, 1}, SignMode::AsIs, DerivedKind::None};
    case BuiltinTriangle::Binom2:
      return {"Binom2", {0, 0, 1, 0, 0, 1}, SignMode::AsIs, DerivedKind::SquareOfBinom};
    case BuiltinTriangle::BinomSym:
      return {"BinomSym", {0, 0, 1, 0, 0, 1}, SignMode::AsIs, DerivedKind::SymmetricBinom};
  }
  throw InputError("unknown builtin triangle");
}

std::optional<BuiltinTriangle> builtin_from_name(const std::string& name) {
  static const std::map<std::string, BuiltinTriangle> kByName = {
      {"S1", BuiltinTriangle::S1},       {"S1signed", BuiltinTriangle::S1Signed},
      {"S2", BuiltinTriangle::S2},       {"E1", BuiltinTriangle::E1},
      {"E2", BuiltinTriangle::E2},       {"Binom", BuiltinTriangle::Binom},
      {"Binom2", BuiltinTriangle::Binom2}, {"BinomSym", BuiltinTriangle::BinomSym}};
  auto it = kByName.find(name);
  if (it == kByName.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> kNames = {"S1",  "S1signed", "S2",     "E1",
                                                  "E2",  "Binom",    "Binom2", "BinomSym"};
  return kNames;
}

TriangleSpec parse_triangle_spec(const std::string& text) {
  if (auto b = builtin_from_name(text)) return builtin_spec(*b);
  auto first = text.find(':');
  if (first == std::string::npos) {
    throw InputError("unknown triangle '" + text + "' (builtins: S1, S1signed, S2, E1, E2, Binom, Binom2, BinomSym; custom: name:a,b,c,a2,b2,c2[:unsigned])");
  }
  TriangleSpec spec;
  spec.name = text.substr(0, first);
  if (spec.name.empty()) throw InputError("custom triangle needs a name: '" + text + "'");
  std::string rest = text.substr(first + 1);
  auto second = rest.find(':');
  std::string params = second == std::string::npos ? rest : rest.substr(0, second);
  if (second != std::string::npos) {
    std::string mode = rest.substr(second + 1);
    if (mode == "unsigned") {
      spec.sign_mode = SignMode::Unsigned;
    } else if (mode != "as-is") {
      throw InputError("bad sign mode '" + mode + "' (expected 'as-is' or 'unsigned')");
    }
  }
  std::istringstream ps(params);
  std::string piece;
  std::size_t idx = 0;
  while (std::getline(ps, piece, ',')) {
    if (idx >= 6) throw InputError("custom triangle takes exactly 6 recurrence parameters");
    try {
      spec.params[idx++] = std::stol(piece);
    } catch (const std::exception&) {
      throw InputError("bad recurrence parameter '" + piece + "'");
    }
  }
  if (idx != 6) throw InputError("custom triangle takes exactly 6 recurrence parameters");
  return spec;
}

namespace {

std::vector<std::vector<Int>> build_rows(const TriangleSpec& spec, int num_rows) {
  std::vector<std::vector<Int>> rows(static_cast<std::size_t>(num_rows));
  if (spec.derived == DerivedKind::SquareOfBinom) {
    for (int n = 0; n < num_rows; ++n) {
      rows[n].reserve(n + 1);
      for (int k = 0; k <= n; ++k) {
        Int b = binomial(n, k);
        rows[n].push_back(b * b);
      }
    }
    return rows;
  }
  if (spec.derived == DerivedKind::SymmetricBinom) {
    for (int n = 0; n < num_rows; ++n) {
      rows[n].reserve(n + 1);
      for (int k = 0; k <= n; ++k) rows[n].push_back(binomial(n + k, k));
    }
    return rows;
  }

  const auto& p = spec.params;
  // Signed values are carried through the recurrence even in Unsigned mode;
  // only the stored entries take absolute values.
  std::vector<Int> prev;
  for (int n = 0; n < num_rows; ++n) {
    std::vector<Int> cur(static_cast<std::size_t>(n) + 1);
    if (n == 0) {
      cur[0] = 1;  // Iverson seed [n = k = 0]
    } else {
      for (int k = 0; k <= n; ++k) {
        Int left = (k <= n - 1) ? prev[k] : Int(0);
        Int diag = (k >= 1 && k - 1 <= n - 1) ? prev[k - 1] : Int(0);
        Int c1 = Int(p[0]) * n + Int(p[1]) * k + Int(p[2]);
        Int c2 = Int(p[3]) * n + Int(p[4]) * k + Int(p[5]);
        cur[k] = c1 * left + c2 * diag;
      }
    }
    prev = cur;
    rows[n] = std::move(cur);
  }
  if (spec.sign_mode == SignMode::Unsigned) {
    for (auto& row : rows) {
      for (auto& v : row) v = abs(v);
    }
  }
  return rows;
}

}  // namespace

TriangleTable::TriangleTable(TriangleSpec spec, int num_rows)
    : spec_(std::move(spec)), num_rows_(num_rows) {
  if (num_rows < 1) throw InputError("triangle needs at least one row");
  rows_ = build_rows(spec_, num_rows_);
  for (int n = 0; n < num_rows_; ++n) {
    for (int k = 0; k <= n; ++k) {
      const Int& v = rows_[n][k];
      if (v == 0) continue;
      index_[abs(v)].push_back({n, k, sign_of(v)});
    }
  }
  // Insertion order is already (n, k) ascending per value.
}

const Int& TriangleTable::entry(int n, int k) const {
  static const Int kZero(0);
  if (n < 0 || n >= num_rows_) {
    throw RangeError("triangle row " + std::to_string(n) + " outside built range [0, " +
                     std::to_string(num_rows_) + ") for " + spec_.name);
  }
  if (k < 0 || k > n) return kZero;
  return rows_[n][k];
}

const std::vector<Int>& TriangleTable::row(int n) const {
  if (n < 0 || n >= num_rows_) {
    throw RangeError("triangle row " + std::to_string(n) + " outside built range [0, " +
                     std::to_string(num_rows_) + ") for " + spec_.name);
  }
  return rows_[n];
}

const std::vector<TrianglePosition>* TriangleTable::positions_for_abs(const Int& abs_value) const {
  auto it = index_.find(abs_value);
  return it == index_.end() ? nullptr : &it->second;
}

std::shared_ptr<const TriangleTable> build_triangle(const TriangleSpec& spec, int num_rows) {
  return std::make_shared<const TriangleTable>(spec, num_rows);
}

std::vector<TrianglePosition> value_positions(const TriangleTable& table, const Int& value) {
  if (value == 0) {
    throw InputError("value_positions is defined for nonzero values only");
  }
  const auto* hits = table.positions_for_abs(abs(value));
  return hits ? *hits : std::vector<TrianglePosition>{};
}

std::shared_ptr<const TriangleTable> TableCache::get(const TriangleSpec& spec, int num_rows) {
  std::string key = spec.key() + "@" + std::to_string(num_rows);
  auto it = exact_.find(key);
  if (it != exact_.end()) return it->second;
  auto table = build_triangle(spec, num_rows);
  exact_[key] = table;
  return table;
}

std::shared_ptr<const TriangleTable> TableCache::at_least(const TriangleSpec& spec, int min_rows) {
  std::string key = spec.key();
  auto it = grown_.find(key);
  if (it != grown_.end() && it->second->num_rows() >= min_rows) return it->second;
  // Grow in steps to keep rebuilds rare.
  int rows = it != grown_.end() ? it->second->num_rows() : 16;
  while (rows < min_rows) rows *= 2;
  auto table = build_triangle(spec, rows);
  grown_[key] = table;
  return table;
}

}  // namespace polyguess
