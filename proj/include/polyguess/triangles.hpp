#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyguess/rational.hpp"

namespace polyguess {

enum class SignMode { AsIs, Unsigned };

// A few builtins are not generated by the two-term recurrence directly but as
// a transform of Pascal's triangle.
enum class DerivedKind { None, SquareOfBinom, SymmetricBinom };

// A triangular sequence defined by the recurrence
//   T(n,k) = (a*n + b*k + c) * T(n-1,k) + (a2*n + b2*k + c2) * T(n-1,k-1)
// seeded by T(0,0) = 1, with T(n,k) = 0 outside 0 <= k <= n.
struct TriangleSpec {
  std::string name;
  std::array<long, 6> params{};  // a, b, c, a2, b2, c2
  SignMode sign_mode = SignMode::AsIs;
  DerivedKind derived = DerivedKind::None;

  bool operator==(const TriangleSpec& rhs) const {
    return name == rhs.name && params == rhs.params && sign_mode == rhs.sign_mode &&
           derived == rhs.derived;
  }
  // Stable identity string, used as a cache key and in serialized output.
  std::string key() const;
};

enum class BuiltinTriangle { S1, S1Signed, S2, E1, E2, Binom, Binom2, BinomSym };

TriangleSpec builtin_spec(BuiltinTriangle which);
std::optional<BuiltinTriangle> builtin_from_name(const std::string& name);
const std::vector<std::string>& builtin_names();

// Parses either a builtin name or a custom spec written as
// "name:a,b,c,a2,b2,c2[:unsigned]".
TriangleSpec parse_triangle_spec(const std::string& text);

struct TrianglePosition {
  int n = 0;
  int k = 0;
  int sign = 1;  // sign of the stored entry at (n, k)

  bool operator==(const TrianglePosition& rhs) const {
    return n == rhs.n && k == rhs.k && sign == rhs.sign;
  }
  bool operator<(const TrianglePosition& rhs) const {
    if (n != rhs.n) return n < rhs.n;
    if (k != rhs.k) return k < rhs.k;
    return sign < rhs.sign;
  }
};

// Materialized rows 0..num_rows-1 of a triangle plus an index from |value| to
// every position holding that value (used heavily by the factor search).
class TriangleTable {
 public:
  TriangleTable(TriangleSpec spec, int num_rows);

  const TriangleSpec& spec() const { return spec_; }
  int num_rows() const { return num_rows_; }

  // Entry lookup.  Returns 0 for k < 0 or k > n when 0 <= n < num_rows; n
  // outside that band raises RangeError so callers notice the row cap.
  const Int& entry(int n, int k) const;

  const std::vector<Int>& row(int n) const;

  // Positions holding |value| (nonzero), or nullptr when the value does not
  // occur.  Positions are sorted by (n, k).
  const std::vector<TrianglePosition>* positions_for_abs(const Int& abs_value) const;

  // The distinct |value| -> positions index, ascending by value.
  const std::map<Int, std::vector<TrianglePosition>>& value_index() const {
    return index_;
  }

 private:
  TriangleSpec spec_;
  int num_rows_;
  std::vector<std::vector<Int>> rows_;
  std::map<Int, std::vector<TrianglePosition>> index_;
};

// Builds the table for a spec.  Rows of recurrence-defined triangles are
// produced by the recurrence; derived builtins are computed from binomials.
std::shared_ptr<const TriangleTable> build_triangle(const TriangleSpec& spec, int num_rows);

// All positions of a nonzero value (matched by absolute value; the sign of
// each stored entry is reported per position).  Zero is rejected: it matches
// the entire region outside the triangle.
std::vector<TrianglePosition> value_positions(const TriangleTable& table, const Int& value);

// Cache of built tables keyed by (spec, num_rows).  `at_least` reuses any
// table with enough rows and grows (rebuilds) otherwise; used when formulas
// are evaluated outside the range they were searched in.
class TableCache {
 public:
  std::shared_ptr<const TriangleTable> get(const TriangleSpec& spec, int num_rows);
  std::shared_ptr<const TriangleTable> at_least(const TriangleSpec& spec, int min_rows);

 private:
  std::map<std::string, std::shared_ptr<const TriangleTable>> exact_;
  std::map<std::string, std::shared_ptr<const TriangleTable>> grown_;
};

}  // namespace polyguess
