#include "polyguess/poly.hpp"

#include <cctype>

namespace polyguess {

Poly::Poly(std::string var, const Rational& constant) : var_(std::move(var)) {
  set_coefficient(0, constant);
}

Poly Poly::from_coefficients(std::string var, const std::vector<Rational>& coeffs) {
  Poly p(std::move(var));
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    p.set_coefficient(static_cast<long>(e), coeffs[e]);
  }
  return p;
}

Rational Poly::coefficient(long exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void Poly::set_coefficient(long exponent, const Rational& value) {
  if (exponent < 0) throw DomainError("negative exponent in polynomial");
  if (value == 0) {
    coeffs_.erase(exponent);
  } else {
    coeffs_[exponent] = value;
  }
}

std::vector<Rational> Poly::dense_coefficients() const {
  std::vector<Rational> out;
  if (coeffs_.empty()) return out;
  out.assign(static_cast<std::size_t>(degree()) + 1, Rational(0));
  for (const auto& [e, c] : coeffs_) out[static_cast<std::size_t>(e)] = c;
  return out;
}

bool Poly::integer_coefficients() const {
  for (const auto& [e, c] : coeffs_) {
    (void)e;
    if (!is_integer(c)) return false;
  }
  return true;
}

void Poly::check_same_var(const Poly& rhs) const {
  if (var_ != rhs.var_ && !is_zero() && !rhs.is_zero()) {
    throw DomainError("polynomial variable mismatch: '" + var_ + "' vs '" + rhs.var_ + "'");
  }
}

Poly Poly::operator+(const Poly& rhs) const {
  check_same_var(rhs);
  Poly out(var_.empty() ? rhs.var_ : var_);
  out.coeffs_ = coeffs_;
  for (const auto& [e, c] : rhs.coeffs_) {
    Rational sum = out.coefficient(e) + c;
    out.set_coefficient(e, sum);
  }
  return out;
}

Poly Poly::operator-(const Poly& rhs) const { return *this + rhs * Rational(-1); }

Poly Poly::operator*(const Poly& rhs) const {
  check_same_var(rhs);
  Poly out(var_.empty() ? rhs.var_ : var_);
  for (const auto& [e1, c1] : coeffs_) {
    for (const auto& [e2, c2] : rhs.coeffs_) {
      Rational sum = out.coefficient(e1 + e2) + c1 * c2;
      out.set_coefficient(e1 + e2, sum);
    }
  }
  return out;
}

Poly Poly::operator*(const Rational& scalar) const {
  Poly out(var_);
  if (scalar == 0) return out;
  for (const auto& [e, c] : coeffs_) out.coeffs_[e] = c * scalar;
  return out;
}

bool Poly::operator==(const Poly& rhs) const {
  if (coeffs_.empty() && rhs.coeffs_.empty()) return true;
  return var_ == rhs.var_ && coeffs_ == rhs.coeffs_;
}

Rational Poly::evaluate(const Rational& x) const {
  // Horner over the dense form.
  Rational acc(0);
  long prev = -1;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (prev >= 0) acc = acc * pow_rational(x, prev - it->first);
    acc += it->second;
    prev = it->first;
  }
  if (prev > 0) acc = acc * pow_rational(x, prev);
  return acc;
}

std::string Poly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : coeffs_) {
    Rational abs_c = c < 0 ? Rational(-c) : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    bool unit = abs_c == 1;
    if (!unit || e == 0) out += polyguess::to_string(abs_c);
    if (e > 0) {
      if (!unit) out += "*";
      out += var_;
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

namespace {

// Recursive-descent parser for the grammar documented in poly.hpp.
class PolyParser {
 public:
  PolyParser(const std::string& text, const std::string& var)
      : text_(text), var_(var) {}

  Poly parse() {
    Poly p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return p;
  }

 private:
  Poly parse_expr() {
    skip_ws();
    bool negate = consume('-');
    Poly acc = parse_term();
    if (negate) acc = acc * Rational(-1);
    for (;;) {
      skip_ws();
      if (consume('+')) {
        acc = acc + parse_term();
      } else if (consume('-')) {
        acc = acc - parse_term();
      } else {
        return acc;
      }
    }
  }

  Poly parse_term() {
    Poly acc = parse_factor();
    for (;;) {
      skip_ws();
      if (consume('*')) {
        acc = acc * parse_factor();
      } else if (starts_factor()) {
        acc = acc * parse_factor();  // implicit multiplication, e.g. "n(n-1)"
      } else {
        return acc;
      }
    }
  }

  Poly parse_factor() {
    skip_ws();
    bool parenthesized = false;
    Poly atom = parse_atom(parenthesized);
    skip_ws();
    if (peek() == '^') {
      if (parenthesized) {
        throw ParseError("power of a parenthesized expression is not supported; expand the product instead", pos_);
      }
      ++pos_;
      long e = parse_uint();
      Poly out(atom.var().empty() ? var_ : atom.var(), Rational(1));
      for (long t = 0; t < e; ++t) out = out * atom;
      return out;
    }
    return atom;
  }

  Poly parse_atom(bool& parenthesized) {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly inner = parse_expr();
      skip_ws();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      parenthesized = true;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Int num = parse_integer();
      skip_ws();
      // An integer atom may continue as a rational literal "num/den".
      if (peek() == '/') {
        ++pos_;
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          throw ParseError("expected integer denominator", pos_);
        }
        Int den = parse_integer();
        if (den == 0) throw ParseError("zero denominator", pos_);
        Rational q(num, den);
        q.canonicalize();
        return Poly(var_, q);
      }
      return Poly(var_, Rational(num));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name = text_.substr(start, pos_ - start);
      if (name != var_) {
        throw ParseError("unknown identifier '" + name + "' (variable is '" + var_ + "')", start);
      }
      Poly p(var_);
      p.set_coefficient(1, Rational(1));
      return p;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Int parse_integer() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Int(text_.substr(start, pos_ - start));
  }

  long parse_uint() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      throw ParseError("expected a nonnegative integer exponent", pos_);
    }
    Int v = parse_integer();
    if (v > 1000000) throw ParseError("exponent too large", pos_);
    return v.get_si();
  }

  bool starts_factor() {
    char c = peek();
    return c == '(' || std::isdigit(static_cast<unsigned char>(c)) ||
           std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, const std::string& var) {
  return PolyParser(text, var).parse();
}

}  // namespace polyguess
