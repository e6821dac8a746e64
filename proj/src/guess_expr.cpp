#include "polyguess/guess_expr.hpp"

#include <cctype>

namespace polyguess {

namespace {

class GuessParser {
 public:
  explicit GuessParser(const std::string& text) : text_(text) {}

  GuessExpr parse() {
    GuessExpr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    e.text = text_;
    return e;
  }

 private:
  GuessExpr node(GuessExpr::Kind kind, std::vector<GuessExpr> children = {}) {
    GuessExpr e;
    e.kind = kind;
    e.children = std::move(children);
    return e;
  }

  GuessExpr parse_expr() {
    skip_ws();
    bool negate = consume('-');
    GuessExpr acc = parse_term();
    if (negate) {
      GuessExpr minus_one;
      minus_one.kind = GuessExpr::Kind::Number;
      minus_one.value = Rational(-1);
      acc = node(GuessExpr::Kind::Mul, {minus_one, acc});
    }
    for (;;) {
      skip_ws();
      if (consume('+')) {
        acc = node(GuessExpr::Kind::Add, {acc, parse_term()});
      } else if (consume('-')) {
        acc = node(GuessExpr::Kind::Sub, {acc, parse_term()});
      } else {
        return acc;
      }
    }
  }

  GuessExpr parse_term() {
    GuessExpr acc = parse_power();
    for (;;) {
      skip_ws();
      if (consume('*')) {
        acc = node(GuessExpr::Kind::Mul, {acc, parse_power()});
      } else if (consume('/')) {
        acc = node(GuessExpr::Kind::Div, {acc, parse_power()});
      } else {
        return acc;
      }
    }
  }

  GuessExpr parse_power() {
    GuessExpr base = parse_primary();
    skip_ws();
    if (consume('^')) return node(GuessExpr::Kind::Pow, {base, parse_primary()});
    return base;
  }

  GuessExpr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      GuessExpr inner = parse_expr();
      skip_ws();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Int num = parse_integer();
      skip_ws();
      GuessExpr e;
      e.kind = GuessExpr::Kind::Number;
      if (peek() == '/') {
        // Only a literal denominator forms a rational literal here; general
        // division is handled at term level, so "1/factorial(i)" still works
        // because 'f' is not a digit.
        std::size_t save = pos_;
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          Int den = parse_integer();
          if (den == 0) throw ParseError("zero denominator", pos_);
          e.value = Rational(num, den);
          e.value.canonicalize();
          return e;
        }
        pos_ = save;
      }
      e.value = Rational(num);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name = text_.substr(start, pos_ - start);
      if (name == "j") return node(GuessExpr::Kind::IndexJ);
      if (name == "i") return node(GuessExpr::Kind::IndexI);
      if (name == "factorial") {
        skip_ws();
        if (!consume('(')) throw ParseError("expected '(' after factorial", pos_);
        GuessExpr arg = parse_expr();
        skip_ws();
        if (!consume(')')) throw ParseError("expected ')'", pos_);
        return node(GuessExpr::Kind::Factorial, {arg});
      }
      throw ParseError("unknown identifier '" + name + "' (expected j, i, or factorial)", start);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Int parse_integer() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Int(text_.substr(start, pos_ - start));
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
  std::size_t pos_ = 0;
};

}  // namespace

GuessExpr parse_guess_expr(const std::string& text) { return GuessParser(text).parse(); }

Rational evaluate_guess_expr(const GuessExpr& e, long j, long i) {
  switch (e.kind) {
    case GuessExpr::Kind::Number:
      return e.value;
    case GuessExpr::Kind::IndexJ:
      return Rational(j);
    case GuessExpr::Kind::IndexI:
      return Rational(i);
    case GuessExpr::Kind::Add:
      return evaluate_guess_expr(e.children[0], j, i) + evaluate_guess_expr(e.children[1], j, i);
    case GuessExpr::Kind::Sub:
      return evaluate_guess_expr(e.children[0], j, i) - evaluate_guess_expr(e.children[1], j, i);
    case GuessExpr::Kind::Mul:
      return evaluate_guess_expr(e.children[0], j, i) * evaluate_guess_expr(e.children[1], j, i);
    case GuessExpr::Kind::Div: {
      Rational den = evaluate_guess_expr(e.children[1], j, i);
      if (den == 0) throw DomainError("division by zero in guess expression");
      return evaluate_guess_expr(e.children[0], j, i) / den;
    }
    case GuessExpr::Kind::Pow: {
      Rational exp = evaluate_guess_expr(e.children[1], j, i);
      if (!is_integer(exp)) throw DomainError("non-integer exponent in guess expression");
      if (!exp.get_num().fits_slong_p()) throw DomainError("exponent too large");
      return pow_rational(evaluate_guess_expr(e.children[0], j, i), exp.get_num().get_si());
    }
    case GuessExpr::Kind::Factorial: {
      Rational arg = evaluate_guess_expr(e.children[0], j, i);
      if (!is_integer(arg)) throw DomainError("non-integer factorial argument in guess expression");
      if (!arg.get_num().fits_slong_p()) throw DomainError("factorial argument too large");
      return Rational(factorial(arg.get_num().get_si()));
    }
  }
  throw DomainError("corrupt guess expression");
}

}  // namespace polyguess
