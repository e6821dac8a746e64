#include "polyguess/render.hpp"

#include <sstream>

#include "polyguess/common.hpp"

namespace polyguess {
namespace {

// Integer-linear expression in the sequence index and summation index,
// cj2*j^2 + cj*j + ci*i + cc, rendered in exactly that term order.
struct LinExpr {
  long cj2 = 0;
  long cj = 0;
  long ci = 0;
  long cc = 0;
};

void append_term(std::ostringstream& os, bool& first, long coef, const std::string& sym) {
  if (coef == 0) return;
  if (first) {
    if (coef < 0) os << '-';
    first = false;
  } else {
    os << (coef < 0 ? " - " : " + ");
  }
  long mag = coef < 0 ? -coef : coef;
  if (sym.empty()) {
    os << mag;
  } else {
    if (mag != 1) os << mag << '*';
    os << sym;
  }
}

std::string render_lin(const LinExpr& e, const FormulaNames& names) {
  std::ostringstream os;
  bool first = true;
  append_term(os, first, e.cj2, names.sequence_index + "^2");
  append_term(os, first, e.cj, names.sequence_index);
  append_term(os, first, e.ci, names.summation_index);
  append_term(os, first, e.cc, "");
  if (first) return "0";
  return os.str();
}

// Single unsigned token (a lone variable or a plain non-negative constant):
// such expressions skip parentheses in exponents and factorials.
bool single_token(const LinExpr& e) {
  const int vars = (e.cj2 != 0) + (e.cj != 0) + (e.ci != 0);
  if (vars == 0) return e.cc >= 0;
  if (vars > 1 || e.cc != 0) return false;
  return e.cj2 == 1 || e.cj == 1 || e.ci == 1;
}

LinExpr scale_shift(const LinExpr& base, long slope, long offset) {
  return {base.cj2 * slope, base.cj * slope, base.ci * slope, base.cc * slope + offset};
}

std::string rat_str(const Rational& q) { return to_string(q); }

// Rational atom for use inside a product: negatives and fractions take
// parentheses.
std::string rat_atom(const Rational& q) {
  if (q >= 0 && is_integer(q)) return rat_str(q);
  return "(" + rat_str(q) + ")";
}

std::string paren_unless_token(const LinExpr& e, const FormulaNames& names) {
  std::string body = render_lin(e, names);
  if (single_token(e)) return body;
  return "(" + body + ")";
}

// Renders one remainder form; `base` is the index expression the form is
// evaluated at (i for rs1, j + j0 - i for rs2).
std::string render_cf(const ClosedForm& f, const LinExpr& base, const FormulaNames& names) {
  switch (f.kind) {
    case ClosedForm::Kind::Const:
      return rat_atom(f.constant);
    case ClosedForm::Kind::PolyInIndex: {
      std::ostringstream os;
      os << '(';
      bool first = true;
      for (std::size_t k = 0; k < f.poly.size(); ++k) {
        const Rational& c = f.poly[k];
        if (c == 0) continue;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
          if (c < 0) os << '-';
          first = false;
        } else {
          os << (c < 0 ? " - " : " + ");
        }
        std::string var = paren_unless_token(base, names);
        if (k == 0) {
          os << rat_str(mag);
        } else {
          if (mag != 1) os << (is_integer(mag) ? rat_str(mag) : "(" + rat_str(mag) + ")") << '*';
          os << var;
          if (k > 1) os << '^' << k;
        }
      }
      if (first) os << '0';
      os << ')';
      return os.str();
    }
    case ClosedForm::Kind::Geometric: {
      LinExpr arg = scale_shift(base, f.arg.slope, f.arg.offset);
      return rat_atom(f.base) + "^" + paren_unless_token(arg, names);
    }
    case ClosedForm::Kind::FactorialOf: {
      LinExpr arg = scale_shift(base, f.arg.slope, f.arg.offset);
      std::string body = paren_unless_token(arg, names) + "!";
      return f.reciprocal ? "1/" + body : body;
    }
    case ClosedForm::Kind::SignAlt: {
      LinExpr arg = scale_shift(base, f.arg.slope, f.arg.offset);
      arg.cc = ((arg.cc % 2) + 2) % 2;  // only the parity of the offset matters
      return "(-1)^" + paren_unless_token(arg, names);
    }
    case ClosedForm::Kind::Product: {
      std::string out;
      for (std::size_t t = 0; t < f.factors.size(); ++t) {
        if (t) out += " * ";
        out += render_cf(f.factors[t], base, names);
      }
      return out.empty() ? "1" : out;
    }
  }
  return "1";
}

bool factor_suppressed(const FactorTemplate& ft) {
  return ft.upper.degree() == 0 && ft.upper.c0 == 0 && ft.upper_slope == 0 &&
         ft.lower.degree() == 0 && ft.lower.c0 == 0 && ft.lower_slope == 0;
}

Json affine_to_json(const AffineForm& a) {
  Json j;
  j["slope"] = a.slope;
  j["offset"] = a.offset;
  return j;
}

AffineForm affine_from_json(const Json& j) {
  AffineForm a;
  a.slope = j.at("slope").get<long>();
  a.offset = j.at("offset").get<long>();
  return a;
}

Json index_poly_to_json(const IndexPoly& p, long slope) {
  Json j;
  j["coefficients"] = Json::array({p.c0, p.c1, p.c2});
  j["slope"] = slope;
  return j;
}

std::pair<IndexPoly, long> index_poly_from_json(const Json& j) {
  const Json& c = j.at("coefficients");
  if (!c.is_array() || c.size() != 3)
    throw InputError("index polynomial needs exactly three coefficients");
  IndexPoly p{c[0].get<long>(), c[1].get<long>(), c[2].get<long>()};
  return {p, j.at("slope").get<long>()};
}

}  // namespace

std::string render_formula_text(const Formula& f) {
  const FormulaNames& names = f.names;
  std::vector<std::string> pieces;
  for (const auto& ft : f.factors) {
    if (factor_suppressed(ft)) continue;
    LinExpr upper{ft.upper.c2, ft.upper.c1, ft.upper_slope, ft.upper.c0};
    LinExpr lower{ft.lower.c2, ft.lower.c1, ft.lower_slope, ft.lower.c0};
    pieces.push_back(ft.triangle.name + "[" + render_lin(upper, names) + ", " +
                     render_lin(lower, names) + "]");
  }
  const LinExpr base_i{0, 0, 1, 0};
  const LinExpr base_s{0, 1, -1, f.j0};
  if (!f.rs1.is_const_one()) pieces.push_back(render_cf(f.rs1, base_i, names));
  if (!f.rs2.is_const_one()) pieces.push_back(render_cf(f.rs2, base_s, names));
  pieces.push_back(names.variable + "^" + names.summation_index);

  std::ostringstream os;
  os << "Sum[" << names.summation_index << "=0.." << names.sequence_index;
  if (f.j0 > 0) os << '+' << f.j0;
  if (f.j0 < 0) os << f.j0;
  os << "] ";
  for (std::size_t t = 0; t < pieces.size(); ++t) {
    if (t) os << " * ";
    os << pieces[t];
  }
  return os.str();
}

Json closed_form_to_json(const ClosedForm& form) {
  Json j;
  switch (form.kind) {
    case ClosedForm::Kind::Const:
      j["kind"] = "const";
      j["value"] = rat_str(form.constant);
      break;
    case ClosedForm::Kind::PolyInIndex: {
      j["kind"] = "poly";
      Json c = Json::array();
      for (const auto& q : form.poly) c.push_back(rat_str(q));
      j["coefficients"] = std::move(c);
      break;
    }
    case ClosedForm::Kind::Geometric:
      j["kind"] = "geometric";
      j["base"] = rat_str(form.base);
      j["arg"] = affine_to_json(form.arg);
      break;
    case ClosedForm::Kind::FactorialOf:
      j["kind"] = "factorial";
      j["arg"] = affine_to_json(form.arg);
      j["reciprocal"] = form.reciprocal;
      break;
    case ClosedForm::Kind::SignAlt:
      j["kind"] = "sign_alt";
      j["arg"] = affine_to_json(form.arg);
      break;
    case ClosedForm::Kind::Product: {
      j["kind"] = "product";
      Json fac = Json::array();
      for (const auto& child : form.factors) fac.push_back(closed_form_to_json(child));
      j["factors"] = std::move(fac);
      break;
    }
  }
  return j;
}

ClosedForm closed_form_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  ClosedForm f;
  if (kind == "const") {
    f.kind = ClosedForm::Kind::Const;
    f.constant = parse_rational(j.at("value").get<std::string>());
  } else if (kind == "poly") {
    f.kind = ClosedForm::Kind::PolyInIndex;
    for (const auto& c : j.at("coefficients"))
      f.poly.push_back(parse_rational(c.get<std::string>()));
  } else if (kind == "geometric") {
    f.kind = ClosedForm::Kind::Geometric;
    f.base = parse_rational(j.at("base").get<std::string>());
    f.arg = affine_from_json(j.at("arg"));
  } else if (kind == "factorial") {
    f.kind = ClosedForm::Kind::FactorialOf;
    f.arg = affine_from_json(j.at("arg"));
    f.reciprocal = j.value("reciprocal", false);
  } else if (kind == "sign_alt") {
    f.kind = ClosedForm::Kind::SignAlt;
    f.arg = affine_from_json(j.at("arg"));
  } else if (kind == "product") {
    f.kind = ClosedForm::Kind::Product;
    for (const auto& child : j.at("factors")) f.factors.push_back(closed_form_from_json(child));
  } else {
    throw InputError("unknown remainder form kind: " + kind);
  }
  return f;
}

Json triangle_spec_to_json(const TriangleSpec& spec) {
  if (auto b = builtin_from_name(spec.name); b && builtin_spec(*b) == spec) return Json(spec.name);
  Json j;
  j["name"] = spec.name;
  j["params"] = Json::array({spec.params[0], spec.params[1], spec.params[2], spec.params[3],
                             spec.params[4], spec.params[5]});
  j["unsigned"] = spec.sign_mode == SignMode::Unsigned;
  return j;
}

TriangleSpec triangle_spec_from_json(const Json& j) {
  if (j.is_string()) return parse_triangle_spec(j.get<std::string>());
  TriangleSpec spec;
  spec.name = j.at("name").get<std::string>();
  const Json& p = j.at("params");
  if (!p.is_array() || p.size() != 6)
    throw InputError("custom triangle needs exactly six recurrence parameters");
  for (std::size_t t = 0; t < 6; ++t) spec.params[t] = p[t].get<long>();
  spec.sign_mode = j.value("unsigned", false) ? SignMode::Unsigned : SignMode::AsIs;
  return spec;
}

Json formula_to_json(const Formula& f) {
  Json j;
  Json factors = Json::array();
  for (const auto& ft : f.factors) {
    Json jf;
    jf["triangle"] = triangle_spec_to_json(ft.triangle);
    jf["upper"] = index_poly_to_json(ft.upper, ft.upper_slope);
    jf["lower"] = index_poly_to_json(ft.lower, ft.lower_slope);
    factors.push_back(std::move(jf));
  }
  j["factors"] = std::move(factors);
  j["rs1"] = closed_form_to_json(f.rs1);
  j["rs2"] = closed_form_to_json(f.rs2);
  j["j0"] = f.j0;
  j["num_rows"] = f.num_rows;
  j["names"] = Json{{"sequence_index", f.names.sequence_index},
                    {"summation_index", f.names.summation_index},
                    {"variable", f.names.variable}};
  Json norm = Json::array();
  for (const auto& rec : f.normalization) {
    Json r;
    r["kind"] = rec.kind;
    r["detail"] = rec.detail;
    r["multipliers"] = rec.multipliers;
    norm.push_back(std::move(r));
  }
  j["normalization"] = std::move(norm);
  return j;
}

Formula formula_from_json(const Json& j) {
  Formula f;
  for (const auto& jf : j.at("factors")) {
    FactorTemplate ft;
    ft.triangle = triangle_spec_from_json(jf.at("triangle"));
    std::tie(ft.upper, ft.upper_slope) = index_poly_from_json(jf.at("upper"));
    std::tie(ft.lower, ft.lower_slope) = index_poly_from_json(jf.at("lower"));
    f.factors.push_back(std::move(ft));
  }
  f.rs1 = closed_form_from_json(j.at("rs1"));
  f.rs2 = closed_form_from_json(j.at("rs2"));
  f.j0 = j.at("j0").get<long>();
  f.num_rows = j.at("num_rows").get<int>();
  if (j.contains("names")) {
    const Json& n = j.at("names");
    f.names.sequence_index = n.at("sequence_index").get<std::string>();
    f.names.summation_index = n.at("summation_index").get<std::string>();
    f.names.variable = n.at("variable").get<std::string>();
  }
  if (j.contains("normalization")) {
    for (const auto& r : j.at("normalization")) {
      TransformRecord rec;
      rec.kind = r.at("kind").get<std::string>();
      rec.detail = r.value("detail", std::string());
      if (r.contains("multipliers"))
        rec.multipliers = r.at("multipliers").get<std::vector<std::string>>();
      f.normalization.push_back(std::move(rec));
    }
  }
  return f;
}

std::string render_formula(const Formula& f, RenderStyle style) {
  if (style == RenderStyle::Text) return render_formula_text(f);
  return formula_to_json(f).dump(2);
}

}  // namespace polyguess
