#include "polyguess/job.hpp"

#include <set>
#include <sstream>

#include "polyguess/common.hpp"
#include "polyguess/guess_expr.hpp"

namespace polyguess {
namespace {

void require_keys(const Json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw InputError("unknown option \"" + key + "\" in " + where);
  }
}

long get_long(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw InputError(what + " must be an integer");
  return j.get<long>();
}

Rational coefficient_value(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("polynomial coefficients must be integers or rational strings");
}

Poly parse_job_polynomial(const Json& entry, const std::string& var) {
  if (entry.is_string()) return parse_poly(entry.get<std::string>(), var);
  if (entry.is_array()) {
    std::vector<Rational> coeffs;
    coeffs.reserve(entry.size());
    for (const auto& c : entry) coeffs.push_back(coefficient_value(c));
    return Poly::from_coefficients(var, coeffs);
  }
  throw InputError("each polynomial must be an expression string or a coefficient list");
}

TriangleSpec parse_job_factor(const Json& entry) {
  if (entry.is_string()) return parse_triangle_spec(entry.get<std::string>());
  if (entry.is_object()) return triangle_spec_from_json(entry);
  throw InputError("each sequence factor must be a triangle name or a custom spec object");
}

std::vector<SlopeTuple> parse_offset_pairs(const Json& j) {
  if (!j.is_array()) throw InputError("index_offset_pairs must be a list of slope tuples");
  std::vector<SlopeTuple> out;
  for (const auto& tuple : j) {
    if (!tuple.is_array()) throw InputError("each index offset tuple must be a list of pairs");
    SlopeTuple slopes;
    for (const auto& pair : tuple) {
      if (!pair.is_array() || pair.size() != 2)
        throw InputError("each index offset pair must be [u, l]");
      slopes.push_back({get_long(pair[0], "index offset u"), get_long(pair[1], "index offset l")});
    }
    out.push_back(std::move(slopes));
  }
  return out;
}

void parse_options(const Json& j, SearchOptions& opts) {
  require_keys(j,
               {"triangular_sequence_num_rows", "index_multiples", "index_offset_pairs",
                "index_offset", "min_terms_warn", "per_slot_factor_cap", "result_cap",
                "budget_ms_per_template", "num_workers"},
               "options");
  if (j.contains("triangular_sequence_num_rows"))
    opts.triangular_sequence_num_rows = static_cast<int>(
        get_long(j.at("triangular_sequence_num_rows"), "triangular_sequence_num_rows"));
  if (j.contains("index_multiples")) {
    const Json& m = j.at("index_multiples");
    if (!m.is_array() || m.empty()) throw InputError("index_multiples must be a non-empty list");
    opts.index_multiples.clear();
    for (const auto& v : m) opts.index_multiples.push_back(get_long(v, "index multiple"));
  }
  if (j.contains("index_offset_pairs"))
    opts.index_offset_pairs = parse_offset_pairs(j.at("index_offset_pairs"));
  if (j.contains("index_offset"))
    opts.index_offset = get_long(j.at("index_offset"), "index_offset");
  if (j.contains("min_terms_warn"))
    opts.min_terms_warn = static_cast<int>(get_long(j.at("min_terms_warn"), "min_terms_warn"));
  if (j.contains("per_slot_factor_cap"))
    opts.per_slot_factor_cap =
        static_cast<int>(get_long(j.at("per_slot_factor_cap"), "per_slot_factor_cap"));
  if (j.contains("result_cap"))
    opts.result_cap = static_cast<int>(get_long(j.at("result_cap"), "result_cap"));
  if (j.contains("budget_ms_per_template"))
    opts.budget_ms_per_template = get_long(j.at("budget_ms_per_template"), "budget_ms_per_template");
  if (j.contains("num_workers"))
    opts.num_workers = static_cast<int>(get_long(j.at("num_workers"), "num_workers"));
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Found:
      return "found";
    case RunStatus::NoMatch:
      return "no_match";
    case RunStatus::BadInput:
      return "input_error";
    case RunStatus::BudgetExceeded:
      return "budget_exceeded";
  }
  return "unknown";
}

}  // namespace

NormalizationMode normalization_from_name(const std::string& name) {
  if (name == "none") return NormalizationMode::None;
  if (name == "clear_lcm") return NormalizationMode::ClearLcm;
  if (name == "by_j_factorial") return NormalizationMode::ByJFactorial;
  if (name == "by_i_factorial") return NormalizationMode::ByIFactorial;
  if (name == "by_both") return NormalizationMode::ByBoth;
  throw InputError("unknown normalization mode \"" + name +
                   "\" (expected clear_lcm, by_j_factorial, by_i_factorial, or by_both)");
}

std::string normalization_name(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::None:
      return "none";
    case NormalizationMode::ClearLcm:
      return "clear_lcm";
    case NormalizationMode::ByJFactorial:
      return "by_j_factorial";
    case NormalizationMode::ByIFactorial:
      return "by_i_factorial";
    case NormalizationMode::ByBoth:
      return "by_both";
  }
  return "none";
}

JobSpec job_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("job document must be a single object");
  require_keys(doc,
               {"format_version", "variable", "polynomials", "start_index", "sequence_factors",
                "user_guess_function", "normalization", "options"},
               "job");
  if (doc.contains("format_version")) {
    const Json& v = doc.at("format_version");
    if (!v.is_string() || v.get<std::string>() != "1")
      throw InputError("unsupported format_version (expected \"1\")");
  }
  JobSpec job;
  if (!doc.contains("variable") || !doc.at("variable").is_string())
    throw InputError("job needs a \"variable\" string");
  job.variable = doc.at("variable").get<std::string>();
  if (!doc.contains("polynomials") || !doc.at("polynomials").is_array() ||
      doc.at("polynomials").empty())
    throw InputError("job needs a non-empty \"polynomials\" list");
  for (const auto& entry : doc.at("polynomials"))
    job.polynomials.push_back(parse_job_polynomial(entry, job.variable));
  if (doc.contains("start_index"))
    job.start_index = get_long(doc.at("start_index"), "start_index");
  if (doc.contains("sequence_factors")) {
    if (!doc.at("sequence_factors").is_array())
      throw InputError("sequence_factors must be a list");
    for (const auto& entry : doc.at("sequence_factors"))
      job.options.sequence_factors.push_back(parse_job_factor(entry));
  }
  if (doc.contains("user_guess_function")) {
    if (!doc.at("user_guess_function").is_string())
      throw InputError("user_guess_function must be an expression string");
    job.user_guess = doc.at("user_guess_function").get<std::string>();
  }
  if (doc.contains("normalization")) {
    if (!doc.at("normalization").is_string())
      throw InputError("normalization must be a mode name string");
    job.normalization = normalization_from_name(doc.at("normalization").get<std::string>());
  }
  if (doc.contains("options")) parse_options(doc.at("options"), job.options);
  return job;
}

JobSpec parse_job(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("job file is not valid JSON: ") + e.what());
  }
  return job_from_json(doc);
}

Json job_to_json(const JobSpec& job) {
  Json doc;
  doc["format_version"] = "1";
  doc["variable"] = job.variable;
  Json polys = Json::array();
  for (const Poly& p : job.polynomials) polys.push_back(p.to_string());
  doc["polynomials"] = std::move(polys);
  doc["start_index"] = job.start_index;
  Json factors = Json::array();
  for (const auto& spec : job.options.sequence_factors)
    factors.push_back(triangle_spec_to_json(spec));
  doc["sequence_factors"] = std::move(factors);
  if (job.user_guess) doc["user_guess_function"] = *job.user_guess;
  doc["normalization"] = normalization_name(job.normalization);
  Json opts;
  opts["triangular_sequence_num_rows"] = job.options.triangular_sequence_num_rows;
  opts["index_multiples"] = job.options.index_multiples;
  if (job.options.index_offset_pairs) {
    Json pairs = Json::array();
    for (const auto& tuple : *job.options.index_offset_pairs) {
      Json jt = Json::array();
      for (const auto& s : tuple) jt.push_back(Json::array({s.u, s.l}));
      pairs.push_back(std::move(jt));
    }
    opts["index_offset_pairs"] = std::move(pairs);
  }
  if (job.options.index_offset) opts["index_offset"] = *job.options.index_offset;
  opts["min_terms_warn"] = job.options.min_terms_warn;
  opts["per_slot_factor_cap"] = job.options.per_slot_factor_cap;
  opts["result_cap"] = job.options.result_cap;
  opts["budget_ms_per_template"] = job.options.budget_ms_per_template;
  opts["num_workers"] = job.options.num_workers;
  doc["options"] = std::move(opts);
  return doc;
}

RunResult run_job(const JobSpec& job) {
  RunResult result;
  try {
    PolySeq seq = make_polyseq(job.polynomials, job.start_index);
    if (job.user_guess) {
      GuessExpr u = parse_guess_expr(*job.user_guess);
      seq = apply_user_guess(seq, u);
    }
    switch (job.normalization) {
      case NormalizationMode::None:
        break;
      case NormalizationMode::ClearLcm:
        seq = clear_denominators_lcm(seq).first;
        break;
      case NormalizationMode::ByJFactorial:
        seq = normalize_exponential(seq, ExpNormalizeMode::ByJFactorial);
        break;
      case NormalizationMode::ByIFactorial:
        seq = normalize_exponential(seq, ExpNormalizeMode::ByIFactorial);
        break;
      case NormalizationMode::ByBoth:
        seq = normalize_exponential(seq, ExpNormalizeMode::ByBoth);
        break;
    }
    result.guess = guess_polynomial_sequence(seq, job.options);
    result.searched = std::move(seq);
    if (!result.guess.formulas.empty()) {
      result.status = RunStatus::Found;
    } else if (result.guess.diagnostics.budget_exceeded) {
      result.status = RunStatus::BudgetExceeded;
    } else {
      result.status = RunStatus::NoMatch;
    }
  } catch (const Error& e) {
    result.status = RunStatus::BadInput;
    result.errors.push_back(e.what());
  }
  return result;
}

Json report_json(const JobSpec& job, const RunResult& result) {
  Json doc;
  doc["format_version"] = "1";
  doc["job"] = job_to_json(job);
  doc["status"] = status_name(result.status);
  doc["exit_code"] = exit_code(result.status);
  doc["errors"] = result.errors;
  doc["warnings"] = result.guess.diagnostics.warnings;
  doc["budget_exceeded"] = result.guess.diagnostics.budget_exceeded;
  doc["range_pruned"] = result.guess.diagnostics.range_pruned;

  Json searched;
  searched["variable"] = result.searched.var;
  searched["start_index"] = result.searched.start_index;
  Json spolys = Json::array();
  for (const Poly& p : result.searched.polys) spolys.push_back(p.to_string());
  searched["polynomials"] = std::move(spolys);
  Json norm = Json::array();
  for (const auto& rec : result.searched.provenance) {
    Json r;
    r["kind"] = rec.kind;
    r["detail"] = rec.detail;
    r["multipliers"] = rec.multipliers;
    norm.push_back(std::move(r));
  }
  searched["normalization"] = std::move(norm);
  doc["searched"] = std::move(searched);

  Json formulas = Json::array();
  for (const Formula& f : result.guess.formulas) {
    Json jf = formula_to_json(f);
    jf["rendered"] = render_formula_text(f);
    jf["verified"] = true;
    jf["polynomials_checked"] = result.searched.polys.size();
    formulas.push_back(std::move(jf));
  }
  doc["formulas"] = std::move(formulas);

  Json rems = Json::array();
  for (const auto& seq : result.guess.diagnostics.unrecognized_remainders) {
    Json vals = Json::array();
    for (const Int& v : seq) vals.push_back(to_string(v));
    rems.push_back(std::move(vals));
  }
  doc["unrecognized_remainders"] = std::move(rems);

  Json oeis;
  Json annotations = Json::array();
  for (const auto& ann : result.oeis_annotations) {
    Json ja;
    Json vals = Json::array();
    for (const Int& v : ann.values) vals.push_back(to_string(v));
    ja["values"] = std::move(vals);
    Json matches = Json::array();
    for (const auto& [id, name] : ann.matches) {
      Json m;
      m["id"] = id;
      m["name"] = name;
      matches.push_back(std::move(m));
    }
    ja["matches"] = std::move(matches);
    annotations.push_back(std::move(ja));
  }
  oeis["annotations"] = std::move(annotations);
  oeis["diagnostics"] = result.oeis_diagnostics;
  doc["oeis"] = std::move(oeis);
  return doc;
}

std::string report_text(const JobSpec& job, const RunResult& result) {
  (void)job;
  std::ostringstream os;
  os << "status: " << status_name(result.status) << " (exit " << exit_code(result.status)
     << ")\n";
  for (const auto& e : result.errors) os << "error: " << e << '\n';
  for (const auto& w : result.guess.diagnostics.warnings) os << "warning: " << w << '\n';
  int idx = 0;
  for (const Formula& f : result.guess.formulas) {
    os << "formula " << ++idx << ": " << render_formula_text(f) << '\n';
  }
  for (const auto& rem : result.guess.diagnostics.unrecognized_remainders) {
    os << "unrecognized remainder:";
    for (const Int& v : rem) os << ' ' << to_string(v);
    os << '\n';
  }
  for (const auto& ann : result.oeis_annotations) {
    for (const auto& [id, name] : ann.matches) os << "oeis " << id << ": " << name << '\n';
  }
  for (const auto& d : result.oeis_diagnostics) os << "oeis: " << d << '\n';
  return os.str();
}

RunStatus verify_report(const Json& report, std::string& summary_out) {
  const Json& searched = report.at("searched");
  const std::string var = searched.at("variable").get<std::string>();
  std::vector<Poly> polys;
  for (const auto& text : searched.at("polynomials"))
    polys.push_back(parse_poly(text.get<std::string>(), var));
  PolySeq seq = make_polyseq(std::move(polys), searched.at("start_index").get<long>());

  std::ostringstream os;
  bool all_ok = true;
  int idx = 0;
  TableCache cache;
  for (const auto& jf : report.at("formulas")) {
    Formula f = formula_from_json(jf);
    const bool ok = verify_formula(f, seq, cache);
    all_ok = all_ok && ok;
    os << "formula " << ++idx << ": " << (ok ? "verified" : "FAILED") << " — "
       << render_formula_text(f) << '\n';
  }
  if (idx == 0) os << "no formulas to verify\n";
  summary_out = os.str();
  return all_ok ? RunStatus::Found : RunStatus::NoMatch;
}

}  // namespace polyguess
