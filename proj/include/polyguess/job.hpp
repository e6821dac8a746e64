#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyguess/render.hpp"
#include "polyguess/search.hpp"

namespace polyguess {

enum class NormalizationMode { None, ClearLcm, ByJFactorial, ByIFactorial, ByBoth };

// Maps the snake_case mode names used by job files and --normalize.
NormalizationMode normalization_from_name(const std::string& name);
std::string normalization_name(NormalizationMode mode);

struct JobSpec {
  std::string variable;
  std::vector<Poly> polynomials;
  long start_index = 1;
  SearchOptions options;
  std::optional<std::string> user_guess;  // expression in (j, i)
  NormalizationMode normalization = NormalizationMode::None;
};

// Parses a job document (format_version "1").  Unknown keys at any level are
// rejected rather than ignored.
JobSpec parse_job(const std::string& json_text);
JobSpec job_from_json(const Json& doc);
Json job_to_json(const JobSpec& job);

enum class RunStatus { Found = 0, NoMatch = 1, BadInput = 2, BudgetExceeded = 3 };

inline int exit_code(RunStatus s) { return static_cast<int>(s); }

struct OeisAnnotation {
  std::vector<Int> values;
  std::vector<std::pair<std::string, std::string>> matches;  // (id, name)
};

struct RunResult {
  RunStatus status = RunStatus::NoMatch;
  GuessResult guess;
  PolySeq searched;  // the normalized sequence the formulas were verified against
  std::vector<std::string> errors;
  std::vector<OeisAnnotation> oeis_annotations;  // filled by the CLI when --oeis is on
  std::vector<std::string> oeis_diagnostics;
};

// Normalize (user guess, then the requested mode), search, classify the
// status.  Input problems land in `errors` with status BadInput; no
// exceptions escape.
RunResult run_job(const JobSpec& job);

// Full report document; embeds the searched sequence so verify-only mode can
// re-verify formulas without searching.
Json report_json(const JobSpec& job, const RunResult& result);
std::string report_text(const JobSpec& job, const RunResult& result);

// Re-verifies every formula of a report against its embedded sequence.
// Returns Found when all of them verify (vacuously true for none), NoMatch
// when any fails; summary_out gets one line per formula.
RunStatus verify_report(const Json& report, std::string& summary_out);

}  // namespace polyguess
