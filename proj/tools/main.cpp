#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyguess/common.hpp"
#include "polyguess/job.hpp"
#include "polyguess/oeis.hpp"

namespace {

using namespace polyguess;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Comma-separated triangle list; a piece containing ':' starts a custom spec
// ("name:a,b,c,a2,b2,c2[:unsigned]") whose own commas span the next 5 pieces.
std::vector<std::string> split_factor_list(const std::string& text) {
  std::vector<std::string> pieces = split(text, ',');
  std::vector<std::string> out;
  for (std::size_t at = 0; at < pieces.size(); ++at) {
    std::string item = pieces[at];
    if (item.find(':') != std::string::npos) {
      for (int extra = 0; extra < 5 && at + 1 < pieces.size(); ++extra)
        item += "," + pieces[++at];
    }
    out.push_back(std::move(item));
  }
  return out;
}

// "(1,0);(0,-1)" — a flat pair list, grouped into tuples of r pairs later.
std::vector<SlotSlopes> parse_pair_list(const std::string& text) {
  std::vector<SlotSlopes> pairs;
  std::string clean;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
  }
  for (const std::string& item : split(clean, ';')) {
    if (item.empty()) continue;
    if (item.front() != '(' || item.back() != ')')
      throw InputError("offset pairs must look like (u,l);(u,l);...");
    auto parts = split(item.substr(1, item.size() - 2), ',');
    if (parts.size() != 2) throw InputError("each offset pair needs exactly two integers");
    try {
      pairs.push_back({std::stol(parts[0]), std::stol(parts[1])});
    } catch (const std::exception&) {
      throw InputError("offset pair entries must be integers");
    }
  }
  if (pairs.empty()) throw InputError("no offset pairs given");
  return pairs;
}

struct GuessArgs {
  std::string jobfile;
  std::string factors;
  std::string index_multiples;
  std::string offset_pairs;
  std::string user_guess;
  std::string normalize;
  std::string format = "text";
  std::string verify_only;
  int num_rows = 0;
  long j0 = 0;
  bool has_j0 = false;
  long budget_ms = -1;
  int workers = 0;
  bool oeis = false;
};

int run_verify_only(const GuessArgs& args) {
  Json report;
  try {
    report = Json::parse(read_file(args.verify_only));
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: report is not valid JSON: " << e.what() << '\n';
    return exit_code(RunStatus::BadInput);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(RunStatus::BadInput);
  }
  try {
    std::string summary;
    RunStatus status = verify_report(report, summary);
    std::cout << summary;
    return exit_code(status);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(RunStatus::BadInput);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed report: " << e.what() << '\n';
    return exit_code(RunStatus::BadInput);
  }
}

int run_guess(const GuessArgs& args) {
  if (!args.verify_only.empty()) return run_verify_only(args);
  if (args.jobfile.empty()) {
    std::cerr << "error: a job file is required (or use --verify-only FILE)\n";
    return exit_code(RunStatus::BadInput);
  }

  JobSpec job;
  try {
    job = parse_job(read_file(args.jobfile));
    if (!args.factors.empty()) {
      job.options.sequence_factors.clear();
      for (const std::string& name : split_factor_list(args.factors))
        job.options.sequence_factors.push_back(parse_triangle_spec(name));
    }
    if (args.num_rows > 0) job.options.triangular_sequence_num_rows = args.num_rows;
    if (!args.index_multiples.empty()) {
      job.options.index_multiples.clear();
      for (const std::string& m : split(args.index_multiples, ',')) {
        try {
          job.options.index_multiples.push_back(std::stol(m));
        } catch (const std::exception&) {
          throw InputError("index multiples must be integers");
        }
      }
    }
    if (!args.offset_pairs.empty()) {
      auto pairs = parse_pair_list(args.offset_pairs);
      const std::size_t r = job.options.sequence_factors.size();
      if (r == 0) throw InputError("offset pairs need at least one sequence factor");
      if (pairs.size() % r != 0)
        throw InputError("the offset pair count must be a multiple of the factor count");
      std::vector<SlopeTuple> tuples;
      for (std::size_t at = 0; at < pairs.size(); at += r)
        tuples.emplace_back(pairs.begin() + at, pairs.begin() + at + r);
      job.options.index_offset_pairs = std::move(tuples);
    }
    if (args.has_j0) job.options.index_offset = args.j0;
    if (!args.user_guess.empty()) job.user_guess = args.user_guess;
    if (!args.normalize.empty()) job.normalization = normalization_from_name(args.normalize);
    if (args.budget_ms >= 0) job.options.budget_ms_per_template = args.budget_ms;
    if (args.workers > 0) job.options.num_workers = args.workers;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(RunStatus::BadInput);
  }

  RunResult result = run_job(job);

  if (args.oeis && result.status != RunStatus::BadInput) {
    for (const auto& values : result.guess.diagnostics.unrecognized_remainders) {
      if (values.size() < 4) {
        result.oeis_diagnostics.push_back("oeis skipped: fewer than 4 remainder values");
        continue;
      }
      OeisResult lookup = oeis_lookup(values, true);
      if (!lookup.diagnostic.empty()) result.oeis_diagnostics.push_back(lookup.diagnostic);
      if (!lookup.matches.empty()) {
        OeisAnnotation ann;
        ann.values = values;
        for (const auto& m : lookup.matches) ann.matches.emplace_back(m.id, m.name);
        result.oeis_annotations.push_back(std::move(ann));
      }
    }
  }

  if (args.format == "structured") {
    std::cout << report_json(job, result).dump(2) << '\n';
  } else {
    std::cout << report_text(job, result);
  }
  return exit_code(result.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guesses exact summation formulas for polynomial sequences from "
               "triangular-sequence factor hints"};
  app.require_subcommand(1);

  GuessArgs args;
  CLI::App* guess = app.add_subcommand("guess", "search a job file for formulas");
  guess->add_option("jobfile", args.jobfile, "job document (JSON)");
  guess->add_option("--factors", args.factors,
                    "comma-separated triangle names or custom specs "
                    "name:a,b,c,a2,b2,c2[:unsigned] (overrides job)");
  guess->add_option("--num-rows", args.num_rows, "triangle rows to materialize");
  guess->add_option("--index-multiples", args.index_multiples,
                    "comma-separated slope candidates, e.g. 0,1,-1");
  guess->add_option("--offset-pairs", args.offset_pairs,
                    "explicit slope pairs \"(u,l);(u,l);...\", grouped per factor");
  auto* j0_opt = guess->add_option("--j0", args.j0, "fixed summation bound offset (disables probing)");
  guess->add_option("--user-guess", args.user_guess, "multiplier expression in (j, i)");
  guess->add_option("--normalize", args.normalize,
                    "clear_lcm | by_j_factorial | by_i_factorial | by_both");
  guess->add_option("--format", args.format, "text | structured")
      ->check(CLI::IsMember({"text", "structured"}));
  guess->add_flag("--oeis", args.oeis, "annotate unrecognized remainders via OEIS (network)");
  guess->add_option("--verify-only", args.verify_only,
                    "re-verify a structured report instead of searching");
  guess->add_option("--budget-ms", args.budget_ms, "per-template time budget (0 = unlimited)");
  guess->add_option("--workers", args.workers, "parallel template workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? 0 : exit_code(polyguess::RunStatus::BadInput);
  }
  args.has_j0 = j0_opt->count() > 0;
  return run_guess(args);
}
