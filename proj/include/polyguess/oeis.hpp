#pragma once

#include <string>
#include <vector>

#include "polyguess/rational.hpp"

namespace polyguess {

struct OeisMatch {
  std::string id;  // "A000045"
  std::string name;
};

struct OeisResult {
  std::vector<OeisMatch> matches;
  std::string diagnostic;  // non-empty when the lookup was skipped or failed
};

// Best-effort lookup against the public OEIS search endpoint.  Needs at
// least 4 values (InputError otherwise).  A disabled or failing lookup comes
// back empty with a diagnostic; network problems never propagate as
// exceptions and never block longer than the built-in timeout.
OeisResult oeis_lookup(const std::vector<Int>& values, bool enabled);

}  // namespace polyguess
