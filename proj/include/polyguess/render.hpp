#pragma once

#include <string>

#include <json.hpp>

#include "polyguess/search.hpp"

namespace polyguess {

using Json = nlohmann::ordered_json;

enum class RenderStyle { Text, Structured };

// One-line deterministic rendering:
//   Sum[i=0..j] S1[j, i] * (-1)^(j - i) * n^i
// Factor indices print their j^2, j, i and constant parts in that order;
// factors pinned at [0, 0] (entry 1) and constant-1 remainders are omitted.
std::string render_formula_text(const Formula& f);

// Structured rendering: slopes, index polynomials as coefficient lists,
// remainder ASTs, j0, names, normalization provenance.  Big values are
// carried as strings.  formula_from_json inverts it exactly.
Json formula_to_json(const Formula& f);
Formula formula_from_json(const Json& j);

std::string render_formula(const Formula& f, RenderStyle style);

Json closed_form_to_json(const ClosedForm& form);
ClosedForm closed_form_from_json(const Json& j);

Json triangle_spec_to_json(const TriangleSpec& spec);
TriangleSpec triangle_spec_from_json(const Json& j);

}  // namespace polyguess
