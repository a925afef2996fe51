#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arlda/problem.hpp"

namespace arlda {

// Catalogued test problem: a ProblemSpec with closed-form exact derivatives,
// a default outer function, and the box half-width on which the declared
// Lipschitz constants hold.
struct SuiteProblem {
  std::string id;
  std::string description;
  ProblemSpec spec;
  double probe_radius = 0.0;
};

std::vector<std::string> problem_ids();

// Builds a suite problem; h_override replaces the default outer function
// (the Lipschitz constant L_h is recomputed for the override).
SuiteProblem make_problem(const std::string& id,
                          std::optional<OuterFunction> h_override = std::nullopt);

}  // namespace arlda
