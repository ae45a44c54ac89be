#pragma once

#include <iosfwd>
#include <string>

#include "gmlab/solver.hpp"

namespace gmlab {

/// Plain-text field format: "# key=value" header lines followed by one row
/// per node, "x u v" (1D) or "x y u v" (2D), all numbers in %.17g so that a
/// write/read round trip is bit-exact.
/// `status` lands in the header; readers ignore it.
void write_solution(std::ostream& os, const SolutionField& sol, const std::string& status = "converged");
SolutionField read_solution(std::istream& is);

void save_solution(const std::string& path, const SolutionField& sol,
                   const std::string& status = "converged");
SolutionField load_solution(const std::string& path);

/// %.17g
std::string format_double(double x);

}  // namespace gmlab
