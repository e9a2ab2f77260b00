#pragma once

// Fixed-format MPS reader and writer.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "wildfire/lp.hpp"

namespace wildfire::lp {

struct MpsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes `problem` in fixed-format MPS. Integer columns are wrapped in
/// MARKER INTORG/INTEND pairs and always carry explicit bounds. Numbers are
/// printed with at most 12 characters. Names longer than 8 characters throw.
std::string write_mps(const LpProblem& problem);
void write_mps(const LpProblem& problem, std::ostream& out);

/// Parses NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA. Fields are split on
/// whitespace, so names must not contain blanks. RANGES are not supported.
LpProblem read_mps(std::istream& in);
LpProblem read_mps_string(const std::string& text);

/// Shortest %g rendering of `v` that fits in `width` characters.
std::string format_number(double v, std::size_t width = 12);

}  // namespace wildfire::lp
