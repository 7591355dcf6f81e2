#pragma once

#include <filesystem>
#include <string>

#include "lp.hpp"
#include "solver.hpp"

namespace leakage::mps {

// Free-format MPS with deterministic row/column ordering taken from the LP.
// Long structured names are written verbatim; fixed-format 8-character
// mangling is never applied.
std::string to_string(const LinearProgram& lp, const std::string& problem_name = "LEAKAGE");
void write_file(const LinearProgram& lp, const std::filesystem::path& path,
                const std::string& problem_name = "LEAKAGE");

// Parses free-format MPS (sections NAME, ROWS, COLUMNS, RHS, BOUNDS, ENDATA).
// Integer markers and RANGES are rejected. Round-trips to_string exactly.
LinearProgram parse(const std::string& text);
LinearProgram read_file(const std::filesystem::path& path);

// Solution interchange: CSV `name,value,dual` with a leading
// `#objective,<value>` line. Column rows carry primal value and reduced
// cost; constraint rows carry activity and dual.
std::string solution_to_csv(const LinearProgram& lp, const Solution& solution);
void write_solution(const LinearProgram& lp, const Solution& solution,
                    const std::filesystem::path& path);

// Reads a solution produced here or by an external solver. Every LP column
// must be present; unknown names are errors. The imported point must pass
// the same feasibility/gap verification as a native solve.
Solution read_solution(const std::filesystem::path& path, const LinearProgram& lp,
                       double feasibility = 1e-6, double gap = 1e-6);

}  // namespace leakage::mps
