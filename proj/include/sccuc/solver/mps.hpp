#pragma once

#include <filesystem>
#include <string>

#include "sccuc/solver/milp_problem.hpp"

namespace sccuc::solver {

/// Free-format MPS text. Column names come from the variable registry, rows
/// keep their constraint names (made unique by suffixing the row index when
/// needed), numbers are printed with 17 significant digits so a read-back is
/// bit-exact. The objective constant is stored as the RHS of the objective
/// row with the opposite sign.
std::string to_mps(const MilpProblem& p);
void write_mps(const MilpProblem& p, const std::filesystem::path& path);

/// Reads free-format MPS (the subset written above plus the usual bound
/// types). Column keys become {name, -1, -1}.
MilpProblem parse_mps(const std::string& text);
MilpProblem read_mps(const std::filesystem::path& path);

}  // namespace sccuc::solver
