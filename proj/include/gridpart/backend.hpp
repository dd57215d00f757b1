#ifndef GRIDPART_BACKEND_HPP
#define GRIDPART_BACKEND_HPP

#include <string>

#include "gridpart/bnb.hpp"
#include "gridpart/milp.hpp"

namespace gridpart {

// External solver invocation: `command` is a shell template with {mps} and
// {sol} placeholders. The backend must read free-format MPS and write a
// solution file of `name value` lines plus `objective <v>` and `status <s>`.
struct BackendSpec {
  std::string command;
  std::string workdir;  // empty: system temp directory
};

// Exports MPS, runs the backend, parses and re-validates the solution with
// evaluate() before returning. Throws std::runtime_error on backend failure
// or when the reported point fails validation.
MilpResult solve_via_backend(const MilpModel& m, const BackendSpec& backend);

// Serialize a result in the backend solution-file format.
std::string format_solution_file(const MilpModel& m, const MilpResult& r);

}  // namespace gridpart

#endif  // GRIDPART_BACKEND_HPP
