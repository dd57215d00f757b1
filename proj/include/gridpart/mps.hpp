#ifndef GRIDPART_MPS_HPP
#define GRIDPART_MPS_HPP

#include <string>
#include <vector>

#include "gridpart/milp.hpp"

namespace gridpart {

// Free-format MPS with OBJSENSE/ROWS/COLUMNS/RHS/BOUNDS sections.
// Binaries are emitted inside INTORG/INTEND markers with BV bounds.
// Deterministic: the same model always produces identical bytes.
std::string export_mps(const MilpModel& m);

// Sanitized column names in variable order, as they appear in the MPS text.
std::vector<std::string> mps_var_names(const MilpModel& m);

// Parses the subset of MPS emitted by export_mps (plus common variants:
// default column bounds, FR/MI/PL/FX/BV/LO/UP bound codes). Variable names
// in the returned model are the MPS column names.
MilpModel import_mps(const std::string& text);

}  // namespace gridpart

#endif  // GRIDPART_MPS_HPP
