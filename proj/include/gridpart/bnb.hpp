#ifndef GRIDPART_BNB_HPP
#define GRIDPART_BNB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridpart/milp.hpp"
#include "gridpart/simplex.hpp"

namespace gridpart {

enum class MilpStatus { Optimal, Feasible, Infeasible, TimeLimit };

struct SolveOptions {
  double time_limit_sec = 1e18;
  long long node_limit = -1;  // < 0: unlimited
  double gap_tol = 1e-6;
  double int_tol = 1e-6;
  std::string branching = "most_fractional";
  std::string node_order = "best_first";
  std::uint64_t seed = 0;
  int threads = 1;  // node evaluation is sequential; kept for reproducibility
  bool presolve = true;
};

struct MilpResult {
  MilpStatus status = MilpStatus::Infeasible;
  bool has_incumbent = false;
  Assignment incumbent;
  double objective = kInf;   // incumbent objective
  double bound = -kInf;      // proven lower bound (minimization)
  double gap = kInf;         // (objective - bound) / max(1, |objective|)
  long long nodes = 0;
  double wall_time_sec = 0.0;
  int lp_failures = 0;
  std::vector<double> bound_history;  // non-decreasing over the run
};

// Best-first branch and bound on LP relaxations; branches on the most
// fractional binary (ties to the lowest index), dives depth-first for
// early incumbents, prunes by bound. Every incumbent returned passes
// evaluate() at 1e-6.
MilpResult solve_milp(const MilpModel& m, const SolveOptions& opt = {},
                      const Assignment* initial_incumbent = nullptr);

}  // namespace gridpart

#endif  // GRIDPART_BNB_HPP
