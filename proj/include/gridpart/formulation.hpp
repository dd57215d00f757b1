#ifndef GRIDPART_FORMULATION_HPP
#define GRIDPART_FORMULATION_HPP

#include <string>
#include <vector>

#include "gridpart/milp.hpp"
#include "gridpart/network.hpp"
#include "gridpart/scenario.hpp"

namespace gridpart {

// Design variables, fixed across all scenarios.
struct DesignVars {
  std::vector<VarId> b_n;      // vertex energized
  std::vector<VarId> b_e;      // edge energized
  std::vector<VarId> theta;    // spanning-tree edge selector
  std::vector<VarId> f;        // tree-connectivity commodity flow
  std::vector<VarId> f_prime;  // grid-former reachability flow
};

// Per-scenario dispatch variables.
struct ScenarioVars {
  std::vector<VarId> v, p_g, q_g, p_d, q_d;  // per vertex
  std::vector<VarId> P, Q;                   // per edge flows
  std::vector<VarId> w;                      // voltage difference per edge
  std::vector<VarId> u;                      // b_e * w product per edge
  VarId z;                                   // scenario retention (SAA)
};

struct SaaConfig {
  double gamma = 0.1;  // risk level in [0,1)
  double rho = 1.0;    // adequacy fraction in (0,1]
};

struct BuildResult {
  MilpModel model;
  PartitionGraph graph;
  DesignVars design;
  std::vector<ScenarioVars> scen;
  std::vector<Scenario> scenarios;  // snapshot used to build
  std::vector<double> weights;      // per-vertex objective weights
  bool saa = false;
  SaaConfig cfg;
};

DesignVars add_design_vars(MilpModel& m, const PartitionGraph& g);
ScenarioVars add_scenario_vars(MilpModel& m, const PartitionGraph& g,
                               const FeederNetwork& net, const Scenario& xi,
                               int scenario_index, bool with_z);

// Spanning-forest radiality: a commodity-flow spanning tree per connected
// component of the base graph, with energized edges a subset of the tree.
std::vector<int> radiality_block(MilpModel& m, const PartitionGraph& g,
                                 DesignVars& d);

// Every energized non-grid-forming vertex pushes one unit of virtual
// commodity that only grid-forming vertices may absorb; flows ride
// energized edges only.
std::vector<int> grid_forming_block(MilpModel& m, const PartitionGraph& g,
                                    const std::vector<int>& grid_formers,
                                    DesignVars& d);

// Voltage window, line capacity, generation capacity, nodal balance and the
// linearized voltage-drop relation for one scenario. Load constraints are
// added separately (equalities for the deterministic build, chance_block
// for the sampled build). Scenario 0 also carries the design-only
// edge-endpoint coupling rows.
std::vector<int> power_flow_block(MilpModel& m, const PartitionGraph& g,
                                  const FeederNetwork& net, const Scenario& xi,
                                  DesignVars& d, ScenarioVars& sv,
                                  int scenario_index);

// Per-scenario load retention: hard demand caps, big-M adequacy pinch with
// per-row constants, zero consumption for dropped scenarios, and the
// retention cardinality floor.
std::vector<int> chance_block(MilpModel& m,
                              const std::vector<Scenario>& scenarios,
                              const SaaConfig& cfg, const DesignVars& d,
                              std::vector<ScenarioVars>& sv);

BuildResult build_deterministic(const FeederNetwork& net, const Scenario& xi,
                                const std::vector<double>& bus_weights = {});
BuildResult build_saa(const FeederNetwork& net, const ScenarioSet& scenarios,
                      const SaaConfig& cfg,
                      const std::vector<double>& bus_weights = {});

struct Microgrid {
  std::string id;
  std::vector<std::string> buses;
  std::vector<std::string> lines;
  std::vector<std::string> grid_formers;
};

struct PartitionSolution {
  std::vector<bool> energized_nodes;  // per vertex
  std::vector<bool> energized_edges;  // per edge
  std::vector<bool> z;                // per scenario
  std::vector<double> served_p;       // per scenario, 0 when dropped
  std::vector<double> served_q;
  double objective = 0.0;  // -(1/N) sum over retained scenarios of weighted load
  double gamma = 0.0;
  double rho = 1.0;
  std::vector<Microgrid> microgrids;
  std::vector<std::string> boundary_lines;
};

// Rounds binaries (must be integral within 1e-6), groups energized
// components into named microgrids and recomputes the objective from the
// design so reported values do not depend on solver round-off.
PartitionSolution extract_solution(const BuildResult& build,
                                   const Assignment& a,
                                   const FeederNetwork& net);

// All-off design with a consistent spanning forest; feasible in every model
// built here, which makes the MILPs never infeasible.
Assignment zero_solution(const BuildResult& build);

}  // namespace gridpart

#endif  // GRIDPART_FORMULATION_HPP
