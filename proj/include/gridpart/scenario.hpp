#ifndef GRIDPART_SCENARIO_HPP
#define GRIDPART_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gridpart/network.hpp"

namespace gridpart {

// One realization of generation capacity and demand, indexed by the
// partition-graph vertex order (substation excluded).
struct Scenario {
  std::vector<double> gp, gq, dp, dq;  // all entries >= 0

  int dim() const { return static_cast<int>(gp.size()); }
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;
  std::uint64_t seed = 0;
  std::string provenance;

  int size() const { return static_cast<int>(scenarios.size()); }
  int dim() const { return scenarios.empty() ? 0 : scenarios[0].dim(); }
  void validate() const;  // uniform dimension, non-negative entries
};

enum class ProfileFamily { Residential, Commercial, Solar, Constant };

ProfileFamily parse_family(const std::string& s);  // throws InputError

struct SynthesisConfig {
  int hours = 8760;
  double noise = 0.15;
  // Explicit per-bus families; buses not listed get defaults:
  // grid-forming generator -> constant, other generator -> solar,
  // load-only bus -> residential.
  std::map<std::string, ProfileFamily> family;
};

// Annual hourly profiles: solar buses get a diurnal bell with profile max
// scaled to rated capacity; load buses get periodic demand with noise,
// scaled so the 75th percentile of the series equals the nominal spot load.
// Reactive demand follows the bus's nominal power factor; reactive capacity
// stays at rating. Deterministic for a given seed.
ScenarioSet synthesize(const FeederNetwork& net, const SynthesisConfig& config,
                       std::uint64_t seed);

// n iid draws with replacement.
ScenarioSet sample_uniform(const ScenarioSet& s, int n, std::uint64_t seed);

// Nearest-rank percentile (p in [0,1]): smallest element with rank
// >= ceil(p * n). Shared by synthesis scaling and its tests.
double percentile(std::vector<double> values, double p);

// Nominal snapshot: demands at spot values, capacities at rating.
Scenario nominal_scenario(const FeederNetwork& net);

// CSV with header scenario_idx,bus_id,gp,gq,dp,dq; one row per (scenario, bus).
std::string scenarios_to_csv(const ScenarioSet& s, const FeederNetwork& net);
ScenarioSet scenarios_from_csv(const std::string& text,
                               const FeederNetwork& net);
std::string scenarios_to_json(const ScenarioSet& s, const FeederNetwork& net);
ScenarioSet scenarios_from_json(const std::string& text,
                                const FeederNetwork& net);
ScenarioSet load_scenarios_file(const std::string& path,
                                const FeederNetwork& net);

}  // namespace gridpart

#endif  // GRIDPART_SCENARIO_HPP
