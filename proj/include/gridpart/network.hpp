#ifndef GRIDPART_NETWORK_HPP
#define GRIDPART_NETWORK_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridpart {

// Errors from loading or validating user-supplied documents.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Bus {
  std::string id;
  double nominal_demand_p = 0.0;  // p.u.
  double nominal_demand_q = 0.0;
  double gen_cap_p = 0.0;  // rated active capacity, p.u.
  double gen_cap_q = 0.0;
  double q_min_absorb = 0.0;  // max reactive absorption, >= 0
  bool grid_forming = false;
};

struct Line {
  std::string from, to;
  double r = 0.0, x = 0.0;      // p.u. impedance
  double p_max = 0.0, q_max = 0.0;  // p.u. flow limits
  bool normally_open = false;
};

// Feeder graph; undirected base graph must be connected, bus/line data
// validated on load. Immutable after construction by convention.
struct FeederNetwork {
  std::string name;
  double base_mva = 1.0;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::string substation_id;

  int bus_index(const std::string& id) const;  // -1 if missing
  void validate() const;                       // throws InputError
};

// Substation-free induced subgraph with fixed vertex/edge order.
struct PartitionGraph {
  struct Edge {
    int from = -1, to = -1;  // vertex indices
    int line = -1;           // index into FeederNetwork::lines
  };
  std::vector<int> vertex_bus;          // vertex -> bus index
  std::vector<Edge> edges;              // direction = document order
  std::map<std::string, int> vertex_of_id;

  int num_vertices() const { return static_cast<int>(vertex_bus.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
};

// Row-sorted sparse matrix in triplet form; enough for incidence algebra.
struct SparseMatrix {
  int rows = 0, cols = 0;
  struct Entry {
    int row, col;
    double value;
  };
  std::vector<Entry> entries;

  std::vector<std::vector<double>> dense() const;
};

struct TopologyReport {
  bool is_forest = false;
  std::vector<std::vector<int>> components;  // vertex ids per component
  std::vector<int> components_without_grid_former;  // component indices
  std::vector<int> dangling_energized_edges;        // edge indices
};

FeederNetwork load_network(const std::string& json_text);
FeederNetwork load_network_file(const std::string& path);
std::string network_to_json(const FeederNetwork& net);

PartitionGraph partition_graph(const FeederNetwork& net);

// Row e=(i,j): +1 at column i, -1 at column j.
SparseMatrix incidence_matrix(const PartitionGraph& g);

// Drops column `ref` (default 0, the first vertex).
SparseMatrix reduced_incidence(const SparseMatrix& a, int ref = 0);

// Components of the energized subgraph; forests, grid-former coverage and
// energized edges with a de-energized endpoint.
TopologyReport check_topology(const PartitionGraph& g,
                              const std::vector<bool>& energized_nodes,
                              const std::vector<bool>& energized_edges,
                              const std::vector<int>& grid_formers);

// Vertex indices of grid-forming buses, in vertex order.
std::vector<int> grid_former_vertices(const FeederNetwork& net,
                                      const PartitionGraph& g);

}  // namespace gridpart

#endif  // GRIDPART_NETWORK_HPP
